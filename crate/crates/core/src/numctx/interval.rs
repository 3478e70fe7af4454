use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, Q};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_q")]
    pub lo: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn scale(&self, c: &Q) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval::new(-self.hi.clone(), -self.lo.clone())
        } else {
            Interval::new(Q::zero(), self.hi.clone().max(-self.lo.clone()))
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        Interval::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    /// Enclosure of `sqrt` of a nonnegative interval, widened by at most
    /// `slack` on each side.
    pub fn sqrt(&self, slack: &Q) -> Interval {
        let lo = sqrt_bounds(&self.lo.clone().max(Q::zero()), slack).0;
        let hi = sqrt_bounds(&self.hi.clone().max(Q::zero()), slack).1;
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

/// Exact square root of a rational when it is a perfect square.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// Rational bounds `lo <= sqrt(x) <= hi` with `hi - lo <= slack`.
pub fn sqrt_bounds(x: &Q, slack: &Q) -> (Q, Q) {
    if let Some(r) = exact_sqrt(x) {
        return (r.clone(), r);
    }
    // sqrt(p/q) = sqrt(p*q)/q; refine with scale 2^k until width <= slack.
    let pq = x.numer() * x.denom();
    let mut k: u32 = 0;
    loop {
        let scale = BigInt::one() << k;
        let root = (&pq * &scale * &scale).sqrt();
        let den = x.denom() * &scale;
        let lo = Q::new(root.clone(), den.clone());
        let hi = Q::new(root + 1, den.clone());
        if &(&hi - &lo) <= slack {
            return (lo, hi);
        }
        k += 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn sqrt_enclosures() {
        assert_eq!(exact_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(exact_sqrt(&qi(2)), None);
        let (lo, hi) = sqrt_bounds(&qi(2), &q(1, 1000));
        assert!(&lo * &lo <= qi(2) && qi(2) <= &hi * &hi);
        assert!(&hi - &lo <= q(1, 1000));
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(q(-1, 2), q(1, 3));
        assert_eq!(a.abs(), Interval::new(qi(0), q(1, 2)));
        assert_eq!(a.scale(&qi(-2)), Interval::new(q(-2, 3), qi(1)));
        assert_eq!(a.square(), Interval::new(qi(0), q(1, 4)));
        assert!(!a.excludes_zero());
    }
}
