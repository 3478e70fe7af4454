use std::fmt;

use num::{BigInt, One, Zero};

use super::Interval;
use crate::error::{Error, Result};
use crate::rational::Q;

/// Produces rational enclosures of one fixed real number.
///
/// Every returned interval must contain the value, and a narrower request
/// must return an interval inside the closure of a wider one.
pub trait EnclosureOracle: Send + Sync + fmt::Debug {
    fn enclose(&self, width: &Q) -> Result<Interval>;
}

/// `sqrt(radicand)` for a square-free radicand > 1, enclosed between two
/// consecutive continued-fraction convergents.
#[derive(Debug, Clone)]
pub struct SqrtOracle {
    radicand: u64,
}

impl SqrtOracle {
    pub fn new(radicand: u64) -> Result<Self> {
        if radicand < 2 || !is_square_free(radicand) {
            return Err(Error::Invalid(format!(
                "sqrt tag needs a square-free radicand > 1, got {radicand}"
            )));
        }
        Ok(SqrtOracle { radicand })
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }
}

pub fn is_square_free(n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

impl EnclosureOracle for SqrtOracle {
    fn enclose(&self, width: &Q) -> Result<Interval> {
        if width <= &Q::zero() {
            return Err(Error::Invalid("enclosure width must be positive".into()));
        }
        let n = BigInt::from(self.radicand);
        let a0 = n.sqrt();
        // Periodic expansion state (m, d, a) of sqrt(n).
        let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
        // Convergents h/k: (h_{-1}, k_{-1}) = (1, 0).
        let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
        let (mut h, mut k) = (a0.clone(), BigInt::one());
        loop {
            m = &d * &a - &m;
            d = (&n - &m * &m) / &d;
            a = (&a0 + &m) / &d;
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            let c0 = Q::new(h.clone(), k.clone());
            let c1 = Q::new(h_next.clone(), k_next.clone());
            let gap = Q::new(BigInt::one(), &k * &k_next);
            if &gap <= width {
                let (lo, hi) = if c0 < c1 { (c0, c1) } else { (c1, c0) };
                let nq = Q::from_integer(n.clone());
                debug_assert!(&lo * &lo <= nq && nq <= &hi * &hi);
                return Ok(Interval::new(lo, hi));
            }
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn sqrt2_hundredth() {
        let o = SqrtOracle::new(2).unwrap();
        let iv = o.enclose(&q(1, 100)).unwrap();
        assert!(iv.width() <= q(1, 100));
        assert!(Interval::new(q(141, 100), q(142, 100)).contains_interval(&iv));
        assert!(&iv.lo * &iv.lo <= qi(2) && qi(2) <= &iv.hi * &iv.hi);
    }

    #[test]
    fn nested_widths() {
        for r in [2u64, 3, 5, 6, 7, 10, 13] {
            let o = SqrtOracle::new(r).unwrap();
            let wide = o.enclose(&q(1, 10)).unwrap();
            let narrow = o.enclose(&q(1, 100000)).unwrap();
            assert!(wide.contains_interval(&narrow), "sqrt({r})");
        }
    }

    #[test]
    fn rejects_non_square_free() {
        assert!(SqrtOracle::new(4).is_err());
        assert!(SqrtOracle::new(12).is_err());
        assert!(SqrtOracle::new(1).is_err());
    }
}
