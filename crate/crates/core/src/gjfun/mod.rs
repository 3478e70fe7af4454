//! One-dimensional continuous piecewise-linear cut-generating functions.

mod check;
mod theta;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numctx::{GroupReal, NumberContext};
use crate::rational::{frac_q, serde_q, Q};

pub use check::{
    check_liftable, check_minimal_pure, check_mixed_minimal, check_subadditive, check_subadditive_with,
    slope_lift, subadditivity_vertices, LiftabilityReport, MinimalityReport, MixedMinimalReport, SubadditivityReport,
};
pub use theta::{extract_theta, TagEstimate, ThetaExtraction};

/// A continuous, 1-periodic function, affine between consecutive
/// breakpoints `0 = x₀ < … < x_k < 1` and wrapping from `x_k` back to
/// `x₀ + 1` with value `v₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwlPeriodic {
    breakpoints: Vec<Q>,
    values: Vec<Q>,
}

impl PwlPeriodic {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Invalid("breakpoints and values must be nonempty and of equal length".into()));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::Invalid("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
        }
        if breakpoints.last().is_some_and(|x| *x >= Q::one()) {
            return Err(Error::Invalid("breakpoints must lie in [0, 1)".into()));
        }
        Ok(PwlPeriodic { breakpoints, values })
    }

    /// The Gomory mixed-integer function for `b ∈ (0, 1)`: `x/b` on
    /// `[0, b]`, `(1 − x)/(1 − b)` on `[b, 1]`.
    pub fn gmic(b: &Q) -> Result<Self> {
        let b = frac_q(b);
        if b.is_zero() {
            return Err(Error::IntegralRhs);
        }
        Self::new(vec![Q::zero(), b], vec![Q::zero(), Q::one()])
    }

    pub fn zero() -> Self {
        PwlPeriodic { breakpoints: vec![Q::zero()], values: vec![Q::zero()] }
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Segment endpoints `(x_i, v_i, x_{i+1}, v_{i+1})`, the last one ending
    /// at `(1, v₀)`.
    pub fn segments(&self) -> impl Iterator<Item = (Q, Q, Q, Q)> + '_ {
        let k = self.len();
        (0..k).map(move |i| {
            let (x1, v1) = if i + 1 < k {
                (self.breakpoints[i + 1].clone(), self.values[i + 1].clone())
            } else {
                (Q::one(), self.values[0].clone())
            };
            (self.breakpoints[i].clone(), self.values[i].clone(), x1, v1)
        })
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.segments().map(|(x0, v0, x1, v1)| (v1 - v0) / (x1 - x0)).collect()
    }

    fn segment_of(&self, f: &Q) -> usize {
        match self.breakpoints.binary_search(f) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// Exact value at a rational point.
    pub fn eval_q(&self, x: &Q) -> Q {
        let f = frac_q(x);
        let i = self.segment_of(&f);
        let (x0, v0, x1, v1) = self.segments().nth(i).expect("segment exists");
        if f == x0 {
            return v0;
        }
        &v0 + (&v1 - &v0) * (&f - &x0) / (x1 - x0)
    }

    /// Exact value at a point of the number context. At an irrational point
    /// the value is irrational in general, so it is returned as a
    /// `GroupReal`; locating the segment uses enclosure comparisons.
    pub fn eval(&self, ctx: &NumberContext, x: &GroupReal) -> Result<GroupReal> {
        if let Some(r) = x.as_rational() {
            return Ok(GroupReal::from(self.eval_q(r)));
        }
        let f = ctx.frac(x)?;
        // f is irrational, so it never equals a breakpoint.
        let mut i = 0;
        for (k, bp) in self.breakpoints.iter().enumerate() {
            if ctx.compare(&f, &GroupReal::from(bp.clone()))? == Ordering::Greater {
                i = k;
            } else {
                break;
            }
        }
        let (x0, v0, x1, v1) = self.segments().nth(i).expect("segment exists");
        let slope = (v1 - &v0) / (x1 - &x0);
        Ok(&GroupReal::from(v0) + &(&f - &GroupReal::from(x0)).scale(&slope))
    }

    pub fn max_value(&self) -> Q {
        self.values.iter().max().cloned().unwrap_or_default()
    }

    pub fn min_value(&self) -> Q {
        self.values.iter().min().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Q) -> PwlPeriodic {
        PwlPeriodic { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Same function on a refined breakpoint set (extra points in `[0,1)`).
    pub fn refine(&self, extra: &[Q]) -> PwlPeriodic {
        let mut bps: Vec<Q> = self.breakpoints.iter().cloned().chain(extra.iter().map(frac_q)).collect();
        bps.sort();
        bps.dedup();
        let values = bps.iter().map(|x| self.eval_q(x)).collect();
        PwlPeriodic { breakpoints: bps, values }
    }

    /// Lowest common multiple of breakpoint denominators.
    pub fn denominator_lcm(&self) -> num::BigInt {
        crate::rational::lcm_denominators(&self.breakpoints)
    }
}

/// `ψ(r) = s₊·r` for `r ≥ 0` and `s₋·(−r)` for `r ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublinearOneD {
    #[serde(with = "serde_q")]
    pub s_plus: Q,
    #[serde(with = "serde_q")]
    pub s_minus: Q,
}

impl SublinearOneD {
    pub fn eval_q(&self, r: &Q) -> Q {
        if r.is_negative() {
            -r * &self.s_minus
        } else {
            r * &self.s_plus
        }
    }

    pub fn is_sublinear(&self) -> bool {
        !(&self.s_plus + &self.s_minus).is_negative()
    }

    /// `max_{|r| = 1} ψ(r)`.
    pub fn lipschitz(&self) -> Q {
        self.s_plus.clone().max(self.s_minus.clone())
    }

    pub fn scale(&self, c: &Q) -> SublinearOneD {
        SublinearOneD { s_plus: &self.s_plus * c, s_minus: &self.s_minus * c }
    }
}

/// `θ(x) = Σ_t c(t)·x_t`, where `x_t` is the coefficient of tag `t` in `x`;
/// zero on the rationals by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdditiveFunction {
    c: BTreeMap<String, Q>,
}

impl AdditiveFunction {
    pub fn new(c: impl IntoIterator<Item = (String, Q)>) -> Self {
        AdditiveFunction { c: c.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn coeff(&self, tag: &str) -> Q {
        self.c.get(tag).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Q> {
        &self.c
    }

    pub fn eval(&self, x: &GroupReal) -> Q {
        x.coeffs().iter().map(|(t, v)| v * self.coeff(t)).sum()
    }
}

/// `π = π₀ + θ'` with `π₀ ≥ 0` piecewise linear and `θ'` additive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedFunction {
    pub base: PwlPeriodic,
    pub shift: AdditiveFunction,
}

impl ShiftedFunction {
    pub fn new(base: PwlPeriodic, shift: AdditiveFunction) -> Result<Self> {
        if base.values().iter().any(|v| v.is_negative()) {
            return Err(Error::Precondition("base function must be nonnegative".into()));
        }
        Ok(ShiftedFunction { base, shift })
    }

    pub fn eval(&self, ctx: &NumberContext, x: &GroupReal) -> Result<GroupReal> {
        Ok(&self.base.eval(ctx, x)? + &GroupReal::from(self.shift.eval(x)))
    }
}
