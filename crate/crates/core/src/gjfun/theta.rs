//! Recovering the additive part of `π = π₀ + θ'` by scanning `π(ka)/k`.

use std::cmp::Ordering;

use num::{BigInt, Zero};
use serde::Serialize;

use super::{AdditiveFunction, ShiftedFunction};
use crate::error::{Error, Result};
use crate::numctx::{GroupReal, NumberContext};
use crate::rational::{serde_q, Q};

#[derive(Debug, Clone, Serialize)]
pub struct TagEstimate {
    pub tag: String,
    /// `min_{k ≤ K} π(ka)/k`.
    pub estimate: String,
    #[serde(skip)]
    pub estimate_exact: GroupReal,
    /// `max_{k ≤ K} −π(−ka)/k`.
    pub dual: String,
    #[serde(skip)]
    pub dual_exact: GroupReal,
    #[serde(with = "serde_q")]
    pub exact: Q,
    /// Upper bound on `estimate − exact`.
    #[serde(with = "serde_q")]
    pub bound: Q,
    /// `dual ≤ exact ≤ estimate` held after every prefix of the scan.
    pub sandwich: bool,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaExtraction {
    pub k: u64,
    pub tags: Vec<TagEstimate>,
    #[serde(skip)]
    pub shift: AdditiveFunction,
}

impl ThetaExtraction {
    pub fn ok(&self) -> bool {
        self.tags.iter().all(|t| t.sandwich && t.within_bound)
    }
}

fn min_by(ctx: &NumberContext, a: GroupReal, b: GroupReal, want: Ordering) -> Result<GroupReal> {
    Ok(if ctx.compare(&b, &a)? == want { b } else { a })
}

pub fn extract_theta(ctx: &NumberContext, g: &ShiftedFunction, k_max: u64) -> Result<ThetaExtraction> {
    if k_max == 0 {
        return Err(Error::Invalid("K must be positive".into()));
    }
    let bound = g.base.max_value() / Q::from(BigInt::from(k_max));
    let mut tags = Vec::new();
    for tag in ctx.tags() {
        let sym = tag.symbol.clone();
        let a = GroupReal::tag(&sym);
        let exact = g.shift.coeff(&sym);
        let exact_g = GroupReal::from(exact.clone());
        let mut est: Option<GroupReal> = None;
        let mut dual: Option<GroupReal> = None;
        let mut sandwich = true;
        for k in 1..=k_max {
            let kq = Q::from(BigInt::from(k));
            let inv = Q::from(BigInt::from(1)) / &kq;
            let up = g.eval(ctx, &a.scale(&kq))?.scale(&inv);
            let down = -g.eval(ctx, &a.scale(&-kq))?.scale(&inv);
            est = Some(match est {
                None => up,
                Some(e) => min_by(ctx, e, up, Ordering::Less)?,
            });
            dual = Some(match dual {
                None => down,
                Some(d) => min_by(ctx, d, down, Ordering::Greater)?,
            });
            let (e, d) = (est.as_ref().unwrap(), dual.as_ref().unwrap());
            sandwich &= ctx.compare(e, &exact_g)? != Ordering::Less && ctx.compare(d, &exact_g)? != Ordering::Greater;
        }
        let (est, dual) = (est.unwrap(), dual.unwrap());
        let gap = &est - &exact_g;
        let within_bound = ctx.sign(&gap)? != Ordering::Less
            && ctx.compare(&gap, &GroupReal::from(bound.clone()))? != Ordering::Greater;
        tags.push(TagEstimate {
            tag: sym,
            estimate: est.to_string(),
            estimate_exact: est,
            dual: dual.to_string(),
            dual_exact: dual,
            exact,
            bound: bound.clone(),
            sandwich,
            within_bound,
        });
    }
    let shift = AdditiveFunction::new(tags.iter().map(|t| (t.tag.clone(), t.exact.clone())).filter(|(_, v)| !v.is_zero()));
    Ok(ThetaExtraction { k: k_max, tags, shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gjfun::PwlPeriodic;
    use crate::rational::q;

    #[test]
    fn recovers_shift() {
        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let base = PwlPeriodic::gmic(&q(2, 5)).unwrap();
        let zero = ShiftedFunction::new(base.clone(), AdditiveFunction::default()).unwrap();
        let r = extract_theta(&ctx, &zero, 1000).unwrap();
        assert!(r.ok());
        assert_eq!(r.tags[0].exact, Q::zero());
        let shifted = ShiftedFunction::new(base, AdditiveFunction::new([("sqrt2".into(), q(1, 3))])).unwrap();
        let r = extract_theta(&ctx, &shifted, 1000).unwrap();
        assert!(r.ok());
        assert_eq!(r.tags[0].exact, q(1, 3));
        assert_eq!(r.shift, shifted.shift);
        let enc = ctx.enclose(&r.tags[0].estimate_exact, &q(1, 1_000_000)).unwrap();
        assert!(enc.lo >= q(1, 3) && enc.hi <= q(1, 3) + q(1, 1000) + q(1, 1_000_000));
        assert!(extract_theta(&ctx, &shifted, 0).is_err());
    }
}
