//! Finite faces of the pure and mixed group relaxations.
//!
//! A [`PureInstance`] fixes `b` and a finite column set `P`; a solution is a
//! nonnegative integer vector `y` over `P` with `Σ p·y(p) ∈ b + Z^n`.
//! A [`MixedInstance`] adds continuous columns `R` with weights `s ≥ 0`.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numctx::{GroupReal, GroupVector, Interval, NumberContext};
use crate::rational::{serde_q, serde_qvec, Q};

#[derive(Debug, Clone)]
pub struct PureInstance {
    pub ctx: NumberContext,
    pub n: usize,
    pub b: GroupVector,
    pub p: Vec<GroupVector>,
}

impl PureInstance {
    pub fn new(ctx: NumberContext, b: GroupVector, p: Vec<GroupVector>) -> Result<Self> {
        let n = b.dim();
        if n == 0 {
            return Err(Error::Invalid("dimension n must be positive".into()));
        }
        check_columns(&ctx, n, &p, "P")?;
        for x in b.entries() {
            ctx.check_known(x)?;
        }
        if b.is_integral() {
            return Err(Error::IntegralRhs);
        }
        Ok(PureInstance { ctx, n, b, p })
    }

    /// Instance with rational data only.
    pub fn rational(b: &[Q], p: &[Vec<Q>]) -> Result<Self> {
        Self::new(
            NumberContext::rational(),
            GroupVector::rational(b),
            p.iter().map(|v| GroupVector::rational(v)).collect(),
        )
    }

    pub fn is_rational(&self) -> bool {
        self.p.iter().all(GroupVector::is_rational)
    }

    pub fn is_feasible(&self, y: &[u64]) -> Result<bool> {
        if y.len() != self.p.len() {
            return Err(Error::Dimension { expected: self.p.len(), got: y.len() });
        }
        let mut acc = self.b.scale(&-Q::from_integer(1.into()));
        for (p, &k) in self.p.iter().zip(y) {
            if k > 0 {
                acc = acc.add(&p.scale(&Q::from_integer(k.into())))?;
            }
        }
        Ok(acc.is_integral())
    }

    /// The constraint split into rational rows, see [`GroupRows`].
    pub fn rows(&self) -> GroupRows {
        GroupRows::build(&self.b, &[], &self.p)
    }
}

#[derive(Debug, Clone)]
pub struct MixedInstance {
    pub pure: PureInstance,
    pub r: Vec<GroupVector>,
}

impl MixedInstance {
    pub fn new(
        ctx: NumberContext,
        b: GroupVector,
        p: Vec<GroupVector>,
        r: Vec<GroupVector>,
    ) -> Result<Self> {
        let pure = PureInstance::new(ctx, b, p)?;
        check_columns(&pure.ctx, pure.n, &r, "R")?;
        Ok(MixedInstance { pure, r })
    }

    pub fn rational(b: &[Q], p: &[Vec<Q>], r: &[Vec<Q>]) -> Result<Self> {
        Self::new(
            NumberContext::rational(),
            GroupVector::rational(b),
            p.iter().map(|v| GroupVector::rational(v)).collect(),
            r.iter().map(|v| GroupVector::rational(v)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.pure.n
    }

    pub fn ctx(&self) -> &NumberContext {
        &self.pure.ctx
    }

    pub fn rows(&self) -> GroupRows {
        GroupRows::build(&self.pure.b, &self.r, &self.pure.p)
    }
}

fn check_columns(ctx: &NumberContext, n: usize, cols: &[GroupVector], name: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for v in cols {
        if v.dim() != n {
            return Err(Error::Dimension { expected: n, got: v.dim() });
        }
        for x in v.entries() {
            ctx.check_known(x)?;
        }
        if !seen.insert(v.clone()) {
            return Err(Error::Invalid(format!("repeated column {v} in {name}")));
        }
    }
    Ok(())
}

/// `Σ r·s(r) + Σ p·y(p) ∈ b + Z^n` split into rational rows.
///
/// Because `{1} ∪ tags` is independent over Q, a coordinate lies in `Z` iff
/// its rational part is an integer and every tag coefficient vanishes. So
/// each coordinate gives one congruence row (rational parts, `≡ rhs mod 1`)
/// and each `(coordinate, tag)` pair gives one exact equation.
#[derive(Debug, Clone)]
pub struct GroupRows {
    pub cong_r: Vec<Vec<Q>>,
    pub cong_p: Vec<Vec<Q>>,
    pub cong_rhs: Vec<Q>,
    pub eq_keys: Vec<(usize, String)>,
    pub eq_r: Vec<Vec<Q>>,
    pub eq_p: Vec<Vec<Q>>,
    pub eq_rhs: Vec<Q>,
}

impl GroupRows {
    pub fn build(b: &GroupVector, r: &[GroupVector], p: &[GroupVector]) -> Self {
        let n = b.dim();
        let rat = |cols: &[GroupVector], i: usize| cols.iter().map(|v| v.0[i].rat.clone()).collect();
        let keys = crate::numctx::tag_keys(r.iter().chain(p).chain(std::iter::once(b)));
        let tag = |cols: &[GroupVector], k: &(usize, String)| cols.iter().map(|v| v.tag_coeff(k)).collect();
        GroupRows {
            cong_r: (0..n).map(|i| rat(r, i)).collect(),
            cong_p: (0..n).map(|i| rat(p, i)).collect(),
            cong_rhs: b.rational_parts(),
            eq_r: keys.iter().map(|k| tag(r, k)).collect(),
            eq_p: keys.iter().map(|k| tag(p, k)).collect(),
            eq_rhs: keys.iter().map(|k| b.tag_coeff(k)).collect(),
            eq_keys: keys,
        }
    }

    pub fn n_cong(&self) -> usize {
        self.cong_rhs.len()
    }

    pub fn n_eq(&self) -> usize {
        self.eq_rhs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PureSolution(pub Vec<u64>);

impl PureSolution {
    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn le(&self, other: &PureSolution) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn as_q(&self) -> Vec<Q> {
        self.0.iter().map(|&k| Q::from_integer(k.into())).collect()
    }
}

/// A finite-support point `(s, y)` of a mixed face. `s` entries may be
/// irrational elements of the context (the not-closed example needs this).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedSolution {
    pub s: Vec<GroupReal>,
    pub y: Vec<u64>,
}

impl MixedSolution {
    pub fn rational(s: &[Q], y: &[u64]) -> Self {
        MixedSolution { s: s.iter().cloned().map(GroupReal::from).collect(), y: y.to_vec() }
    }
}

/// `Σ r s(r) + Σ p y(p) − b ∈ Z^n` and `s ≥ 0`.
pub fn check_feasible(inst: &MixedInstance, sol: &MixedSolution) -> Result<bool> {
    if sol.s.len() != inst.r.len() {
        return Err(Error::Dimension { expected: inst.r.len(), got: sol.s.len() });
    }
    if sol.y.len() != inst.pure.p.len() {
        return Err(Error::Dimension { expected: inst.pure.p.len(), got: sol.y.len() });
    }
    for s in &sol.s {
        if inst.ctx().sign(s)?.is_lt() {
            return Ok(false);
        }
    }
    let mut acc = inst.pure.b.scale(&-Q::from_integer(1.into()));
    for (r, s) in inst.r.iter().zip(&sol.s) {
        acc = acc.add(&GroupVector(r.0.iter().map(|x| times(x, s)).collect::<Result<_>>()?))?;
    }
    for (p, &k) in inst.pure.p.iter().zip(&sol.y) {
        acc = acc.add(&p.scale(&Q::from_integer(k.into())))?;
    }
    Ok(acc.is_integral())
}

pub fn check_feasible_pure(inst: &PureInstance, sol: &PureSolution) -> Result<bool> {
    inst.is_feasible(&sol.0)
}

/// Product of two values when at least one is rational; the value space has
/// no product of two irrationals.
fn times(x: &GroupReal, y: &GroupReal) -> Result<GroupReal> {
    match (x.as_rational(), y.as_rational()) {
        (Some(a), _) => Ok(y.scale(a)),
        (_, Some(c)) => Ok(x.scale(c)),
        _ => Err(Error::Invalid(format!("product of irrationals {x} and {y}"))),
    }
}

/// Enclosure of the Euclidean norm of `v`, of width at most `width`.
pub fn euclidean_norm(ctx: &NumberContext, v: &GroupVector, width: &Q) -> Result<Interval> {
    if v.is_rational() {
        let sq: Q = v.entries().iter().map(|x| &x.rat * &x.rat).sum();
        if let Some(r) = crate::numctx::exact_sqrt(&sq) {
            return Ok(Interval::point(r));
        }
    }
    let mut w = width.clone();
    loop {
        let mut sq = Interval::point(Q::zero());
        for x in v.entries() {
            sq = sq.add(&ctx.enclose(x, &w)?.square());
        }
        let iv = sq.sqrt(&(width / Q::from_integer(4.into())));
        if iv.width() <= *width {
            return Ok(iv);
        }
        w /= Q::from_integer(4.into());
    }
}

/// `|s(0)| + Σ‖r‖|s(r)| + |y(0)| + Σ‖p‖|y(p)|` as an enclosure of width at
/// most `width` (a point when every term is rational).
pub fn star_norm(inst: &MixedInstance, sol: &MixedSolution, width: &Q) -> Result<Interval> {
    let ctx = inst.ctx();
    let terms = inst.r.len() + inst.pure.p.len();
    let per = width / Q::from_integer((2 * terms.max(1)).into());
    let mut total = Interval::point(Q::zero());
    let weight = |v: &GroupVector, w: &Q| -> Result<Interval> {
        if v.is_zero() {
            Ok(Interval::point(Q::from_integer(1.into())))
        } else {
            euclidean_norm(ctx, v, w)
        }
    };
    for (r, s) in inst.r.iter().zip(&sol.s) {
        if s.is_zero() {
            continue;
        }
        let abs = ctx.enclose(&ctx.abs(s)?, &per)?;
        // |s| ≤ hi, so scaling the norm enclosure by hi keeps the width bounded.
        let mag = abs.hi.clone().max(Q::from_integer(1.into()));
        let norm = weight(r, &(&per / &mag))?;
        total = total.add(&mul_nonneg(&norm, &abs));
    }
    for (p, &k) in inst.pure.p.iter().zip(&sol.y) {
        if k == 0 {
            continue;
        }
        let kq = Q::from_integer(k.into());
        let norm = weight(p, &(&per / &kq))?;
        total = total.add(&norm.scale(&kq));
    }
    Ok(total)
}

fn mul_nonneg(a: &Interval, b: &Interval) -> Interval {
    Interval::new(&a.lo * &b.lo, &a.hi * &b.hi)
}

pub fn star_norm_pure(inst: &PureInstance, y: &[u64], width: &Q) -> Result<Interval> {
    let mixed = MixedInstance { pure: inst.clone(), r: Vec::new() };
    star_norm(&mixed, &MixedSolution { s: Vec::new(), y: y.to_vec() }, width)
}

/// Restriction `(h, d, α)` of a tuple to the finite column sets `R` and `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRestriction {
    #[serde(with = "serde_qvec", default)]
    pub h: Vec<Q>,
    #[serde(with = "serde_qvec")]
    pub d: Vec<Q>,
    #[serde(with = "serde_q")]
    pub alpha: Q,
}

/// `Σ h s + Σ d y − α`; nonnegative on every feasible point iff the tuple
/// restriction is valid.
pub fn tuple_violation(tup: &TupleRestriction, sol: &MixedSolution) -> Result<GroupReal> {
    if tup.h.len() != sol.s.len() {
        return Err(Error::Dimension { expected: tup.h.len(), got: sol.s.len() });
    }
    if tup.d.len() != sol.y.len() {
        return Err(Error::Dimension { expected: tup.d.len(), got: sol.y.len() });
    }
    let mut acc = GroupReal::from(-tup.alpha.clone());
    for (h, s) in tup.h.iter().zip(&sol.s) {
        acc = &acc + &s.scale(h);
    }
    let dy: Q = tup.d.iter().zip(&sol.y).map(|(d, &k)| d * Q::from_integer(k.into())).sum();
    Ok(&acc + &GroupReal::from(dy))
}

pub fn is_nonneg_vec(v: &[Q]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn gmic_value(x: Q, b: Q) -> Q {
        let f = crate::rational::frac_q(&x);
        if f <= b {
            f / b
        } else {
            (Q::from_integer(1.into()) - f) / (Q::from_integer(1.into()) - b)
        }
    }

    #[test]
    fn feasibility_examples() {
        let inst = PureInstance::rational(&[q(1, 2)], &[vec![q(1, 2)]]).unwrap();
        assert!(inst.is_feasible(&[1]).unwrap());
        assert!(!inst.is_feasible(&[2]).unwrap());
        assert!(inst.is_feasible(&[3]).unwrap());

        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let w = GroupReal::tag("sqrt2");
        let p = vec![
            GroupVector::rational(&[q(1, 2)]),
            GroupVector(vec![w.clone()]),
            GroupVector(vec![GroupReal::from(qi(1)) - w]),
        ];
        let inst = PureInstance::new(ctx, GroupVector::rational(&[q(1, 2)]), p).unwrap();
        assert!(inst.is_feasible(&[1, 1, 1]).unwrap());
        assert!(!inst.is_feasible(&[1, 1, 0]).unwrap());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(PureInstance::rational(&[qi(1)], &[vec![q(1, 2)]]).unwrap_err(), Error::IntegralRhs);
        assert!(matches!(
            PureInstance::rational(&[q(1, 2)], &[vec![q(1, 2), qi(0)]]),
            Err(Error::Dimension { .. })
        ));
        assert!(PureInstance::rational(&[q(1, 2)], &[vec![q(1, 2)], vec![q(1, 2)]]).is_err());
        let bad = PureInstance::new(
            NumberContext::rational(),
            GroupVector::rational(&[q(1, 2)]),
            vec![GroupVector(vec![GroupReal::tag("sqrt2")])],
        );
        assert_eq!(bad.unwrap_err(), Error::UnknownTag("sqrt2".into()));
    }

    #[test]
    fn rows_split_tags() {
        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let w = GroupReal::tag("sqrt2");
        let inst = PureInstance::new(
            ctx,
            GroupVector::rational(&[q(1, 2)]),
            vec![GroupVector(vec![w.clone()]), GroupVector(vec![GroupReal::from(qi(1)) - w])],
        )
        .unwrap();
        let rows = inst.rows();
        assert_eq!(rows.cong_p, vec![vec![qi(0), qi(1)]]);
        assert_eq!(rows.eq_p, vec![vec![qi(1), qi(-1)]]);
        assert_eq!(rows.eq_rhs, vec![qi(0)]);
    }

    #[test]
    fn star_norm_examples() {
        let inst = MixedInstance::rational(&[q(1, 2)], &[vec![q(1, 2)]], &[]).unwrap();
        let one = star_norm(&inst, &MixedSolution::rational(&[], &[1]), &q(1, 100)).unwrap();
        assert_eq!(one, Interval::point(q(1, 2)));
        let zero = star_norm(&inst, &MixedSolution::rational(&[], &[0]), &q(1, 100)).unwrap();
        assert_eq!(zero, Interval::point(qi(0)));

        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let inst = PureInstance::new(
            ctx,
            GroupVector::rational(&[q(1, 2)]),
            vec![GroupVector(vec![GroupReal::tag("sqrt2")])],
        )
        .unwrap();
        let iv = star_norm_pure(&inst, &[1], &q(1, 1000)).unwrap();
        assert!(iv.width() <= q(1, 1000));
        assert!(iv.lo <= q(141421, 100000) && iv.hi >= q(141422, 100000));
    }

    #[test]
    fn star_norm_is_homogeneous() {
        let inst = MixedInstance::rational(&[q(1, 3)], &[vec![q(1, 3)], vec![q(3, 4)]], &[vec![qi(-2)], vec![qi(0)]]).unwrap();
        let sol = MixedSolution::rational(&[q(1, 5), q(2, 3)], &[2, 1]);
        let base = star_norm(&inst, &sol, &q(1, 100)).unwrap();
        let scaled = MixedSolution::rational(&[q(3, 5), qi(2)], &[6, 3]);
        let triple = star_norm(&inst, &scaled, &q(1, 100)).unwrap();
        assert_eq!(triple, base.scale(&qi(3)));
    }

    #[test]
    fn violation_examples() {
        let sol = MixedSolution::rational(&[q(1, 3)], &[4]);
        let trivial = TupleRestriction { h: vec![qi(0)], d: vec![qi(0)], alpha: qi(0) };
        assert!(tuple_violation(&trivial, &sol).unwrap().is_zero());

        let tight = TupleRestriction { h: vec![], d: vec![qi(1)], alpha: qi(1) };
        assert!(tuple_violation(&tight, &MixedSolution::rational(&[], &[1])).unwrap().is_zero());

        let b = q(1, 2);
        let gmic = TupleRestriction { h: vec![], d: vec![gmic_value(q(1, 4), b)], alpha: qi(1) };
        let v = tuple_violation(&gmic, &MixedSolution::rational(&[], &[1])).unwrap();
        assert_eq!(v, GroupReal::from(q(-1, 2)));
    }

    #[test]
    fn violation_is_affine() {
        let tup = TupleRestriction { h: vec![q(2, 3), qi(1)], d: vec![q(1, 7), q(5, 2)], alpha: q(3, 4) };
        let a = MixedSolution::rational(&[q(1, 2), qi(3)], &[1, 4]);
        let b = MixedSolution::rational(&[q(5, 9), qi(0)], &[2, 0]);
        let sum = MixedSolution::rational(&[q(19, 18), qi(3)], &[3, 4]);
        let lhs = tuple_violation(&tup, &sum).unwrap();
        let rhs = &(&tuple_violation(&tup, &a).unwrap() + &tuple_violation(&tup, &b).unwrap())
            + &GroupReal::from(tup.alpha.clone());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_feasibility() {
        let inst = MixedInstance::rational(&[q(1, 2)], &[vec![q(1, 2)]], &[vec![qi(-1)]]).unwrap();
        assert!(check_feasible(&inst, &MixedSolution::rational(&[qi(0)], &[1])).unwrap());
        assert!(check_feasible(&inst, &MixedSolution::rational(&[q(1, 2)], &[0])).unwrap());
        assert!(!check_feasible(&inst, &MixedSolution::rational(&[q(1, 3)], &[0])).unwrap());
        assert!(!check_feasible(&inst, &MixedSolution::rational(&[q(-1, 2)], &[2])).unwrap());
    }
}
