//! Executable versions of two pathologies: a finite face of the mixed
//! relaxation that is not closed, and a pure corner polyhedron whose
//! recession cone is not full-dimensional.

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{CornerPolyhedron, EnumCaps};
use crate::model::{check_feasible, MixedInstance, MixedSolution, PureInstance};
use crate::numctx::{GroupReal, GroupVector, Interval, NumberContext, Tag};
use crate::par::Exec;
use crate::rational::{fmt_q, frac_q, primitive_integer, q, serde_q, serde_qvec, Q};

/// Default search limit for `k` in [`not_closed_sequence`].
pub const NOT_CLOSED_CAP: u64 = 1_000_000;

/// Largest `y(ω)` tried when certifying that the target is infeasible.
const FACE_SCAN: u64 = 64;

#[derive(Debug, Clone, Serialize)]
pub struct NotClosedWitness {
    #[serde(with = "serde_q")]
    pub b: Q,
    pub omega: String,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    /// Least positive `k` with `frac(kω) ≤ ε`.
    pub k: u64,
    /// `frac(kω)`, used as `ŝ(−1)`.
    pub hat_s: String,
    #[serde(skip)]
    pub hat_s_exact: GroupReal,
    /// Euclidean distance `ŝ(−1)/k` from the target, enclosed.
    pub distance: Interval,
    /// Weights `1/k` and `(k−1)/k` of `(ŝ, ŷ)` and `(s̃, ỹ)`.
    #[serde(with = "serde_qvec")]
    pub weights: Vec<Q>,
    /// The convex combination, as `(s(−1), y(b), y(ω))`.
    pub combination: Vec<String>,
    pub hat_feasible: bool,
    pub tilde_feasible: bool,
    /// Feasible points with `s(−1) = 0`, `y(b) ≤ 1`, `y(ω) ≤ 64`.
    pub face_points: Vec<Vec<u64>>,
    pub target_infeasible: bool,
    pub verified: bool,
}

/// Face `R = {−1}`, `P = {b, ω}` of the mixed relaxation with right-hand
/// side `b`.
pub fn not_closed_instance(b: &Q, omega: &Tag) -> Result<MixedInstance> {
    let ctx = NumberContext::new(vec![omega.clone()])?;
    let w = GroupReal::tag(&omega.symbol);
    MixedInstance::new(
        ctx,
        GroupVector::rational(std::slice::from_ref(b)),
        vec![GroupVector::rational(std::slice::from_ref(b)), GroupVector(vec![w])],
        vec![GroupVector::rational(&[-Q::one()])],
    )
}

/// For `ε > 0`, a point of `conv(M_b) ∩ V_{R,P}` within `ε` of
/// `(s̄, ȳ) = (0; 1, 1)`, which is itself outside that set.
pub fn not_closed_sequence(omega: &Tag, b: &Q, eps: &Q, cap: u64) -> Result<NotClosedWitness> {
    if *eps <= Q::zero() {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let b = frac_q(b);
    if b.is_zero() {
        return Err(Error::IntegralRhs);
    }
    let inst = not_closed_instance(&b, omega)?;
    let ctx = inst.ctx();
    let w = GroupReal::tag(&omega.symbol);
    let eps_g = GroupReal::from(eps.clone());
    let mut found = None;
    for k in 1..=cap {
        let f = ctx.frac(&w.scale(&Q::from(BigInt::from(k))))?;
        if ctx.compare(&f, &eps_g)? != std::cmp::Ordering::Greater {
            found = Some((k, f));
            break;
        }
    }
    let (k, hat_s) = found.ok_or_else(|| Error::CapExceeded(format!("no k ≤ {cap} with frac(kω) ≤ {eps}")))?;

    let hat = MixedSolution { s: vec![hat_s.clone()], y: vec![1, k] };
    let tilde = MixedSolution::rational(&[Q::zero()], &[1, 0]);
    let hat_feasible = check_feasible(&inst, &hat)?;
    let tilde_feasible = check_feasible(&inst, &tilde)?;

    let kq = Q::from(BigInt::from(k));
    let weights = vec![kq.recip(), (&kq - Q::one()) / &kq];
    let comb_s = &hat_s.scale(&weights[0]) + &tilde.s[0].scale(&weights[1]);
    let comb_y: Vec<Q> = (0..2)
        .map(|j| {
            &weights[0] * Q::from(BigInt::from(hat.y[j])) + &weights[1] * Q::from(BigInt::from(tilde.y[j]))
        })
        .collect();
    // Distance to (0; 1, 1) is |s| since y matches the target exactly.
    let matches_target = comb_y.iter().all(Q::is_one);
    let width = eps / Q::from(BigInt::from(1_000_000));
    let distance = ctx.enclose(&comb_s, &width)?;
    let close = matches_target && distance.hi <= *eps;

    // Target infeasibility: every feasible point with s = 0 and y(b) ≤ 1.
    let mut face_points = Vec::new();
    for yb in 0..=1 {
        for yw in 0..=FACE_SCAN {
            if check_feasible(&inst, &MixedSolution::rational(&[Q::zero()], &[yb, yw]))? {
                face_points.push(vec![yb, yw]);
            }
        }
    }
    let target_infeasible = face_points == vec![vec![1, 0]];
    let verified = hat_feasible && tilde_feasible && close && target_infeasible;
    Ok(NotClosedWitness {
        b,
        omega: omega.symbol.clone(),
        epsilon: eps.clone(),
        k,
        hat_s: hat_s.to_string(),
        hat_s_exact: hat_s,
        distance,
        weights,
        combination: std::iter::once(comb_s.to_string()).chain(comb_y.iter().map(fmt_q)).collect(),
        hat_feasible,
        tilde_feasible,
        face_points,
        target_infeasible,
        verified,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PureIntegerReport {
    #[serde(with = "serde_q")]
    pub b: Q,
    pub omega: String,
    /// Column order of `P`.
    pub columns: Vec<String>,
    pub points: Vec<Vec<u64>>,
    pub rays: Vec<Vec<u64>>,
    pub aff_equations: Vec<Vec<String>>,
    /// Exactly one equation, a multiple of `y_ω − y_{1−ω} = 0`.
    pub aff_ok: bool,
    /// `rec(C^P) = {y ≥ 0 : y_ω = y_{1−ω}}`.
    pub rec_ok: bool,
    pub rec_generators: Vec<Vec<u64>>,
    /// The point `(1, 1, 1)` is feasible and satisfies the equation.
    pub sample_ok: bool,
    /// First point in a small scan lying in the closure but not in `C^P`.
    pub strictness_witness: Option<Vec<u64>>,
    pub verified: bool,
}

/// Corner polyhedron for `P = {b, ω, 1 − ω}`.
pub fn pure_integer_instance(b: &Q, omega: &Tag) -> Result<PureInstance> {
    let ctx = NumberContext::new(vec![omega.clone()])?;
    let w = GroupReal::tag(&omega.symbol);
    PureInstance::new(
        ctx,
        GroupVector::rational(std::slice::from_ref(b)),
        vec![
            GroupVector::rational(std::slice::from_ref(b)),
            GroupVector(vec![w.clone()]),
            GroupVector(vec![GroupReal::from(Q::one()) - w]),
        ],
    )
}

pub fn pure_integer_example(b: &Q, omega: &Tag, caps: EnumCaps, exec: Exec) -> Result<PureIntegerReport> {
    let inst = pure_integer_instance(b, omega)?;
    let cp = CornerPolyhedron::compute(&inst, caps, exec)?;
    let one = Q::one();
    let target_row = [Q::zero(), one.clone(), -one.clone()];
    let proportional = |row: &[Q]| {
        let a = primitive_integer(row);
        let t = primitive_integer(&target_row);
        a == t || a.iter().zip(&t).all(|(x, y)| *x == -y)
    };
    let aff = &cp.aff;
    let aff_ok = aff.theta.len() == 1 && aff.d[0].is_zero() && proportional(&aff.theta[0]);

    let rec = cp.recession_cone()?;
    let mut gens: Vec<Vec<BigInt>> = rec.generators.iter().map(|g| primitive_integer(&g.as_q())).collect();
    gens.sort();
    let expected: Vec<Vec<BigInt>> =
        vec![vec![0.into(), 1.into(), 1.into()], vec![1.into(), 0.into(), 0.into()]];
    let rec_ok = rec.equations.len() == 1 && proportional(&rec.equations[0]) && gens == expected;

    let sample = [one.clone(), one.clone(), one.clone()];
    let sample_ok = inst.is_feasible(&[1, 1, 1])? && aff.contains(&sample);

    let mut strictness_witness = None;
    'scan: for a in 0..=2u64 {
        for c in 0..=2u64 {
            for d in 0..=2u64 {
                let y: Vec<Q> = [a, c, d].iter().map(|&v| Q::from(BigInt::from(v))).collect();
                if cp.member_closure(&y)?.is_member() && !cp.member_conv(&y)?.is_member() {
                    strictness_witness = Some(vec![a, c, d]);
                    break 'scan;
                }
            }
        }
    }
    let verified = cp.is_complete() && aff_ok && rec_ok && sample_ok && strictness_witness.is_some();
    Ok(PureIntegerReport {
        b: b.clone(),
        omega: omega.symbol.clone(),
        columns: vec![fmt_q(b), omega.symbol.clone(), format!("1-{}", omega.symbol)],
        points: cp.points.iter().map(|p| p.0.clone()).collect(),
        rays: cp.rays.iter().map(|p| p.0.clone()).collect(),
        aff_equations: aff.theta.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
        aff_ok,
        rec_ok,
        rec_generators: rec.generators.iter().map(|g| g.0.clone()).collect(),
        sample_ok,
        strictness_witness,
        verified,
    })
}

/// Defaults used by the command line: `b = 1/2`, `ω = √2`.
pub fn default_b() -> Q {
    q(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Tag {
        Tag::sqrt(2).unwrap()
    }

    #[test]
    fn not_closed_k_values() {
        for (eps, k) in [(q(1, 2), 1), (q(1, 10), 5), (q(1, 100), 99), (q(3, 2), 1)] {
            let w = not_closed_sequence(&sqrt2(), &q(1, 2), &eps, NOT_CLOSED_CAP).unwrap();
            assert_eq!(w.k, k, "eps = {eps}");
            assert!(w.verified);
        }
        assert!(not_closed_sequence(&sqrt2(), &q(1, 2), &q(1, 100), 10).unwrap_err().is_cap());
    }

    #[test]
    fn pure_integer_assertions() {
        let r = pure_integer_example(&q(1, 2), &sqrt2(), EnumCaps::default(), Exec::Sequential).unwrap();
        assert!(r.verified, "{r:?}");
        let y = r.strictness_witness.unwrap();
        assert_ne!(y[1], y[2]);
    }
}
