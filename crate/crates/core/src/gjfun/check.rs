//! Exact finite tests for subadditivity, minimality and liftability.
//!
//! Subadditivity. Write `Δ(u, v) = f(u) + f(v) − f(u + v)` on the torus
//! `[0,1)²`. The lines `u = x_i`, `v = x_i` and `u + v ≡ x_i (mod 1)` cut the
//! torus into convex cells on each of which all three terms are affine, so
//! `Δ` is affine on every cell and attains its minimum at a cell vertex.
//! Every vertex lies on two of the three line families, which gives the
//! finite set returned by [`subadditivity_vertices`].

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::Serialize;

use super::{PwlPeriodic, SublinearOneD};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rational::{frac_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubadditivityReport {
    pub holds: bool,
    /// A pair `(u, v)` with `f(u) + f(v) < f(u + v)`.
    pub witness: Option<(String, String)>,
    #[serde(skip)]
    pub witness_q: Option<(Q, Q)>,
    pub vertices_checked: usize,
}

/// Candidate vertices `(u, v) ∈ [0,1)²` on at least two of the line
/// families, sorted and deduplicated.
pub fn subadditivity_vertices(f: &PwlPeriodic) -> Vec<(Q, Q)> {
    let bps = f.breakpoints();
    let mut set = BTreeSet::new();
    for x in bps {
        for y in bps {
            set.insert((x.clone(), y.clone()));
            let other = frac_q(&(y - x));
            set.insert((x.clone(), other.clone()));
            set.insert((other, x.clone()));
        }
    }
    set.into_iter().collect()
}

fn delta(f: &PwlPeriodic, u: &Q, v: &Q) -> Q {
    f.eval_q(u) + f.eval_q(v) - f.eval_q(&(u + v))
}

pub fn check_subadditive(f: &PwlPeriodic) -> SubadditivityReport {
    check_subadditive_with(f, Exec::default())
}

pub fn check_subadditive_with(f: &PwlPeriodic, exec: Exec) -> SubadditivityReport {
    let vertices = subadditivity_vertices(f);
    let witness_q = par::find_map_first(exec, &vertices, |(u, v)| {
        delta(f, u, v).is_negative().then(|| (u.clone(), v.clone()))
    });
    SubadditivityReport {
        holds: witness_q.is_none(),
        witness: witness_q.as_ref().map(|(u, v)| (u.to_string(), v.to_string())),
        witness_q,
        vertices_checked: vertices.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub nonnegative: bool,
    pub zero_at_zero: bool,
    pub subadditive: SubadditivityReport,
    pub symmetric: bool,
    /// A point `r` with `f(r) + f(b − r) ≠ 1`.
    pub symmetry_witness: Option<String>,
    pub minimal: bool,
}

fn reduce_rhs(b: &Q) -> Result<Q> {
    let b = frac_q(b);
    if b.is_zero() {
        return Err(Error::IntegralRhs);
    }
    Ok(b)
}

/// Points where `r ↦ f(r) + f(b − r)` may break.
fn symmetry_points(f: &PwlPeriodic, b: &Q) -> Vec<Q> {
    let mut pts: BTreeSet<Q> = f.breakpoints().iter().cloned().collect();
    pts.extend(f.breakpoints().iter().map(|x| frac_q(&(b - x))));
    pts.into_iter().collect()
}

fn symmetry_witness(f: &PwlPeriodic, b: &Q) -> Option<Q> {
    symmetry_points(f, b).into_iter().find(|r| f.eval_q(r) + f.eval_q(&(b - r)) != Q::one())
}

/// Minimality of `(f, 1)` for the pure one-row problem with right-hand side `b`.
pub fn check_minimal_pure(f: &PwlPeriodic, b: &Q) -> Result<MinimalityReport> {
    let b = reduce_rhs(b)?;
    let nonnegative = f.values().iter().all(|v| !v.is_negative());
    let zero_at_zero = f.values()[0].is_zero();
    let subadditive = check_subadditive(f);
    let witness = symmetry_witness(f, &b);
    let symmetric = witness.is_none();
    Ok(MinimalityReport {
        nonnegative,
        zero_at_zero,
        minimal: nonnegative && zero_at_zero && subadditive.holds && symmetric,
        subadditive,
        symmetric,
        symmetry_witness: witness.map(|r| r.to_string()),
    })
}

/// `ψ(r) = lim_{ε→0⁺} f(εr)/ε`: the first slope for `r > 0` and the
/// negated last slope for `r < 0`.
pub fn slope_lift(f: &PwlPeriodic) -> SublinearOneD {
    let slopes = f.slopes();
    SublinearOneD { s_plus: slopes[0].clone(), s_minus: -slopes[slopes.len() - 1].clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftabilityReport {
    pub liftable: bool,
    pub psi: Option<SublinearOneD>,
    pub minimal: MinimalityReport,
}

/// A continuous piecewise-linear minimal function has finite one-sided
/// derivatives at 0, so it is always liftable; the lift is [`slope_lift`].
pub fn check_liftable(f: &PwlPeriodic, b: &Q) -> Result<LiftabilityReport> {
    let minimal = check_minimal_pure(f, b)?;
    if !minimal.minimal {
        return Err(Error::Precondition("function is not minimal for the pure problem".into()));
    }
    Ok(LiftabilityReport { liftable: true, psi: Some(slope_lift(f)), minimal })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedMinimalReport {
    pub subadditive: bool,
    pub psi_is_slope_lift: bool,
    pub lipschitz: bool,
    pub nonneg_normalized: bool,
    pub symmetric: bool,
    pub minimal: bool,
    #[serde(with = "crate::rational::serde_q")]
    pub lipschitz_constant: Q,
}

/// The five conditions for `(ψ, f, α)` to be a nontrivial minimal valid
/// tuple of the one-row mixed problem.
pub fn check_mixed_minimal(psi: &SublinearOneD, f: &PwlPeriodic, b: &Q, alpha: &Q) -> Result<MixedMinimalReport> {
    let b = reduce_rhs(b)?;
    let subadditive = check_subadditive(f).holds;
    let psi_is_slope_lift = *psi == slope_lift(f);
    let l = psi.lipschitz();
    let lipschitz = f.slopes().iter().all(|s| s.abs() <= l);
    let nonneg_normalized =
        f.values().iter().all(|v| !v.is_negative()) && f.values()[0].is_zero() && alpha.is_one();
    let symmetric = symmetry_witness(f, &b).is_none();
    Ok(MixedMinimalReport {
        subadditive,
        psi_is_slope_lift,
        lipschitz,
        nonneg_normalized,
        symmetric,
        minimal: subadditive && psi_is_slope_lift && lipschitz && nonneg_normalized && symmetric,
        lipschitz_constant: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn spike() -> PwlPeriodic {
        let g = PwlPeriodic::gmic(&q(2, 5)).unwrap();
        let mut bps = vec![qi(0), q(2, 5), q(9, 20), q(1, 2), q(11, 20)];
        let mut vals: Vec<Q> = bps.iter().map(|x| g.eval_q(x)).collect();
        vals[3] = q(3, 2);
        bps.truncate(5);
        PwlPeriodic::new(bps, vals).unwrap()
    }

    #[test]
    fn gmic_is_minimal() {
        let g = PwlPeriodic::gmic(&q(2, 5)).unwrap();
        assert!(check_subadditive(&g).holds);
        let r = check_minimal_pure(&g, &q(2, 5)).unwrap();
        assert!(r.minimal);
        let psi = slope_lift(&g);
        assert_eq!(psi, SublinearOneD { s_plus: q(5, 2), s_minus: q(5, 3) });
        let l = check_liftable(&g, &q(2, 5)).unwrap();
        assert!(l.liftable);
        assert!(check_mixed_minimal(&psi, &g, &q(2, 5), &qi(1)).unwrap().minimal);
        let doubled = psi.scale(&qi(2));
        let r = check_mixed_minimal(&doubled, &g, &q(2, 5), &qi(1)).unwrap();
        assert!(!r.psi_is_slope_lift && !r.minimal);
        let r = check_mixed_minimal(&psi, &g, &q(2, 5), &qi(0)).unwrap();
        assert!(!r.nonneg_normalized);
    }

    #[test]
    fn spike_is_not_subadditive() {
        let f = spike();
        let r = check_subadditive(&f);
        assert!(!r.holds);
        let (u, v) = r.witness_q.unwrap();
        assert!(f.eval_q(&u) + f.eval_q(&v) < f.eval_q(&(&u + &v)));
        assert!(f.eval_q(&q(1, 4)) * qi(2) < f.eval_q(&q(1, 2)));
        assert!(check_subadditive(&PwlPeriodic::zero()).holds);
    }

    #[test]
    fn symmetry_failures() {
        let g = PwlPeriodic::gmic(&q(2, 5)).unwrap();
        let half = g.scale(&q(1, 2));
        let r = check_minimal_pure(&half, &q(2, 5)).unwrap();
        assert!(r.subadditive.holds && !r.symmetric && !r.minimal);
        let plateau = PwlPeriodic::new(vec![qi(0), q(1, 100), q(99, 100)], vec![qi(0), qi(1), qi(1)]).unwrap();
        let r = check_minimal_pure(&plateau, &q(2, 5)).unwrap();
        assert!(!r.symmetric && !r.minimal);
        assert!(check_minimal_pure(&g, &qi(3)).is_err());
    }

    #[test]
    fn slope_lift_examples() {
        assert_eq!(slope_lift(&PwlPeriodic::zero()), SublinearOneD { s_plus: qi(0), s_minus: qi(0) });
        let tri = PwlPeriodic::new(vec![qi(0), q(1, 2)], vec![qi(0), qi(1)]).unwrap();
        assert_eq!(slope_lift(&tri), SublinearOneD { s_plus: qi(2), s_minus: qi(2) });
    }
}
