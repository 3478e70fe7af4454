//! Affine hulls of pure faces.
//!
//! An additive `θ` vanishing on `Q^n` is determined on `P` by where it sends
//! the tag parts `τ(p)`: pick a maximal independent subset `I ⊆ P` of tag
//! vectors, let `θ_i` be the coordinate functional of `τ(p_i)` in that basis,
//! and the equations `Σ θ_i(p) y(p) = θ_i(b)` describe `aff(I_b) ∩ V_P`.

use num::Zero;
use serde::Serialize;

use crate::linalg;
use crate::model::PureInstance;
use crate::numctx::{tag_keys, GroupVector};
use crate::rational::{serde_qvec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineHull {
    #[serde(serialize_with = "ser_matrix")]
    pub theta: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub d: Vec<Q>,
}

pub(crate) fn ser_matrix<S: serde::Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(crate::rational::fmt_q).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl AffineHull {
    pub fn contains(&self, y: &[Q]) -> bool {
        self.theta.iter().zip(&self.d).all(|(row, d)| &crate::rational::dot(row, y) == d)
    }

    pub fn is_empty_system(&self) -> bool {
        self.theta.is_empty()
    }

    /// True when the equations have no solution at all.
    pub fn is_inconsistent(&self) -> bool {
        self.theta.iter().zip(&self.d).any(|(r, d)| r.iter().all(Zero::is_zero) && !d.is_zero())
    }
}

fn tag_vector(v: &GroupVector, keys: &[(usize, String)]) -> Vec<Q> {
    keys.iter().map(|k| v.tag_coeff(k)).collect()
}

/// `Θ`, `d` with rows `θ_i(p)`, `θ_i(b)`. When `τ(b)` lies outside the span
/// of the `τ(p)` no feasible point exists; this is recorded as the single
/// extra row `0 = 1`.
pub fn affine_hull(inst: &PureInstance) -> AffineHull {
    let keys = tag_keys(inst.p.iter().chain(std::iter::once(&inst.b)));
    let taus: Vec<Vec<Q>> = inst.p.iter().map(|p| tag_vector(p, &keys)).collect();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for t in &taus {
        let mut trial = basis.clone();
        trial.push(t.clone());
        if linalg::rank(&trial, keys.len()) == trial.len() {
            basis = trial;
        }
    }
    let np = inst.p.len();
    let mut theta = vec![vec![Q::zero(); np]; basis.len()];
    for (j, t) in taus.iter().enumerate() {
        let c = linalg::coordinates(&basis, t).expect("every tag vector lies in the span of the basis");
        for (i, v) in c.into_iter().enumerate() {
            theta[i][j] = v;
        }
    }
    let tb = tag_vector(&inst.b, &keys);
    let d = match linalg::coordinates(&basis, &tb) {
        Some(c) => c,
        None => {
            theta.push(vec![Q::zero(); np]);
            let mut d = vec![Q::zero(); basis.len()];
            d.push(Q::from_integer(1.into()));
            return AffineHull { theta, d };
        }
    };
    AffineHull { theta, d }
}

/// Equations of `aff(points) + span(rays)`, as an irredundant system in
/// reduced row echelon form. Empty `points` gives the inconsistent `0 = 1`.
pub fn affine_hull_of_generators(points: &[Vec<Q>], rays: &[Vec<Q>], dim: usize) -> AffineHull {
    if points.is_empty() {
        return AffineHull { theta: vec![vec![Q::zero(); dim]], d: vec![Q::from_integer(1.into())] };
    }
    // (a, -a0) must vanish on (e, 1) and (r, 0).
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for e in points {
        let mut r = e.clone();
        r.push(Q::from_integer(1.into()));
        rows.push(r);
    }
    for ray in rays {
        let mut r = ray.clone();
        r.push(Q::zero());
        rows.push(r);
    }
    let ns = linalg::nullspace(&rows, dim + 1);
    let mut eqs: Vec<Vec<Q>> = ns;
    // Row-reduce the equation system (a | -a0) for a canonical form.
    let k = linalg::rref(&mut eqs, dim + 1).len();
    eqs.truncate(k);
    let theta = eqs.iter().map(|r| r[..dim].to_vec()).collect();
    let d = eqs.iter().map(|r| -r[dim].clone()).collect();
    AffineHull { theta, d }
}

/// Direction space of `aff(points) + span(rays)`: a row basis.
pub fn direction_basis(points: &[Vec<Q>], rays: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    if let Some(e0) = points.first() {
        for e in &points[1..] {
            rows.push(e.iter().zip(e0).map(|(a, b)| a - b).collect());
        }
    }
    rows.extend(rays.iter().cloned());
    linalg::row_basis(&rows, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numctx::{GroupReal, NumberContext};
    use crate::rational::{q, qi};

    fn pure_integer() -> PureInstance {
        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let w = GroupReal::tag("sqrt2");
        PureInstance::new(
            ctx,
            GroupVector::rational(&[q(1, 2)]),
            vec![
                GroupVector::rational(&[q(1, 2)]),
                GroupVector(vec![w.clone()]),
                GroupVector(vec![GroupReal::from(qi(1)) - w]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rational_has_no_rows() {
        let inst = PureInstance::rational(&[q(2, 5)], &[vec![q(1, 5)], vec![q(2, 5)]]).unwrap();
        assert!(affine_hull(&inst).theta.is_empty());
    }

    #[test]
    fn pure_integer_row() {
        let aff = affine_hull(&pure_integer());
        assert_eq!(aff.theta, vec![vec![qi(0), qi(1), qi(-1)]]);
        assert_eq!(aff.d, vec![qi(0)]);
    }

    #[test]
    fn b_equal_to_omega() {
        let ctx = NumberContext::with_sqrts(&[2]).unwrap();
        let w = GroupVector(vec![GroupReal::tag("sqrt2")]);
        let inst = PureInstance::new(ctx, w.clone(), vec![w]).unwrap();
        let aff = affine_hull(&inst);
        assert_eq!((aff.theta, aff.d), (vec![vec![qi(1)]], vec![qi(1)]));
    }

    #[test]
    fn b_outside_span() {
        let ctx = NumberContext::with_sqrts(&[2, 3]).unwrap();
        let inst = PureInstance::new(
            ctx,
            GroupVector(vec![GroupReal::tag("sqrt3")]),
            vec![GroupVector(vec![GroupReal::tag("sqrt2")])],
        )
        .unwrap();
        assert!(affine_hull(&inst).is_inconsistent());
    }

    #[test]
    fn generator_hull() {
        let pts = vec![vec![qi(1), qi(0), qi(0)]];
        let rays = vec![vec![qi(2), qi(0), qi(0)], vec![qi(0), qi(1), qi(1)]];
        let aff = affine_hull_of_generators(&pts, &rays, 3);
        assert_eq!(aff.theta, vec![vec![qi(0), qi(1), qi(-1)]]);
        assert_eq!(aff.d, vec![qi(0)]);
    }
}
