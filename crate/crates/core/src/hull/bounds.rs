//! Degree bounds that certify completeness of the layered search.
//!
//! Let `T y = t` collect the tag equations (exact rows) of the instance and
//! `K = {y ≥ 0 : T y = 0}`. Every ray lies in `K`, every feasible point in
//! `Q = {y ≥ 0 : T y = t}`. For each extreme ray `g` of `K` let `g'` be its
//! smallest integer multiple that is a ray. Writing a minimal ray `d` as a
//! conic combination of at most `dim K` of the `g'` (Carathéodory), any
//! coefficient `≥ 1` would put a ray strictly below `d`, so all are `< 1` and
//! `‖d‖₁` is below the sum of the `dim K` largest `‖g'‖₁`. Minimal points
//! add the largest `‖v‖₁` over vertices `v` of `Q`.

use num::{Signed, ToPrimitive, Zero};

use crate::linalg;
use crate::model::PureInstance;
use crate::rational::{lcm_denominators, primitive_integer, Q};

/// Subsets of `0..n` of size `k`, in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn restrict(rows: &[Vec<Q>], cols: &[usize]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()
}

/// Extreme rays of `{y ≥ 0 : T y = 0}` as primitive integer vectors, found
/// as the nonnegative elementary vectors (minimal supports).
pub fn cone_extreme_rays(t: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let rank = linalg::rank(t, ncols);
    let mut out: Vec<Vec<Q>> = Vec::new();
    for size in 1..=(rank + 1).min(ncols) {
        for s in subsets(ncols, size) {
            let ns = linalg::nullspace(&restrict(t, &s), size);
            if ns.len() != 1 {
                continue;
            }
            let v = &ns[0];
            let pos = v.iter().all(|x| x.is_positive());
            let neg = v.iter().all(|x| x.is_negative());
            if !(pos || neg) {
                continue;
            }
            let mut full = vec![Q::zero(); ncols];
            for (&c, x) in s.iter().zip(v) {
                full[c] = if neg { -x.clone() } else { x.clone() };
            }
            let prim: Vec<Q> = primitive_integer(&full).into_iter().map(Q::from_integer).collect();
            if !out.contains(&prim) {
                out.push(prim);
            }
        }
    }
    out
}

/// Vertices of `{y ≥ 0 : T y = t}` (basic feasible solutions).
pub fn polyhedron_vertices(t: &[Vec<Q>], rhs: &[Q], ncols: usize) -> Vec<Vec<Q>> {
    let rank = linalg::rank(t, ncols);
    let mut out: Vec<Vec<Q>> = Vec::new();
    for size in 0..=rank.min(ncols) {
        for s in subsets(ncols, size) {
            let sub = restrict(t, &s);
            if linalg::rank(&sub, size) != size {
                continue;
            }
            // Columns of `sub` as basis vectors.
            let basis: Vec<Vec<Q>> = (0..size).map(|c| sub.iter().map(|r| r[c].clone()).collect()).collect();
            let coords = if size == 0 {
                if rhs.iter().all(Zero::is_zero) { Some(Vec::new()) } else { None }
            } else {
                linalg::coordinates(&basis, rhs)
            };
            let Some(x) = coords else { continue };
            if x.iter().any(|v| v.is_negative()) {
                continue;
            }
            let mut full = vec![Q::zero(); ncols];
            for (&c, v) in s.iter().zip(x) {
                full[c] = v;
            }
            if !out.contains(&full) {
                out.push(full);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBounds {
    /// Every minimal ray has degree at most this.
    pub ray: u64,
    /// Every minimal point has degree at most this; `None` when no feasible
    /// point can exist (the tag equations are inconsistent with `y ≥ 0`).
    pub point: Option<u64>,
}

impl DegreeBounds {
    pub fn max(&self) -> u64 {
        self.ray.max(self.point.unwrap_or(0))
    }
}

pub fn degree_bounds(inst: &PureInstance) -> Option<DegreeBounds> {
    let rows = inst.rows();
    let np = inst.p.len();
    let gens = cone_extreme_rays(&rows.eq_p, np);
    let mut norms: Vec<u64> = Vec::with_capacity(gens.len());
    for g in &gens {
        // Rational part of Σ p g(p); its order in Q^n/Z^n scales g to a ray.
        let sums: Vec<Q> = rows
            .cong_p
            .iter()
            .map(|row| row.iter().zip(g).map(|(a, b)| a * b).sum())
            .collect();
        let order = lcm_denominators(&sums);
        let norm: Q = g.iter().sum::<Q>() * Q::from_integer(order);
        norms.push(norm.to_integer().to_u64()?);
    }
    norms.sort_unstable_by(|a, b| b.cmp(a));
    let dim = linalg::rank(&gens, np);
    let ray: u64 = norms.iter().take(dim).sum();
    let verts = polyhedron_vertices(&rows.eq_p, &rows.eq_rhs, np);
    let point = if verts.is_empty() {
        None
    } else {
        let vmax = verts.iter().map(|v| v.iter().sum::<Q>().floor()).max()?;
        Some(vmax.to_integer().to_u64()? + ray)
    };
    Some(DegreeBounds { ray, point })
}
