//! Layered enumeration of minimal points and minimal rays.
//!
//! Call `v ∈ Z^P_+` *ray-free* if no nonzero ray `d ≤ v` exists. Ray-free
//! vectors form a down-closed set, minimal points are exactly the feasible
//! ray-free vectors, and minimal rays are exactly the rays all of whose
//! lower neighbours `w − e_i` are ray-free. Layer `k` holds the ray-free
//! vectors of degree `k`; a candidate of degree `k+1` is examined only when
//! all its lower neighbours sit in layer `k`.
//!
//! If a layer comes out empty there are no ray-free vectors of larger degree
//! (down-closure), so nothing minimal is left to find. With rational data
//! this always happens: prefix sums of a ray-free vector visit distinct
//! residues, so its degree is below the size of the group.

use std::collections::HashSet;

use num::{Integer, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::PureInstance;
use crate::par::{self, Exec};
use crate::rational::{lcm_denominators, Q};

/// Integer encoding of residues of `Σ p·y(p)` modulo `Z^n`: `n` entries in
/// `[0, q)` for the rational parts, then exact scaled tag coefficients.
#[derive(Debug, Clone)]
pub struct ResidueCode {
    pub q: i64,
    pub n: usize,
    pub cols: Vec<Vec<i64>>,
    pub target: Vec<i64>,
}

fn to_i64(x: Q, scale: &num::BigInt) -> Result<i64> {
    let v = x * Q::from_integer(scale.clone());
    debug_assert!(v.is_integer());
    v.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Invalid("instance data too large for residue encoding".into()))
}

impl ResidueCode {
    pub fn new(inst: &PureInstance) -> Result<Self> {
        let rows = inst.rows();
        let n = rows.n_cong();
        let qbig = lcm_denominators(rows.cong_p.iter().flatten().chain(&rows.cong_rhs));
        let tbig = lcm_denominators(rows.eq_p.iter().flatten().chain(&rows.eq_rhs));
        let q = qbig
            .to_i64()
            .ok_or_else(|| Error::Invalid("common denominator too large".into()))?;
        let np = inst.p.len();
        let mut cols = vec![Vec::with_capacity(n + rows.n_eq()); np];
        for (j, col) in cols.iter_mut().enumerate() {
            for row in &rows.cong_p {
                col.push(to_i64(row[j].clone(), &qbig)?.mod_floor(&q));
            }
            for row in &rows.eq_p {
                col.push(to_i64(row[j].clone(), &tbig)?);
            }
        }
        let mut target = Vec::with_capacity(n + rows.n_eq());
        for x in &rows.cong_rhs {
            target.push(to_i64(x.clone(), &qbig)?.mod_floor(&q));
        }
        for x in &rows.eq_rhs {
            target.push(to_i64(x.clone(), &tbig)?);
        }
        Ok(ResidueCode { q, n, cols, target })
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.target.len()]
    }

    pub fn step(&self, res: &[i64], j: usize) -> Vec<i64> {
        res.iter()
            .zip(&self.cols[j])
            .enumerate()
            .map(|(i, (r, c))| if i < self.n { (r + c) % self.q } else { r + c })
            .collect()
    }

    pub fn of(&self, y: &[u64]) -> Vec<i64> {
        let mut res = self.zero();
        for (j, &k) in y.iter().enumerate() {
            for (i, (r, c)) in res.iter_mut().zip(&self.cols[j]).enumerate() {
                let add = c * k as i64;
                *r = if i < self.n { (*r + add).rem_euclid(self.q) } else { *r + add };
            }
        }
        res
    }

    pub fn is_zero(&self, res: &[i64]) -> bool {
        res.iter().all(|x| x.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumCaps {
    /// Largest degree `Σ y` that will be explored.
    pub max_degree: u64,
    /// Largest number of ray-free vectors kept in a single layer.
    pub max_layer: usize,
}

impl Default for EnumCaps {
    fn default() -> Self {
        EnumCaps { max_degree: 256, max_layer: 2_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub points: Vec<Vec<u64>>,
    pub rays: Vec<Vec<u64>>,
    /// Largest degree whose layer was fully generated.
    pub degree: u64,
    /// True when an empty layer proved that nothing is left.
    pub exhausted: bool,
    /// True when the layer-size cap stopped the search.
    pub layer_capped: bool,
}

/// Runs the layered search up to `stop` (inclusive) or until a layer is
/// empty, whichever comes first.
pub fn enumerate(code: &ResidueCode, np: usize, stop: u64, caps: EnumCaps, exec: Exec) -> Enumeration {
    let mut points = Vec::new();
    let mut rays = Vec::new();
    let mut layer: Vec<(Vec<u64>, Vec<i64>)> = vec![(vec![0; np], code.zero())];
    let mut degree = 0;
    let limit = stop.min(caps.max_degree);
    while degree < limit {
        let prev: HashSet<&[u64]> = layer.iter().map(|(y, _)| y.as_slice()).collect();
        let produced = par::map(exec, &layer, |(v, res)| {
            let last = v.iter().rposition(|&k| k > 0).unwrap_or(0);
            let mut out = Vec::new();
            for j in last..np {
                let mut w = v.clone();
                w[j] += 1;
                let mut ok = true;
                for i in 0..np {
                    if i == j || w[i] == 0 {
                        continue;
                    }
                    w[i] -= 1;
                    ok = prev.contains(w.as_slice());
                    w[i] += 1;
                    if !ok {
                        break;
                    }
                }
                if ok {
                    out.push((w, code.step(res, j)));
                }
            }
            out
        });
        let mut next = Vec::new();
        for (w, res) in produced.into_iter().flatten() {
            if code.is_zero(&res) {
                rays.push(w);
            } else {
                if res == code.target {
                    points.push(w.clone());
                }
                next.push((w, res));
            }
        }
        degree += 1;
        if next.is_empty() {
            return finish(points, rays, degree, true, false);
        }
        if next.len() > caps.max_layer {
            return finish(points, rays, degree, false, true);
        }
        next.sort_unstable();
        layer = next;
    }
    finish(points, rays, degree, false, false)
}

fn finish(mut points: Vec<Vec<u64>>, mut rays: Vec<Vec<u64>>, degree: u64, exhausted: bool, layer_capped: bool) -> Enumeration {
    points.sort();
    rays.sort();
    Enumeration { points, rays, degree, exhausted, layer_capped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn fifths() {
        let inst = PureInstance::rational(&[q(2, 5)], &[vec![q(1, 5)], vec![q(2, 5)]]).unwrap();
        let code = ResidueCode::new(&inst).unwrap();
        let e = enumerate(&code, 2, u64::MAX, EnumCaps::default(), Exec::Sequential);
        assert!(e.exhausted);
        assert_eq!(e.points, vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(e.rays, vec![vec![0, 5], vec![1, 2], vec![3, 1], vec![5, 0]]);
    }
}
