//! Double description: extreme rays of a pointed cone `{x : H x ≥ 0}`.

use num::{Signed, Zero};

use crate::linalg;
use crate::rational::{dot, primitive_integer, Q};

fn normalize(v: Vec<Q>) -> Vec<Q> {
    primitive_integer(&v).into_iter().map(Q::from_integer).collect()
}

/// Extreme rays of `{x ∈ R^d : h·x ≥ 0 for h in rows}`, as primitive
/// integer vectors. The rows must have rank `d` (pointed cone).
pub fn extreme_rays(rows: &[Vec<Q>], d: usize) -> Vec<Vec<Q>> {
    // Initial simplicial cone from d independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if linalg::rank(&trial, d) == trial.len() {
            basis = trial;
            chosen.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d, "cone is not pointed");
    let mut rays: Vec<Vec<Q>> = (0..d)
        .map(|j| {
            let mut e = vec![Q::zero(); d];
            e[j] = Q::from_integer(1.into());
            normalize(linalg::solve_square(&basis, &e).expect("independent rows"))
        })
        .collect();
    let mut processed = chosen.clone();
    for (i, h) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(h, r)).collect();
        let mut next: Vec<Vec<Q>> = rays
            .iter()
            .zip(&vals)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r.clone())
            .collect();
        for (p, vp) in rays.iter().zip(&vals) {
            if !vp.is_positive() {
                continue;
            }
            for (n, vn) in rays.iter().zip(&vals) {
                if !vn.is_negative() {
                    continue;
                }
                let tight: Vec<Vec<Q>> = processed
                    .iter()
                    .filter(|&&k| dot(&rows[k], p).is_zero() && dot(&rows[k], n).is_zero())
                    .map(|&k| rows[k].clone())
                    .collect();
                if d >= 2 && linalg::rank(&tight, d) != d - 2 {
                    continue;
                }
                let r: Vec<Q> = n.iter().zip(p).map(|(a, b)| vp * a - vn * b).collect();
                let r = normalize(r);
                if !next.contains(&r) {
                    next.push(r);
                }
            }
        }
        rays = next;
        processed.push(i);
    }
    rays.sort();
    rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn square_cone() {
        // Cone over the square [0,1]^2 at height 1: x, y ≥ 0; t - x ≥ 0; t - y ≥ 0.
        let rows = vec![
            vec![qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0)],
            vec![qi(-1), qi(0), qi(1)],
            vec![qi(0), qi(-1), qi(1)],
        ];
        let rays = extreme_rays(&rows, 3);
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert!(rows.iter().all(|h| !dot(h, r).is_negative()));
        }
    }
}
