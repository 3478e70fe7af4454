//! MIPs over group-feasibility constraints
//! `Σ r s(r) + Σ p y(p) ∈ target + Z^n`.
//!
//! Variables are laid out as `[s | y | z]` where `z ∈ Z^n` is the integer
//! translation of the congruence rows. A `y` variable with zero cost that
//! does not appear in any tag equation is periodic: adding its period `q`
//! (the lcm of its column's denominators) moves the sum by an integer vector
//! that `z` absorbs. Such variables are boxed to `{0, …, q−1}` before
//! solving, which keeps the search finite without changing the optimum.

use num::{Signed, ToPrimitive, Zero};

use super::{solve_mip, LinearProgram, MipProblem, Sense, SolveOutcome, Status};
use crate::model::GroupRows;
use crate::rational::{lcm_denominators, Q};

#[derive(Debug, Clone)]
pub struct GroupMip {
    pub rows: GroupRows,
    pub cost_s: Vec<Q>,
    pub cost_y: Vec<Q>,
    /// Optional caller-imposed upper bounds on `y`.
    pub y_upper: Vec<Option<u64>>,
}

#[derive(Debug, Clone)]
pub struct GroupMipSolution {
    pub status: Status,
    pub value: Option<Q>,
    pub s: Vec<Q>,
    pub y: Vec<u64>,
    pub z: Vec<Q>,
    pub outcome: SolveOutcome,
}

impl GroupMip {
    pub fn new(rows: GroupRows, cost_s: Vec<Q>, cost_y: Vec<Q>) -> Self {
        let np = cost_y.len();
        GroupMip { rows, cost_s, cost_y, y_upper: vec![None; np] }
    }

    fn ns(&self) -> usize {
        self.cost_s.len()
    }

    fn np(&self) -> usize {
        self.cost_y.len()
    }

    /// Period of each `y` variable that can be boxed, else `None`.
    pub fn periods(&self) -> Vec<Option<u64>> {
        (0..self.np())
            .map(|j| {
                if !self.cost_y[j].is_zero() || self.rows.eq_p.iter().any(|row| !row[j].is_zero()) {
                    return None;
                }
                let col: Vec<Q> = self.rows.cong_p.iter().map(|row| row[j].clone()).collect();
                lcm_denominators(&col).to_u64()
            })
            .collect()
    }

    pub fn to_mip(&self) -> MipProblem {
        let (ns, np, nz) = (self.ns(), self.np(), self.rows.n_cong());
        let nv = ns + np + nz;
        let mut obj = vec![Q::zero(); nv];
        obj[..ns].clone_from_slice(&self.cost_s);
        obj[ns..ns + np].clone_from_slice(&self.cost_y);
        let mut lp = LinearProgram::new(obj);
        for i in 0..nz {
            let mut row = vec![Q::zero(); nv];
            row[..ns].clone_from_slice(&self.rows.cong_r[i]);
            row[ns..ns + np].clone_from_slice(&self.rows.cong_p[i]);
            row[ns + np + i] = Q::from_integer((-1).into());
            lp.add(row, Sense::Eq, self.rows.cong_rhs[i].clone());
        }
        for k in 0..self.rows.n_eq() {
            let mut row = vec![Q::zero(); nv];
            row[..ns].clone_from_slice(&self.rows.eq_r[k]);
            row[ns..ns + np].clone_from_slice(&self.rows.eq_p[k]);
            lp.add(row, Sense::Eq, self.rows.eq_rhs[k].clone());
        }
        for (j, period) in self.periods().into_iter().enumerate() {
            let cap = match (period.map(|q| q - 1), self.y_upper[j]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            if let Some(c) = cap {
                lp.upper[ns + j] = Some(Q::from_integer(c.into()));
            }
        }
        for i in 0..nz {
            lp.set_bounds(ns + np + i, None, None);
        }
        let mut integer = vec![false; ns];
        integer.extend(std::iter::repeat_n(true, np + nz));
        MipProblem { lp, integer }
    }

    pub fn solve(&self, node_cap: u64) -> GroupMipSolution {
        let mip = self.to_mip();
        let outcome = solve_mip(&mip, node_cap);
        let (ns, np) = (self.ns(), self.np());
        let (s, y, z) = match &outcome.x {
            Some(x) => (
                x[..ns].to_vec(),
                x[ns..ns + np]
                    .iter()
                    .map(|v| {
                        debug_assert!(!v.is_negative() && v.is_integer());
                        v.to_integer().to_u64().expect("y fits in u64")
                    })
                    .collect(),
                x[ns + np..].to_vec(),
            ),
            None => (Vec::new(), Vec::new(), Vec::new()),
        };
        GroupMipSolution { status: outcome.status, value: outcome.optimum.clone(), s, y, z, outcome }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MixedInstance;
    use crate::rational::{q, qi};

    #[test]
    fn gauge_through_group() {
        // n=1, R={1,-1}, h=(1,1), P={2/5}, d=1, target 1/5.
        let inst = MixedInstance::rational(&[q(1, 5)], &[vec![q(2, 5)]], &[vec![qi(1)], vec![qi(-1)]]).unwrap();
        let mip = GroupMip::new(inst.rows(), vec![qi(1), qi(1)], vec![qi(1)]);
        let sol = mip.solve(super::super::DEFAULT_NODE_CAP);
        assert_eq!(sol.value, Some(q(1, 5)));
        assert_eq!(sol.y, vec![0]);
    }

    #[test]
    fn boxing_applies_only_to_free_columns() {
        let inst = MixedInstance::rational(&[q(1, 2)], &[vec![q(1, 3)], vec![q(1, 4)]], &[]).unwrap();
        let mip = GroupMip::new(inst.rows(), vec![], vec![qi(0), qi(1)]);
        assert_eq!(mip.periods(), vec![Some(3), None]);
        let value = mip.solve(1000).value.unwrap();
        let mut best = None;
        for a in 0..12u64 {
            for b in 0..12u64 {
                let v = q(a as i64, 3) + q(b as i64, 4) - q(1, 2);
                if v.is_integer() && best.as_ref().is_none_or(|x: &Q| &qi(b as i64) < x) {
                    best = Some(qi(b as i64));
                }
            }
        }
        assert_eq!(Some(value), best);
    }
}
