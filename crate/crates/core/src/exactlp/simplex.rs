//! Two-phase primal simplex on a dense rational tableau with Bland's rule.

use num::{One, Signed, Zero};

use super::{split_residual, Certificate, LinearProgram, Sense, SolveOutcome, Status};
use crate::linalg;
use crate::rational::Q;

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone)]
enum VarMap {
    Shift(Q, usize),
    Flip(Q, usize),
    Split(usize, usize),
}

struct Standard {
    /// Equality rows over the standard columns, rhs ≥ 0.
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    /// `±1` sign applied to make rhs nonnegative.
    flip: Vec<bool>,
    cost: Vec<Q>,
    /// Number of structural plus slack columns; artificials follow.
    ncols: usize,
    nx: usize,
    vars: Vec<VarMap>,
}

fn standardize(lp: &LinearProgram) -> Standard {
    let mut vars = Vec::with_capacity(lp.num_vars());
    let mut nx = 0;
    let mut bound_rows = Vec::new();
    for j in 0..lp.num_vars() {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), u) => {
                vars.push(VarMap::Shift(l.clone(), nx));
                if let Some(u) = u {
                    bound_rows.push((nx, u - l));
                }
                nx += 1;
            }
            (None, Some(u)) => {
                vars.push(VarMap::Flip(u.clone(), nx));
                nx += 1;
            }
            (None, None) => {
                vars.push(VarMap::Split(nx, nx + 1));
                nx += 2;
            }
        }
    }
    // Rows over x' with their senses.
    let mut raw: Vec<(Vec<Q>, Sense, Q)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Q::zero(); nx];
        let mut rhs = c.rhs.clone();
        for (a, v) in c.coeffs.iter().zip(&vars) {
            if a.is_zero() {
                continue;
            }
            match v {
                VarMap::Shift(l, k) => {
                    row[*k] += a;
                    rhs -= a * l;
                }
                VarMap::Flip(u, k) => {
                    row[*k] -= a;
                    rhs -= a * u;
                }
                VarMap::Split(p, m) => {
                    row[*p] += a;
                    row[*m] -= a;
                }
            }
        }
        raw.push((row, c.sense, rhs));
    }
    for (k, cap) in bound_rows {
        let mut row = vec![Q::zero(); nx];
        row[k] = Q::one();
        raw.push((row, Sense::Le, cap));
    }
    let nslack = raw.iter().filter(|r| r.1 != Sense::Eq).count();
    let ncols = nx + nslack;
    let m = raw.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut flip = Vec::with_capacity(m);
    let mut slack = nx;
    for (i, (mut row, sense, b)) in raw.into_iter().enumerate() {
        row.resize(ncols + m, Q::zero());
        match sense {
            Sense::Ge => {
                row[slack] = -Q::one();
                slack += 1;
            }
            Sense::Le => {
                row[slack] = Q::one();
                slack += 1;
            }
            Sense::Eq => {}
        }
        let neg = b.is_negative();
        if neg {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[ncols + i] = Q::one();
        rows.push(row);
        rhs.push(if neg { -b } else { b });
        flip.push(neg);
    }
    let mut cost = vec![Q::zero(); ncols + m];
    for (c, v) in lp.objective.iter().zip(&vars) {
        match v {
            VarMap::Shift(_, k) => cost[*k] += c,
            VarMap::Flip(_, k) => cost[*k] -= c,
            VarMap::Split(p, q) => {
                cost[*p] += c;
                cost[*q] -= c;
            }
        }
    }
    Standard { rows, rhs, flip, cost, ncols, nx, vars }
}

struct Tableau {
    t: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Original standard-form row index of each tableau row.
    origin: Vec<usize>,
    obj: Vec<Q>,
}

impl Tableau {
    fn set_objective(&mut self, cost: &[Q]) {
        let mut obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.t[i]) {
                *o -= cb * a;
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.t[r][col].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][col].is_zero() {
                continue;
            }
            let f = self.t[i][col].clone();
            for (x, p) in self.t[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.obj[col].clone();
        if !f.is_zero() {
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule over columns `< limit`. Returns the entering column
    /// of an unbounded ray, if any.
    fn run(&mut self, limit: usize) -> Option<usize> {
        loop {
            let col = (0..limit).find(|&j| self.obj[j].is_negative())?;
            let mut best: Option<(Q, usize, usize)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, col),
                None => return Some(col),
            }
        }
    }

    fn values(&self, width: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); width];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < width {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

fn recover(std: &Standard, xs: &[Q]) -> Vec<Q> {
    std.vars
        .iter()
        .map(|v| match v {
            VarMap::Shift(l, k) => l + &xs[*k],
            VarMap::Flip(u, k) => u - &xs[*k],
            VarMap::Split(p, q) => &xs[*p] - &xs[*q],
        })
        .collect()
}

fn recover_direction(std: &Standard, ds: &[Q]) -> Vec<Q> {
    std.vars
        .iter()
        .map(|v| match v {
            VarMap::Shift(_, k) => ds[*k].clone(),
            VarMap::Flip(_, k) => -ds[*k].clone(),
            VarMap::Split(p, q) => &ds[*p] - &ds[*q],
        })
        .collect()
}

/// Row multipliers of the original constraints from standard-form duals.
fn original_lambda(lp: &LinearProgram, std: &Standard, y: &[Q]) -> Vec<Q> {
    (0..lp.constraints.len())
        .map(|i| if std.flip[i] { -y[i].clone() } else { y[i].clone() })
        .collect()
}

pub fn solve_lp(lp: &LinearProgram) -> SolveOutcome {
    let std = standardize(lp);
    let m = std.rows.len();
    let total = std.ncols + m;
    let mut tab = Tableau {
        t: std.rows.clone(),
        rhs: std.rhs.clone(),
        basis: (std.ncols..total).collect(),
        origin: (0..m).collect(),
        obj: Vec::new(),
    };

    let mut phase1 = vec![Q::zero(); total];
    for c in phase1.iter_mut().skip(std.ncols) {
        *c = Q::one();
    }
    tab.set_objective(&phase1);
    tab.run(std.ncols);
    let infeas: Q = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(b, _)| **b >= std.ncols)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        let y: Vec<Q> = (0..m).map(|k| Q::one() - &tab.obj[std.ncols + k]).collect();
        let lambda = original_lambda(lp, &std, &y);
        let zero = vec![Q::zero(); lp.num_vars()];
        let (mu_lower, mu_upper) = split_residual(lp, &zero, &lambda);
        return SolveOutcome {
            status: Status::Infeasible,
            optimum: None,
            x: None,
            certificate: Certificate::Farkas { lambda, mu_lower, mu_upper },
        };
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= std.ncols {
            if let Some(col) = (0..std.ncols).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, col);
            } else {
                tab.t.remove(i);
                tab.rhs.remove(i);
                tab.basis.remove(i);
                tab.origin.remove(i);
                continue;
            }
        }
        i += 1;
    }

    tab.set_objective(&std.cost);
    if let Some(col) = tab.run(std.ncols) {
        let xs = tab.values(std.ncols);
        let mut ds = vec![Q::zero(); std.ncols];
        ds[col] = Q::one();
        for (i, &b) in tab.basis.iter().enumerate() {
            ds[b] = -tab.t[i][col].clone();
        }
        return SolveOutcome {
            status: Status::Unbounded,
            optimum: None,
            x: None,
            certificate: Certificate::Ray {
                point: recover(&std, &xs[..std.nx]),
                direction: recover_direction(&std, &ds[..std.nx]),
            },
        };
    }

    let xs = tab.values(std.ncols);
    let x = recover(&std, &xs[..std.nx]);
    let optimum = lp.value(&x);

    // Duals: y_B^T B = c_B over the kept rows, zero on dropped rows.
    let k = tab.basis.len();
    let bt: Vec<Vec<Q>> = tab
        .basis
        .iter()
        .map(|&col| tab.origin.iter().map(|&r| std.rows[r][col].clone()).collect())
        .collect();
    let cb: Vec<Q> = tab.basis.iter().map(|&col| std.cost[col].clone()).collect();
    let mut y = vec![Q::zero(); m];
    if k > 0 {
        let yk = linalg::solve_square(&bt, &cb).expect("basis matrix is nonsingular");
        for (v, &r) in yk.into_iter().zip(&tab.origin) {
            y[r] = v;
        }
    }
    let lambda = original_lambda(lp, &std, &y);
    let (mu_lower, mu_upper) = split_residual(lp, &lp.objective, &lambda);
    SolveOutcome {
        status: Status::Optimal,
        optimum: Some(optimum),
        x: Some(x),
        certificate: Certificate::Dual { lambda, mu_lower, mu_upper },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn lower_bound_only() {
        let mut lp = LinearProgram::new(vec![qi(1)]);
        lp.add(vec![qi(1)], Sense::Ge, qi(3));
        let out = solve_lp(&lp);
        assert_eq!(out.status, Status::Optimal);
        assert_eq!(out.optimum, Some(qi(3)));
        out.verify(&lp).unwrap();
    }

    #[test]
    fn infeasible_with_farkas() {
        let mut lp = LinearProgram::new(vec![qi(0)]);
        lp.add(vec![qi(1)], Sense::Le, qi(-1));
        let out = solve_lp(&lp);
        assert_eq!(out.status, Status::Infeasible);
        out.verify(&lp).unwrap();
    }

    #[test]
    fn unbounded_with_ray() {
        let mut lp = LinearProgram::new(vec![qi(-1), qi(-1)]);
        lp.add(vec![qi(1), qi(-1)], Sense::Le, qi(2));
        lp.set_bounds(1, None, None);
        let out = solve_lp(&lp);
        assert_eq!(out.status, Status::Unbounded);
        out.verify(&lp).unwrap();
    }

    #[test]
    fn bounds_and_free_variables() {
        // min x - 2y + z, -1 ≤ x ≤ 2, y ≤ 3 (free below), z free, x + y + z = 1, z ≥ x - 5 via row
        let mut lp = LinearProgram::new(vec![qi(1), qi(-2), qi(1)]);
        lp.set_bounds(0, Some(qi(-1)), Some(qi(2)));
        lp.set_bounds(1, None, Some(qi(3)));
        lp.set_bounds(2, None, None);
        lp.add(vec![qi(1), qi(1), qi(1)], Sense::Eq, qi(1));
        lp.add(vec![qi(-1), qi(0), qi(1)], Sense::Ge, qi(-5));
        let out = solve_lp(&lp);
        assert_eq!(out.status, Status::Optimal);
        out.verify(&lp).unwrap();
        // z = 1 - x - y; objective x - 2y + 1 - x - y = 1 - 3y; y = 3; z ≥ x - 5 with z = -2 - x → x ≤ 3/2.
        assert_eq!(out.optimum, Some(qi(-8)));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(vec![qi(1), qi(1)]);
        lp.add(vec![qi(1), qi(1)], Sense::Eq, qi(2));
        lp.add(vec![qi(2), qi(2)], Sense::Eq, qi(4));
        lp.add(vec![qi(1), qi(-1)], Sense::Eq, q(1, 2));
        let out = solve_lp(&lp);
        assert_eq!(out.optimum, Some(qi(2)));
        assert_eq!(out.x, Some(vec![q(5, 4), q(3, 4)]));
        out.verify(&lp).unwrap();
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook rule.
        let mut lp = LinearProgram::new(vec![q(-3, 4), qi(20), q(-1, 2), qi(6)]);
        lp.add(vec![q(1, 4), qi(-8), qi(-1), qi(9)], Sense::Le, qi(0));
        lp.add(vec![q(1, 2), qi(-12), q(-1, 2), qi(3)], Sense::Le, qi(0));
        lp.add(vec![qi(0), qi(0), qi(1), qi(0)], Sense::Le, qi(1));
        let out = solve_lp(&lp);
        assert_eq!(out.optimum, Some(q(-5, 4)));
        out.verify(&lp).unwrap();
    }
}
