//! Exact rational linear and mixed-integer programming.
//!
//! Every LP answer carries a certificate that [`SolveOutcome::verify`]
//! re-checks against the input with exact arithmetic:
//!
//! * optimal: multipliers `λ` on the rows and `μ` on the bounds with
//!   `Σ λ_i a_i + μ = c` and `Σ λ_i b_i + μ_l·l + μ_u·u = c·x*`;
//! * infeasible: the same identity with `c = 0` and a positive right side;
//! * unbounded: a feasible point and an improving recession direction.
//!
//! Sign conventions for minimisation: `λ_i ≥ 0` on `≥` rows, `λ_i ≤ 0` on
//! `≤` rows, free on `=` rows; `μ_l ≥ 0`, `μ_u ≤ 0`.

mod bnb;
mod group;
mod simplex;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{dot, Q};

pub use bnb::{solve_mip, DEFAULT_NODE_CAP};
pub use group::{GroupMip, GroupMipSolution};
pub use simplex::solve_lp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub sense: Sense,
    pub rhs: Q,
}

impl Constraint {
    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// `min c·x` subject to the rows and `lower ≤ x ≤ upper` (`None` = infinite).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Q>>,
    pub upper: Vec<Option<Q>>,
}

impl LinearProgram {
    /// Variables default to `x ≥ 0`.
    pub fn new(objective: Vec<Q>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            lower: vec![Some(Q::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Q>, sense: Sense, rhs: Q) -> &mut Self {
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn set_bounds(&mut self, j: usize, lower: Option<Q>, upper: Option<Q>) -> &mut Self {
        self.lower[j] = lower;
        self.upper[j] = upper;
        self
    }

    pub fn check_dims(&self) -> Result<()> {
        let n = self.num_vars();
        for len in [self.lower.len(), self.upper.len()]
            .into_iter()
            .chain(self.constraints.iter().map(|c| c.coeffs.len()))
        {
            if len != n {
                return Err(Error::Dimension { expected: n, got: len });
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, x: &[Q]) -> bool {
        x.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.holds(x))
            && x.iter().zip(&self.lower).all(|(v, l)| l.as_ref().is_none_or(|l| v >= l))
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
    }

    pub fn value(&self, x: &[Q]) -> Q {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipProblem {
    pub lp: LinearProgram,
    pub integer: Vec<bool>,
}

impl MipProblem {
    pub fn is_feasible(&self, x: &[Q]) -> bool {
        self.lp.is_feasible(x) && x.iter().zip(&self.integer).all(|(v, &int)| !int || v.is_integer())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Dual { lambda: Vec<Q>, mu_lower: Vec<Q>, mu_upper: Vec<Q> },
    Farkas { lambda: Vec<Q>, mu_lower: Vec<Q>, mu_upper: Vec<Q> },
    Ray { point: Vec<Q>, direction: Vec<Q> },
    /// Branch-and-bound: an exhaustive search of `nodes` nodes. `lower` is
    /// the proven lower bound (equal to the optimum when the search closed).
    Search { nodes: u64, lower: Option<Q> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub optimum: Option<Q>,
    pub x: Option<Vec<Q>>,
    pub certificate: Certificate,
}

impl SolveOutcome {
    /// Re-checks the certificate against `lp` exactly.
    pub fn verify(&self, lp: &LinearProgram) -> Result<()> {
        let fail = |m: &str| Err(Error::Certificate(m.into()));
        match (&self.status, &self.certificate) {
            (Status::Optimal, Certificate::Dual { lambda, mu_lower, mu_upper }) => {
                let x = self.x.as_ref().ok_or_else(|| Error::Certificate("missing primal".into()))?;
                if !lp.is_feasible(x) {
                    return fail("primal point infeasible");
                }
                let opt = self.optimum.clone().unwrap_or_default();
                if lp.value(x) != opt {
                    return fail("objective mismatch");
                }
                let bound = dual_bound(lp, &lp.objective, lambda, mu_lower, mu_upper)?;
                if bound != opt {
                    return fail("duality gap");
                }
                Ok(())
            }
            (Status::Infeasible, Certificate::Farkas { lambda, mu_lower, mu_upper }) => {
                let zero = vec![Q::zero(); lp.num_vars()];
                if dual_bound(lp, &zero, lambda, mu_lower, mu_upper)?.is_positive() {
                    Ok(())
                } else {
                    fail("Farkas combination not positive")
                }
            }
            (Status::Unbounded, Certificate::Ray { point, direction }) => {
                if !lp.is_feasible(point) {
                    return fail("ray base point infeasible");
                }
                if !is_recession_direction(lp, direction) {
                    return fail("not a recession direction");
                }
                if !dot(&lp.objective, direction).is_negative() {
                    return fail("direction does not improve");
                }
                Ok(())
            }
            _ => fail("certificate kind does not match status"),
        }
    }

    /// Checks a branch-and-bound answer: feasibility and value of the
    /// incumbent, and that the reported bound does not exceed it.
    pub fn verify_mip(&self, mip: &MipProblem) -> Result<()> {
        let fail = |m: &str| Err(Error::Certificate(m.into()));
        if let Some(x) = &self.x {
            if !mip.is_feasible(x) {
                return fail("incumbent infeasible");
            }
            if self.optimum.as_ref() != Some(&mip.lp.value(x)) {
                return fail("incumbent value mismatch");
            }
        }
        match (&self.status, &self.certificate) {
            (Status::Optimal, Certificate::Search { lower, .. }) => {
                if self.x.is_none() || lower != &self.optimum {
                    return fail("optimal MIP without closed bound");
                }
                Ok(())
            }
            (Status::CapExceeded, Certificate::Search { lower, .. }) => {
                if let (Some(lo), Some(opt)) = (lower, &self.optimum) {
                    if lo > opt {
                        return fail("bound above incumbent");
                    }
                }
                Ok(())
            }
            (Status::Infeasible, Certificate::Search { .. }) => {
                if self.x.is_some() {
                    return fail("infeasible with incumbent");
                }
                Ok(())
            }
            (Status::Infeasible, Certificate::Farkas { .. })
            | (Status::Unbounded, Certificate::Ray { .. }) => self.verify(&mip.lp),
            _ => fail("certificate kind does not match status"),
        }
    }
}

/// Checks the sign pattern and the identity `Σ λ a + μ_l + μ_u = target`,
/// then returns `Σ λ b + μ_l·l + μ_u·u`.
fn dual_bound(lp: &LinearProgram, target: &[Q], lambda: &[Q], ml: &[Q], mu: &[Q]) -> Result<Q> {
    let n = lp.num_vars();
    let err = |m: String| Err(Error::Certificate(m));
    if lambda.len() != lp.constraints.len() || ml.len() != n || mu.len() != n {
        return err("certificate dimensions".into());
    }
    let mut total = Q::zero();
    let mut combo = vec![Q::zero(); n];
    for (l, c) in lambda.iter().zip(&lp.constraints) {
        let ok = match c.sense {
            Sense::Ge => !l.is_negative(),
            Sense::Le => !l.is_positive(),
            Sense::Eq => true,
        };
        if !ok {
            return err("row multiplier has the wrong sign".into());
        }
        if l.is_zero() {
            continue;
        }
        for (acc, a) in combo.iter_mut().zip(&c.coeffs) {
            *acc += l * a;
        }
        total += l * &c.rhs;
    }
    for j in 0..n {
        if ml[j].is_negative() || mu[j].is_positive() {
            return err(format!("bound multiplier sign at {j}"));
        }
        if &combo[j] + &ml[j] + &mu[j] != target[j] {
            return err(format!("multipliers do not reproduce column {j}"));
        }
        if !ml[j].is_zero() {
            match &lp.lower[j] {
                Some(l) => total += &ml[j] * l,
                None => return err(format!("multiplier on missing lower bound {j}")),
            }
        }
        if !mu[j].is_zero() {
            match &lp.upper[j] {
                Some(u) => total += &mu[j] * u,
                None => return err(format!("multiplier on missing upper bound {j}")),
            }
        }
    }
    Ok(total)
}

fn is_recession_direction(lp: &LinearProgram, d: &[Q]) -> bool {
    d.len() == lp.num_vars()
        && lp.constraints.iter().all(|c| {
            let v = dot(&c.coeffs, d);
            match c.sense {
                Sense::Ge => !v.is_negative(),
                Sense::Le => !v.is_positive(),
                Sense::Eq => v.is_zero(),
            }
        })
        && d.iter().zip(&lp.lower).all(|(v, l)| l.is_none() || !v.is_negative())
        && d.iter().zip(&lp.upper).all(|(v, u)| u.is_none() || !v.is_positive())
}

/// Splits the residual `target − Σ λ a` into lower/upper bound multipliers.
pub(crate) fn split_residual(lp: &LinearProgram, target: &[Q], lambda: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let n = lp.num_vars();
    let mut res = target.to_vec();
    for (l, c) in lambda.iter().zip(&lp.constraints) {
        if l.is_zero() {
            continue;
        }
        for (r, a) in res.iter_mut().zip(&c.coeffs) {
            *r -= l * a;
        }
    }
    let mut ml = vec![Q::zero(); n];
    let mut mu = vec![Q::zero(); n];
    for (j, r) in res.into_iter().enumerate() {
        if r.is_positive() {
            ml[j] = r;
        } else if r.is_negative() {
            mu[j] = r;
        }
    }
    (ml, mu)
}
