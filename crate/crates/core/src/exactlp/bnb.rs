//! Depth-first branch and bound over the exact simplex.


use super::{solve_lp, Certificate, MipProblem, SolveOutcome, Status};
use crate::rational::Q;

pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

struct Node {
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    /// LP value of the parent; a lower bound for the subtree.
    bound: Option<Q>,
}

/// Minimises a MIP exactly. Branches on the first fractional integer
/// variable and explores the down branch first, so the search order and the
/// answer are deterministic. An unbounded relaxation is reported as
/// unbounded; callers are expected to pass problems bounded below.
pub fn solve_mip(mip: &MipProblem, node_cap: u64) -> SolveOutcome {
    let mut stack = vec![Node { lower: mip.lp.lower.clone(), upper: mip.lp.upper.clone(), bound: None }];
    let mut incumbent: Option<(Q, Vec<Q>)> = None;
    let mut nodes: u64 = 0;
    while let Some(node) = stack.pop() {
        if let (Some(b), Some((inc, _))) = (&node.bound, &incumbent) {
            if b >= inc {
                continue;
            }
        }
        if nodes >= node_cap {
            stack.push(node);
            return capped(stack, incumbent, nodes);
        }
        nodes += 1;
        let mut lp = mip.lp.clone();
        lp.lower = node.lower.clone();
        lp.upper = node.upper.clone();
        let out = solve_lp(&lp);
        match out.status {
            Status::Infeasible => {
                if nodes == 1 {
                    return out;
                }
                continue;
            }
            Status::Unbounded => return out,
            Status::CapExceeded => unreachable!("LP solves never cap"),
            Status::Optimal => {}
        }
        let value = out.optimum.expect("optimal LP has a value");
        if incumbent.as_ref().is_some_and(|(inc, _)| &value >= inc) {
            continue;
        }
        let x = out.x.expect("optimal LP has a point");
        let frac = (0..x.len()).find(|&j| mip.integer[j] && !x[j].is_integer());
        match frac {
            None => incumbent = Some((value, x)),
            Some(j) => {
                let down = x[j].floor();
                let up = x[j].ceil();
                let mut hi = node.upper.clone();
                hi[j] = Some(match &node.upper[j] {
                    Some(u) if *u < down => u.clone(),
                    _ => down,
                });
                let mut lo = node.lower.clone();
                lo[j] = Some(match &node.lower[j] {
                    Some(l) if *l > up => l.clone(),
                    _ => up,
                });
                stack.push(Node { lower: lo, upper: node.upper, bound: Some(value.clone()) });
                stack.push(Node { lower: node.lower, upper: hi, bound: Some(value) });
            }
        }
    }
    match incumbent {
        Some((v, x)) => SolveOutcome {
            status: Status::Optimal,
            optimum: Some(v.clone()),
            x: Some(x),
            certificate: Certificate::Search { nodes, lower: Some(v) },
        },
        None => SolveOutcome {
            status: Status::Infeasible,
            optimum: None,
            x: None,
            certificate: Certificate::Search { nodes, lower: None },
        },
    }
}

fn capped(open: Vec<Node>, incumbent: Option<(Q, Vec<Q>)>, nodes: u64) -> SolveOutcome {
    let mut lower: Option<Q> = None;
    let mut unknown = false;
    for n in &open {
        match &n.bound {
            Some(b) => {
                if lower.as_ref().is_none_or(|l| b < l) {
                    lower = Some(b.clone());
                }
            }
            None => unknown = true,
        }
    }
    if let Some((v, _)) = &incumbent {
        if lower.as_ref().is_none_or(|l| v < l) {
            lower = Some(v.clone());
        }
    }
    if unknown {
        lower = None;
    }
    let (optimum, x) = match incumbent {
        Some((v, x)) => (Some(v), Some(x)),
        None => (None, None),
    };
    SolveOutcome { status: Status::CapExceeded, optimum, x, certificate: Certificate::Search { nodes, lower } }
}

impl SolveOutcome {
    /// `[lower, upper]` bracket on the MIP optimum, when known.
    pub fn bracket(&self) -> (Option<Q>, Option<Q>) {
        let lower = match &self.certificate {
            Certificate::Search { lower, .. } => lower.clone(),
            Certificate::Dual { .. } => self.optimum.clone(),
            _ => None,
        };
        (lower, self.optimum.clone())
    }

    pub fn nodes(&self) -> u64 {
        match &self.certificate {
            Certificate::Search { nodes, .. } => *nodes,
            _ => 1,
        }
    }
}
