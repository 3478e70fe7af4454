//! Trivial lifting of finite restrictions `(h, d, α)` into valid tuples, the
//! validity oracle over `M_b ∩ V_{R,P}`, and separation from the closed
//! convex hull of a corner polyhedron.

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlp::{solve_lp, Certificate, GroupMip, LinearProgram, Sense, SolveOutcome, Status};
use crate::hull::{CornerPolyhedron, Inequality};
use crate::model::{is_nonneg_vec, MixedInstance, TupleRestriction};
use crate::numctx::{tag_keys, GroupReal, GroupVector};
use crate::rational::{dot, Q};

/// Largest uniform ray weight tried by [`facet_dominate`].
pub const DOUBLING_CAP: u32 = 40;

/// Instance together with nonnegative weights `h` on `R` and `d` on `P`.
#[derive(Debug, Clone)]
pub struct LiftData {
    pub inst: MixedInstance,
    pub h: Vec<Q>,
    pub d: Vec<Q>,
}

/// `min h·s` subject to `Σ r s(r) = target`, `s ≥ 0`, with the equation
/// split into rational and per-tag rows (so `s` is rational).
fn gauge_lp(r: &[GroupVector], h: &[Q], target: &GroupVector) -> LinearProgram {
    let mut lp = LinearProgram::new(h.to_vec());
    for i in 0..target.dim() {
        let row = r.iter().map(|c| c.0[i].rat.clone()).collect();
        lp.add(row, Sense::Eq, target.0[i].rat.clone());
    }
    for key in tag_keys(r.iter().chain(std::iter::once(target))) {
        let row = r.iter().map(|c| c.tag_coeff(&key)).collect();
        lp.add(row, Sense::Eq, target.tag_coeff(&key));
    }
    lp
}

impl LiftData {
    pub fn new(inst: MixedInstance, h: Vec<Q>, d: Vec<Q>) -> Result<Self> {
        if h.len() != inst.r.len() {
            return Err(Error::Dimension { expected: inst.r.len(), got: h.len() });
        }
        if d.len() != inst.pure.p.len() {
            return Err(Error::Dimension { expected: inst.pure.p.len(), got: d.len() });
        }
        if !is_nonneg_vec(&h) || !is_nonneg_vec(&d) {
            return Err(Error::Invalid("h and d must be nonnegative".into()));
        }
        let ld = LiftData { inst, h, d };
        if !ld.positively_spans() {
            return Err(Error::Precondition("R does not positively span R^n".into()));
        }
        Ok(ld)
    }

    /// Every `±eᵢ` lies in the rational cone of `R`. For irrational `R` this
    /// is a sufficient test only.
    pub fn positively_spans(&self) -> bool {
        let n = self.inst.n();
        let zeros = vec![Q::zero(); self.inst.r.len()];
        (0..n).all(|i| {
            [Q::one(), -Q::one()].into_iter().all(|sign| {
                let mut e = vec![Q::zero(); n];
                e[i] = sign;
                solve_lp(&gauge_lp(&self.inst.r, &zeros, &GroupVector::rational(&e))).status == Status::Optimal
            })
        })
    }

    pub fn restriction(&self, alpha: Q) -> TupleRestriction {
        TupleRestriction { h: self.h.clone(), d: self.d.clone(), alpha }
    }

    fn check_dim(&self, v: &GroupVector) -> Result<()> {
        if v.dim() != self.inst.n() {
            return Err(Error::Dimension { expected: self.inst.n(), got: v.dim() });
        }
        self.inst.ctx().check_known_vec(v)
    }

    /// `ψ(r) = inf { Σ h(r') s(r') : Σ r' s(r') = r, s ≥ 0 }`.
    pub fn psi(&self, r: &GroupVector) -> Result<Q> {
        self.check_dim(r)?;
        let out = solve_lp(&gauge_lp(&self.inst.r, &self.h, r));
        match out.status {
            Status::Optimal => Ok(out.optimum.expect("optimal value")),
            _ => Err(Error::NotRepresentable(format!("{r} is not in the cone of R"))),
        }
    }

    /// `π(p) = inf { h·s + d·y : Σ r s(r) + Σ p' y(p') ∈ p + Zⁿ, s ≥ 0, y ∈ N^P }`.
    pub fn pi(&self, p: &GroupVector, node_cap: u64) -> Result<Q> {
        self.check_dim(p)?;
        let rows = crate::model::GroupRows::build(p, &self.inst.r, &self.inst.pure.p);
        let sol = GroupMip::new(rows, self.h.clone(), self.d.clone()).solve(node_cap);
        match sol.status {
            Status::Optimal => Ok(sol.value.expect("optimal value")),
            Status::CapExceeded => Err(Error::CapExceeded(format!("trivial lifting at {p} exceeded {node_cap} nodes"))),
            _ => Err(Error::NotRepresentable(format!("{p} is not reachable from R and P"))),
        }
    }
}

pub fn trivial_psi(ld: &LiftData, r: &GroupVector) -> Result<Q> {
    ld.psi(r)
}

pub fn trivial_pi(ld: &LiftData, p: &GroupVector, node_cap: u64) -> Result<Q> {
    ld.pi(p, node_cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct Validity {
    pub valid: bool,
    /// `min h·s + d·y` over `M_b ∩ V_{R,P}`; `None` when that set is empty.
    #[serde(with = "crate::rational::serde_opt_q")]
    pub minimum: Option<Q>,
    /// A feasible `(s, y)` with `h·s + d·y < α`.
    pub witness: Option<ValidityWitness>,
    pub nodes: u64,
    #[serde(skip)]
    pub outcome: SolveOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityWitness {
    #[serde(with = "crate::rational::serde_qvec")]
    pub s: Vec<Q>,
    pub y: Vec<u64>,
}

/// Decides `h·s + d·y ≥ α` on `M_b ∩ V_{R,P}` with one exact MIP.
pub fn validity_oracle(ld: &LiftData, alpha: &Q, node_cap: u64) -> Result<Validity> {
    let sol = GroupMip::new(ld.inst.rows(), ld.h.clone(), ld.d.clone()).solve(node_cap);
    let nodes = sol.outcome.nodes();
    match sol.status {
        Status::Optimal => {
            let v = sol.value.clone().expect("optimal value");
            let valid = &v >= alpha;
            Ok(Validity {
                valid,
                witness: (!valid).then(|| ValidityWitness { s: sol.s.clone(), y: sol.y.clone() }),
                minimum: Some(v),
                nodes,
                outcome: sol.outcome,
            })
        }
        Status::Infeasible => Ok(Validity { valid: true, minimum: None, witness: None, nodes, outcome: sol.outcome }),
        Status::Unbounded => Err(Error::Invalid("validity MIP is unbounded; weights must be nonnegative".into())),
        Status::CapExceeded => Err(Error::CapExceeded(format!("validity MIP exceeded {node_cap} nodes"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetDomination {
    /// Uniform ray weight that made `(h, d, 1)` valid.
    #[serde(with = "crate::rational::serde_q")]
    pub m: Q,
    pub tuple: TupleRestriction,
    pub validity: Validity,
    /// `π(p)` for every `p ∈ P`.
    #[serde(with = "crate::rational::serde_qvec")]
    pub pi_at_p: Vec<Q>,
    /// `π(p) ≤ d(p)` for every `p ∈ P`.
    pub dominated: bool,
    #[serde(skip)]
    pub lift: LiftData,
}

/// `{±e¹, …, ±eⁿ}`.
pub fn unit_rays(n: usize) -> Vec<GroupVector> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [Q::one(), -Q::one()] {
            let mut e = vec![Q::zero(); n];
            e[i] = sign;
            out.push(GroupVector::rational(&e));
        }
    }
    out
}

/// Lifts a facet `d·y ≥ 1` of a rational corner polyhedron to a valid
/// tuple with uniform ray weight `M ∈ {1, 2, 4, …, 2⁴⁰}` and reports whether
/// the trivial lifting `π` dominates `d` on `P`.
pub fn facet_dominate(
    cp: &CornerPolyhedron,
    facet: &Inequality,
    rays: Option<Vec<GroupVector>>,
    node_cap: u64,
) -> Result<FacetDomination> {
    let inst = &cp.instance;
    if !inst.is_rational() {
        return Err(Error::Precondition("facet domination needs a rational instance".into()));
    }
    if cp.is_empty() {
        return Err(Error::EmptyCorner);
    }
    if !cp.is_complete() {
        return Err(Error::Incomplete("corner generators are not certified complete".into()));
    }
    if facet.a.len() != inst.p.len() {
        return Err(Error::Dimension { expected: inst.p.len(), got: facet.a.len() });
    }
    if !facet.a0.is_positive() {
        return Err(Error::Precondition("inequality is valid for the nonnegative orthant".into()));
    }
    let d: Vec<Q> = facet.a.iter().map(|a| a / &facet.a0).collect();
    if !is_nonneg_vec(&d) {
        return Err(Error::Precondition("facet coefficients must be nonnegative".into()));
    }
    let valid_on_corner = cp.point_vectors().iter().all(|e| dot(&d, e) >= Q::one())
        && cp.ray_vectors().iter().all(|r| !dot(&d, r).is_negative());
    if !valid_on_corner {
        return Err(Error::Precondition("inequality is not valid for the corner polyhedron".into()));
    }
    let r = rays.unwrap_or_else(|| unit_rays(inst.n));
    let mixed = MixedInstance { pure: inst.clone(), r };
    let mut m = Q::one();
    for _ in 0..=DOUBLING_CAP {
        let h = vec![m.clone(); mixed.r.len()];
        let ld = LiftData::new(mixed.clone(), h, d.clone())?;
        let validity = validity_oracle(&ld, &Q::one(), node_cap)?;
        if validity.valid {
            let pi_at_p = inst.p.iter().map(|p| ld.pi(p, node_cap)).collect::<Result<Vec<_>>>()?;
            let dominated = pi_at_p.iter().zip(&d).all(|(pi, dp)| pi <= dp);
            return Ok(FacetDomination { m, tuple: ld.restriction(Q::one()), validity, pi_at_p, dominated, lift: ld });
        }
        m *= Q::from_integer(BigInt::from(2));
    }
    Err(Error::CapExceeded(format!("no uniform ray weight up to 2^{DOUBLING_CAP} makes the tuple valid")))
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Separation {
    /// `y*` lies in `conv(E) + cone(rays) + ℝ^P_+`; `value` is the blocking
    /// LP optimum, at least 1.
    Member {
        #[serde(with = "crate::rational::serde_q")]
        value: Q,
    },
    Separator(TupleRestriction),
}

impl Separation {
    pub fn is_member(&self) -> bool {
        matches!(self, Separation::Member { .. })
    }
}

/// Separates `y*` from the closed convex hull of the corner polyhedron by
/// `d·y ≥ 1` with `d ≥ 0`, using the blocking LP
/// `min d·y*` s.t. `d·e ≥ 1` (e ∈ E), `d·r ≥ 0` (rays), `d ≥ 0`.
pub fn separate_from_closure(cp: &CornerPolyhedron, y: &[Q]) -> Result<Separation> {
    let np = cp.dim();
    if y.len() != np {
        return Err(Error::Dimension { expected: np, got: y.len() });
    }
    if !cp.is_complete() {
        return Err(Error::Incomplete("corner generators are not certified complete".into()));
    }
    if cp.is_empty() {
        return Err(Error::EmptyCorner);
    }
    let points = cp.point_vectors();
    let rays = cp.ray_vectors();
    let mut lp = LinearProgram::new(y.to_vec());
    for e in &points {
        lp.add(e.clone(), Sense::Ge, Q::one());
    }
    for r in &rays {
        lp.add(r.clone(), Sense::Ge, Q::zero());
    }
    let out = solve_lp(&lp);
    let d = match (&out.status, &out.certificate) {
        (Status::Optimal, _) => {
            let value = out.optimum.clone().expect("optimal value");
            if value >= Q::one() {
                return Ok(Separation::Member { value });
            }
            out.x.clone().expect("optimal point")
        }
        (Status::Unbounded, Certificate::Ray { point, direction }) => {
            // Walk along the ray until the objective drops below 0.
            let slope = -dot(direction, y);
            let t = (dot(point, y).max(Q::zero()) / slope) + Q::one();
            point.iter().zip(direction).map(|(p, r)| p + r * &t).collect()
        }
        _ => return Err(Error::Certificate(format!("blocking LP ended with {:?}", out.status))),
    };
    let sep = TupleRestriction { h: Vec::new(), d, alpha: Q::one() };
    let verified = is_nonneg_vec(&sep.d)
        && dot(&sep.d, y) < Q::one()
        && points.iter().all(|e| dot(&sep.d, e) >= Q::one())
        && rays.iter().all(|r| !dot(&sep.d, r).is_negative());
    if !verified {
        return Err(Error::Certificate("separator failed verification against the generators".into()));
    }
    Ok(Separation::Separator(sep))
}

/// `Σ h s + Σ d y` at a group point, as a `GroupReal`.
pub fn restriction_value(tup: &TupleRestriction, s: &[GroupReal], y: &[u64]) -> GroupReal {
    let mut acc = GroupReal::zero();
    for (h, x) in tup.h.iter().zip(s) {
        acc = &acc + &x.scale(h);
    }
    let dy: Q = tup.d.iter().zip(y).map(|(d, &k)| d * Q::from_integer(k.into())).sum();
    &acc + &GroupReal::from(dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::DEFAULT_NODE_CAP;
    use crate::hull::EnumCaps;
    use crate::model::PureInstance;
    use crate::par::Exec;
    use crate::rational::{q, qi};

    fn one_d(b: Q, p: &[Q], h: Vec<Q>, d: Vec<Q>) -> LiftData {
        let pv: Vec<Vec<Q>> = p.iter().map(|x| vec![x.clone()]).collect();
        let inst = MixedInstance::rational(&[b], &pv, &[vec![qi(1)], vec![qi(-1)]]).unwrap();
        LiftData::new(inst, h, d).unwrap()
    }

    fn gv(x: Q) -> GroupVector {
        GroupVector::rational(&[x])
    }

    #[test]
    fn gauge_values() {
        let ld = one_d(q(1, 5), &[q(2, 5)], vec![qi(1), qi(1)], vec![qi(1)]);
        assert_eq!(ld.psi(&gv(qi(0))).unwrap(), qi(0));
        assert_eq!(ld.psi(&gv(q(3, 4))).unwrap(), q(3, 4));
        assert_eq!(ld.psi(&gv(q(-3, 2))).unwrap(), q(3, 2));
        assert_eq!(ld.pi(&gv(q(1, 5)), DEFAULT_NODE_CAP).unwrap(), q(1, 5));
        assert_eq!(ld.pi(&gv(qi(0)), DEFAULT_NODE_CAP).unwrap(), qi(0));
        assert!(ld.pi(&gv(q(2, 5)), DEFAULT_NODE_CAP).unwrap() <= qi(1));
    }

    #[test]
    fn spanning_is_required() {
        let inst = MixedInstance::rational(&[q(1, 2)], &[vec![q(1, 2)]], &[vec![qi(1)]]).unwrap();
        assert!(matches!(LiftData::new(inst, vec![qi(1)], vec![qi(1)]), Err(Error::Precondition(_))));
    }

    #[test]
    fn gmic_restriction_is_valid() {
        // slope_lift(GMIC_{2/5}) = (5/2, 5/3); restricted to R = {1, −1}, P = {1/5, 2/5}.
        let ld = one_d(q(2, 5), &[q(1, 5), q(2, 5)], vec![q(5, 2), q(5, 3)], vec![q(1, 2), qi(1)]);
        let v = validity_oracle(&ld, &qi(1), DEFAULT_NODE_CAP).unwrap();
        assert!(v.valid);
        assert_eq!(v.minimum, Some(qi(1)));
        let zero = one_d(q(2, 5), &[q(2, 5)], vec![qi(0), qi(0)], vec![qi(0)]);
        let v = validity_oracle(&zero, &qi(1), DEFAULT_NODE_CAP).unwrap();
        assert!(!v.valid && v.witness.is_some());
        assert!(validity_oracle(&zero, &qi(0), DEFAULT_NODE_CAP).unwrap().valid);
    }

    #[test]
    fn facet_lifting() {
        let inst = PureInstance::rational(&[q(2, 5)], &[vec![q(2, 5)]]).unwrap();
        let cp = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        let facet = Inequality { a: vec![qi(1)], a0: qi(1) };
        let fd = facet_dominate(&cp, &facet, None, DEFAULT_NODE_CAP).unwrap();
        assert!(fd.validity.valid && fd.dominated);
        assert_eq!(fd.m, qi(4));
        let orthant = Inequality { a: vec![qi(1)], a0: qi(0) };
        assert!(matches!(facet_dominate(&cp, &orthant, None, DEFAULT_NODE_CAP), Err(Error::Precondition(_))));
    }

    #[test]
    fn separation() {
        let inst = PureInstance::rational(&[q(2, 5)], &[vec![q(1, 5)], vec![q(2, 5)]]).unwrap();
        let cp = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        let Separation::Separator(t) = separate_from_closure(&cp, &[qi(0), qi(0)]).unwrap() else {
            panic!("origin must be separated")
        };
        assert!(dot(&t.d, &[qi(0), qi(0)]) < qi(1));
        for e in cp.point_vectors() {
            assert!(separate_from_closure(&cp, &e).unwrap().is_member());
            let half: Vec<Q> = e.iter().map(|x| x / qi(2)).collect();
            match separate_from_closure(&cp, &half).unwrap() {
                Separation::Separator(t) => assert!(dot(&t.d, &half) <= q(1, 2)),
                Separation::Member { .. } => panic!("half of a minimal point is outside"),
            }
        }
        assert!(!separate_from_closure(&cp, &[qi(-1), qi(5)]).unwrap().is_member());
    }
}
