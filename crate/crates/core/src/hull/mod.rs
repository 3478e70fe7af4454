//! Corner polyhedra `C^P = conv(I_b ∩ V_P)` for finite `P`.
//!
//! `C^P = conv(E) + cone(rays)` where `E` are the minimal feasible points and
//! the rays are the minimal integer rays. Both sets are computed exactly
//! by [`enumerate`]; the result records whether completeness is certified.

mod affine;
mod bounds;
mod dd;
mod enumerate;

use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use affine::{affine_hull, affine_hull_of_generators, direction_basis, AffineHull};
pub use bounds::{cone_extreme_rays, degree_bounds, polyhedron_vertices, DegreeBounds};
pub use dd::extreme_rays;
pub use enumerate::{enumerate, EnumCaps, Enumeration, ResidueCode};

use crate::error::{Error, Result};
use crate::exactlp::{solve_lp, Certificate, LinearProgram, Sense, Status};
use crate::linalg;
use crate::model::{PureInstance, PureSolution};
use crate::par::Exec;
use crate::rational::{dot, primitive_integer, serde_q, serde_qvec, Q};

/// Default bound on `|P|` for facet enumeration.
pub const FACET_DIM_CAP: usize = 8;

/// `a·y ≥ a0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Inequality {
    #[serde(with = "serde_qvec")]
    pub a: Vec<Q>,
    #[serde(with = "serde_q")]
    pub a0: Q,
}

impl Inequality {
    pub fn holds(&self, y: &[Q]) -> bool {
        dot(&self.a, y) >= self.a0
    }

    pub fn slack(&self, y: &[Q]) -> Q {
        dot(&self.a, y) - &self.a0
    }

    /// Scales to `a0 = ±1`, or to a primitive integer normal when `a0 = 0`.
    pub fn normalized(&self) -> Inequality {
        if self.a0.is_zero() {
            let a = primitive_integer(&self.a).into_iter().map(Q::from_integer).collect();
            Inequality { a, a0: Q::zero() }
        } else {
            let s = self.a0.abs().recip();
            Inequality { a: self.a.iter().map(|x| x * &s).collect(), a0: &self.a0 * &s }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletenessReason {
    /// A layer of ray-free vectors came out empty.
    Exhausted,
    /// The degree bound was reached.
    DegreeBound,
    /// The degree cap stopped the search first.
    DegreeCap,
    /// The per-layer size cap stopped the search.
    LayerCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completeness {
    pub complete: bool,
    pub reason: CompletenessReason,
    /// Largest degree fully explored.
    pub degree: u64,
    pub bounds: Option<DegreeBounds>,
}

#[derive(Debug, Clone)]
pub struct CornerPolyhedron {
    pub instance: PureInstance,
    pub points: Vec<PureSolution>,
    pub rays: Vec<PureSolution>,
    pub aff: AffineHull,
    pub completeness: Completeness,
}

impl Serialize for DegreeBounds {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DegreeBounds", 2)?;
        st.serialize_field("ray", &self.ray)?;
        st.serialize_field("point", &self.point)?;
        st.end()
    }
}

impl CornerPolyhedron {
    pub fn compute(inst: &PureInstance, caps: EnumCaps, exec: Exec) -> Result<Self> {
        let code = ResidueCode::new(inst)?;
        let bounds = degree_bounds(inst);
        let stop = bounds.as_ref().map_or(u64::MAX, DegreeBounds::max);
        let run = enumerate(&code, inst.p.len(), stop, caps, exec);
        let (complete, reason) = if run.exhausted {
            (true, CompletenessReason::Exhausted)
        } else if run.layer_capped {
            (false, CompletenessReason::LayerCap)
        } else if run.degree >= stop {
            (true, CompletenessReason::DegreeBound)
        } else {
            (false, CompletenessReason::DegreeCap)
        };
        Ok(CornerPolyhedron {
            instance: inst.clone(),
            points: run.points.into_iter().map(PureSolution).collect(),
            rays: run.rays.into_iter().map(PureSolution).collect(),
            aff: affine_hull(inst),
            completeness: Completeness { complete, reason, degree: run.degree, bounds },
        })
    }

    pub fn dim(&self) -> usize {
        self.instance.p.len()
    }

    pub fn is_complete(&self) -> bool {
        self.completeness.complete
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Incomplete(format!(
                "search stopped at degree {} ({:?})",
                self.completeness.degree, self.completeness.reason
            )))
        }
    }

    pub fn point_vectors(&self) -> Vec<Vec<Q>> {
        self.points.iter().map(PureSolution::as_q).collect()
    }

    pub fn ray_vectors(&self) -> Vec<Vec<Q>> {
        self.rays.iter().map(PureSolution::as_q).collect()
    }

    /// `aff(C^P)` computed from the generators.
    pub fn aff_from_generators(&self) -> AffineHull {
        affine_hull_of_generators(&self.point_vectors(), &self.ray_vectors(), self.dim())
    }

    /// Dimension of `C^P`, or `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        Some(direction_basis(&self.point_vectors(), &self.ray_vectors(), self.dim()).len())
    }

    pub fn recession_cone(&self) -> Result<RecessionCone> {
        self.require_complete()?;
        if self.is_empty() {
            return Err(Error::EmptyCorner);
        }
        let rays = self.ray_vectors();
        let extreme: Vec<PureSolution> = self
            .rays
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let others: Vec<Vec<Q>> =
                    rays.iter().enumerate().filter(|(j, _)| j != i).map(|(_, r)| r.clone()).collect();
                !in_cone(&others, &rays[*i])
            })
            .map(|(_, r)| r.clone())
            .collect();
        Ok(RecessionCone { equations: self.aff.theta.clone(), generators: extreme })
    }

    pub fn rationality_report(&self) -> Result<RationalityReport> {
        self.require_complete()?;
        if self.is_empty() {
            return Err(Error::EmptyCorner);
        }
        let rational_p = self.instance.is_rational();
        let n = self.dim();
        let orthant = (0..n).all(|j| self.rays.iter().any(|r| r.0.iter().enumerate().all(|(i, &v)| (i == j) == (v > 0))));
        let dim = self.dimension().unwrap_or(0);
        let full = dim == n;
        Ok(RationalityReport {
            rational_p,
            rec_is_orthant: orthant,
            full_dimensional: full,
            dimension: dim,
            agree: rational_p == orthant && orthant == full,
        })
    }

    /// `y ∈ conv(E) + cone(rays)`.
    pub fn member_conv(&self, y: &[Q]) -> Result<Membership> {
        self.require_complete()?;
        membership(&self.point_vectors(), &self.ray_vectors(), y, false)
    }

    /// `y ∈ conv(E) + cone(rays) + R^P_+`.
    pub fn member_closure(&self, y: &[Q]) -> Result<Membership> {
        self.require_complete()?;
        membership(&self.point_vectors(), &self.ray_vectors(), y, true)
    }

    /// Irredundant facets of `C^P` inside its affine hull, normalized.
    pub fn facets(&self) -> Result<Vec<Inequality>> {
        self.facets_with_cap(FACET_DIM_CAP)
    }

    pub fn facets_with_cap(&self, dim_cap: usize) -> Result<Vec<Inequality>> {
        self.require_complete()?;
        if self.dim() > dim_cap {
            return Err(Error::CapExceeded(format!("|P| = {} exceeds facet cap {dim_cap}", self.dim())));
        }
        if self.is_empty() {
            return Err(Error::EmptyCorner);
        }
        Ok(facets_of(&self.point_vectors(), &self.ray_vectors(), self.dim()))
    }

    /// For each sample, `member_conv ⇔ member_closure ∧ y ∈ aff(C^P)`.
    pub fn check_aff_intersection(&self, samples: &[Vec<Q>]) -> Result<bool> {
        let aff = self.aff_from_generators();
        for y in samples {
            let conv = self.member_conv(y)?.is_member();
            let clo = self.member_closure(y)?.is_member();
            if conv != (clo && aff.contains(y)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecessionCone {
    /// `rec(C^P) = {y ≥ 0 : equations · y = 0}`.
    pub equations: Vec<Vec<Q>>,
    pub generators: Vec<PureSolution>,
}

impl RecessionCone {
    pub fn contains(&self, y: &[Q]) -> bool {
        y.iter().all(|v| !v.is_negative()) && self.equations.iter().all(|r| dot(r, y).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalityReport {
    pub rational_p: bool,
    pub rec_is_orthant: bool,
    pub full_dimensional: bool,
    pub dimension: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `y = Σ λ e + Σ μ r + σ` with `λ` convex, `μ, σ ≥ 0`.
    Member { lambda: Vec<Q>, mu: Vec<Q>, slack: Vec<Q> },
    /// A valid inequality violated by `y`.
    Separated(Inequality),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    /// Re-checks the certificate against the generators and `y`.
    pub fn verify(&self, points: &[Vec<Q>], rays: &[Vec<Q>], y: &[Q], closure: bool) -> bool {
        match self {
            Membership::Member { lambda, mu, slack } => {
                let n = y.len();
                let mut sum = vec![Q::zero(); n];
                for (l, e) in lambda.iter().zip(points) {
                    for (s, v) in sum.iter_mut().zip(e) {
                        *s += l * v;
                    }
                }
                for (m, r) in mu.iter().zip(rays) {
                    for (s, v) in sum.iter_mut().zip(r) {
                        *s += m * v;
                    }
                }
                for (s, v) in sum.iter_mut().zip(slack) {
                    *s += v;
                }
                lambda.iter().sum::<Q>().is_one()
                    && lambda.iter().chain(mu).chain(slack).all(|v| !v.is_negative())
                    && (closure || slack.iter().all(Zero::is_zero))
                    && sum == y
            }
            Membership::Separated(ineq) => {
                points.iter().all(|e| ineq.holds(e))
                    && rays.iter().all(|r| !dot(&ineq.a, r).is_negative())
                    && (!closure || ineq.a.iter().all(|v| !v.is_negative()))
                    && !ineq.holds(y)
            }
        }
    }
}

fn in_cone(gens: &[Vec<Q>], v: &[Q]) -> bool {
    let n = v.len();
    let mut lp = LinearProgram::new(vec![Q::zero(); gens.len()]);
    for i in 0..n {
        lp.add(gens.iter().map(|g| g[i].clone()).collect(), Sense::Eq, v[i].clone());
    }
    solve_lp(&lp).status == Status::Optimal
}

/// Membership LP in `conv(points) + cone(rays)` (plus `R^n_+` if `closure`).
pub fn membership(points: &[Vec<Q>], rays: &[Vec<Q>], y: &[Q], closure: bool) -> Result<Membership> {
    let n = y.len();
    if points.is_empty() {
        return Ok(Membership::Separated(Inequality { a: vec![Q::zero(); n], a0: Q::one() }));
    }
    let (ne, nr) = (points.len(), rays.len());
    let ns = if closure { n } else { 0 };
    let mut lp = LinearProgram::new(vec![Q::zero(); ne + nr + ns]);
    for i in 0..n {
        let mut row: Vec<Q> = points.iter().map(|e| e[i].clone()).chain(rays.iter().map(|r| r[i].clone())).collect();
        if closure {
            row.extend((0..n).map(|k| if k == i { Q::one() } else { Q::zero() }));
        }
        lp.add(row, Sense::Eq, y[i].clone());
    }
    let mut conv = vec![Q::one(); ne];
    conv.resize(ne + nr + ns, Q::zero());
    lp.add(conv, Sense::Eq, Q::one());
    let out = solve_lp(&lp);
    out.verify(&lp)?;
    let res = match (&out.status, &out.certificate) {
        (Status::Optimal, _) => {
            let x = out.x.expect("optimal LP has a point");
            Membership::Member {
                lambda: x[..ne].to_vec(),
                mu: x[ne..ne + nr].to_vec(),
                slack: if closure { x[ne + nr..].to_vec() } else { vec![Q::zero(); n] },
            }
        }
        (Status::Infeasible, Certificate::Farkas { lambda, .. }) => {
            let a: Vec<Q> = lambda[..n].iter().map(|w| -w.clone()).collect();
            Membership::Separated(Inequality { a, a0: lambda[n].clone() }.normalized())
        }
        _ => return Err(Error::Certificate("unexpected membership LP status".into())),
    };
    if !res.verify(points, rays, y, closure) {
        return Err(Error::Certificate("membership certificate failed to verify".into()));
    }
    Ok(res)
}

/// Facets of `conv(points) + cone(rays)` relative to its affine hull.
pub fn facets_of(points: &[Vec<Q>], rays: &[Vec<Q>], dim: usize) -> Vec<Inequality> {
    let mut dir = direction_basis(points, rays, dim);
    let k = dir.len();
    if k == 0 {
        return Vec::new();
    }
    let pivots = linalg::rref(&mut dir, dim);
    let proj = |v: &Vec<Q>| -> Vec<Q> { pivots.iter().map(|&j| v[j].clone()).collect() };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for e in points {
        let mut r = proj(e);
        r.push(-Q::one());
        rows.push(r);
    }
    for r in rays {
        let mut row = proj(r);
        row.push(Q::zero());
        rows.push(row);
    }
    let mut out: Vec<Inequality> = extreme_rays(&rows, k + 1)
        .into_iter()
        .filter(|x| x[..k].iter().any(|v| !v.is_zero()))
        .map(|x| {
            let mut a = vec![Q::zero(); dim];
            for (&j, v) in pivots.iter().zip(&x[..k]) {
                a[j] = v.clone();
            }
            Inequality { a, a0: x[k].clone() }.normalized()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Convenience wrappers over [`CornerPolyhedron::compute`].
pub fn minimal_points(inst: &PureInstance, caps: EnumCaps) -> Result<(Vec<PureSolution>, Completeness)> {
    let cp = CornerPolyhedron::compute(inst, caps, Exec::default())?;
    Ok((cp.points, cp.completeness))
}

pub fn minimal_rays(inst: &PureInstance, caps: EnumCaps) -> Result<(Vec<PureSolution>, Completeness)> {
    let cp = CornerPolyhedron::compute(inst, caps, Exec::default())?;
    Ok((cp.rays, cp.completeness))
}

/// Size of the subgroup of `Q^n/Z^n` generated by rational columns; the
/// textbook degree bound `q^n` caps it.
pub fn group_order_bound(inst: &PureInstance) -> Option<u64> {
    let rows = inst.rows();
    let q = crate::rational::lcm_denominators(rows.cong_p.iter().flatten()).to_u64()?;
    q.checked_pow(inst.n as u32)
}
