//! Exact arithmetic in a finitely generated Q-vector space of reals.
//!
//! A [`NumberContext`] declares a finite list of tags (irrational reals such
//! as `sqrt2`). The set `{1} ∪ tags` is *assumed* to be linearly independent
//! over Q; this is an axiom of the context and is never verified.
//! Multiplicative relations (e.g. declaring `sqrt2`, `sqrt3` and `sqrt6`
//! together) break the axiom and are the caller's responsibility.
//!
//! A [`GroupReal`] is `rat + Σ coeff_t · t`. Equality is coefficient-wise,
//! which is sound under the independence axiom. Order is decided by refining
//! interval enclosures of the difference until the interval excludes zero.

mod interval;
mod oracle;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, One, Signed, Zero};

pub use interval::{exact_sqrt, sqrt_bounds, Interval};
pub use oracle::{is_square_free, EnclosureOracle, SqrtOracle};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{fmt_q, Q};

/// Number of interval halvings `compare` tries before giving up.
pub const DEFAULT_REFINEMENT_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagKind {
    Sqrt(u64),
    Custom,
}

#[derive(Debug, Clone)]
pub struct Tag {
    pub symbol: String,
    pub kind: TagKind,
    oracle: Arc<dyn EnclosureOracle>,
}

impl Tag {
    pub fn sqrt(radicand: u64) -> Result<Tag> {
        Ok(Tag {
            symbol: format!("sqrt{radicand}"),
            kind: TagKind::Sqrt(radicand),
            oracle: Arc::new(SqrtOracle::new(radicand)?),
        })
    }

    /// Parses a built-in symbol such as `sqrt2`.
    pub fn from_symbol(symbol: &str) -> Result<Tag> {
        symbol
            .strip_prefix("sqrt")
            .and_then(|r| r.parse::<u64>().ok())
            .ok_or_else(|| Error::Invalid(format!("unknown tag symbol {symbol:?}; expected sqrtN")))
            .and_then(Tag::sqrt)
    }

    pub fn custom(symbol: impl Into<String>, oracle: Arc<dyn EnclosureOracle>) -> Tag {
        Tag { symbol: symbol.into(), kind: TagKind::Custom, oracle }
    }

    pub fn enclose(&self, width: &Q) -> Result<Interval> {
        self.oracle.enclose(width)
    }
}

#[derive(Debug, Clone, Default)]
pub struct NumberContext {
    tags: Vec<Tag>,
    refinement_cap: u32,
}

impl NumberContext {
    pub fn new(tags: Vec<Tag>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for t in &tags {
            if !seen.insert(t.symbol.clone()) {
                return Err(Error::DuplicateTag(t.symbol.clone()));
            }
        }
        Ok(NumberContext { tags, refinement_cap: DEFAULT_REFINEMENT_CAP })
    }

    /// Context with no tags: every value is rational.
    pub fn rational() -> Self {
        NumberContext { tags: Vec::new(), refinement_cap: DEFAULT_REFINEMENT_CAP }
    }

    pub fn with_sqrts(radicands: &[u64]) -> Result<Self> {
        Self::new(radicands.iter().map(|&r| Tag::sqrt(r)).collect::<Result<_>>()?)
    }

    pub fn with_refinement_cap(mut self, cap: u32) -> Self {
        self.refinement_cap = cap;
        self
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn tag(&self, symbol: &str) -> Option<&Tag> {
        self.tags.iter().find(|t| t.symbol == symbol)
    }

    /// The tag itself as a value (`0 + 1·tag`).
    pub fn tag_value(&self, symbol: &str) -> Result<GroupReal> {
        self.tag(symbol).ok_or_else(|| Error::UnknownTag(symbol.into()))?;
        Ok(GroupReal::tag(symbol))
    }

    pub fn check_known(&self, x: &GroupReal) -> Result<()> {
        for s in x.coeffs.keys() {
            if self.tag(s).is_none() {
                return Err(Error::UnknownTag(s.clone()));
            }
        }
        Ok(())
    }

    pub fn check_known_vec(&self, v: &GroupVector) -> Result<()> {
        v.0.iter().try_for_each(|x| self.check_known(x))
    }

    /// Rational interval of length `<= width` containing `x`; a point
    /// interval when `x` is rational.
    pub fn enclose(&self, x: &GroupReal, width: &Q) -> Result<Interval> {
        if !width.is_positive() {
            return Err(Error::Invalid("enclosure width must be positive".into()));
        }
        let mut acc = Interval::point(x.rat.clone());
        if x.coeffs.is_empty() {
            return Ok(acc);
        }
        let total: Q = x.coeffs.values().map(|c| c.abs()).sum();
        let per_tag = width / total;
        for (sym, c) in &x.coeffs {
            let tag = self.tag(sym).ok_or_else(|| Error::UnknownTag(sym.clone()))?;
            let iv = tag.enclose(&per_tag)?;
            acc = acc.add(&iv.scale(c));
        }
        Ok(acc)
    }

    /// Sign of `x` as an ordering against zero.
    pub fn sign(&self, x: &GroupReal) -> Result<Ordering> {
        if x.coeffs.is_empty() {
            return Ok(x.rat.cmp(&Q::zero()));
        }
        self.check_known(x)?;
        let mut width = Q::one();
        for _ in 0..=self.refinement_cap {
            let iv = self.enclose(x, &width)?;
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            width /= Q::from_integer(2.into());
        }
        Err(Error::RefinementCap(self.refinement_cap))
    }

    pub fn compare(&self, x: &GroupReal, y: &GroupReal) -> Result<Ordering> {
        self.sign(&(x - y))
    }

    pub fn floor(&self, x: &GroupReal) -> Result<BigInt> {
        if x.coeffs.is_empty() {
            return Ok(x.rat.floor().to_integer());
        }
        let iv = self.enclose(x, &Q::new(1.into(), 4.into()))?;
        let mut guess = iv.lo.floor().to_integer();
        // The value is irrational, so it never equals an integer.
        while self.sign(&(x - &GroupReal::from(Q::from_integer(&guess + 1))))? != Ordering::Less {
            guess += 1;
        }
        Ok(guess)
    }

    /// `x - floor(x)`.
    pub fn frac(&self, x: &GroupReal) -> Result<GroupReal> {
        let f = self.floor(x)?;
        Ok(x - &GroupReal::from(Q::from_integer(f)))
    }

    /// `|x|` as an exact value.
    pub fn abs(&self, x: &GroupReal) -> Result<GroupReal> {
        Ok(if self.sign(x)? == Ordering::Less { -x.clone() } else { x.clone() })
    }
}

/// `rat + Σ coeffs[t] · t` with no zero coefficient stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupReal {
    pub rat: Q,
    coeffs: BTreeMap<String, Q>,
}

impl GroupReal {
    pub fn zero() -> Self {
        GroupReal::default()
    }

    pub fn tag(symbol: &str) -> Self {
        GroupReal::from_parts(Q::zero(), [(symbol.to_string(), Q::one())])
    }

    pub fn from_parts(rat: Q, coeffs: impl IntoIterator<Item = (String, Q)>) -> Self {
        let mut out = GroupReal { rat, coeffs: BTreeMap::new() };
        for (s, c) in coeffs {
            out.add_coeff(&s, &c);
        }
        out
    }

    fn add_coeff(&mut self, sym: &str, c: &Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(sym.to_string()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(sym);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, sym: &str) -> Q {
        self.coeffs.get(sym).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.is_empty() && self.rat.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.rat.is_zero()
    }

    pub fn scale(&self, c: &Q) -> GroupReal {
        if c.is_zero() {
            return GroupReal::zero();
        }
        GroupReal {
            rat: &self.rat * c,
            coeffs: self.coeffs.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    /// Canonical form holds: no stored zero coefficient.
    pub fn is_canonical(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_zero())
    }
}

impl From<Q> for GroupReal {
    fn from(rat: Q) -> Self {
        GroupReal { rat, coeffs: BTreeMap::new() }
    }
}

impl<'a> Add<&'a GroupReal> for &'a GroupReal {
    type Output = GroupReal;
    fn add(self, rhs: &GroupReal) -> GroupReal {
        let mut out = self.clone();
        out.rat += &rhs.rat;
        for (s, c) in &rhs.coeffs {
            out.add_coeff(s, c);
        }
        out
    }
}

impl Add for GroupReal {
    type Output = GroupReal;
    fn add(self, rhs: GroupReal) -> GroupReal {
        &self + &rhs
    }
}

impl<'a> Sub<&'a GroupReal> for &'a GroupReal {
    type Output = GroupReal;
    fn sub(self, rhs: &GroupReal) -> GroupReal {
        self + &(-rhs.clone())
    }
}

impl Sub for GroupReal {
    type Output = GroupReal;
    fn sub(self, rhs: GroupReal) -> GroupReal {
        &self - &rhs
    }
}

impl Neg for GroupReal {
    type Output = GroupReal;
    fn neg(self) -> GroupReal {
        GroupReal {
            rat: -self.rat,
            coeffs: self.coeffs.into_iter().map(|(s, c)| (s, -c)).collect(),
        }
    }
}

impl fmt::Display for GroupReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "{}", fmt_q(&self.rat));
        }
        let mut first = true;
        if !self.rat.is_zero() {
            write!(f, "{}", fmt_q(&self.rat))?;
            first = false;
        }
        for (s, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "({})*{s}", fmt_q(c))?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A point of R^n with `GroupReal` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupVector(pub Vec<GroupReal>);

impl GroupVector {
    pub fn rational(xs: &[Q]) -> Self {
        GroupVector(xs.iter().cloned().map(GroupReal::from).collect())
    }

    pub fn zeros(n: usize) -> Self {
        GroupVector(vec![GroupReal::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[GroupReal] {
        &self.0
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().all(GroupReal::is_rational)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(GroupReal::is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GroupReal::is_zero)
    }

    pub fn rational_parts(&self) -> Vec<Q> {
        self.0.iter().map(|x| x.rat.clone()).collect()
    }

    pub fn scale(&self, c: &Q) -> GroupVector {
        GroupVector(self.0.iter().map(|x| x.scale(c)).collect())
    }

    pub fn add(&self, other: &GroupVector) -> Result<GroupVector> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: other.dim() });
        }
        Ok(GroupVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &GroupVector) -> Result<GroupVector> {
        self.add(&other.scale(&-Q::one()))
    }

    /// `(coordinate, tag)` keys carrying a nonzero coefficient.
    pub fn tag_keys(&self) -> BTreeSet<(usize, String)> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.coeffs.keys().map(move |s| (i, s.clone())))
            .collect()
    }

    pub fn tag_coeff(&self, key: &(usize, String)) -> Q {
        self.0[key.0].coeff(&key.1)
    }
}

impl fmt::Display for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Sorted union of `(coordinate, tag)` keys over several vectors.
pub fn tag_keys<'a>(vs: impl IntoIterator<Item = &'a GroupVector>) -> Vec<(usize, String)> {
    let mut keys = BTreeSet::new();
    for v in vs {
        keys.extend(v.tag_keys());
    }
    keys.into_iter().collect()
}

/// Basis of the rational dependencies `λ` with `Σ λ_i vs_i` free of tags,
/// i.e. the kernel of the tag-coefficient matrix whose columns are `vs`.
pub fn qlin_kernel(vs: &[GroupVector]) -> Vec<Vec<Q>> {
    let keys = tag_keys(vs);
    let rows: Vec<Vec<Q>> = keys
        .iter()
        .map(|k| vs.iter().map(|v| v.tag_coeff(k)).collect())
        .collect();
    linalg::nullspace(&rows, vs.len())
}
