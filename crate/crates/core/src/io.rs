//! JSON and text formats. Every rational is a `"p/q"` string.
//!
//! A value is either a rational string or `{"rat": "p/q", "tags": {"sqrt2": "p/q"}}`.
//! Files that mention tags declare the context once:
//! `{"tags": [{"symbol": "sqrt2", "kind": "sqrt", "of": 2}], ...}`.

use std::collections::BTreeMap;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gjfun::{AdditiveFunction, PwlPeriodic, ShiftedFunction};
use crate::lift::LiftData;
use crate::model::{MixedInstance, MixedSolution, PureInstance};
use crate::numctx::{GroupReal, GroupVector, NumberContext, Tag, TagKind};
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Text(String),
    Group {
        rat: String,
        #[serde(default)]
        tags: BTreeMap<String, String>,
    },
}

impl ValueJson {
    pub fn from_value(x: &GroupReal) -> Self {
        if x.is_rational() {
            return ValueJson::Text(fmt_q(&x.rat));
        }
        ValueJson::Group { rat: fmt_q(&x.rat), tags: x.coeffs().iter().map(|(t, c)| (t.clone(), fmt_q(c))).collect() }
    }

    pub fn to_value(&self) -> Result<GroupReal> {
        match self {
            ValueJson::Text(s) => parse_group_real(s),
            ValueJson::Group { rat, tags } => {
                let coeffs = tags.iter().map(|(t, c)| Ok((t.clone(), parse_q(c)?))).collect::<Result<Vec<_>>>()?;
                Ok(GroupReal::from_parts(parse_q(rat)?, coeffs))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagJson {
    pub symbol: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<u64>,
}

pub fn context_to_json(ctx: &NumberContext) -> Vec<TagJson> {
    ctx.tags()
        .iter()
        .map(|t| match t.kind {
            TagKind::Sqrt(r) => TagJson { symbol: t.symbol.clone(), kind: "sqrt".into(), of: Some(r) },
            TagKind::Custom => TagJson { symbol: t.symbol.clone(), kind: "custom".into(), of: None },
        })
        .collect()
}

pub fn context_from_json(tags: &[TagJson]) -> Result<NumberContext> {
    let tags = tags
        .iter()
        .map(|t| match (t.kind.as_str(), t.of) {
            ("sqrt", Some(r)) => {
                let tag = Tag::sqrt(r)?;
                if tag.symbol != t.symbol {
                    return Err(Error::Parse(format!("sqrt tag of {r} must be named {}", tag.symbol)));
                }
                Ok(tag)
            }
            ("sqrt", None) => Err(Error::Parse(format!("tag {} needs \"of\"", t.symbol))),
            (kind, _) => Err(Error::Parse(format!("tag kind {kind:?} cannot be read from a file"))),
        })
        .collect::<Result<Vec<_>>>()?;
    NumberContext::new(tags)
}

fn vec_to_json(v: &GroupVector) -> Vec<ValueJson> {
    v.0.iter().map(ValueJson::from_value).collect()
}

fn vec_from_json(v: &[ValueJson]) -> Result<GroupVector> {
    Ok(GroupVector(v.iter().map(ValueJson::to_value).collect::<Result<_>>()?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<TagJson>,
    pub n: usize,
    pub b: Vec<ValueJson>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<ValueJson>>,
    #[serde(rename = "R", default, skip_serializing_if = "Vec::is_empty")]
    pub r: Vec<Vec<ValueJson>>,
}

impl InstanceJson {
    pub fn from_instance(inst: &MixedInstance) -> Self {
        InstanceJson {
            tags: context_to_json(inst.ctx()),
            n: inst.n(),
            b: vec_to_json(&inst.pure.b),
            p: inst.pure.p.iter().map(vec_to_json).collect(),
            r: inst.r.iter().map(vec_to_json).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<MixedInstance> {
        let ctx = context_from_json(&self.tags)?;
        let b = vec_from_json(&self.b)?;
        if b.dim() != self.n {
            return Err(Error::Dimension { expected: self.n, got: b.dim() });
        }
        let p = self.p.iter().map(|v| vec_from_json(v)).collect::<Result<Vec<_>>>()?;
        let r = self.r.iter().map(|v| vec_from_json(v)).collect::<Result<Vec<_>>>()?;
        MixedInstance::new(ctx, b, p, r)
    }
}

pub fn parse_instance(text: &str) -> Result<MixedInstance> {
    let j: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_instance()
}

pub fn parse_pure_instance(text: &str) -> Result<PureInstance> {
    let inst = parse_instance(text)?;
    if !inst.r.is_empty() {
        return Err(Error::Invalid("expected a pure instance without R".into()));
    }
    Ok(inst.pure)
}

pub fn instance_to_json(inst: &MixedInstance) -> String {
    serde_json::to_string_pretty(&InstanceJson::from_instance(inst)).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<TagJson>,
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shift: BTreeMap<String, String>,
}

impl FunctionJson {
    pub fn from_function(f: &ShiftedFunction, ctx: &NumberContext) -> Self {
        FunctionJson {
            tags: context_to_json(ctx),
            breakpoints: f.base.breakpoints().iter().map(fmt_q).collect(),
            values: f.base.values().iter().map(fmt_q).collect(),
            shift: f.shift.coeffs().iter().map(|(t, c)| (t.clone(), fmt_q(c))).collect(),
        }
    }

    /// The function and its context. Without a `tags` declaration the
    /// context is inferred from the shift symbols.
    pub fn to_function(&self) -> Result<(ShiftedFunction, NumberContext)> {
        let parse = |v: &[String]| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>();
        let base = PwlPeriodic::new(parse(&self.breakpoints)?, parse(&self.values)?)?;
        let ctx = if self.tags.is_empty() {
            NumberContext::new(self.shift.keys().map(|s| Tag::from_symbol(s)).collect::<Result<_>>()?)?
        } else {
            context_from_json(&self.tags)?
        };
        let shift = self.shift.iter().map(|(t, c)| Ok((t.clone(), parse_q(c)?))).collect::<Result<Vec<_>>>()?;
        for (t, _) in &shift {
            if ctx.tag(t).is_none() {
                return Err(Error::UnknownTag(t.clone()));
            }
        }
        // Nonnegativity of the base is only required for the additive
        // decomposition; plain functions may be anything continuous.
        let f = ShiftedFunction { base, shift: AdditiveFunction::new(shift) };
        Ok((f, ctx))
    }
}

pub fn parse_function(text: &str) -> Result<(ShiftedFunction, NumberContext)> {
    let j: FunctionJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_function()
}

pub fn function_to_json(f: &ShiftedFunction, ctx: &NumberContext) -> String {
    serde_json::to_string_pretty(&FunctionJson::from_function(f, ctx)).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDataJson {
    #[serde(flatten)]
    pub instance: InstanceJson,
    pub h: Vec<String>,
    pub d: Vec<String>,
}

impl LiftDataJson {
    pub fn from_data(ld: &LiftData) -> Self {
        LiftDataJson {
            instance: InstanceJson::from_instance(&ld.inst),
            h: ld.h.iter().map(fmt_q).collect(),
            d: ld.d.iter().map(fmt_q).collect(),
        }
    }

    pub fn to_data(&self) -> Result<LiftData> {
        let parse = |v: &[String]| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>();
        LiftData::new(self.instance.to_instance()?, parse(&self.h)?, parse(&self.d)?)
    }
}

pub fn parse_lift_data(text: &str) -> Result<LiftData> {
    let j: LiftDataJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_data()
}

/// Solution JSON: `{"s": {"0": v}, "y": {"1": 3}}`, indices into `R` and `P`;
/// missing entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SolutionJson {
    #[serde(default)]
    pub s: BTreeMap<usize, ValueJson>,
    #[serde(default)]
    pub y: BTreeMap<usize, u64>,
}

impl SolutionJson {
    pub fn from_solution(sol: &MixedSolution) -> Self {
        SolutionJson {
            s: sol.s.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, ValueJson::from_value(v))).collect(),
            y: sol.y.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect(),
        }
    }

    pub fn to_solution(&self, inst: &MixedInstance) -> Result<MixedSolution> {
        let (nr, np) = (inst.r.len(), inst.pure.p.len());
        let mut s = vec![GroupReal::zero(); nr];
        let mut y = vec![0; np];
        for (&i, v) in &self.s {
            *s.get_mut(i).ok_or(Error::Dimension { expected: nr, got: i + 1 })? = v.to_value()?;
        }
        for (&i, &v) in &self.y {
            *y.get_mut(i).ok_or(Error::Dimension { expected: np, got: i + 1 })? = v;
        }
        Ok(MixedSolution { s, y })
    }
}

/// Parses `"1/2"`, `"sqrt2"`, `"1/2 - 3*sqrt2"`, `"1/2 + (-2)*sqrt2"` and
/// the output of `GroupReal`'s `Display`.
pub fn parse_group_real(text: &str) -> Result<GroupReal> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a value: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    let bytes = t.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 && !matches!(bytes[i - 1], b'*' | b'/' | b'(') => {
                terms.push(&t[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);
    let mut rat = Q::zero();
    let mut coeffs: BTreeMap<String, Q> = BTreeMap::new();
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'+') => (false, &term[1..]),
            Some(b'-') if term[1..].starts_with(|c: char| c.is_alphabetic() || c == '(') => (true, &term[1..]),
            _ => (false, term),
        };
        let sign = |x: Q| if neg { -x } else { x };
        let unparen = |s: &str| s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(s).to_string();
        if let Some((c, sym)) = body.split_once('*') {
            if !sym.starts_with(char::is_alphabetic) {
                return Err(bad());
            }
            *coeffs.entry(sym.to_string()).or_default() += sign(parse_q(&unparen(c))?);
        } else if body.starts_with(char::is_alphabetic) {
            *coeffs.entry(body.to_string()).or_default() += sign(Q::from_integer(1.into()));
        } else {
            rat += sign(parse_q(&unparen(body))?);
        }
    }
    Ok(GroupReal::from_parts(rat, coeffs))
}

/// Parses `"[1/5, sqrt2]"` or `"1/5,sqrt2"` into a vector.
pub fn parse_point(text: &str) -> Result<GroupVector> {
    let t = text.trim();
    let t = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(GroupVector(Vec::new()));
    }
    Ok(GroupVector(t.split(',').map(parse_group_real).collect::<Result<_>>()?))
}

pub fn parse_rational_point(text: &str) -> Result<Vec<Q>> {
    parse_point(text)?
        .0
        .into_iter()
        .map(|x| x.as_rational().cloned().ok_or_else(|| Error::Parse(format!("{x} is not rational"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn value_text_round_trip() {
        let x = GroupReal::from_parts(q(1, 2), [("sqrt2".into(), qi(-2)), ("sqrt3".into(), qi(1))]);
        assert_eq!(parse_group_real(&x.to_string()).unwrap(), x);
        assert_eq!(parse_group_real("1/2 - 2*sqrt2 + sqrt3").unwrap(), x);
        assert_eq!(parse_group_real("-sqrt2").unwrap(), GroupReal::tag("sqrt2").scale(&qi(-1)));
        assert_eq!(parse_group_real("-3/4").unwrap(), GroupReal::from(q(-3, 4)));
        assert!(parse_group_real("").is_err());
        assert!(parse_group_real("2*3").is_err());
        assert_eq!(parse_rational_point("[1/5, 2]").unwrap(), vec![q(1, 5), qi(2)]);
    }

    #[test]
    fn instance_round_trip() {
        let text = r#"{"tags":[{"symbol":"sqrt2","kind":"sqrt","of":2}],"n":1,"b":["1/2"],
            "P":[["1/2"],[{"rat":"0","tags":{"sqrt2":"1"}}],["1 - sqrt2"]],"R":[["-1"]]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.pure.p[2].0[0], GroupReal::from_parts(qi(1), [("sqrt2".into(), qi(-1))]));
        let back = parse_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(back.pure.p, inst.pure.p);
        assert_eq!(back.r, inst.r);
        assert_eq!(instance_to_json(&back), instance_to_json(&inst));
        assert!(matches!(parse_instance(r#"{"n":1,"b":["1"],"P":[["1/2"]]}"#), Err(Error::IntegralRhs)));
        assert!(matches!(parse_instance(r#"{"n":1,"b":["sqrt5"],"P":[]}"#), Err(Error::UnknownTag(_))));
    }

    #[test]
    fn function_round_trip() {
        let text = r#"{"breakpoints":["0","2/5"],"values":["0","1"],"shift":{"sqrt2":"1/3"}}"#;
        let (f, ctx) = parse_function(text).unwrap();
        assert_eq!(f.shift.coeff("sqrt2"), q(1, 3));
        let (g, _) = parse_function(&function_to_json(&f, &ctx)).unwrap();
        assert_eq!(f, g);
    }
}
