//! JSON encodings. Rationals are `"p/q"` strings, points are `"p/q|b"`
//! (double arrow) or `"p/q"` (Sorgenfrey), intervals are two-element
//! arrays. Decoders accept what the encoders emit, plus bare arrays where
//! the space can be read off the point syntax.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::homeo::{AffinePiece, ConvergentSeq, GeometricTail, PiecewiseHomeo, Rule, SeqMapReport, Span, SpanSet, Tail};
use crate::hyperspace::{canonicalize, ClosedUnion, DeltaTuple, FiniteSet};
use crate::order::{parse_rational, ClosedInterval, OpenPiece, OpenSetSpec, Point, Rational, SpaceTag};
use crate::vietoris::{BoxRule, BoxSpec, SaturationReport};

pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

pub fn to_string<T: Json>(x: &T) -> String {
    x.to_json().to_string()
}

pub fn parse_value(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_str<T: Json>(s: &str) -> Result<T> {
    T::from_json(&parse_value(s)?)
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn text(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| perr(format!("expected a string, got {v}")))
}

fn list(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("expected an array, got {v}")))
}

fn tag_of(v: &Value) -> Result<Option<SpaceTag>> {
    match v.get("tag") {
        None | Some(Value::Null) => Ok(None),
        Some(t) => Ok(Some(text(t)?.parse()?)),
    }
}

/// Elements of an object's `key` array, or of a bare array.
fn items<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    match v {
        Value::Object(_) => list(field(v, key)?),
        _ => list(v),
    }
}

pub fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        _ => Err(perr(format!("expected a rational string, got {v}"))),
    }
}

fn rat_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn point(v: &Value, tag: Option<SpaceTag>) -> Result<Point> {
    Point::parse(text(v)?, tag)
}

fn points(v: &[Value], tag: Option<SpaceTag>) -> Result<Vec<Point>> {
    let mut tag = tag;
    v.iter()
        .map(|x| {
            let p = point(x, tag)?;
            tag = Some(p.tag());
            Ok(p)
        })
        .collect()
}

fn points_json(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(|p| Value::String(p.to_string())).collect())
}

impl Json for Point {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Point> {
        point(v, None)
    }
}

fn interval(v: &Value, tag: Option<SpaceTag>) -> Result<ClosedInterval> {
    let a = list(v)?;
    if a.len() != 2 {
        return Err(perr(format!("interval needs two endpoints, got {v}")));
    }
    let lo = point(&a[0], tag)?;
    let hi = point(&a[1], Some(lo.tag()))?;
    ClosedInterval::new(lo, hi)
}

fn interval_json(i: &ClosedInterval) -> Value {
    json!([i.lo().to_string(), i.hi().to_string()])
}

impl Json for ClosedInterval {
    fn to_json(&self) -> Value {
        interval_json(self)
    }

    fn from_json(v: &Value) -> Result<ClosedInterval> {
        interval(v, None)
    }
}

impl Json for ClosedUnion {
    fn to_json(&self) -> Value {
        json!({
            "tag": self.tag(),
            "components": self.components().iter().map(interval_json).collect::<Vec<_>>(),
        })
    }

    /// Any list of intervals; the result is canonicalized.
    fn from_json(v: &Value) -> Result<ClosedUnion> {
        let tag = tag_of(v)?;
        let raw = items(v, "components")?.iter().map(|i| interval(i, tag)).collect::<Result<Vec<_>>>()?;
        canonicalize(&raw)
    }
}

impl Json for DeltaTuple {
    fn to_json(&self) -> Value {
        json!({ "tag": self.tag(), "entries": points_json(self.entries()) })
    }

    fn from_json(v: &Value) -> Result<DeltaTuple> {
        let pts = points(items(v, "entries")?, tag_of(v)?)?;
        DeltaTuple::new(pts)
    }
}

impl Json for FiniteSet {
    fn to_json(&self) -> Value {
        json!({ "tag": self.tag(), "elements": points_json(self.elements()) })
    }

    fn from_json(v: &Value) -> Result<FiniteSet> {
        let pts = points(items(v, "elements")?, tag_of(v)?)?;
        FiniteSet::new(pts)
    }
}

impl Json for OpenPiece {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<OpenPiece> {
        OpenPiece::parse(text(v)?, None)
    }
}

impl Json for OpenSetSpec {
    fn to_json(&self) -> Value {
        json!({
            "tag": self.tag(),
            "pieces": self.pieces().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }

    /// An object, a bare array of pieces, or a single piece string.
    fn from_json(v: &Value) -> Result<OpenSetSpec> {
        let tag = tag_of(v)?;
        let raw: Vec<&Value> = match v {
            Value::String(_) => vec![v],
            _ => items(v, "pieces")?.iter().collect(),
        };
        let pieces = raw.into_iter().map(|p| OpenPiece::parse(text(p)?, tag)).collect::<Result<Vec<_>>>()?;
        let tag = tag.or_else(|| pieces.first().map(OpenPiece::tag)).ok_or(Error::EmptyInput)?;
        OpenSetSpec::new(tag, pieces)
    }
}

fn box_rule_name(r: BoxRule) -> &'static str {
    match r {
        BoxRule::Cover => "cover",
        BoxRule::LeftEnd => "left-end",
        BoxRule::RightEnd => "right-end",
        BoxRule::EndInside => "end-inside",
        BoxRule::EndBeyond => "end-beyond",
    }
}

impl Json for BoxSpec {
    fn to_json(&self) -> Value {
        json!({
            "tag": self.tag,
            "rule": box_rule_name(self.rule),
            "pair": self.pair,
            "factors": self.factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<BoxSpec> {
        let tag = tag_of(v)?.ok_or_else(|| perr("box needs a tag"))?;
        let name = text(field(v, "rule")?)?;
        let rule = [BoxRule::Cover, BoxRule::LeftEnd, BoxRule::RightEnd, BoxRule::EndInside, BoxRule::EndBeyond]
            .into_iter()
            .find(|r| box_rule_name(*r) == name)
            .ok_or_else(|| perr(format!("unknown box rule {name:?}")))?;
        let pair = match v.get("pair") {
            None | Some(Value::Null) => None,
            Some(p) => Some(p.as_u64().ok_or_else(|| perr("pair must be an index"))? as usize),
        };
        let factors = list(field(v, "factors")?)?
            .iter()
            .map(|p| OpenPiece::parse(text(p)?, Some(tag)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoxSpec { tag, factors, rule, pair })
    }
}

impl Json for SaturationReport {
    fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "violations": self.violations,
            "witnesses": self.witnesses.iter().map(|(x, y)| json!([x.to_json(), y.to_json()])).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<SaturationReport> {
        let count = |k: &str| -> Result<usize> {
            Ok(field(v, k)?.as_u64().ok_or_else(|| perr(format!("{k} must be a count")))? as usize)
        };
        let witnesses = list(field(v, "witnesses")?)?
            .iter()
            .map(|w| {
                let pair = list(w)?;
                if pair.len() != 2 {
                    return Err(perr("witness must be a pair"));
                }
                Ok((DeltaTuple::from_json(&pair[0])?, DeltaTuple::from_json(&pair[1])?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SaturationReport { trials: count("trials")?, violations: count("violations")?, witnesses })
    }
}

impl Json for ConvergentSeq {
    fn to_json(&self) -> Value {
        let t = self.tail();
        json!({
            "tag": self.tag(),
            "limit": self.limit().to_string(),
            "exceptional": points_json(self.exceptional()),
            "tail": {
                "family": "geometric",
                "base": rat_json(&t.base),
                "scale": rat_json(&t.scale),
                "ratio": rat_json(&t.ratio),
                "side": t.side,
            },
        })
    }

    fn from_json(v: &Value) -> Result<ConvergentSeq> {
        let tag = tag_of(v)?;
        let limit = point(field(v, "limit")?, tag)?;
        let exceptional = match v.get("exceptional") {
            None | Some(Value::Null) => Vec::new(),
            Some(e) => points(list(e)?, Some(limit.tag()))?,
        };
        let t = field(v, "tail")?;
        if let Some(family) = t.get("family") {
            if text(family)? != "geometric" {
                return Err(perr(format!("unknown tail family {family}")));
            }
        }
        let side = match t.get("side") {
            None => 1,
            Some(s) => s.as_u64().filter(|b| *b <= 1).ok_or_else(|| perr("side must be 0 or 1"))? as u8,
        };
        let base = match t.get("base") {
            None => limit.coord().clone(),
            Some(b) => rational(b)?,
        };
        let tail = GeometricTail { base, scale: rational(field(t, "scale")?)?, ratio: rational(field(t, "ratio")?)?, side };
        ConvergentSeq::new(limit, exceptional, tail)
    }
}

fn span_json(tag: SpaceTag, s: &Span) -> Value {
    match tag {
        SpaceTag::Arrow => json!([format!("{}|1", s.lo()), format!("{}|0", s.hi())]),
        SpaceTag::Sorgenfrey => Value::String(format!("[{},{})", s.lo(), s.hi())),
    }
}

fn span(tag: SpaceTag, v: &Value) -> Result<Span> {
    match tag {
        SpaceTag::Arrow => Span::from_interval(&interval(v, Some(tag))?),
        SpaceTag::Sorgenfrey => {
            let s = text(v)?.trim();
            let inner = s
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| perr(format!("bad Sorgenfrey span {s:?}")))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| perr(format!("bad Sorgenfrey span {s:?}")))?;
            Span::new(parse_rational(a)?, parse_rational(b)?)
        }
    }
}

fn span_set_json(tag: SpaceTag, s: &SpanSet) -> Value {
    Value::Array(s.spans().iter().map(|x| span_json(tag, x)).collect())
}

fn span_set(tag: SpaceTag, v: &Value) -> Result<SpanSet> {
    Ok(SpanSet::from_spans(list(v)?.iter().map(|x| span(tag, x)).collect::<Result<Vec<_>>>()?))
}

fn piece_json(tag: SpaceTag, p: &AffinePiece) -> Value {
    json!({ "source": span_json(tag, p.source()), "slope": rat_json(p.slope()), "offset": rat_json(p.offset()) })
}

fn piece(tag: SpaceTag, v: &Value) -> Result<AffinePiece> {
    AffinePiece::new(span(tag, field(v, "source")?)?, rational(field(v, "slope")?)?, rational(field(v, "offset")?)?)
}

fn family_json(tag: SpaceTag, t: &Tail) -> Value {
    match t.rule() {
        Rule::ToCanonical(seq) => json!({ "rule": "to-canonical", "sequence": seq.to_json() }),
        Rule::Inverse(x) => json!({ "rule": "inverse", "of": family_json(tag, x) }),
        Rule::Skip(n, x) => json!({ "rule": "skip", "blocks": n, "of": family_json(tag, x) }),
        Rule::Pull(p, x) => json!({ "rule": "pull", "piece": piece_json(tag, p), "of": family_json(tag, x) }),
        Rule::Push(x, p) => json!({ "rule": "push", "of": family_json(tag, x), "piece": piece_json(tag, p) }),
        Rule::Then(a, b) => json!({ "rule": "then", "first": family_json(tag, a), "second": family_json(tag, b) }),
    }
}

fn family(tag: SpaceTag, v: &Value) -> Result<Tail> {
    let of = || family(tag, field(v, "of")?);
    match text(field(v, "rule")?)? {
        "to-canonical" => {
            let seq = ConvergentSeq::from_json(field(v, "sequence")?)?;
            crate::order::check_tag(tag, seq.tag())?;
            Tail::to_canonical(seq)
        }
        "inverse" => Ok(of()?.inverse()),
        "skip" => {
            let n = field(v, "blocks")?.as_u64().ok_or_else(|| perr("blocks must be a count"))? as usize;
            if n > crate::homeo::MAX_BLOCKS {
                return Err(perr(format!("cannot skip {n} blocks")));
            }
            Ok(of()?.skip(n))
        }
        "pull" => Tail::pull(&piece(tag, field(v, "piece")?)?, &of()?),
        "push" => Tail::push(&of()?, &piece(tag, field(v, "piece")?)?),
        "then" => Tail::then(&family(tag, field(v, "first")?)?, &family(tag, field(v, "second")?)?),
        other => Err(perr(format!("unknown tail rule {other:?}"))),
    }
}

fn tail_json(tag: SpaceTag, t: &Tail) -> Value {
    json!({
        "limit": t.limit().to_string(),
        "image_limit": t.image_limit().to_string(),
        "region": span_set_json(tag, t.region()),
        "image_region": span_set_json(tag, t.image_region()),
        "cut_rule": "successive-maxima",
        "family": family_json(tag, t),
    })
}

/// Rebuilds a tail from its family; the descriptive fields, when present,
/// must agree with the rebuilt value.
fn tail(tag: SpaceTag, v: &Value) -> Result<Tail> {
    let t = family(tag, field(v, "family")?)?;
    if let Some(rule) = v.get("cut_rule") {
        if text(rule)? != "successive-maxima" {
            return Err(perr(format!("unknown cut rule {rule}")));
        }
    }
    if let Some(l) = v.get("limit") {
        if point(l, Some(tag))? != t.limit() {
            return Err(perr("tail limit disagrees with its family"));
        }
    }
    if let Some(l) = v.get("image_limit") {
        if point(l, Some(tag))? != t.image_limit() {
            return Err(perr("tail image limit disagrees with its family"));
        }
    }
    if let Some(r) = v.get("region") {
        if span_set(tag, r)? != *t.region() {
            return Err(perr("tail region disagrees with its family"));
        }
    }
    if let Some(r) = v.get("image_region") {
        if span_set(tag, r)? != *t.image_region() {
            return Err(perr("tail image region disagrees with its family"));
        }
    }
    Ok(t)
}

impl Json for PiecewiseHomeo {
    /// `tail` is `null`, one tail object, or an array when there are several.
    fn to_json(&self) -> Value {
        let tag = self.tag();
        let tails: Vec<Value> = self.tails().iter().map(|t| tail_json(tag, t)).collect();
        let tail = match tails.len() {
            0 => Value::Null,
            1 => tails.into_iter().next().expect("one tail"),
            _ => Value::Array(tails),
        };
        json!({
            "tag": tag,
            "pieces": self.pieces().iter().map(|p| piece_json(tag, p)).collect::<Vec<_>>(),
            "tail": tail,
        })
    }

    fn from_json(v: &Value) -> Result<PiecewiseHomeo> {
        let tag = tag_of(v)?.ok_or_else(|| perr("homeomorphism needs a tag"))?;
        let pieces = list(field(v, "pieces")?)?.iter().map(|p| piece(tag, p)).collect::<Result<Vec<_>>>()?;
        let tails = match v.get("tail") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(ts)) => ts.iter().map(|t| tail(tag, t)).collect::<Result<Vec<_>>>()?,
            Some(t) => vec![tail(tag, t)?],
        };
        PiecewiseHomeo::new(tag, pieces, tails)
    }
}

impl Json for SeqMapReport {
    fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "mapped": self.mapped,
            "limit_ok": self.limit_ok,
            "misses": points_json(&self.misses),
        })
    }

    fn from_json(v: &Value) -> Result<SeqMapReport> {
        let count = |k: &str| -> Result<usize> {
            Ok(field(v, k)?.as_u64().ok_or_else(|| perr(format!("{k} must be a count")))? as usize)
        };
        let limit_ok = field(v, "limit_ok")?.as_bool().ok_or_else(|| perr("limit_ok must be a boolean"))?;
        let misses = points(list(field(v, "misses")?)?, None)?;
        Ok(SeqMapReport { checked: count("checked")?, mapped: count("mapped")?, limit_ok, misses })
    }
}

/// `{"key": value}` as a one-field object.
pub fn object(pairs: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert((*k).to_string(), v.clone());
    }
    Value::Object(m)
}
