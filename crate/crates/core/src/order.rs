//! Points of the double arrow and the Sorgenfrey line, their order, and the
//! interval and open-set algebra built on it.
//!
//! Both spaces share one internal key order: a point is a pair
//! `(coord, side)` compared lexicographically. Double arrow points carry
//! their side bit, Sorgenfrey points always sit on side 1. With that
//! embedding a Sorgenfrey point `a` behaves exactly like `⟨a,1⟩`, and the
//! basic set `[c,d[` is the side-1 trace of the clopen arrow interval
//! `[⟨c,1⟩,⟨d,0⟩]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(r)
}

/// Renders `p/q` in lowest terms, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Same as `a.cmp(b)`, without big-integer work when both sides fit in
/// machine words.
pub(crate) fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    match (a.numer().to_i64(), a.denom().to_i64(), b.numer().to_i64(), b.denom().to_i64()) {
        // denominators of reduced ratios are positive
        (Some(an), Some(ad), Some(bn), Some(bd)) => (i128::from(an) * i128::from(bd)).cmp(&(i128::from(bn) * i128::from(ad))),
        _ => a.cmp(b),
    }
}

/// `0 < c ≤ 1` for side 0, `0 ≤ c < 1` for side 1.
fn unit_side_ok(c: &Rational, side: u8) -> bool {
    let (n, d) = (c.numer(), c.denom());
    if side == 0 {
        n.is_positive() && n <= d
    } else {
        !n.is_negative() && n < d
    }
}

/// Equality of reduced ratios is equality of their parts.
fn eq_rational(a: &Rational, b: &Rational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

pub(crate) fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / rat(2, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    Arrow,
    Sorgenfrey,
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Arrow => f.write_str("arrow"),
            SpaceTag::Sorgenfrey => f.write_str("sorgenfrey"),
        }
    }
}

impl FromStr for SpaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arrow" | "A" => Ok(SpaceTag::Arrow),
            "sorgenfrey" | "S" => Ok(SpaceTag::Sorgenfrey),
            _ => Err(Error::Parse(format!("unknown space {s:?}"))),
        }
    }
}

pub(crate) fn check_tag(expected: SpaceTag, found: SpaceTag) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::TagMismatch { expected, found })
    }
}

/// Position in the shared lexicographic order. Keys need not be points:
/// `(d,0)` is used as the right end of Sorgenfrey spans.
#[derive(Clone, Debug, Hash)]
pub(crate) struct Key {
    pub coord: Rational,
    pub side: u8,
}

impl Key {
    pub fn new(coord: Rational, side: u8) -> Key {
        Key { coord, side }
    }

    pub fn low(coord: Rational) -> Key {
        Key { coord, side: 1 }
    }

    pub fn high(coord: Rational) -> Key {
        Key { coord, side: 0 }
    }

    /// Immediate successor in key space, `(a,0) ↦ (a,1)`.
    pub fn succ(&self) -> Option<Key> {
        (self.side == 0).then(|| Key::low(self.coord.clone()))
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Key) -> bool {
        self.side == other.side && eq_rational(&self.coord, &other.coord)
    }
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Key) -> Ordering {
        cmp_rational(&self.coord, &other.coord).then(self.side.cmp(&other.side))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Key) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.coord, self.side)
    }
}

/// An exact point of 𝔸 or 𝕊.
#[derive(Clone, Debug, Hash)]
pub struct Point {
    tag: SpaceTag,
    coord: Rational,
    side: u8,
}

impl Point {
    /// `⟨coord, side⟩` of the double arrow: side 0 needs `coord > 0`,
    /// side 1 needs `coord < 1`.
    pub fn arrow(coord: Rational, side: u8) -> Result<Point> {
        let ok = match side {
            0 => unit_side_ok(&coord, 0),
            1 => unit_side_ok(&coord, 1),
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidPoint(format!("{coord}|{side}")));
        }
        Ok(Point { tag: SpaceTag::Arrow, coord, side })
    }

    pub fn sorgenfrey(coord: Rational) -> Result<Point> {
        if !unit_side_ok(&coord, 1) {
            return Err(Error::InvalidPoint(coord.to_string()));
        }
        Ok(Point { tag: SpaceTag::Sorgenfrey, coord, side: 1 })
    }

    /// Shorthand for tests and examples; panics on invalid input.
    pub fn a(n: i64, d: i64, side: u8) -> Point {
        Point::arrow(rat(n, d), side).expect("valid arrow point")
    }

    /// Shorthand for tests and examples; panics on invalid input.
    pub fn s(n: i64, d: i64) -> Point {
        Point::sorgenfrey(rat(n, d)).expect("valid Sorgenfrey point")
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn coord(&self) -> &Rational {
        &self.coord
    }

    /// Side bit; always 1 for Sorgenfrey points.
    pub fn side(&self) -> u8 {
        self.side
    }

    pub fn min(tag: SpaceTag) -> Point {
        Point { tag, coord: Rational::zero(), side: 1 }
    }

    /// `⟨1,0⟩` for the double arrow; 𝕊 = [0,1[ has no maximum.
    pub fn max(tag: SpaceTag) -> Option<Point> {
        match tag {
            SpaceTag::Arrow => Some(Point { tag, coord: Rational::one(), side: 0 }),
            SpaceTag::Sorgenfrey => None,
        }
    }

    pub fn is_min(&self) -> bool {
        self.coord.is_zero() && self.side == 1
    }

    pub fn is_max(&self) -> bool {
        self.tag == SpaceTag::Arrow && self.coord.is_one() && self.side == 0
    }

    pub(crate) fn key(&self) -> Key {
        Key::new(self.coord.clone(), self.side)
    }

    pub(crate) fn from_key(tag: SpaceTag, key: Key) -> Result<Point> {
        match tag {
            SpaceTag::Arrow => Point::arrow(key.coord, key.side),
            SpaceTag::Sorgenfrey if key.side == 1 => Point::sorgenfrey(key.coord),
            SpaceTag::Sorgenfrey => Err(Error::InvalidPoint(format!("{key} is not a Sorgenfrey point"))),
        }
    }

    /// Parses `p/q|b` (double arrow) or `p/q` (Sorgenfrey). When `tag` is
    /// given the syntax must agree with it.
    pub fn parse(s: &str, tag: Option<SpaceTag>) -> Result<Point> {
        let s = s.trim();
        let p = match s.split_once('|') {
            Some((c, b)) => {
                let side = match b.trim() {
                    "0" => 0,
                    "1" => 1,
                    other => return Err(Error::Parse(format!("bad side bit {other:?}"))),
                };
                let c = parse_rational(c)?;
                Point::arrow(c, side).map_err(|e| Error::Parse(e.to_string()))?
            }
            None => Point::sorgenfrey(parse_rational(s)?).map_err(|e| Error::Parse(e.to_string()))?,
        };
        if let Some(t) = tag {
            if t != p.tag {
                return Err(Error::Parse(format!("{s:?} is not a {t} point")));
            }
        }
        Ok(p)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Point) -> bool {
        self.tag == other.tag && self.side == other.side && eq_rational(&self.coord, &other.coord)
    }
}

impl Eq for Point {}

impl Ord for Point {
    fn cmp(&self, other: &Point) -> Ordering {
        self.tag
            .cmp(&other.tag)
            .then_with(|| cmp_rational(&self.coord, &other.coord))
            .then(self.side.cmp(&other.side))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Point) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            SpaceTag::Arrow => write!(f, "{}|{}", self.coord, self.side),
            SpaceTag::Sorgenfrey => write!(f, "{}", self.coord),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Point::parse(s, None)
    }
}

pub fn compare(p: &Point, q: &Point) -> Result<Ordering> {
    check_tag(p.tag, q.tag)?;
    Ok(p.cmp(q))
}

/// `⟨a,1⟩` for `p = ⟨a,0⟩` with `a < 1`; absent everywhere else.
pub fn successor(p: &Point) -> Option<Point> {
    if p.tag == SpaceTag::Arrow && p.side == 0 && !p.coord.is_one() {
        Some(Point { tag: p.tag, coord: p.coord.clone(), side: 1 })
    } else {
        None
    }
}

/// `⟨a,0⟩` for `p = ⟨a,1⟩` with `a > 0`; absent everywhere else.
pub fn predecessor(p: &Point) -> Option<Point> {
    if p.tag == SpaceTag::Arrow && p.side == 1 && !p.coord.is_zero() {
        Some(Point { tag: p.tag, coord: p.coord.clone(), side: 0 })
    } else {
        None
    }
}

/// The order interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedInterval {
    lo: Point,
    hi: Point,
}

pub fn mk_interval(a: &Point, b: &Point) -> Result<ClosedInterval> {
    ClosedInterval::new(a.clone(), b.clone())
}

impl ClosedInterval {
    pub fn new(lo: Point, hi: Point) -> Result<ClosedInterval> {
        check_tag(lo.tag, hi.tag)?;
        if lo > hi {
            return Err(Error::OrderViolation { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn whole(tag: SpaceTag) -> Result<ClosedInterval> {
        let hi = Point::max(tag).ok_or_else(|| Error::Unsupported("𝕊 has no maximum".into()))?;
        ClosedInterval::new(Point::min(tag), hi)
    }

    pub fn singleton(p: Point) -> ClosedInterval {
        ClosedInterval { lo: p.clone(), hi: p }
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn tag(&self) -> SpaceTag {
        self.lo.tag
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.tag == self.tag() && &self.lo <= p && p <= &self.hi
    }

    /// Parses `[lo,hi]`.
    pub fn parse(s: &str, tag: Option<SpaceTag>) -> Result<ClosedInterval> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        let lo = Point::parse(a, tag)?;
        let hi = Point::parse(b, Some(lo.tag))?;
        ClosedInterval::new(lo, hi)
    }
}

impl fmt::Display for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// True iff the arrow interval is clopen, i.e. it starts at a side-1 point
/// and ends at a side-0 point (the global minimum and maximum qualify).
pub fn is_clopen(i: &ClosedInterval) -> Result<bool> {
    if i.tag() != SpaceTag::Arrow {
        return Err(Error::ArrowOnly);
    }
    Ok(i.lo.side == 1 && i.hi.side == 0)
}

/// Lower end of a basic open interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lower {
    Unbounded,
    Open(Point),
    /// Only for 𝕊, whose basic sets are left-closed.
    Closed(Point),
}

/// Upper end of a basic open interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Upper {
    Unbounded,
    Open(Point),
}

/// One basic open interval: `]a,b[`, `]←,b[`, `]a,→[` in 𝔸, `[c,d[`,
/// `[c,→[` in 𝕊, or the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenPiece {
    tag: SpaceTag,
    lower: Lower,
    upper: Upper,
}

impl OpenPiece {
    pub fn new(tag: SpaceTag, lower: Lower, upper: Upper) -> Result<OpenPiece> {
        match (&lower, tag) {
            (Lower::Open(p), SpaceTag::Arrow) | (Lower::Closed(p), SpaceTag::Sorgenfrey) => check_tag(tag, p.tag)?,
            (Lower::Unbounded, _) => {}
            (Lower::Open(_), SpaceTag::Sorgenfrey) => {
                return Err(Error::Parse("Sorgenfrey basic sets are left-closed".into()))
            }
            (Lower::Closed(_), SpaceTag::Arrow) => {
                return Err(Error::Parse("arrow basic sets are open intervals".into()))
            }
        }
        if let Upper::Open(p) = &upper {
            check_tag(tag, p.tag)?;
        }
        let piece = OpenPiece { tag, lower, upper };
        if !piece.convex().is_nonempty(tag) {
            return Err(Error::EmptyPiece(piece.to_string()));
        }
        Ok(piece)
    }

    pub fn whole(tag: SpaceTag) -> OpenPiece {
        OpenPiece { tag, lower: Lower::Unbounded, upper: Upper::Unbounded }
    }

    /// `]a,b[` in 𝔸.
    pub fn between(a: Point, b: Point) -> Result<OpenPiece> {
        OpenPiece::new(a.tag, Lower::Open(a), Upper::Open(b))
    }

    /// `]←,b[` in 𝔸, `[0,b[` in 𝕊.
    pub fn below(b: Point) -> Result<OpenPiece> {
        OpenPiece::new(b.tag, Lower::Unbounded, Upper::Open(b))
    }

    /// `]a,→[` in 𝔸.
    pub fn above(a: Point) -> Result<OpenPiece> {
        OpenPiece::new(a.tag, Lower::Open(a), Upper::Unbounded)
    }

    /// `[c,d[` in 𝕊.
    pub fn half_open(c: Point, d: Point) -> Result<OpenPiece> {
        OpenPiece::new(c.tag, Lower::Closed(c), Upper::Open(d))
    }

    /// `[c,→[` in 𝕊.
    pub fn from_point(c: Point) -> Result<OpenPiece> {
        OpenPiece::new(c.tag, Lower::Closed(c), Upper::Unbounded)
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn lower(&self) -> &Lower {
        &self.lower
    }

    pub fn upper(&self) -> &Upper {
        &self.upper
    }

    pub fn is_whole(&self) -> bool {
        self.lower == Lower::Unbounded && self.upper == Upper::Unbounded
    }

    pub(crate) fn convex(&self) -> Convex {
        Convex {
            lo: match &self.lower {
                Lower::Unbounded => Bound::None,
                Lower::Open(p) => Bound::Excl(p.key()),
                Lower::Closed(p) => Bound::Incl(p.key()),
            },
            hi: match &self.upper {
                Upper::Unbounded => Bound::None,
                Upper::Open(p) => Bound::Excl(p.key()),
            },
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.tag == self.tag && !self.left_of(p) && !self.right_of(p)
    }

    /// `p` lies below every point of the piece.
    fn left_of(&self, p: &Point) -> bool {
        match &self.lower {
            Lower::Unbounded => false,
            Lower::Open(a) => p <= a,
            Lower::Closed(c) => p < c,
        }
    }

    /// `p` lies above every point of the piece.
    fn right_of(&self, p: &Point) -> bool {
        match &self.upper {
            Upper::Unbounded => false,
            Upper::Open(b) => p >= b,
        }
    }

    /// Does the piece share a point with `[lo, hi]`? Pieces are non-empty,
    /// so an interval starting below the piece meets it unless it also ends
    /// below it.
    pub fn meets(&self, i: &ClosedInterval) -> bool {
        i.tag() == self.tag && !self.right_of(&i.lo) && !self.left_of(&i.hi)
    }

    /// Parses `(a,b)`, `(-inf,b)`, `(a,+inf)`, `[c,d)`, `[c,+inf)`.
    pub fn parse(s: &str, tag: Option<SpaceTag>) -> Result<OpenPiece> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad open piece {s:?}"));
        let closed_left = s.starts_with('[');
        if !(closed_left || s.starts_with('(')) || !s.ends_with(')') {
            return Err(bad());
        }
        let (a, b) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
        let (a, b) = (a.trim(), b.trim());
        let lo_pt = if a == "-inf" { None } else { Some(Point::parse(a, tag)?) };
        let hi_pt = if b == "+inf" || b == "inf" { None } else { Some(Point::parse(b, tag)?) };
        let tag = tag
            .or_else(|| lo_pt.as_ref().map(|p| p.tag))
            .or_else(|| hi_pt.as_ref().map(|p| p.tag))
            .ok_or_else(|| Error::Parse(format!("cannot infer space of {s:?}")))?;
        let lower = match (lo_pt, closed_left) {
            (None, false) => Lower::Unbounded,
            (None, true) => return Err(bad()),
            (Some(p), false) => Lower::Open(p),
            (Some(p), true) => Lower::Closed(p),
        };
        let upper = hi_pt.map_or(Upper::Unbounded, Upper::Open);
        OpenPiece::new(tag, lower, upper).map_err(|e| match e {
            Error::Parse(_) => e,
            other => Error::Parse(other.to_string()),
        })
    }
}

impl fmt::Display for OpenPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Lower::Unbounded => write!(f, "(-inf,")?,
            Lower::Open(p) => write!(f, "({p},")?,
            Lower::Closed(p) => write!(f, "[{p},")?,
        }
        match &self.upper {
            Upper::Unbounded => write!(f, "+inf)"),
            Upper::Open(p) => write!(f, "{p})"),
        }
    }
}

/// A finite union of basic open intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenSetSpec {
    tag: SpaceTag,
    pieces: Vec<OpenPiece>,
}

impl OpenSetSpec {
    pub fn new(tag: SpaceTag, pieces: Vec<OpenPiece>) -> Result<OpenSetSpec> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in &pieces {
            check_tag(tag, p.tag)?;
        }
        Ok(OpenSetSpec { tag, pieces })
    }

    pub fn single(piece: OpenPiece) -> OpenSetSpec {
        OpenSetSpec { tag: piece.tag, pieces: vec![piece] }
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn pieces(&self) -> &[OpenPiece] {
        &self.pieces
    }
}

pub fn point_in_open(p: &Point, v: &OpenSetSpec) -> Result<bool> {
    check_tag(v.tag, p.tag)?;
    Ok(v.pieces.iter().any(|piece| piece.contains(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Bound {
    None,
    Incl(Key),
    Excl(Key),
}

/// An order-convex set of keys given by its two bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Convex {
    pub lo: Bound,
    pub hi: Bound,
}

impl Convex {
    pub fn closed(lo: Key, hi: Key) -> Convex {
        Convex { lo: Bound::Incl(lo), hi: Bound::Incl(hi) }
    }

    pub fn contains(&self, k: &Key) -> bool {
        let lo_ok = match &self.lo {
            Bound::None => true,
            Bound::Incl(l) => l <= k,
            Bound::Excl(l) => l < k,
        };
        let hi_ok = match &self.hi {
            Bound::None => true,
            Bound::Incl(h) => k <= h,
            Bound::Excl(h) => k < h,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Convex) -> Convex {
        let lo = match (&self.lo, &other.lo) {
            (Bound::None, b) | (b, Bound::None) => b.clone(),
            (a, b) => {
                let (ka, kb) = (bound_key(a), bound_key(b));
                match ka.cmp(kb) {
                    Ordering::Greater => a.clone(),
                    Ordering::Less => b.clone(),
                    Ordering::Equal if matches!(a, Bound::Excl(_)) => a.clone(),
                    Ordering::Equal => b.clone(),
                }
            }
        };
        let hi = match (&self.hi, &other.hi) {
            (Bound::None, b) | (b, Bound::None) => b.clone(),
            (a, b) => {
                let (ka, kb) = (bound_key(a), bound_key(b));
                match ka.cmp(kb) {
                    Ordering::Less => a.clone(),
                    Ordering::Greater => b.clone(),
                    Ordering::Equal if matches!(a, Bound::Excl(_)) => a.clone(),
                    Ordering::Equal => b.clone(),
                }
            }
        };
        Convex { lo, hi }
    }

    /// Bounds with the space's own ends substituted for `None` where the
    /// space has them.
    fn resolved(&self, tag: SpaceTag) -> (Bound, Bound) {
        let lo = match &self.lo {
            Bound::None => Bound::Incl(Key::low(Rational::zero())),
            b => b.clone(),
        };
        let hi = match (&self.hi, tag) {
            (Bound::None, SpaceTag::Arrow) => Bound::Incl(Key::high(Rational::one())),
            (b, _) => b.clone(),
        };
        (lo, hi)
    }

    /// Whether the set contains a point of the space.
    pub fn is_nonempty(&self, tag: SpaceTag) -> bool {
        self.some_member(tag).is_some()
    }

    /// A deterministic member, if any.
    pub fn some_member(&self, tag: SpaceTag) -> Option<Key> {
        let (lo, hi) = self.resolved(tag);
        let mut candidates = Vec::with_capacity(5);
        let lo_coord = match &lo {
            Bound::Incl(l) => {
                candidates.push(l.clone());
                l.coord.clone()
            }
            Bound::Excl(a) => {
                candidates.extend(a.succ());
                a.coord.clone()
            }
            Bound::None => unreachable!("resolved"),
        };
        let hi_coord = match &hi {
            Bound::Incl(h) => {
                candidates.push(h.clone());
                h.coord.clone()
            }
            Bound::Excl(b) => b.coord.clone(),
            Bound::None => Rational::one(),
        };
        if lo_coord < hi_coord {
            let mid = midpoint(&lo_coord, &hi_coord);
            candidates.push(Key::high(mid.clone()));
            candidates.push(Key::low(mid));
        }
        let set = Convex { lo, hi };
        candidates.into_iter().find(|k| is_point_key(tag, k) && set.contains(k))
    }
}

fn bound_key(b: &Bound) -> &Key {
    match b {
        Bound::Incl(k) | Bound::Excl(k) => k,
        Bound::None => unreachable!("unbounded handled by caller"),
    }
}

pub(crate) fn is_point_key(tag: SpaceTag, k: &Key) -> bool {
    match tag {
        SpaceTag::Arrow => match k.side {
            0 | 1 => unit_side_ok(&k.coord, k.side),
            _ => false,
        },
        SpaceTag::Sorgenfrey => k.side == 1 && unit_side_ok(&k.coord, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&Point::a(1, 2, 0), &Point::a(1, 2, 1)).unwrap(), Ordering::Less);
        assert_eq!(compare(&Point::a(0, 1, 1), &Point::a(0, 1, 1)).unwrap(), Ordering::Equal);
        assert_eq!(compare(&Point::a(2, 3, 1), &Point::a(1, 3, 0)).unwrap(), Ordering::Greater);
        assert!(matches!(compare(&Point::a(1, 2, 1), &Point::s(1, 2)), Err(Error::TagMismatch { .. })));
    }

    #[test]
    fn successor_and_predecessor() {
        assert_eq!(successor(&Point::a(1, 2, 0)), Some(Point::a(1, 2, 1)));
        assert_eq!(successor(&Point::a(1, 1, 0)), None);
        assert_eq!(successor(&Point::a(1, 2, 1)), None);
        assert_eq!(successor(&Point::s(1, 2)), None);
        assert_eq!(predecessor(&Point::a(1, 2, 1)), Some(Point::a(1, 2, 0)));
        assert_eq!(predecessor(&Point::a(0, 1, 1)), None);
        assert_eq!(predecessor(&Point::a(1, 2, 0)), None);
        assert_eq!(predecessor(&Point::s(1, 2)), None);
    }

    #[test]
    fn point_invariants() {
        assert!(Point::arrow(rat(0, 1), 0).is_err());
        assert!(Point::arrow(rat(1, 1), 1).is_err());
        assert!(Point::arrow(rat(1, 2), 2).is_err());
        assert!(Point::sorgenfrey(rat(1, 1)).is_err());
        assert!(Point::sorgenfrey(rat(-1, 3)).is_err());
        assert!(Point::min(SpaceTag::Arrow).is_min());
        assert!(Point::max(SpaceTag::Arrow).unwrap().is_max());
    }

    #[test]
    fn intervals() {
        let whole = mk_interval(&Point::a(0, 1, 1), &Point::a(1, 1, 0)).unwrap();
        assert_eq!(whole, ClosedInterval::whole(SpaceTag::Arrow).unwrap());
        let single = mk_interval(&Point::a(1, 3, 0), &Point::a(1, 3, 0)).unwrap();
        assert!(single.is_degenerate());
        assert!(matches!(
            mk_interval(&Point::a(1, 2, 1), &Point::a(1, 4, 0)),
            Err(Error::OrderViolation { .. })
        ));
    }

    #[test]
    fn clopen_examples() {
        let i = mk_interval(&Point::a(1, 2, 1), &Point::a(1, 1, 0)).unwrap();
        assert!(is_clopen(&i).unwrap());
        assert!(is_clopen(&ClosedInterval::whole(SpaceTag::Arrow).unwrap()).unwrap());
        let j = mk_interval(&Point::a(1, 4, 0), &Point::a(1, 2, 0)).unwrap();
        assert!(!is_clopen(&j).unwrap());
        let s = mk_interval(&Point::s(1, 4), &Point::s(1, 2)).unwrap();
        assert_eq!(is_clopen(&s), Err(Error::ArrowOnly));
    }

    #[test]
    fn open_membership() {
        let v = OpenSetSpec::single(OpenPiece::between(Point::a(1, 4, 1), Point::a(3, 4, 0)).unwrap());
        assert!(point_in_open(&Point::a(1, 2, 0), &v).unwrap());
        assert!(!point_in_open(&Point::a(1, 4, 1), &v).unwrap());
        let w = OpenSetSpec::single(OpenPiece::half_open(Point::s(1, 4), Point::s(1, 2)).unwrap());
        assert!(point_in_open(&Point::s(1, 4), &w).unwrap());
        assert!(!point_in_open(&Point::s(1, 2), &w).unwrap());
        assert!(point_in_open(&Point::a(1, 2, 0), &w).is_err());
    }

    #[test]
    fn empty_pieces_rejected() {
        // ]⟨a,0⟩,⟨a,1⟩[ has no points
        assert!(matches!(OpenPiece::between(Point::a(1, 2, 0), Point::a(1, 2, 1)), Err(Error::EmptyPiece(_))));
        assert!(OpenPiece::between(Point::a(1, 2, 1), Point::a(1, 2, 0)).is_err());
        assert!(OpenPiece::below(Point::a(0, 1, 1)).is_err());
        assert!(OpenPiece::above(Point::a(1, 1, 0)).is_err());
        assert!(OpenPiece::half_open(Point::s(1, 2), Point::s(1, 2)).is_err());
        assert!(OpenPiece::below(Point::s(0, 1)).is_err());
        assert!(OpenPiece::below(Point::s(1, 3)).is_ok());
        assert!(OpenPiece::above(Point::a(1, 2, 1)).is_ok());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/2|0", "0|1", "1|0", "3/7|1"] {
            assert_eq!(Point::parse(s, None).unwrap().to_string(), s);
        }
        assert_eq!(Point::parse("2/4", None).unwrap().to_string(), "1/2");
        assert!(Point::parse("1/2|0", Some(SpaceTag::Sorgenfrey)).unwrap_err().is_parse());
        assert!(Point::parse("1/0", None).unwrap_err().is_parse());
        assert!(Point::parse("0|0", None).unwrap_err().is_parse());
        for s in ["(1/4|1,3/4|0)", "(-inf,1/2|0)", "(1/2|1,+inf)", "[1/4,1/2)", "[1/4,+inf)", "(-inf,1/2)"] {
            assert_eq!(OpenPiece::parse(s, None).unwrap().to_string(), s);
        }
        assert_eq!(ClosedInterval::parse("[1/4|1,1/2|0]", None).unwrap().to_string(), "[1/4|1,1/2|0]");
        assert!(OpenPiece::parse("(1/4,1/2)", None).unwrap_err().is_parse());
    }

    #[test]
    fn meets_interval() {
        let w = OpenPiece::between(Point::a(1, 2, 0), Point::a(3, 4, 0)).unwrap();
        // [..,⟨1/2,0⟩] touches only the excluded endpoint
        assert!(!w.meets(&mk_interval(&Point::a(1, 4, 1), &Point::a(1, 2, 0)).unwrap()));
        assert!(w.meets(&mk_interval(&Point::a(1, 4, 1), &Point::a(1, 2, 1)).unwrap()));
        let s = OpenPiece::half_open(Point::s(3, 4), Point::s(7, 8)).unwrap();
        assert!(s.meets(&mk_interval(&Point::s(1, 2), &Point::s(3, 4)).unwrap()));
        assert!(!s.meets(&mk_interval(&Point::s(7, 8), &Point::s(15, 16)).unwrap()));
    }
}
