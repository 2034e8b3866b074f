//! Clopen blocks, finite unions of them, and rational-affine pieces.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::order::{ClosedInterval, Key, Point, Rational, SpaceTag};

/// The clopen block `[⟨lo,1⟩, ⟨hi,0⟩]` of 𝔸, or `[lo,hi[` of 𝕊, with
/// `0 ≤ lo < hi ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    lo: Rational,
    hi: Rational,
}

impl Span {
    pub fn new(lo: Rational, hi: Rational) -> Result<Span> {
        if lo < Rational::zero() || hi > Rational::one() || lo >= hi {
            return Err(Error::InvalidPiece(format!("span [{lo}, {hi}] is empty or leaves [0,1]")));
        }
        Ok(Span { lo, hi })
    }

    pub(crate) fn raw(lo: Rational, hi: Rational) -> Span {
        debug_assert!(lo < hi, "degenerate span [{lo}, {hi}]");
        Span { lo, hi }
    }

    pub fn whole() -> Span {
        Span { lo: Rational::zero(), hi: Rational::one() }
    }

    /// The clopen interval `[⟨lo,1⟩, ⟨hi,0⟩]` of the double arrow.
    pub fn from_interval(i: &ClosedInterval) -> Result<Span> {
        if i.tag() != SpaceTag::Arrow {
            return Err(Error::ArrowOnly);
        }
        if i.lo().side() != 1 || i.hi().side() != 0 {
            return Err(Error::NotClopen(i.to_string()));
        }
        Span::new(i.lo().coord().clone(), i.hi().coord().clone())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub(crate) fn first_key(&self) -> Key {
        Key::low(self.lo.clone())
    }

    pub(crate) fn last_key(&self) -> Key {
        Key::high(self.hi.clone())
    }

    pub(crate) fn contains_key(&self, k: &Key) -> bool {
        self.first_key() <= *k && *k <= self.last_key()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.contains_key(&p.key())
    }

    pub fn intersect(&self, other: &Span) -> Option<Span> {
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        (lo < hi).then(|| Span::raw(lo.clone(), hi.clone()))
    }

    pub fn is_subset(&self, other: &Span) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Intersection with the closed key interval `[lo, hi]`.
    pub(crate) fn meet_keys(&self, lo: &Key, hi: &Key) -> Option<(Key, Key)> {
        let a = lo.clone().max(self.first_key());
        let b = hi.clone().min(self.last_key());
        (a <= b).then_some((a, b))
    }

    /// The same block as a closed interval of 𝔸.
    pub fn to_interval(&self) -> ClosedInterval {
        let lo = Point::arrow(self.lo.clone(), 1).expect("span ends are points");
        let hi = Point::arrow(self.hi.clone(), 0).expect("span ends are points");
        ClosedInterval::new(lo, hi).expect("lo < hi")
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|1, {}|0]", self.lo, self.hi)
    }
}

/// A finite union of spans, kept sorted with touching spans merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpanSet {
    spans: Vec<Span>,
}

impl SpanSet {
    pub fn empty() -> SpanSet {
        SpanSet::default()
    }

    pub fn whole() -> SpanSet {
        SpanSet { spans: vec![Span::whole()] }
    }

    pub fn from_spans(mut spans: Vec<Span>) -> SpanSet {
        spans.sort();
        let mut out: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            if let Some(last) = out.last_mut() {
                if s.lo <= last.hi {
                    if s.hi > last.hi {
                        last.hi = s.hi;
                    }
                    continue;
                }
            }
            out.push(s);
        }
        SpanSet { spans: out }
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.spans.iter().fold(Rational::zero(), |acc, s| acc + s.len())
    }

    pub(crate) fn span_containing(&self, k: &Key) -> Option<&Span> {
        let i = self.spans.partition_point(|s| s.first_key() <= *k);
        i.checked_sub(1).map(|i| &self.spans[i]).filter(|s| s.contains_key(k))
    }

    pub(crate) fn contains_key(&self, k: &Key) -> bool {
        self.span_containing(k).is_some()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.contains_key(&p.key())
    }

    pub fn union(&self, other: &SpanSet) -> SpanSet {
        SpanSet::from_spans(self.spans.iter().chain(&other.spans).cloned().collect())
    }

    pub fn intersect(&self, other: &SpanSet) -> SpanSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.spans.len() && j < other.spans.len() {
            let (a, b) = (&self.spans[i], &other.spans[j]);
            if let Some(s) = a.intersect(b) {
                out.push(s);
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        SpanSet { spans: out }
    }

    pub fn difference(&self, other: &SpanSet) -> SpanSet {
        let mut out = Vec::new();
        let mut j = 0;
        for s in &self.spans {
            let mut lo = s.lo.clone();
            while j < other.spans.len() && other.spans[j].hi <= lo {
                j += 1;
            }
            let mut k = j;
            while k < other.spans.len() && other.spans[k].lo < s.hi {
                let o = &other.spans[k];
                if o.lo > lo {
                    out.push(Span::raw(lo.clone(), o.lo.clone()));
                }
                if o.hi > lo {
                    lo = o.hi.clone();
                }
                k += 1;
            }
            if lo < s.hi {
                out.push(Span::raw(lo, s.hi.clone()));
            }
        }
        SpanSet { spans: out }
    }

    pub fn is_subset(&self, other: &SpanSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &SpanSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Intersection with the closed key interval `[lo, hi]`.
    pub(crate) fn meet_keys(&self, lo: &Key, hi: &Key) -> Vec<(Key, Key)> {
        self.spans.iter().filter_map(|s| s.meet_keys(lo, hi)).collect()
    }
}

impl From<Span> for SpanSet {
    fn from(s: Span) -> SpanSet {
        SpanSet { spans: vec![s] }
    }
}

impl fmt::Display for SpanSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.spans.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// `t ↦ slope·t + offset` on a source span. Increasing pieces keep the side
/// bit, decreasing ones flip it, so `⟨a,i⟩ ↦ ⟨slope·a + offset, 1−i⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePiece {
    source: Span,
    slope: Rational,
    offset: Rational,
}

impl AffinePiece {
    pub fn new(source: Span, slope: Rational, offset: Rational) -> Result<AffinePiece> {
        if slope.is_zero() {
            return Err(Error::InvalidPiece("zero slope".into()));
        }
        let piece = AffinePiece { source, slope, offset };
        let (a, b) = (piece.map_coord(&piece.source.lo), piece.map_coord(&piece.source.hi));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo < Rational::zero() || hi > Rational::one() {
            return Err(Error::InvalidPiece(format!("image [{lo}, {hi}] leaves [0,1]")));
        }
        Ok(piece)
    }

    pub(crate) fn raw(source: Span, slope: Rational, offset: Rational) -> AffinePiece {
        AffinePiece { source, slope, offset }
    }

    pub fn identity(source: Span) -> AffinePiece {
        AffinePiece { source, slope: Rational::one(), offset: Rational::zero() }
    }

    /// The increasing piece carrying `from` onto `to`.
    pub fn stretch(from: &Span, to: &Span) -> AffinePiece {
        let slope = to.len() / from.len();
        let offset = &to.lo - &slope * &from.lo;
        AffinePiece { source: from.clone(), slope, offset }
    }

    pub fn source(&self) -> &Span {
        &self.source
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn is_increasing(&self) -> bool {
        self.slope.is_positive()
    }

    pub(crate) fn map_coord(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.offset
    }

    pub(crate) fn unmap_coord(&self, t: &Rational) -> Rational {
        (t - &self.offset) / &self.slope
    }

    fn side(&self, side: u8) -> u8 {
        if self.is_increasing() {
            side
        } else {
            1 - side
        }
    }

    pub(crate) fn apply_key(&self, k: &Key) -> Key {
        Key::new(self.map_coord(&k.coord), self.side(k.side))
    }

    pub(crate) fn unapply_key(&self, k: &Key) -> Key {
        Key::new(self.unmap_coord(&k.coord), self.side(k.side))
    }

    /// Image of the closed key interval `[lo, hi]` inside the source.
    pub(crate) fn apply_keys(&self, lo: &Key, hi: &Key) -> (Key, Key) {
        let (a, b) = (self.apply_key(lo), self.apply_key(hi));
        if self.is_increasing() {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        Point::from_key(p.tag(), self.apply_key(&p.key()))
    }

    pub(crate) fn map_span(&self, s: &Span) -> Span {
        let (a, b) = (self.map_coord(&s.lo), self.map_coord(&s.hi));
        if a < b {
            Span::raw(a, b)
        } else {
            Span::raw(b, a)
        }
    }

    pub(crate) fn unmap_span(&self, s: &Span) -> Span {
        let (a, b) = (self.unmap_coord(&s.lo), self.unmap_coord(&s.hi));
        if a < b {
            Span::raw(a, b)
        } else {
            Span::raw(b, a)
        }
    }

    pub(crate) fn map_set(&self, s: &SpanSet) -> SpanSet {
        SpanSet::from_spans(s.spans().iter().map(|x| self.map_span(x)).collect())
    }

    pub(crate) fn unmap_set(&self, s: &SpanSet) -> SpanSet {
        SpanSet::from_spans(s.spans().iter().map(|x| self.unmap_span(x)).collect())
    }

    pub fn image(&self) -> Span {
        self.map_span(&self.source)
    }

    pub fn inverse(&self) -> AffinePiece {
        let slope = self.slope.recip();
        let offset = -(&self.offset * &slope);
        AffinePiece { source: self.image(), slope, offset }
    }

    /// The same map on a sub-span of the source.
    pub(crate) fn restrict(&self, s: Span) -> AffinePiece {
        debug_assert!(s.is_subset(&self.source));
        AffinePiece { source: s, slope: self.slope.clone(), offset: self.offset.clone() }
    }

    /// `next ∘ self` on the part of the source that lands in `next`'s
    /// source, if that part has positive length.
    pub(crate) fn then(&self, next: &AffinePiece) -> Option<AffinePiece> {
        let meet = self.image().intersect(&next.source)?;
        Some(AffinePiece {
            source: self.unmap_span(&meet),
            slope: &next.slope * &self.slope,
            offset: &next.slope * &self.offset + &next.offset,
        })
    }

    pub(crate) fn same_map(&self, other: &AffinePiece) -> bool {
        self.slope == other.slope && self.offset == other.offset
    }
}

impl fmt::Display for AffinePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ↦ {}·t + {}", self.source, self.slope, self.offset)
    }
}

/// Sorts pieces by source and fuses neighbours carrying the same map.
pub(crate) fn simplify(mut pieces: Vec<AffinePiece>) -> Vec<AffinePiece> {
    pieces.sort_by(|a, b| a.source.cmp(&b.source));
    let mut out: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let Some(last) = out.last_mut() {
            if last.source.hi == p.source.lo && last.same_map(&p) {
                last.source.hi = p.source.hi;
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Index range of the sorted, disjoint `pieces` whose sources meet `s`.
pub(crate) fn meeting<'a>(pieces: &'a [AffinePiece], s: &Span) -> &'a [AffinePiece] {
    let start = pieces.partition_point(|p| p.source.hi <= s.lo);
    let end = pieces.partition_point(|p| p.source.lo < s.hi);
    &pieces[start..end.max(start)]
}
