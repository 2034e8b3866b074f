//! Carrying one convergent sequence onto another.
//!
//! A sequence is first moved so that its limit becomes the minimum of the
//! space; then the blocks between successive cuts are stretched onto the
//! dyadic blocks `[⟨1/2ᵐ,1⟩, ⟨1/2ᵐ⁻¹,0⟩]`, each with its term sent to the
//! block's minimum. Two such maps, one inverted, give the map between any
//! two sequences.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::order::{check_tag, ClosedInterval, Key, Point, Rational, SpaceTag};

use super::compose::compose;
use super::seq::{ConvergentSeq, GeometricTail};
use super::span::{AffinePiece, Span};
use super::tail::Tail;
use super::PiecewiseHomeo;

/// Pieces of a self-map of `span` sending `z` to the span's minimum.
///
/// For `z = ⟨a,1⟩` the upper part `[a, hi]` slides down to the start and
/// the lower part `[lo, a[` slides up behind it. For `z = ⟨a,0⟩` the lower
/// part `[lo, a]` is reflected, which flips `z` onto `⟨lo,1⟩`, and the rest
/// stays fixed.
pub(crate) fn point_to_min_span(span: &Span, z: &Key) -> Vec<AffinePiece> {
    let (u, v) = (span.lo(), span.hi());
    let a = &z.coord;
    let one = Rational::one();
    if z.side == 1 {
        if a == u {
            return vec![AffinePiece::identity(span.clone())];
        }
        vec![
            AffinePiece::raw(Span::raw(a.clone(), v.clone()), one.clone(), u - a),
            AffinePiece::raw(Span::raw(u.clone(), a.clone()), one, v - a),
        ]
    } else {
        let mut out = vec![AffinePiece::raw(Span::raw(u.clone(), a.clone()), -one, u + a)];
        if a < v {
            out.push(AffinePiece::identity(Span::raw(a.clone(), v.clone())));
        }
        out
    }
}

fn complement_identity(span: &Span) -> Vec<AffinePiece> {
    let mut out = Vec::new();
    if !span.lo().is_zero() {
        out.push(AffinePiece::identity(Span::raw(Rational::zero(), span.lo().clone())));
    }
    if !span.hi().is_one() {
        out.push(AffinePiece::identity(Span::raw(span.hi().clone(), Rational::one())));
    }
    out
}

/// A homeomorphism of 𝔸 moving `z` to the minimum of the clopen interval
/// `j` and fixing everything outside `j`.
pub fn point_to_min(j: &ClosedInterval, z: &Point) -> Result<PiecewiseHomeo> {
    let span = Span::from_interval(j)?;
    if !j.contains(z) {
        return Err(Error::NotInInterval { point: z.to_string(), interval: j.to_string() });
    }
    let mut pieces = point_to_min_span(&span, &z.key());
    pieces.extend(complement_identity(&span));
    PiecewiseHomeo::new(SpaceTag::Arrow, pieces, Vec::new())
}

/// The map moving `s`'s limit to the minimum, and `s` rewritten in the new
/// coordinates.
///
/// Near the limit the map is a single piece: a shift when the terms come
/// from above, a reflection when they come from below. The tail stays
/// geometric with base 0 either way, and the finitely many terms on the
/// far side of the limit become exceptional points like any other.
fn normalize(s: &ConvergentSeq) -> Result<(PiecewiseHomeo, ConvergentSeq)> {
    let tag = s.tag();
    let f_pieces = point_to_min_span(&Span::whole(), &s.limit().key());
    let f = PiecewiseHomeo::new(tag, f_pieces, Vec::new())?;
    let t = s.tail();
    let tail = if t.scale.is_positive() {
        GeometricTail { base: Rational::zero(), scale: t.scale.clone(), ratio: t.ratio.clone(), side: t.side }
    } else {
        GeometricTail { base: Rational::zero(), scale: -t.scale.clone(), ratio: t.ratio.clone(), side: 1 - t.side }
    };
    let exceptional = s.exceptional().iter().map(|e| f.eval(e)).collect::<Result<Vec<_>>>()?;
    let normalized = ConvergentSeq::new(Point::min(tag), exceptional, tail)?;
    debug_assert!(
        (1..5).all(|n| f.eval(&s.tail_term(n)).ok() == Some(normalized.tail_term(n))),
        "normalization must carry the tail onto the normalized tail"
    );
    Ok((f, normalized))
}

/// `h` with `h(limit) = ⟨0,1⟩` and `h''(S)` the canonical sequence.
pub fn build_to_canonical(s: &ConvergentSeq) -> Result<PiecewiseHomeo> {
    let (f, normalized) = normalize(s)?;
    let g = PiecewiseHomeo::new(s.tag(), Vec::new(), vec![Tail::to_canonical(normalized)?])?;
    compose(&f, &g)
}

/// `h` with `h''(S) = T`.
pub fn build_seq_homeo(s: &ConvergentSeq, t: &ConvergentSeq) -> Result<PiecewiseHomeo> {
    check_tag(s.tag(), t.tag())?;
    let hs = build_to_canonical(s)?;
    let ht = build_to_canonical(t)?;
    compose(&hs, &ht.inverse())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqMapReport {
    /// Terms checked.
    pub checked: usize,
    /// Terms landing on a fresh term of the target.
    pub mapped: usize,
    pub limit_ok: bool,
    /// Source terms whose image is not a term of the target, or repeats an
    /// earlier image.
    pub misses: Vec<Point>,
}

impl SeqMapReport {
    pub fn ok(&self) -> bool {
        self.limit_ok && self.misses.is_empty() && self.mapped == self.checked
    }
}

/// Checks `h(limit S) = limit T` and that the first `n` terms of `S` go to
/// pairwise distinct terms of `T`.
pub fn verify_seq_map(h: &PiecewiseHomeo, s: &ConvergentSeq, t: &ConvergentSeq, n: usize) -> SeqMapReport {
    let limit_ok = h.eval(s.limit()).map(|y| y == *t.limit()).unwrap_or(false);
    let mut seen: HashSet<Point> = HashSet::new();
    let mut misses = Vec::new();
    for x in s.terms().take(n) {
        match h.eval(&x) {
            Ok(y) if t.is_term(&y) && seen.insert(y.clone()) => {}
            _ => misses.push(x),
        }
    }
    SeqMapReport { checked: n, mapped: n - misses.len(), limit_ok, misses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::seq::{pow, successive_maxima};
    use crate::order::rat;

    fn geo(base: Rational, scale: Rational, ratio: Rational, side: u8) -> GeometricTail {
        GeometricTail { base, scale, ratio, side }
    }

    #[test]
    fn point_to_min_examples() {
        let j = ClosedInterval::new(Point::a(1, 4, 1), Point::a(3, 4, 0)).unwrap();
        let h = point_to_min(&j, &Point::a(1, 4, 1)).unwrap();
        assert_eq!(h, PiecewiseHomeo::identity(SpaceTag::Arrow));
        let h = point_to_min(&j, &Point::a(1, 2, 1)).unwrap();
        assert_eq!(h.eval(&Point::a(1, 2, 1)).unwrap(), Point::a(1, 4, 1));
        assert!(h.pieces().iter().all(AffinePiece::is_increasing));
        let h = point_to_min(&j, &Point::a(1, 2, 0)).unwrap();
        assert_eq!(h.eval(&Point::a(1, 2, 0)).unwrap(), Point::a(1, 4, 1));
        let rev = h.pieces().iter().find(|p| !p.is_increasing()).unwrap();
        assert_eq!(rev.source(), &Span::new(rat(1, 4), rat(1, 2)).unwrap());
        assert!(matches!(point_to_min(&j, &Point::a(7, 8, 1)), Err(Error::NotInInterval { .. })));
        let open = ClosedInterval::new(Point::a(1, 4, 0), Point::a(3, 4, 0)).unwrap();
        assert!(matches!(point_to_min(&open, &Point::a(1, 2, 1)), Err(Error::NotClopen(_))));
    }

    #[test]
    fn canonical_sequence_maps_to_itself() {
        let p = ConvergentSeq::canonical(SpaceTag::Arrow);
        let h = build_to_canonical(&p).unwrap();
        for x in p.terms().take(50) {
            assert_eq!(h.eval(&x).unwrap(), x);
        }
    }

    #[test]
    fn first_maximum_goes_to_one_half() {
        let s = ConvergentSeq::new(Point::a(0, 1, 1), vec![Point::a(1, 3, 0)], geo(rat(0, 1), rat(1, 1), rat(1, 2), 1)).unwrap();
        let h = build_to_canonical(&s).unwrap();
        let z1 = successive_maxima(&s).unwrap().next().unwrap();
        assert_eq!(h.eval(&z1).unwrap(), Point::a(1, 2, 1));
    }

    #[test]
    fn thirds_side_zero_to_halves() {
        let s = ConvergentSeq::new(Point::a(0, 1, 1), vec![], geo(rat(0, 1), rat(1, 1), rat(1, 3), 0)).unwrap();
        let h = build_to_canonical(&s).unwrap();
        for m in 1..=50 {
            let x = Point::arrow(pow(&rat(1, 3), m), 0).unwrap();
            assert_eq!(h.eval(&x).unwrap(), Point::arrow(pow(&rat(1, 2), m), 1).unwrap());
        }
        let p = ConvergentSeq::canonical(SpaceTag::Arrow);
        let report = verify_seq_map(&build_seq_homeo(&s, &p).unwrap(), &s, &p, 50);
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn interior_limits() {
        let above = ConvergentSeq::new(Point::a(1, 2, 1), vec![Point::a(1, 4, 0)], geo(rat(1, 2), rat(1, 4), rat(1, 2), 0)).unwrap();
        let h = build_to_canonical(&above).unwrap();
        assert_eq!(h.eval(&Point::a(1, 2, 1)).unwrap(), Point::a(0, 1, 1));
        let below = ConvergentSeq::new(
            Point::a(1, 2, 0),
            vec![Point::a(3, 4, 1), Point::a(1, 2, 1)],
            geo(rat(1, 2), rat(-1, 3), rat(2, 3), 1),
        )
        .unwrap();
        let h = build_to_canonical(&below).unwrap();
        assert_eq!(h.eval(&Point::a(1, 2, 0)).unwrap(), Point::a(0, 1, 1));
        let r = verify_seq_map(&build_seq_homeo(&above, &below).unwrap(), &above, &below, 50);
        assert!(r.ok(), "{r:?}");
        let r = verify_seq_map(&build_seq_homeo(&below, &above).unwrap(), &below, &above, 50);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn sorgenfrey_thirds_to_halves() {
        let s = ConvergentSeq::new(Point::s(0, 1), vec![], geo(rat(0, 1), rat(1, 1), rat(1, 3), 1)).unwrap();
        let q = ConvergentSeq::canonical(SpaceTag::Sorgenfrey);
        let h = build_seq_homeo(&s, &q).unwrap();
        for m in 1..=50 {
            let x = Point::sorgenfrey(pow(&rat(1, 3), m)).unwrap();
            assert_eq!(h.eval(&x).unwrap(), Point::sorgenfrey(pow(&rat(1, 2), m)).unwrap());
        }
        assert_eq!(h.eval(&Point::s(0, 1)).unwrap(), Point::s(0, 1));
        assert!(h.pieces().iter().all(AffinePiece::is_increasing));
    }

    #[test]
    fn same_sequence_gives_identity_on_probes() {
        let s = ConvergentSeq::new(Point::a(1, 3, 1), vec![Point::a(1, 5, 0)], geo(rat(1, 3), rat(1, 2), rat(3, 5), 1)).unwrap();
        let h = build_seq_homeo(&s, &s).unwrap();
        for n in 0..=1000 {
            for side in [0u8, 1] {
                if let Ok(p) = Point::arrow(rat(n, 1000), side) {
                    assert_eq!(h.eval(&p).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn identity_report() {
        let p = ConvergentSeq::canonical(SpaceTag::Arrow);
        let id = PiecewiseHomeo::identity(SpaceTag::Arrow);
        assert!(verify_seq_map(&id, &p, &p, 50).ok());
        let other = ConvergentSeq::new(Point::a(0, 1, 1), vec![], geo(rat(0, 1), rat(1, 1), rat(1, 3), 1)).unwrap();
        let r = verify_seq_map(&id, &other, &p, 50);
        assert_eq!(r.misses.len(), 50);
        assert_eq!(r.mapped, 0);
    }
}
