//! Exactly represented autohomeomorphisms of 𝔸 and 𝕊.
//!
//! A [`PiecewiseHomeo`] is a finite list of rational-affine pieces on clopen
//! spans plus finitely many lazy [`Tail`]s, each accumulating at one limit
//! point. Piece sources and tail regions partition the space, and so do
//! the piece images and tail image regions.

mod build;
mod compose;
mod seq;
mod span;
mod tail;

use std::fmt;

use crate::error::{Error, Result};
use crate::hyperspace::{merge_keys, ClosedUnion};
use crate::order::{check_tag, ClosedInterval, Key, Point, Rational, SpaceTag};

pub use build::{build_seq_homeo, build_to_canonical, point_to_min, verify_seq_map, SeqMapReport};
pub use compose::compose;
pub use seq::{successive_maxima, ConvergentSeq, GeometricTail, SuccessiveMaxima};
pub use span::{AffinePiece, Span, SpanSet};
pub use tail::{Rule, Tail, MAX_BLOCKS};


#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseHomeo {
    tag: SpaceTag,
    pieces: Vec<AffinePiece>,
    tails: Vec<Tail>,
}

impl PiecewiseHomeo {
    pub fn identity(tag: SpaceTag) -> PiecewiseHomeo {
        PiecewiseHomeo { tag, pieces: vec![AffinePiece::identity(Span::whole())], tails: Vec::new() }
    }

    /// Validates that the pieces and tails form a bijection of the space.
    pub fn new(tag: SpaceTag, pieces: Vec<AffinePiece>, tails: Vec<Tail>) -> Result<PiecewiseHomeo> {
        let h = PiecewiseHomeo::assemble(tag, pieces, tails);
        h.validate()?;
        Ok(h)
    }

    pub fn from_pieces(tag: SpaceTag, pieces: Vec<AffinePiece>) -> Result<PiecewiseHomeo> {
        PiecewiseHomeo::new(tag, pieces, Vec::new())
    }

    pub(crate) fn assemble(tag: SpaceTag, pieces: Vec<AffinePiece>, tails: Vec<Tail>) -> PiecewiseHomeo {
        PiecewiseHomeo { tag, pieces: span::simplify(pieces), tails }
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    /// Finite pieces sorted by source.
    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn tails(&self) -> &[Tail] {
        &self.tails
    }

    /// Partition check: piece sources and tail regions are pairwise
    /// disjoint and fill the space, likewise on the image side; tags and
    /// orientation agree with the space.
    pub fn validate(&self) -> Result<()> {
        let mut sources = Vec::new();
        let mut images = Vec::new();
        for p in &self.pieces {
            if self.tag == SpaceTag::Sorgenfrey && !p.is_increasing() {
                return Err(Error::InvalidPiece(format!("{p} reverses order on the Sorgenfrey line")));
            }
            sources.push(SpanSet::from(p.source().clone()));
            images.push(SpanSet::from(p.image()));
        }
        for t in &self.tails {
            check_tag(self.tag, t.tag())?;
            if !t.region().contains_key(t.limit_key()) || !t.image_region().contains_key(t.image_limit_key()) {
                return Err(Error::PartitionViolation("tail limit outside its region".into()));
            }
            sources.push(t.region().clone());
            images.push(t.image_region().clone());
        }
        for (what, sets) in [("sources", &sources), ("images", &images)] {
            let union = sets.iter().fold(SpanSet::empty(), |acc, s| acc.union(s));
            let total = sets.iter().fold(Rational::from_integer(0.into()), |acc, s| acc + s.measure());
            if union != SpanSet::whole() || total != union.measure() {
                return Err(Error::PartitionViolation(format!("{what} do not tile the space: union {union}")));
            }
        }
        Ok(())
    }

    pub(crate) fn eval_key(&self, k: &Key) -> Result<Key> {
        let i = self.pieces.partition_point(|p| p.source().first_key() <= *k);
        if let Some(p) = i.checked_sub(1).map(|i| &self.pieces[i]).filter(|p| p.source().contains_key(k)) {
            return Ok(p.apply_key(k));
        }
        for t in &self.tails {
            if t.region().contains_key(k) {
                return t.eval_key(k);
            }
        }
        Err(Error::PartitionViolation(format!("no piece holds {k}")))
    }

    pub fn eval(&self, p: &Point) -> Result<Point> {
        check_tag(self.tag, p.tag())?;
        Point::from_key(self.tag, self.eval_key(&p.key())?)
    }

    pub fn inverse(&self) -> PiecewiseHomeo {
        PiecewiseHomeo::assemble(
            self.tag,
            self.pieces.iter().map(AffinePiece::inverse).collect(),
            self.tails.iter().map(Tail::inverse).collect(),
        )
    }

    /// `h''(F)` for a finite union of closed intervals.
    ///
    /// Each component is cut along piece sources and tail blocks and the
    /// fragments are mapped end to end. Where a component holds a
    /// neighbourhood of a tail limit, all blocks from some index on lie
    /// inside it, and their images together with the image limit make up
    /// the image region minus the images of the earlier blocks.
    ///
    /// On 𝕊 the image of a closed interval can be a half-open `[c,d[`, which
    /// is not a finite union of closed intervals; that case is reported as
    /// [`Error::NotClosedUnion`].
    pub fn image_closed_union(&self, f: &ClosedUnion) -> Result<ClosedUnion> {
        check_tag(self.tag, f.tag())?;
        let mut out: Vec<(Key, Key)> = Vec::new();
        for c in f.components() {
            let (lo, hi) = (c.lo().key(), c.hi().key());
            for p in &self.pieces {
                if let Some((a, b)) = p.source().meet_keys(&lo, &hi) {
                    out.push(p.apply_keys(&a, &b));
                }
            }
            for t in &self.tails {
                self.tail_image(t, &lo, &hi, &mut out)?;
            }
        }
        let merged = merge_keys(out);
        let mut components = Vec::with_capacity(merged.len());
        for (a, b) in merged {
            let lo = Point::from_key(self.tag, a);
            let hi = Point::from_key(self.tag, b.clone());
            match (lo, hi) {
                (Ok(lo), Ok(hi)) => components.push(ClosedInterval::new(lo, hi)?),
                _ => return Err(Error::NotClosedUnion(format!("a component ends just below {}", b.coord))),
            }
        }
        crate::hyperspace::canonicalize(&components)
    }

    fn tail_image(&self, t: &Tail, lo: &Key, hi: &Key, out: &mut Vec<(Key, Key)>) -> Result<()> {
        if t.region().meet_keys(lo, hi).is_empty() {
            return Ok(());
        }
        let limit = t.limit_key();
        let holds_limit = lo <= limit && limit <= hi;
        let above = limit.side == 1;
        let neighbourhood = if above { lo <= limit && limit < hi } else { lo < limit && limit <= hi };
        let inside = |s: &SpanSet| s.spans().iter().all(|x| *lo <= x.first_key() && x.last_key() <= *hi);
        let k = if neighbourhood {
            t.first_index(|k| inside(&t.region_from(k)))?
        } else {
            t.first_index(|k| t.region_from(k).meet_keys(lo, hi).iter().all(|(a, b)| a == limit && b == limit))?
        };
        for j in 0..k {
            for p in t.block(j).iter() {
                if let Some((a, b)) = p.source().meet_keys(lo, hi) {
                    out.push(p.apply_keys(&a, &b));
                }
            }
        }
        if neighbourhood {
            out.extend(t.image_from(k).spans().iter().map(|s| (s.first_key(), s.last_key())));
        } else if holds_limit {
            out.push((t.image_limit_key().clone(), t.image_limit_key().clone()));
        }
        Ok(())
    }

    /// For tail `index` and an image-side cut, a limit-side cut whose
    /// neighbourhood maps into the image neighbourhood.
    pub fn continuity_witness(&self, index: usize, cut: &Rational) -> Result<Rational> {
        let t = self.tails.get(index).ok_or_else(|| Error::Unsupported(format!("no tail {index}")))?;
        t.continuity_witness(cut)
    }

    /// Coordinates where some finite piece starts or ends.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.pieces.iter().flat_map(|p| [p.source().lo().clone(), p.source().hi().clone()]).collect();
        for t in &self.tails {
            out.push(t.limit_key().coord.clone());
            out.extend(t.region().spans().iter().flat_map(|s| [s.lo().clone(), s.hi().clone()]));
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for PiecewiseHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} homeomorphism", self.tag)?;
        for p in &self.pieces {
            writeln!(f, "  {p}")?;
        }
        for t in &self.tails {
            writeln!(f, "  tail {} ↦ {} on {}", t.limit(), t.image_limit(), t.region())?;
        }
        Ok(())
    }
}
