//! Lazily generated tails: infinitely many affine blocks accumulating at a
//! single limit point.
//!
//! A tail owns a finite union of spans (its region) containing the limit.
//! Block `k` is a finite list of affine pieces; the block sources partition
//! the region minus the limit, the block images partition the image region
//! minus the image limit, and only finitely many blocks meet any set that
//! stays away from the limit. Blocks are memoized in index order behind a
//! mutex, so a shared tail behaves as an immutable value.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order::{midpoint, rat, Key, Point, Rational, SpaceTag};

use super::build::point_to_min_span;
use super::seq::{pow, ConvergentSeq, SuccessiveMaxima};
use super::span::{AffinePiece, Span, SpanSet};

/// Upper bound on the number of blocks any single search will generate.
pub const MAX_BLOCKS: usize = 1 << 16;

#[derive(Clone)]
pub struct Tail(Arc<Inner>);

struct Inner {
    tag: SpaceTag,
    limit: Key,
    image_limit: Key,
    region: SpanSet,
    image_region: SpanSet,
    rule: Rule,
    cache: Mutex<Cache>,
}

#[derive(Default)]
struct Cache {
    blocks: Vec<Arc<Vec<AffinePiece>>>,
    region_from: Vec<SpanSet>,
    image_from: Vec<SpanSet>,
    maxima: Option<SuccessiveMaxima>,
    zs: Vec<Key>,
}

/// How a tail's blocks are generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Block `m−1` carries `Vₘ₋₁∖Vₘ` onto `[⟨1/2ᵐ,1⟩, ⟨1/2ᵐ⁻¹,0⟩]` with the
    /// `m`-th largest term landing on `⟨1/2ᵐ,1⟩`. The sequence converges
    /// to the minimum from above.
    ToCanonical(ConvergentSeq),
    Inverse(Tail),
    /// Drops the first `n` blocks.
    Skip(usize, Tail),
    /// The tail after an affine piece whose image holds its region.
    Pull(AffinePiece, Tail),
    /// An affine piece after the tail, holding its image region.
    Push(Tail, AffinePiece),
    /// The second tail after the first, the first's image limit being the
    /// second's limit.
    Then(Tail, Tail),
}

/// `V = [⟨0,1⟩, ⟨t,0⟩]` cut between `zₘ` and `zₘ₊₁`: at `zₘ₊₁` itself when it
/// sits on side 0, otherwise halfway between the two coordinates.
pub(crate) fn cut_between(z: &Key, next: &Key) -> Rational {
    if next.side == 0 {
        next.coord.clone()
    } else {
        midpoint(&next.coord, &z.coord)
    }
}

/// The approach-side neighbourhood of `limit` cut at coordinate `cut`.
pub(crate) fn neighbourhood(limit: &Key, cut: &Rational) -> Result<Span> {
    let s = if limit.side == 1 {
        Span::new(limit.coord.clone(), cut.clone())
    } else {
        Span::new(cut.clone(), limit.coord.clone())
    };
    s.map_err(|_| Error::InvalidPoint(format!("{cut} does not cut a neighbourhood of {limit}")))
}

impl Tail {
    fn make(tag: SpaceTag, limit: Key, image_limit: Key, region: SpanSet, image_region: SpanSet, rule: Rule) -> Tail {
        Tail(Arc::new(Inner { tag, limit, image_limit, region, image_region, rule, cache: Mutex::new(Cache::default()) }))
    }

    /// The tail of a sequence converging to the minimum, over the whole space.
    pub fn to_canonical(seq: ConvergentSeq) -> Result<Tail> {
        if !seq.limit().is_min() {
            return Err(Error::InvalidSequence(format!("limit {} is not the minimum", seq.limit())));
        }
        let tag = seq.tag();
        let min = Key::low(Rational::zero());
        Ok(Tail::make(tag, min.clone(), min, SpanSet::whole(), SpanSet::whole(), Rule::ToCanonical(seq)))
    }

    pub fn inverse(&self) -> Tail {
        if let Rule::Inverse(t) = &self.0.rule {
            return t.clone();
        }
        let i = &self.0;
        Tail::make(
            i.tag,
            i.image_limit.clone(),
            i.limit.clone(),
            i.image_region.clone(),
            i.region.clone(),
            Rule::Inverse(self.clone()),
        )
    }

    pub fn skip(&self, n: usize) -> Tail {
        if n == 0 {
            return self.clone();
        }
        if let Rule::Skip(m, t) = &self.0.rule {
            return t.skip(m + n);
        }
        let i = &self.0;
        Tail::make(
            i.tag,
            i.limit.clone(),
            i.image_limit.clone(),
            self.region_from(n),
            self.image_from(n),
            Rule::Skip(n, self.clone()),
        )
    }

    pub fn pull(piece: &AffinePiece, t: &Tail) -> Result<Tail> {
        if !t.region().is_subset(&SpanSet::from(piece.image())) {
            return Err(Error::PartitionViolation(format!("tail region {} leaves the image of {piece}", t.region())));
        }
        check_monotone(t.tag(), piece)?;
        let i = &t.0;
        Ok(Tail::make(
            i.tag,
            piece.unapply_key(&i.limit),
            i.image_limit.clone(),
            piece.unmap_set(&i.region),
            i.image_region.clone(),
            Rule::Pull(piece.clone(), t.clone()),
        ))
    }

    pub fn push(t: &Tail, piece: &AffinePiece) -> Result<Tail> {
        if !t.image_region().is_subset(&SpanSet::from(piece.source().clone())) {
            return Err(Error::PartitionViolation(format!("tail image {} leaves the source of {piece}", t.image_region())));
        }
        check_monotone(t.tag(), piece)?;
        let i = &t.0;
        Ok(Tail::make(
            i.tag,
            i.limit.clone(),
            piece.apply_key(&i.image_limit),
            i.region.clone(),
            piece.map_set(&i.image_region),
            Rule::Push(t.clone(), piece.clone()),
        ))
    }

    pub fn then(first: &Tail, second: &Tail) -> Result<Tail> {
        crate::order::check_tag(first.tag(), second.tag())?;
        if first.0.image_limit != second.0.limit {
            return Err(Error::PartitionViolation(format!(
                "image limit {} is not the next limit {}",
                first.0.image_limit, second.0.limit
            )));
        }
        if !first.image_region().is_subset(second.region()) {
            return Err(Error::PartitionViolation(format!(
                "tail image {} leaves the next region {}",
                first.image_region(),
                second.region()
            )));
        }
        let outside = second.map_set(&second.region().difference(first.image_region()))?;
        let image_region = second.image_region().difference(&outside);
        Ok(Tail::make(
            first.tag(),
            first.0.limit.clone(),
            second.0.image_limit.clone(),
            first.region().clone(),
            image_region,
            Rule::Then(first.clone(), second.clone()),
        ))
    }

    pub fn tag(&self) -> SpaceTag {
        self.0.tag
    }

    pub fn limit(&self) -> Point {
        Point::from_key(self.0.tag, self.0.limit.clone()).expect("limits are points")
    }

    pub fn image_limit(&self) -> Point {
        Point::from_key(self.0.tag, self.0.image_limit.clone()).expect("limits are points")
    }

    pub(crate) fn limit_key(&self) -> &Key {
        &self.0.limit
    }

    pub(crate) fn image_limit_key(&self) -> &Key {
        &self.0.image_limit
    }

    /// Sources of all blocks, plus the limit.
    pub fn region(&self) -> &SpanSet {
        &self.0.region
    }

    /// Images of all blocks, plus the image limit.
    pub fn image_region(&self) -> &SpanSet {
        &self.0.image_region
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    pub fn block(&self, k: usize) -> Arc<Vec<AffinePiece>> {
        let mut cache = self.0.cache.lock().expect("tail cache poisoned");
        self.ensure_blocks(&mut cache, k + 1);
        cache.blocks[k].clone()
    }

    fn ensure_blocks(&self, cache: &mut Cache, count: usize) {
        while cache.blocks.len() < count {
            let k = cache.blocks.len();
            let b = self.compute_block(cache, k);
            cache.blocks.push(Arc::new(b));
        }
    }

    fn compute_block(&self, cache: &mut Cache, k: usize) -> Vec<AffinePiece> {
        match &self.0.rule {
            Rule::ToCanonical(seq) => canonical_block(seq, cache, k),
            Rule::Inverse(t) => t.block(k).iter().map(AffinePiece::inverse).collect(),
            Rule::Skip(n, t) => t.block(n + k).as_ref().clone(),
            Rule::Pull(p, t) => t.block(k).iter().map(|q| p.then(q).expect("tail region inside piece image")).collect(),
            Rule::Push(t, q) => t.block(k).iter().map(|p| p.then(q).expect("tail image inside piece source")).collect(),
            Rule::Then(t1, t2) => {
                let mut out = Vec::new();
                for p in t1.block(k).iter() {
                    t2.for_each_over(&p.image(), |q| out.push(p.then(&q).expect("overlap is nonempty")))
                        .expect("block images stay off the limit");
                }
                out
            }
        }
    }

    /// The region minus the sources of blocks `0..k`.
    pub fn region_from(&self, k: usize) -> SpanSet {
        self.shrunk(k, false)
    }

    /// The image region minus the images of blocks `0..k`.
    pub fn image_from(&self, k: usize) -> SpanSet {
        self.shrunk(k, true)
    }

    fn shrunk(&self, k: usize, image: bool) -> SpanSet {
        let mut cache = self.0.cache.lock().expect("tail cache poisoned");
        self.ensure_blocks(&mut cache, k);
        let c = &mut *cache;
        let (list, start) = if image {
            (&mut c.image_from, &self.0.image_region)
        } else {
            (&mut c.region_from, &self.0.region)
        };
        if list.is_empty() {
            list.push(start.clone());
        }
        while list.len() <= k {
            let j = list.len() - 1;
            let cut = SpanSet::from_spans(
                c.blocks[j].iter().map(|p| if image { p.image() } else { p.source().clone() }).collect(),
            );
            let next = list[j].difference(&cut);
            list.push(next);
        }
        list[k].clone()
    }

    /// First `k < MAX_BLOCKS` satisfying `pred`.
    pub(crate) fn first_index(&self, mut pred: impl FnMut(usize) -> bool) -> Result<usize> {
        (0..MAX_BLOCKS)
            .find(|&k| pred(k))
            .ok_or_else(|| Error::Unsupported(format!("tail at {} did not settle within {MAX_BLOCKS} blocks", self.0.limit)))
    }

    /// Block index and piece whose source holds `k` (not the limit).
    pub(crate) fn piece_at(&self, key: &Key) -> Result<(usize, AffinePiece)> {
        self.search(|p| p.source().contains_key(key))
            .ok_or_else(|| Error::PartitionViolation(format!("no tail block holds {key}")))
    }

    /// Block index and piece whose image holds `k` (not the image limit).
    pub(crate) fn piece_onto(&self, key: &Key) -> Result<(usize, AffinePiece)> {
        self.search(|p| p.image().contains_key(key))
            .ok_or_else(|| Error::PartitionViolation(format!("no tail block reaches {key}")))
    }

    fn search(&self, hit: impl Fn(&AffinePiece) -> bool) -> Option<(usize, AffinePiece)> {
        (0..MAX_BLOCKS).find_map(|k| self.block(k).iter().find(|p| hit(p)).map(|p| (k, p.clone())))
    }

    pub(crate) fn eval_key(&self, key: &Key) -> Result<Key> {
        if *key == self.0.limit {
            return Ok(self.0.image_limit.clone());
        }
        Ok(self.piece_at(key)?.1.apply_key(key))
    }

    /// Calls `f` with the block pieces restricted to `s`, which must lie in
    /// the region and avoid the limit.
    pub(crate) fn for_each_over(&self, s: &Span, mut f: impl FnMut(AffinePiece)) -> Result<()> {
        let total = s.len();
        let mut covered = Rational::zero();
        for k in 0..MAX_BLOCKS {
            for q in self.block(k).iter() {
                if let Some(ov) = q.source().intersect(s) {
                    covered += ov.len();
                    f(q.restrict(ov));
                }
            }
            if covered == total {
                return Ok(());
            }
        }
        Err(Error::PartitionViolation(format!("{s} is not covered by finitely many blocks")))
    }

    /// Image of a set inside the region that stays off the limit.
    pub(crate) fn map_set(&self, s: &SpanSet) -> Result<SpanSet> {
        let mut out = Vec::new();
        for span in s.spans() {
            self.for_each_over(span, |q| out.push(q.image()))?;
        }
        Ok(SpanSet::from_spans(out))
    }

    /// For the image-side cut `cut`, a limit-side cut whose neighbourhood is
    /// carried inside the image neighbourhood.
    pub fn continuity_witness(&self, cut: &Rational) -> Result<Rational> {
        let target = SpanSet::from(neighbourhood(&self.0.image_limit, cut)?);
        let k = self.first_index(|k| self.image_from(k).is_subset(&target))?;
        let region = self.region_from(k);
        let span = region.span_containing(&self.0.limit).expect("limit stays in the region");
        Ok(if self.0.limit.side == 1 { span.hi().clone() } else { span.lo().clone() })
    }
}

fn check_monotone(tag: SpaceTag, p: &AffinePiece) -> Result<()> {
    if tag == SpaceTag::Sorgenfrey && !p.is_increasing() {
        return Err(Error::InvalidPiece(format!("{p} reverses order on the Sorgenfrey line")));
    }
    Ok(())
}

fn canonical_block(seq: &ConvergentSeq, cache: &mut Cache, k: usize) -> Vec<AffinePiece> {
    let maxima = cache.maxima.get_or_insert_with(|| {
        SuccessiveMaxima::from_parts(seq.tag(), seq.exceptional().iter().map(Point::key).collect(), seq.tail().clone())
    });
    while cache.zs.len() < k + 2 {
        cache.zs.push(maxima.next_key());
    }
    // Block k is m = k+1: Vₘ₋₁∖Vₘ with zₘ = zs[k].
    let z = &cache.zs[k];
    let hi = if k == 0 { Rational::one() } else { cut_between(&cache.zs[k - 1], z) };
    let lo = cut_between(z, &cache.zs[k + 1]);
    let source = Span::raw(lo, hi);
    let half = rat(1, 2);
    let target = Span::raw(pow(&half, k + 1), pow(&half, k));
    let stretch = AffinePiece::stretch(&source, &target);
    point_to_min_span(&source, z).iter().map(|p| p.then(&stretch).expect("inside the block")).collect()
}

impl PartialEq for Tail {
    fn eq(&self, other: &Tail) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.tag == other.0.tag
                && self.0.limit == other.0.limit
                && self.0.image_limit == other.0.image_limit
                && self.0.rule == other.0.rule)
    }
}

impl Eq for Tail {}

impl fmt::Debug for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tail")
            .field("limit", &self.0.limit)
            .field("image_limit", &self.0.image_limit)
            .field("rule", &self.0.rule)
            .finish()
    }
}
