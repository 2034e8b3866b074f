//! Seedable random generators for points, tuples, unions and open sets.
//!
//! Denominators are bounded (2¹⁰ by default) and a share of draws come from
//! small denominators or from caller-supplied "hot" coordinates so that
//! coincidences, adjacent pairs `⟨a,0⟩ ⟨a,1⟩`, and boundary hits show up
//! often.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::homeo::{AffinePiece, ConvergentSeq, GeometricTail, PiecewiseHomeo, Span};
use crate::hyperspace::{ClosedUnion, DeltaTuple};
use crate::order::{is_point_key, rat, Bound, ClosedInterval, Convex, Key, OpenPiece, Point, Rational, SpaceTag};

pub const DEFAULT_MAX_DENOMINATOR: u64 = 1 << 10;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    max_den: u64,
    hot: Vec<Rational>,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_den: DEFAULT_MAX_DENOMINATOR, hot: Vec::new() }
    }

    pub fn with_max_denominator(mut self, max_den: u64) -> Sampler {
        self.max_den = max_den.max(1);
        self
    }

    /// Coordinates drawn with elevated probability.
    pub fn with_hot(mut self, hot: Vec<Rational>) -> Sampler {
        self.hot = hot;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn gen_range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    fn denominator(&mut self) -> u64 {
        if self.rng.gen_bool(0.5) {
            self.rng.gen_range(1..=self.max_den.min(16))
        } else {
            self.rng.gen_range(1..=self.max_den)
        }
    }

    /// A rational in `[lo, hi]` with bounded denominator, if one is found.
    pub fn rational_in(&mut self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        if lo > hi {
            return None;
        }
        let hot: Vec<&Rational> = self.hot.iter().filter(|h| lo <= *h && *h <= hi).collect();
        if !hot.is_empty() && self.rng.gen_bool(0.25) {
            let i = self.rng.gen_range(0..hot.len());
            return Some(hot[i].clone());
        }
        let small = [lo.numer(), lo.denom(), hi.numer(), hi.denom()].map(|x| x.to_i64());
        for _ in 0..4 {
            let q = self.denominator();
            if let [Some(ln), Some(ld), Some(hn), Some(hd)] = small {
                let qi = i128::from(q);
                let n_lo = -(-i128::from(ln) * qi).div_euclid(i128::from(ld));
                let n_hi = (i128::from(hn) * qi).div_euclid(i128::from(hd));
                if n_lo > n_hi {
                    continue;
                }
                if let (Ok(a), Ok(b)) = (i64::try_from(n_lo), i64::try_from(n_hi)) {
                    let n = self.rng.gen_range(a..=b);
                    let q = q as i64;
                    let g = n.gcd(&q);
                    return Some(Rational::new_raw(BigInt::from(n / g), BigInt::from(q / g)));
                }
                let n = self.rng.gen_range(n_lo..=n_hi);
                let g = n.gcd(&qi);
                return Some(Rational::new_raw(BigInt::from(n / g), BigInt::from(qi / g)));
            }
            let q = BigInt::from(q);
            let qr = Rational::from_integer(q.clone());
            let n_lo = (lo * &qr).ceil().to_integer();
            let n_hi = (hi * &qr).floor().to_integer();
            if n_lo > n_hi {
                continue;
            }
            let span = (&n_hi - &n_lo).to_u64().unwrap_or(u64::MAX - 1);
            let n = n_lo + BigInt::from(self.rng.gen_range(0..=span));
            return Some(Rational::new(n, q));
        }
        None
    }

    pub fn side(&mut self, tag: SpaceTag) -> u8 {
        match tag {
            SpaceTag::Arrow => self.rng.gen_range(0..=1),
            SpaceTag::Sorgenfrey => 1,
        }
    }

    pub fn point(&mut self, tag: SpaceTag) -> Point {
        loop {
            let c = if self.hot.is_empty() {
                let q = self.denominator() as i64;
                let n = self.rng.gen_range(0..=q);
                let g = n.gcd(&q);
                Rational::new_raw(BigInt::from(n / g), BigInt::from(q / g))
            } else {
                self.rational_in(&Rational::zero(), &Rational::one()).expect("[0,1] has rationals")
            };
            let side = self.side(tag);
            if let Ok(p) = Point::from_key(tag, Key::new(c, side)) {
                return p;
            }
        }
    }

    /// A random member of a convex key set, falling back to a fixed member.
    pub(crate) fn key_in(&mut self, tag: SpaceTag, set: &Convex) -> Option<Key> {
        if self.rng.gen_bool(0.2) {
            return set.some_member(tag);
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        let lo = match &set.lo {
            Bound::None => &zero,
            Bound::Incl(k) | Bound::Excl(k) => &k.coord,
        };
        let hi = match &set.hi {
            Bound::None => &one,
            Bound::Incl(k) | Bound::Excl(k) => &k.coord,
        };
        for _ in 0..8 {
            if let Some(c) = self.rational_in(lo, hi) {
                let k = Key::new(c, self.side(tag));
                if is_point_key(tag, &k) && set.contains(&k) {
                    return Some(k);
                }
            }
        }
        set.some_member(tag)
    }

    pub fn point_in_interval(&mut self, i: &ClosedInterval) -> Point {
        let key = self.key_in(i.tag(), &Convex::closed(i.lo().key(), i.hi().key())).expect("intervals are non-empty");
        Point::from_key(i.tag(), key).expect("sampled keys are points")
    }

    pub fn point_in_piece(&mut self, piece: &OpenPiece) -> Point {
        let key = self.key_in(piece.tag(), &piece.convex()).expect("pieces are non-empty");
        Point::from_key(piece.tag(), key).expect("sampled keys are points")
    }

    /// Non-decreasing tuple of length `len`, with frequent repeats and
    /// successor steps.
    pub fn tuple(&mut self, tag: SpaceTag, len: usize) -> DeltaTuple {
        let mut pts: Vec<Point> = (0..len).map(|_| self.point(tag)).collect();
        pts.sort();
        for i in 1..len {
            let roll = self.rng.gen_range(0..8);
            if roll == 0 {
                pts[i] = pts[i - 1].clone();
            } else if roll == 1 {
                if let Some(s) = crate::order::successor(&pts[i - 1]) {
                    if i + 1 == len || s <= pts[i + 1] {
                        pts[i] = s;
                    }
                }
            }
        }
        DeltaTuple::new(pts).expect("sorted")
    }

    /// Random closed intervals, some of them touching or overlapping.
    pub fn intervals(&mut self, tag: SpaceTag, count: usize) -> Vec<ClosedInterval> {
        let mut out: Vec<ClosedInterval> = Vec::with_capacity(count);
        for _ in 0..count {
            let roll = self.rng.gen_range(0..6);
            let base = out.last().map(|i| i.hi().clone());
            let lo = match (roll, base) {
                (0, Some(b)) => crate::order::successor(&b).unwrap_or(b),
                (1, Some(b)) => b,
                _ => self.point(tag),
            };
            let hi = self.point(tag);
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            let hi = if self.rng.gen_range(0..8) == 0 { lo.clone() } else { hi };
            out.push(ClosedInterval::new(lo, hi).expect("ordered"));
        }
        out
    }

    /// A canonical union with at most `m` components.
    pub fn union(&mut self, tag: SpaceTag, m: usize) -> ClosedUnion {
        let k = self.rng.gen_range(1..=m.max(1));
        let t = self.tuple(tag, 2 * k);
        crate::hyperspace::varrho(&t).expect("even length")
    }

    /// A random element of the `≈`-class of `u` inside Δ₂ₘ.
    ///
    /// Components are split at shared endpoints or at successor pairs and
    /// spare slots become degenerate or overlapping pieces.
    pub fn equivalent_tuple(&mut self, u: &ClosedUnion, m: usize) -> DeltaTuple {
        let k = u.len();
        assert!(k <= m, "union has more than m components");
        let mut counts = vec![1usize; k];
        for _ in k..m {
            let i = self.rng.gen_range(0..k);
            counts[i] += 1;
        }
        let mut entries = Vec::with_capacity(2 * m);
        for (c, &n) in u.components().iter().zip(&counts) {
            let mut cuts: Vec<Point> = (1..n).map(|_| self.point_in_interval(c)).collect();
            cuts.sort();
            let mut start = c.lo().clone();
            for (i, cut) in cuts.iter().enumerate() {
                entries.push(start.clone());
                entries.push(cut.clone());
                let next_end = cuts.get(i + 1).unwrap_or(c.hi());
                start = match crate::order::successor(cut) {
                    Some(s) if &s <= next_end && self.rng.gen_bool(0.5) => s,
                    _ => cut.clone(),
                };
            }
            entries.push(start);
            entries.push(c.hi().clone());
        }
        DeltaTuple::new(entries).expect("pieces are laid out in order")
    }

    /// A random basic open piece of the space.
    pub fn open_piece(&mut self, tag: SpaceTag) -> OpenPiece {
        loop {
            let a = self.point(tag);
            let b = self.point(tag);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let roll = self.rng.gen_range(0..10);
            let piece = match (tag, roll) {
                (_, 0) => OpenPiece::below(b),
                (SpaceTag::Arrow, 1) => OpenPiece::above(a),
                (SpaceTag::Sorgenfrey, 1) => OpenPiece::from_point(a),
                (SpaceTag::Arrow, _) => OpenPiece::between(a, b),
                (SpaceTag::Sorgenfrey, _) => OpenPiece::half_open(a, b),
            };
            if let Ok(p) = piece {
                return p;
            }
        }
    }

    /// A random bounded piece containing `p`.
    pub fn open_piece_around(&mut self, p: &Point) -> OpenPiece {
        let tag = p.tag();
        loop {
            let a = self.point(tag);
            let b = self.point(tag);
            let piece = match tag {
                SpaceTag::Arrow if a < *p && *p < b => OpenPiece::between(a, b),
                SpaceTag::Arrow if a < *p && self.rng.gen_bool(0.3) => OpenPiece::above(a),
                SpaceTag::Sorgenfrey if a <= *p && *p < b => OpenPiece::half_open(a, b),
                _ => continue,
            };
            if let Ok(piece) = piece {
                return piece;
            }
        }
    }

    /// A random convergent sequence with a geometric tail and up to three
    /// exceptional points anywhere in the space. Limits are the minimum, an
    /// interior point, or (in 𝔸) a point approached from below.
    pub fn sequence(&mut self, tag: SpaceTag) -> ConvergentSeq {
        const RATIOS: [(i64, i64); 6] = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (3, 5)];
        loop {
            let (c, from_above) = match (tag, self.rng.gen_range(0..4)) {
                (_, 0) => (Rational::zero(), true),
                (SpaceTag::Arrow, 1) => (Rational::one(), false),
                (SpaceTag::Arrow, _) => (self.point(tag).coord().clone(), self.rng.gen_bool(0.5)),
                (SpaceTag::Sorgenfrey, _) => (self.point(tag).coord().clone(), true),
            };
            let room = if from_above { Rational::one() - &c } else { c.clone() };
            let Some(mag) = self.rational_in(&Rational::zero(), &room) else { continue };
            if mag.is_zero() {
                continue;
            }
            let (n, d) = RATIOS[self.rng.gen_range(0..RATIOS.len())];
            let tail = GeometricTail {
                base: c.clone(),
                scale: if from_above { mag } else { -mag },
                ratio: rat(n, d),
                side: self.side(tag),
            };
            let limit = match Point::from_key(tag, Key::new(c, u8::from(from_above))) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let exceptional = (0..self.rng.gen_range(0..=3)).map(|_| self.point(tag)).collect();
            if let Ok(s) = ConvergentSeq::new(limit, exceptional, tail) {
                return s;
            }
        }
    }

    /// A finite piecewise affine homeomorphism that cuts the space into up
    /// to five clopen blocks and lays them out again in a random order, each
    /// stretched to a new length and (in 𝔸) possibly reversed.
    pub fn block_homeo(&mut self, tag: SpaceTag) -> PiecewiseHomeo {
        let spans = |s: &mut Sampler| -> Vec<Span> {
            let k = s.rng.gen_range(1..=5);
            let mut cuts: Vec<Rational> = (1..k).filter_map(|_| s.rational_in(&Rational::zero(), &Rational::one())).collect();
            cuts.push(Rational::zero());
            cuts.push(Rational::one());
            cuts.sort();
            cuts.dedup();
            cuts.windows(2).map(|w| Span::new(w[0].clone(), w[1].clone()).expect("distinct cuts")).collect()
        };
        let from = spans(self);
        let mut to = spans(self);
        while to.len() != from.len() {
            to = spans(self);
        }
        to.shuffle(&mut self.rng);
        let pieces = from
            .iter()
            .zip(&to)
            .map(|(f, t)| {
                let up = AffinePiece::stretch(f, t);
                if tag == SpaceTag::Arrow && self.rng.gen_bool(0.5) {
                    let slope = -up.slope().clone();
                    let offset = t.hi() - &slope * f.lo();
                    AffinePiece::new(f.clone(), slope, offset).expect("reversed stretch")
                } else {
                    up
                }
            })
            .collect();
        PiecewiseHomeo::from_pieces(tag, pieces).expect("blocks tile the space")
    }
}

/// Sorted rational probes: every coordinate in `coords`, the midpoint of
/// each consecutive pair, and both side bits of each.
pub fn probe_points(tag: SpaceTag, coords: &[Rational]) -> Vec<Point> {
    let mut cs: Vec<Rational> = coords.to_vec();
    cs.push(Rational::zero());
    cs.push(Rational::one());
    cs.sort();
    cs.dedup();
    let mids: Vec<Rational> = cs.windows(2).map(|w| (&w[0] + &w[1]) / rat(2, 1)).collect();
    cs.extend(mids);
    let mut out = Vec::with_capacity(cs.len() * 2);
    for c in cs {
        for side in [0u8, 1] {
            if let Ok(p) = Point::from_key(tag, Key::new(c.clone(), side)) {
                out.push(p);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::{equiv_approx, varrho};

    #[test]
    fn equivalent_tuples_stay_in_class() {
        let mut s = Sampler::new(7);
        for _ in 0..500 {
            for tag in [SpaceTag::Arrow, SpaceTag::Sorgenfrey] {
                let m = s.gen_range(1, 4);
                let u = s.union(tag, m);
                let y = s.equivalent_tuple(&u, m);
                assert_eq!(y.len(), 2 * m);
                assert_eq!(varrho(&y).unwrap(), u);
            }
        }
    }

    #[test]
    fn seeded_generators_are_reproducible() {
        let a: Vec<_> = (0..20).map({
            let mut s = Sampler::new(42);
            move |_| s.tuple(SpaceTag::Arrow, 4)
        }).collect();
        let b: Vec<_> = (0..20).map({
            let mut s = Sampler::new(42);
            move |_| s.tuple(SpaceTag::Arrow, 4)
        }).collect();
        assert_eq!(a, b);
        assert!(a.windows(2).any(|w| !equiv_approx(&w[0], &w[1]).unwrap()));
    }

    #[test]
    fn denominators_are_bounded() {
        let mut s = Sampler::new(3);
        for _ in 0..1000 {
            let p = s.point(SpaceTag::Sorgenfrey);
            assert!(*p.coord().denom() <= BigInt::from(DEFAULT_MAX_DENOMINATOR));
        }
    }

    #[test]
    fn keys_sampled_inside_sets() {
        let mut s = Sampler::new(11);
        for _ in 0..500 {
            let piece = s.open_piece(SpaceTag::Arrow);
            let p = s.point_in_piece(&piece);
            assert!(piece.contains(&p), "{p} not in {piece}");
            let piece = s.open_piece(SpaceTag::Sorgenfrey);
            let p = s.point_in_piece(&piece);
            assert!(piece.contains(&p), "{p} not in {piece}");
        }
    }
}
