//! Nontrivial convergent sequences with a geometric tail.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::order::{check_tag, Key, Point, Rational, SpaceTag};

/// Terms `⟨base + scale·ratioⁿ, side⟩` for `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeometricTail {
    pub base: Rational,
    pub scale: Rational,
    pub ratio: Rational,
    pub side: u8,
}

impl GeometricTail {
    pub(crate) fn coord(&self, n: usize) -> Rational {
        &self.base + &self.scale * pow(&self.ratio, n)
    }

    pub(crate) fn key(&self, n: usize) -> Key {
        Key::new(self.coord(n), self.side)
    }

    /// The limit the terms converge to: from above for a positive scale,
    /// from below otherwise.
    pub(crate) fn limit_key(&self) -> Key {
        if self.scale.is_positive() {
            Key::low(self.base.clone())
        } else {
            Key::high(self.base.clone())
        }
    }

    /// `n` with `key(n) = k`, if any.
    pub(crate) fn index_of(&self, k: &Key) -> Option<usize> {
        if k.side != self.side {
            return None;
        }
        let target = (&k.coord - &self.base) / &self.scale;
        if !target.is_positive() {
            return None;
        }
        let mut pw = self.ratio.clone();
        let mut n = 1;
        while pw >= target {
            if pw == target {
                return Some(n);
            }
            pw *= &self.ratio;
            n += 1;
        }
        None
    }

    /// Smallest `N ≥ 1` with `|scale|·ratioᴺ < eps`: every later term lies
    /// within `eps` of the limit coordinate.
    pub fn modulus(&self, eps: &Rational) -> Result<usize> {
        if !eps.is_positive() {
            return Err(Error::ModulusError(format!("cut width {eps} must be positive")));
        }
        let mut dist = self.scale.abs() * &self.ratio;
        let mut n = 1;
        while dist >= *eps {
            dist *= &self.ratio;
            n += 1;
        }
        Ok(n)
    }
}

pub(crate) fn pow(r: &Rational, n: usize) -> Rational {
    let mut out = Rational::one();
    let mut base = r.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            out *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

/// `S = {limit} ∪ exceptional ∪ {tail terms}`, a nontrivial convergent
/// sequence with a decidable term set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvergentSeq {
    tag: SpaceTag,
    limit: Point,
    exceptional: Vec<Point>,
    tail: GeometricTail,
}

impl ConvergentSeq {
    pub fn new(limit: Point, exceptional: Vec<Point>, tail: GeometricTail) -> Result<ConvergentSeq> {
        let tag = limit.tag();
        if tail.ratio <= Rational::zero() || tail.ratio >= Rational::one() {
            return Err(Error::ModulusError(format!("ratio {} is not in ]0,1[", tail.ratio)));
        }
        if tail.scale.is_zero() {
            return Err(Error::ModulusError("zero scale gives a constant tail".into()));
        }
        if tag == SpaceTag::Sorgenfrey && tail.scale.is_negative() {
            return Err(Error::ModulusError("Sorgenfrey sequences converge from above only".into()));
        }
        if tail.side > 1 || (tag == SpaceTag::Sorgenfrey && tail.side != 1) {
            return Err(Error::InvalidSequence(format!("bad side bit {}", tail.side)));
        }
        if tail.limit_key() != limit.key() {
            return Err(Error::ModulusError(format!(
                "terms converge to {}|{}, not to the declared limit {limit}",
                tail.base,
                tail.limit_key().side
            )));
        }
        // The first term is the one furthest from the limit.
        Point::from_key(tag, tail.key(1)).map_err(|e| Error::InvalidSequence(format!("first tail term: {e}")))?;
        let mut seen: HashSet<&Point> = HashSet::new();
        for e in &exceptional {
            check_tag(tag, e.tag())?;
            if *e == limit {
                return Err(Error::InvalidSequence(format!("exceptional point {e} is the limit")));
            }
            if tail.index_of(&e.key()).is_some() {
                return Err(Error::InvalidSequence(format!("exceptional point {e} is a tail term")));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidSequence(format!("exceptional point {e} repeated")));
            }
        }
        Ok(ConvergentSeq { tag, limit, exceptional, tail })
    }

    /// `P = {⟨0,1⟩} ∪ {⟨1/2ⁿ,1⟩}` for 𝔸, `Q = {0} ∪ {1/2ⁿ}` for 𝕊.
    pub fn canonical(tag: SpaceTag) -> ConvergentSeq {
        let tail = GeometricTail {
            base: Rational::zero(),
            scale: Rational::one(),
            ratio: crate::order::rat(1, 2),
            side: 1,
        };
        ConvergentSeq::new(Point::min(tag), Vec::new(), tail).expect("canonical sequence is valid")
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn limit(&self) -> &Point {
        &self.limit
    }

    pub fn exceptional(&self) -> &[Point] {
        &self.exceptional
    }

    pub fn tail(&self) -> &GeometricTail {
        &self.tail
    }

    /// The `n`-th tail term, `n ≥ 1`.
    pub fn tail_term(&self, n: usize) -> Point {
        Point::from_key(self.tag, self.tail.key(n)).expect("validated tail")
    }

    /// Terms in enumeration order: exceptional points first, then the tail.
    pub fn terms(&self) -> impl Iterator<Item = Point> + '_ {
        self.exceptional.iter().cloned().chain((1..).map(|n| self.tail_term(n)))
    }

    pub fn is_term(&self, p: &Point) -> bool {
        p.tag() == self.tag && (self.exceptional.contains(p) || self.tail.index_of(&p.key()).is_some())
    }

    /// Whether `p` is the limit or a term.
    pub fn contains(&self, p: &Point) -> bool {
        *p == self.limit || self.is_term(p)
    }

    /// Tail terms from index `modulus(eps)` on lie within `eps` of the
    /// limit coordinate.
    pub fn modulus(&self, eps: &Rational) -> Result<usize> {
        self.tail.modulus(eps)
    }
}

impl fmt::Display for ConvergentSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} ∪ {{", self.limit)?;
        for e in &self.exceptional {
            write!(f, "{e}, ")?;
        }
        let t = &self.tail;
        write!(f, "{} + {}·({})ⁿ | {}}}", t.base, t.scale, t.ratio, t.side)
    }
}

/// `z₁ > z₂ > …`: the terms of a sequence converging to the minimum, listed
/// from the largest down.
#[derive(Clone, Debug)]
pub struct SuccessiveMaxima {
    exceptional: Vec<Key>,
    tail: GeometricTail,
    next_exceptional: usize,
    next_term: usize,
    tag: SpaceTag,
}

impl SuccessiveMaxima {
    pub(crate) fn from_parts(tag: SpaceTag, mut exceptional: Vec<Key>, tail: GeometricTail) -> SuccessiveMaxima {
        exceptional.sort_by(|a, b| b.cmp(a));
        SuccessiveMaxima { exceptional, tail, next_exceptional: 0, next_term: 1, tag }
    }

    pub(crate) fn next_key(&mut self) -> Key {
        let term = self.tail.key(self.next_term);
        match self.exceptional.get(self.next_exceptional) {
            Some(e) if *e > term => {
                self.next_exceptional += 1;
                e.clone()
            }
            _ => {
                self.next_term += 1;
                term
            }
        }
    }
}

impl Iterator for SuccessiveMaxima {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let k = self.next_key();
        Some(Point::from_key(self.tag, k).expect("terms are points"))
    }
}

/// The terms of `s` in decreasing order. Needs the limit to be the minimum
/// of the space, with the tail decreasing onto it.
pub fn successive_maxima(s: &ConvergentSeq) -> Result<SuccessiveMaxima> {
    if !s.limit.is_min() {
        return Err(Error::InvalidSequence(format!("limit {} is not the minimum", s.limit)));
    }
    if !s.tail.scale.is_positive() {
        return Err(Error::Unsupported("tail does not decrease onto the limit".into()));
    }
    Ok(SuccessiveMaxima::from_parts(s.tag, s.exceptional.iter().map(Point::key).collect(), s.tail.clone()))
}
