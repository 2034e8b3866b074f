//! Finite interval unions (𝒞ₘ), finite sets (ℱₘ), and the tuple maps onto
//! them.
//!
//! A [`ClosedUnion`] is always stored in canonical form, so two unions
//! describe the same closed set iff they are structurally equal. That is
//! what makes `x ≈ y ⟺ ϱ(x) = ϱ(y)` decidable by a plain comparison.

use std::fmt;

use crate::error::{Error, Result};
use crate::order::{check_tag, ClosedInterval, Key, Point, SpaceTag};

/// Sorted, pairwise non-mergeable closed intervals; never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedUnion {
    tag: SpaceTag,
    components: Vec<ClosedInterval>,
}

impl ClosedUnion {
    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn components(&self) -> &[ClosedInterval] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        // components are sorted by lo, so the last one starting at or
        // before p is the only candidate
        let idx = self.components.partition_point(|c| c.lo() <= p);
        idx > 0 && self.components[idx - 1].contains(p)
    }

    pub fn single(i: ClosedInterval) -> ClosedUnion {
        ClosedUnion { tag: i.tag(), components: vec![i] }
    }
}

impl fmt::Display for ClosedUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// Sort-and-sweep merge of closed key intervals. Two neighbours merge when
/// they overlap or when the second starts at the immediate successor of
/// the first one's end.
pub(crate) fn merge_keys(mut raw: Vec<(Key, Key)>) -> Vec<(Key, Key)> {
    raw.sort();
    let mut out: Vec<(Key, Key)> = Vec::with_capacity(raw.len());
    for (lo, hi) in raw {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 || last.1.succ().as_ref() == Some(&lo) {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

/// The canonical union with the same points as `raw`.
pub fn canonicalize(raw: &[ClosedInterval]) -> Result<ClosedUnion> {
    let first = raw.first().ok_or(Error::EmptyInput)?;
    let tag = first.tag();
    for i in raw {
        check_tag(tag, i.tag())?;
    }
    let merged = merge_keys(raw.iter().map(|i| (i.lo().key(), i.hi().key())).collect());
    let components = merged
        .into_iter()
        .map(|(lo, hi)| ClosedInterval::new(Point::from_key(tag, lo)?, Point::from_key(tag, hi)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosedUnion { tag, components })
}

/// A non-decreasing tuple, an element of Δₖ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaTuple {
    tag: SpaceTag,
    entries: Vec<Point>,
}

impl DeltaTuple {
    pub fn new(entries: Vec<Point>) -> Result<DeltaTuple> {
        let tag = entries.first().ok_or(Error::EmptyInput)?.tag();
        for p in &entries {
            check_tag(tag, p.tag())?;
        }
        if let Some(i) = entries.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::NotNonDecreasing(i + 1));
        }
        Ok(DeltaTuple { tag, entries })
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn entries(&self) -> &[Point] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for DeltaTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `ϱ(x) = ⋃ᵢ [x(2i), x(2i+1)]`.
pub fn varrho(x: &DeltaTuple) -> Result<ClosedUnion> {
    if x.len() % 2 != 0 {
        return Err(Error::OddLength(x.len()));
    }
    let pairs = x
        .entries
        .chunks(2)
        .map(|c| ClosedInterval::new(c[0].clone(), c[1].clone()))
        .collect::<Result<Vec<_>>>()?;
    canonicalize(&pairs)
}

fn check_same_shape(x: &DeltaTuple, y: &DeltaTuple) -> Result<()> {
    check_tag(x.tag, y.tag)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(())
}

/// `x ≈ y` iff `ϱ(x) = ϱ(y)`.
pub fn equiv_approx(x: &DeltaTuple, y: &DeltaTuple) -> Result<bool> {
    check_same_shape(x, y)?;
    Ok(varrho(x)? == varrho(y)?)
}

/// The representative of the `≈`-class of `u` in Δ₂ₘ: the component
/// endpoints in order, padded with the last right endpoint.
pub fn canonical_rep(u: &ClosedUnion, m: usize) -> Result<DeltaTuple> {
    let k = u.len();
    if k > m {
        return Err(Error::TooManyComponents { components: k, m });
    }
    let mut entries = Vec::with_capacity(2 * m);
    for c in &u.components {
        entries.push(c.lo().clone());
        entries.push(c.hi().clone());
    }
    let last = u.components.last().ok_or(Error::EmptyInput)?.hi().clone();
    entries.resize(2 * m, last);
    DeltaTuple::new(entries)
}

/// A non-empty finite set, stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    tag: SpaceTag,
    elements: Vec<Point>,
}

impl FiniteSet {
    pub fn new(mut elements: Vec<Point>) -> Result<FiniteSet> {
        let tag = elements.first().ok_or(Error::EmptyInput)?.tag();
        for p in &elements {
            check_tag(tag, p.tag())?;
        }
        elements.sort();
        elements.dedup();
        Ok(FiniteSet { tag, elements })
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn elements(&self) -> &[Point] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// `ρ(x) = {x(0), …, x(m−1)}`.
pub fn rho_fin(x: &DeltaTuple) -> FiniteSet {
    FiniteSet::new(x.entries.clone()).expect("DeltaTuple is non-empty and single-space")
}

/// `x ∼ y` iff `ρ(x) = ρ(y)`.
pub fn equiv_sim(x: &DeltaTuple, y: &DeltaTuple) -> Result<bool> {
    check_same_shape(x, y)?;
    Ok(rho_fin(x) == rho_fin(y))
}

/// ℱ₂ → 𝒞₁: `{a, b} ↦ [min, max]`.
pub fn finite_to_interval(s: &FiniteSet) -> Result<ClosedUnion> {
    match s.elements.as_slice() {
        [a] => Ok(ClosedUnion::single(ClosedInterval::singleton(a.clone()))),
        [a, b] => Ok(ClosedUnion::single(ClosedInterval::new(a.clone(), b.clone())?)),
        _ => Err(Error::SetTooLarge(s.len())),
    }
}

/// 𝒞₁ → ℱ₂: `[a, b] ↦ {a, b}`.
pub fn interval_to_finite(u: &ClosedUnion) -> Result<FiniteSet> {
    match u.components.as_slice() {
        [c] => FiniteSet::new(vec![c.lo().clone(), c.hi().clone()]),
        _ => Err(Error::NotSingleComponent(u.len())),
    }
}
