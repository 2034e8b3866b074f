//! `h₂ ∘ h₁` for piecewise homeomorphisms with tails.
//!
//! The finite parts compose piece by piece. Each tail of the result comes
//! from one tail of either map:
//!
//! * a tail of `h₁` whose image limit is a limit of `h₂` is followed by
//!   that tail (`Then`);
//! * any other tail of `h₁` ends inside a single finite piece of `h₂`
//!   (`Push`);
//! * any other tail of `h₂` starts inside the image of a single finite
//!   piece of `h₁` (`Pull`).
//!
//! Getting there means peeling finitely many blocks off tails into finite
//! pieces until every tail region or image sits in the piece it must.

use crate::error::{Error, Result};
use crate::order::{check_tag, Key};

use super::span::{meeting, simplify, AffinePiece, SpanSet};
use super::tail::Tail;
use super::PiecewiseHomeo;

/// Blocks `0..k` of `t` as finite pieces, and the rest of `t`.
fn peel(t: &Tail, k: usize) -> (Vec<AffinePiece>, Tail) {
    let mut pieces = Vec::new();
    for j in 0..k {
        pieces.extend(t.block(j).iter().cloned());
    }
    (pieces, t.skip(k))
}

fn piece_with_source<'a>(pieces: &'a [AffinePiece], k: &Key) -> Option<&'a AffinePiece> {
    pieces.iter().find(|p| p.source().contains_key(k))
}

fn piece_with_image<'a>(pieces: &'a [AffinePiece], k: &Key) -> Option<&'a AffinePiece> {
    pieces.iter().find(|p| p.image().contains_key(k))
}

/// `x ↦ h₂(h₁(x))`.
pub fn compose(h1: &PiecewiseHomeo, h2: &PiecewiseHomeo) -> Result<PiecewiseHomeo> {
    check_tag(h1.tag(), h2.tag())?;
    let tag = h1.tag();
    let mut p1: Vec<AffinePiece> = h1.pieces().to_vec();
    let mut t1: Vec<Tail> = h1.tails().to_vec();
    let mut p2: Vec<AffinePiece> = h2.pieces().to_vec();
    let mut t2: Vec<Tail> = h2.tails().to_vec();

    // Limits of h₂ that fall strictly inside a tail image of h₁ get their
    // block peeled off, so they land in a finite piece of h₁.
    for b in &t2 {
        let l2 = b.limit_key();
        for a in t1.iter_mut() {
            if a.image_limit_key() != l2 && a.image_region().contains_key(l2) {
                let (j, _) = a.piece_onto(l2)?;
                let (mat, rest) = peel(a, j + 1);
                p1.extend(mat);
                *a = rest;
            }
        }
    }
    // Likewise for image limits of h₁ inside tail regions of h₂.
    for a in &t1 {
        let i1 = a.image_limit_key();
        for b in t2.iter_mut() {
            if b.limit_key() != i1 && b.region().contains_key(i1) {
                let (j, _) = b.piece_at(i1)?;
                let (mat, rest) = peel(b, j + 1);
                p2.extend(mat);
                *b = rest;
            }
        }
    }

    let mut tails: Vec<Tail> = Vec::new();
    let mut aligned = vec![false; t2.len()];
    for a in &t1 {
        let i1 = a.image_limit_key();
        if let Some(bi) = t2.iter().position(|b| b.limit_key() == i1) {
            aligned[bi] = true;
            let target = t2[bi].region().clone();
            let k = a.first_index(|k| a.image_from(k).is_subset(&target))?;
            let (mat, rest) = peel(a, k);
            p1.extend(mat);
            tails.push(Tail::then(&rest, &t2[bi])?);
        } else {
            let q = piece_with_source(&p2, i1)
                .ok_or_else(|| Error::PartitionViolation(format!("no piece holds {i1}")))?
                .clone();
            let target = SpanSet::from(q.source().clone());
            let k = a.first_index(|k| a.image_from(k).is_subset(&target))?;
            let (mat, rest) = peel(a, k);
            p1.extend(mat);
            tails.push(Tail::push(&rest, &q)?);
        }
    }
    let mut pulled = SpanSet::empty();
    for (b, is_aligned) in t2.iter_mut().zip(&aligned) {
        if *is_aligned {
            continue;
        }
        let l2 = b.limit_key();
        let p = piece_with_image(&p1, l2)
            .ok_or_else(|| Error::PartitionViolation(format!("no piece reaches {l2}")))?
            .clone();
        let target = SpanSet::from(p.image());
        let k = b.first_index(|k| b.region_from(k).is_subset(&target))?;
        let (mat, rest) = peel(b, k);
        p2.extend(mat);
        let pull = Tail::pull(&p, &rest)?;
        pulled = pulled.union(pull.region());
        tails.push(pull);
        *b = rest;
    }

    let p2 = simplify(p2);
    let mut pieces = Vec::new();
    for p in &p1 {
        let rest = SpanSet::from(p.source().clone()).difference(&pulled);
        for s in rest.spans() {
            let part = p.restrict(s.clone());
            let img = part.image();
            for q in meeting(&p2, &img) {
                pieces.extend(part.then(q));
            }
            for b in &t2 {
                for over in SpanSet::from(img.clone()).intersect(b.region()).spans() {
                    b.for_each_over(over, |q| pieces.extend(part.then(&q)))?;
                }
            }
        }
    }
    let h = PiecewiseHomeo::assemble(tag, pieces, tails);
    debug_assert!(h.validate().is_ok(), "composition broke the partition: {:?}", h.validate());
    Ok(h)
}
