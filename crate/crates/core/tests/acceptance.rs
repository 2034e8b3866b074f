//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arrowhyp::homeo::{build_seq_homeo, compose, verify_seq_map, ConvergentSeq, PiecewiseHomeo, Span};
use arrowhyp::hyperspace::{
    canonical_rep, canonicalize, equiv_approx, DeltaTuple, finite_to_interval, interval_to_finite, varrho, ClosedUnion, FiniteSet,
};
use arrowhyp::sample::{probe_points, Sampler};
use arrowhyp::vietoris::{
    box_for_lower, box_for_upper, BoxSpec, mem_lower, mem_upper, saturation_check, BoxRule, SaturatedBoxSpec, SaturationForm,
};
use arrowhyp::{rat, successor, predecessor, ClosedInterval, OpenSetSpec, Point, Rational, SpaceTag};
use num_traits::{One, Zero};

const TAGS: [SpaceTag; 2] = [SpaceTag::Arrow, SpaceTag::Sorgenfrey];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs())
}

fn coords_of(intervals: &[ClosedInterval]) -> Vec<Rational> {
    intervals.iter().flat_map(|i| [i.lo().coord().clone(), i.hi().coord().clone()]).collect()
}

/// 1. Canonical forms agree with the raw lists on endpoints, midpoints and
/// random probes.
fn canonical_soundness() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(1);
    let (mut lists, mut probes, mut mismatches) = (0usize, 0usize, 0usize);
    for n in 0..10_000 {
        let tag = TAGS[n % 2];
        let count = s.gen_range(1, 4);
        let raw = s.intervals(tag, count);
        let u = match canonicalize(&raw) {
            Ok(u) => u,
            Err(_) => {
                mismatches += 1;
                continue;
            }
        };
        lists += 1;
        let mut pts = probe_points(tag, &coords_of(&raw));
        pts.extend((0..1000).map(|_| s.point(tag)));
        for p in &pts {
            probes += 1;
            if u.contains(p) != raw.iter().any(|i| i.contains(p)) {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(5);
    outcome(
        mismatches == 0 && elapsed < limit,
        format!("{lists} lists, {probes} probes, {mismatches} mismatches, {}", within(elapsed, limit)),
    )
}

/// 2. `ϱ ∘ rep = id` on unions and `x ≈ rep(ϱ(x))` on tuples.
fn quotient_round_trip() -> Outcome {
    let mut s = Sampler::new(2);
    let mut failures = 0usize;
    for n in 0..10_000 {
        let tag = TAGS[n % 2];
        let m = s.gen_range(1, 4);
        let u = s.union(tag, m);
        if canonical_rep(&u, m).and_then(|x| varrho(&x)).ok() != Some(u) {
            failures += 1;
        }
    }
    for n in 0..10_000 {
        let tag = TAGS[n % 2];
        let m = s.gen_range(1, 4);
        let x = s.tuple(tag, 2 * m);
        let ok = varrho(&x).and_then(|u| canonical_rep(&u, m)).and_then(|y| equiv_approx(&x, &y));
        if ok != Ok(true) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("2x10000 round trips, {failures} failures"))
}

/// 3. ℱ₂ ≅ 𝒞₁ in both directions.
fn bridge_round_trip() -> Outcome {
    let mut s = Sampler::new(3);
    let mut failures = 0usize;
    for n in 0..10_000 {
        let tag = TAGS[n % 2];
        let k = s.gen_range(1, 2);
        let set = FiniteSet::new((0..k).map(|_| s.point(tag)).collect()).expect("non-empty");
        if finite_to_interval(&set).and_then(|u| interval_to_finite(&u)).ok() != Some(set) {
            failures += 1;
        }
        let u = s.union(tag, 1);
        if interval_to_finite(&u).and_then(|f| finite_to_interval(&f)).ok() != Some(u) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("2x10000 round trips, {failures} failures"))
}

fn random_lower_instance(s: &mut Sampler, tag: SpaceTag) -> (DeltaTuple, OpenSetSpec) {
    loop {
        let k = s.gen_range(1, 3);
        let pieces: Vec<_> = (0..k).map(|_| s.open_piece(tag)).collect();
        let v = OpenSetSpec::new(tag, pieces.clone()).expect("one space");
        let m = s.gen_range(1, 3);
        let mut pts: Vec<Point> = (0..2 * m)
            .map(|_| {
                let i = s.gen_range(0, k - 1);
                s.point_in_piece(&pieces[i])
            })
            .collect();
        pts.sort();
        let x = DeltaTuple::new(pts).expect("sorted");
        if mem_lower(&varrho(&x).expect("even"), &v).expect("one space") {
            return (x, v);
        }
    }
}

/// Whether `x` lies in the box, and how many of 1000 sampled box tuples
/// fail `target`, with the number sampled.
fn check_box(s: &mut Sampler, x: &DeltaTuple, b: &BoxSpec, target: &dyn Fn(&ClosedUnion) -> bool) -> (usize, usize) {
    let mut bad = usize::from(!b.contains(x));
    let mut n = 0;
    for y in b.samples(s, 1000) {
        match y {
            Some(y) if b.contains(&y) => {
                n += 1;
                if !target(&varrho(&y).expect("even")) {
                    bad += 1;
                }
            }
            _ => bad += 1,
        }
    }
    (bad, n)
}

/// 4. Every box contains its tuple and maps into the subbasic set.
fn vietoris_boxes() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(4);
    let mut done: BTreeMap<String, usize> = BTreeMap::new();
    let mut violations = 0usize;
    let mut samples = 0usize;
    let per_case = 1000;
    for tag in TAGS {
        let key = format!("{tag}/cover");
        while done.get(&key).copied().unwrap_or(0) < per_case / 2 {
            let (x, v) = random_lower_instance(&mut s, tag);
            let b = box_for_lower(&x, &v).expect("x is in [V]");
            let (bad, n) = check_box(&mut s, &x, &b, &|u| mem_lower(u, &v).unwrap_or(false));
            violations += bad;
            samples += n;
            *done.entry(key.clone()).or_default() += 1;
        }
    }
    let rules = [BoxRule::LeftEnd, BoxRule::RightEnd, BoxRule::EndInside, BoxRule::EndBeyond];
    let name = |tag: SpaceTag, r: BoxRule| format!("{tag}/{r:?}");
    let mut attempts = 0usize;
    while rules.iter().any(|r| TAGS.iter().any(|t| done.get(&name(*t, *r)).copied().unwrap_or(0) < per_case / 2))
        && attempts < 1_000_000
    {
        attempts += 1;
        let tag = TAGS[attempts % 2];
        let w = s.open_piece(tag);
        let m = s.gen_range(1, 3);
        let x = s.tuple(tag, 2 * m);
        let Ok(b) = box_for_upper(&x, &w) else { continue };
        let key = name(tag, b.rule);
        if done.get(&key).copied().unwrap_or(0) >= per_case / 2 {
            continue;
        }
        let v = OpenSetSpec::single(w);
        let (bad, n) = check_box(&mut s, &x, &b, &|u| mem_upper(u, &v).unwrap_or(false));
        violations += bad;
        samples += n;
        *done.entry(key).or_default() += 1;
    }
    let mut per_rule: BTreeMap<String, usize> = BTreeMap::new();
    for (k, n) in &done {
        *per_rule.entry(k.split('/').nth(1).unwrap_or(k).to_string()).or_default() += n;
    }
    let complete = per_rule.len() == 5 && per_rule.values().all(|n| *n >= per_case);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(30);
    outcome(
        complete && violations == 0 && elapsed < limit,
        format!("instances {per_rule:?}, {samples} sampled tuples, {violations} violations, {}", within(elapsed, limit)),
    )
}

/// 5. The quoted saturated families have no violations; the control does.
fn saturation() -> Outcome {
    let mut violations = 0usize;
    let mut runs = 0usize;
    for form in [SaturationForm::UnionPreimage, SaturationForm::IntersectionPreimage] {
        for r in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            for m in 1..=3 {
                let spec = SaturatedBoxSpec::new(form, r.clone(), m).expect("valid spec");
                let rep = saturation_check(&spec, 10_000, 5 + m as u64).expect("trials > 0");
                violations += rep.violations;
                runs += 1;
            }
        }
    }
    let control = SaturatedBoxSpec::new(SaturationForm::Coordinate(1), rat(1, 2), 2).expect("valid spec");
    let rep = saturation_check(&control, 10_000, 5).expect("trials > 0");
    outcome(
        violations == 0 && !rep.witnesses.is_empty(),
        format!(
            "{runs} runs x 10000 trials, {violations} violations; control: {} violations, {} witnesses",
            rep.violations,
            rep.witnesses.len()
        ),
    )
}

fn limit_kind(s: &ConvergentSeq) -> &'static str {
    let l = s.limit();
    if l.is_min() {
        "min"
    } else if s.exceptional().iter().any(|e| (e < l) != (s.tail_term(1) < *l)) {
        "two-sided"
    } else {
        "interior"
    }
}

/// 6. `h(S) = T` for random pairs of sequences.
fn sequence_theorem() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(6);
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for tag in TAGS {
        let mut n = 0;
        while n < 100 {
            let a = s.sequence(tag);
            let b = s.sequence(tag);
            // The first pairs are forced to cover each kind of source limit.
            let wanted = match (tag, n) {
                (SpaceTag::Arrow, 0..=9) => Some("min"),
                (SpaceTag::Arrow, 10..=19) => Some("two-sided"),
                (SpaceTag::Arrow, 20..=29) => Some("interior"),
                _ => None,
            };
            if wanted.is_some_and(|w| w != limit_kind(&a)) {
                continue;
            }
            n += 1;
            *kinds.entry(format!("{tag}/{}", limit_kind(&a))).or_default() += 1;
            let ok = match build_seq_homeo(&a, &b) {
                Ok(h) => {
                    let rep = verify_seq_map(&h, &a, &b, 50);
                    rep.ok() && rep.mapped == 50
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("{a} -> {b}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(60);
    outcome(
        failures.is_empty() && elapsed < limit,
        format!(
            "200 pairs {kinds:?}, {} failures{}, {}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            within(elapsed, limit)
        ),
    )
}

/// A pool of maps with finite pieces only, with one tail, and composites
/// carrying several tails.
fn map_pool(s: &mut Sampler, tag: SpaceTag, size: usize) -> Vec<PiecewiseHomeo> {
    let mut pool = Vec::with_capacity(size);
    while pool.len() < size {
        let h = match pool.len() % 4 {
            0 => s.block_homeo(tag),
            1 => build_seq_homeo(&s.sequence(tag), &s.sequence(tag)).expect("sequences are valid"),
            2 => {
                let f = s.block_homeo(tag);
                let g = build_seq_homeo(&s.sequence(tag), &s.sequence(tag)).expect("sequences are valid");
                compose(&f, &g).expect("same space")
            }
            _ => {
                let f = build_seq_homeo(&s.sequence(tag), &s.sequence(tag)).expect("sequences are valid");
                let g = build_seq_homeo(&s.sequence(tag), &s.sequence(tag)).expect("sequences are valid");
                compose(&f, &g.inverse()).expect("same space")
            }
        };
        pool.push(h);
    }
    pool
}

/// A random point of `span`; spans too narrow for the sampler's
/// denominators fall back to their left end or midpoint.
fn point_in_span(s: &mut Sampler, tag: SpaceTag, span: &Span) -> Point {
    for _ in 0..8 {
        let Some(c) = s.rational_in(span.lo(), span.hi()) else { continue };
        let p = match tag {
            SpaceTag::Arrow => Point::arrow(c, s.side(tag)),
            SpaceTag::Sorgenfrey => Point::sorgenfrey(c),
        };
        if let Ok(p) = p {
            if span.contains(&p) {
                return p;
            }
        }
    }
    let mid = (span.lo() + span.hi()) / rat(2, 1);
    let c = if s.gen_bool(0.5) { mid } else { span.lo().clone() };
    match tag {
        SpaceTag::Arrow => Point::arrow(c, 1),
        SpaceTag::Sorgenfrey => Point::sorgenfrey(c),
    }
    .expect("inside a span")
}

fn near(p: &Point) -> Vec<Point> {
    [successor(p), predecessor(p), Some(p.clone())].into_iter().flatten().collect()
}

/// 7. Inverse and composition round trips, the side-bit law, order
/// behaviour on pieces, and partition soundness.
fn homeo_algebra() -> Outcome {
    let mut s = Sampler::new(7);
    let mut failures = 0usize;
    let mut first: Option<String> = None;
    let mut fail = |what: String| {
        failures += 1;
        first.get_or_insert(what);
    };
    let mut maps = 0usize;
    for tag in TAGS {
        let pool = map_pool(&mut s, tag, 12);
        for (i, h) in pool.iter().enumerate() {
            maps += 1;
            let inv = h.inverse();
            let other = &pool[(i + 1) % pool.len()];
            let both = compose(h, other).expect("same space");
            for _ in 0..10_000 {
                let p = s.point(tag);
                let q = s.point(tag);
                let hp = match h.eval(&p) {
                    Ok(x) => x,
                    Err(e) => {
                        fail(format!("eval {p}: {e}"));
                        continue;
                    }
                };
                if inv.eval(&hp).ok().as_ref() != Some(&p) || inv.eval(&p).and_then(|x| h.eval(&x)).ok().as_ref() != Some(&p) {
                    fail(format!("inverse round trip at {p}"));
                }
                if both.eval(&p).ok() != other.eval(&hp).ok() {
                    fail(format!("composition at {p}"));
                }
                let holders = h.pieces().iter().filter(|x| x.source().contains(&p)).count()
                    + h.tails().iter().filter(|t| t.region().contains(&p)).count();
                if holders != 1 {
                    fail(format!("{p} is held by {holders} pieces"));
                }
                if let Some(piece) = h.pieces().iter().find(|x| x.source().contains(&p)) {
                    let up = piece.slope() > &Rational::zero();
                    if tag == SpaceTag::Arrow && (hp.side() == p.side()) != up {
                        fail(format!("side bit at {p}"));
                    }
                    if piece.source().contains(&q) {
                        let hq = h.eval(&q).expect("q is in a piece");
                        if (p.cmp(&q) == hp.cmp(&hq)) != up && p != q {
                            fail(format!("order on piece at {p}, {q}"));
                        }
                    }
                }
            }
            for t in h.tails() {
                for k in 0..6 {
                    for piece in t.block(k).iter() {
                        let up = piece.slope() > &Rational::zero();
                        for _ in 0..20 {
                            let p = point_in_span(&mut s, tag, piece.source());
                            let q = point_in_span(&mut s, tag, piece.source());
                            let (hp, hq) = (h.eval(&p), h.eval(&q));
                            let (hp, hq) = match (hp, hq) {
                                (Ok(a), Ok(b)) => (a, b),
                                (a, b) => {
                                    fail(format!("tail eval at {p} or {q}: {a:?} {b:?}"));
                                    continue;
                                }
                            };
                            if hp != piece.apply(&p).expect("same space") {
                                fail(format!("tail block disagrees at {p}"));
                            }
                            if tag == SpaceTag::Arrow && (hp.side() == p.side()) != up {
                                fail(format!("tail side bit at {p}"));
                            }
                            if p != q && (p.cmp(&q) == hp.cmp(&hq)) != up {
                                fail(format!("tail order at {p}, {q}"));
                            }
                        }
                    }
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{maps} maps x 10000 probes, {failures} failures{}", first.map(|f| format!(" (first: {f})")).unwrap_or_default()),
    )
}

/// 8. `h̄(F)` agrees with the pointwise image, and `≈`-equivalent tuples
/// have the same image.
fn induced_map() -> Outcome {
    let mut s = Sampler::new(8);
    let tag = SpaceTag::Arrow;
    let pool = map_pool(&mut s, tag, 40);
    let mut failures = 0usize;
    let mut first: Option<String> = None;
    let mut probes = 0usize;
    for n in 0..1000 {
        let h = &pool[n % pool.len()];
        let inv = h.inverse();
        let m = s.gen_range(1, 4);
        let f = s.union(tag, m);
        let img = match h.image_closed_union(&f) {
            Ok(u) => u,
            Err(e) => {
                failures += 1;
                first.get_or_insert(format!("image of {f:?}: {e}"));
                continue;
            }
        };
        let mut pts: Vec<Point> = Vec::new();
        for c in img.components() {
            pts.extend(near(c.lo()));
            pts.extend(near(c.hi()));
        }
        for c in f.components() {
            for e in [c.lo(), c.hi()] {
                if let Ok(x) = h.eval(e) {
                    pts.extend(near(&x));
                }
            }
        }
        let mut coords: Vec<Rational> = pts.iter().map(|p| p.coord().clone()).collect();
        coords.extend([Rational::zero(), Rational::one()]);
        pts.extend(probe_points(tag, &coords));
        pts.extend((0..200).map(|_| s.point(tag)));
        for p in &pts {
            probes += 1;
            let pre = inv.eval(p).map(|x| f.contains(&x));
            if pre != Ok(img.contains(p)) {
                failures += 1;
                first.get_or_insert(format!("probe {p}"));
            }
        }
    }
    let mut pair_failures = 0usize;
    for n in 0..1000 {
        let h = &pool[n % pool.len()];
        let m = s.gen_range(1, 4);
        let x = s.tuple(tag, 2 * m);
        let u = varrho(&x).expect("even");
        let y = s.equivalent_tuple(&u, m);
        let a = h.image_closed_union(&varrho(&x).expect("even"));
        let b = h.image_closed_union(&varrho(&y).expect("even"));
        if a.is_err() || a != b {
            pair_failures += 1;
        }
    }
    outcome(
        failures == 0 && pair_failures == 0,
        format!(
            "1000 (h,F) with {probes} probes, {failures} mismatches{}; 1000 pairs x≈y, {pair_failures} failures",
            first.map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 canonical-form soundness", canonical_soundness),
        ("2 quotient round trip", quotient_round_trip),
        ("3 finite-set bridge", bridge_round_trip),
        ("4 Vietoris boxes", vietoris_boxes),
        ("5 saturation", saturation),
        ("6 sequence theorem", sequence_theorem),
        ("7 homeomorphism algebra", homeo_algebra),
        ("8 induced hyperspace map", induced_map),
    ];
    // Optional criterion numbers on the command line select a subset.
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.split(' ').next() == Some(o.as_str())) {
            continue;
        }
        let o = run();
        all &= o.pass;
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
