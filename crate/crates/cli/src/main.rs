//! `arrowhyp`: JSON in, JSON out. Every input argument is either a path to a
//! JSON file or the JSON text itself; points may also be given bare
//! (`1/3|0`, `1/4`).
//!
//! Exit codes: 0 on success, 1 when the input is well formed but rejected,
//! 2 when it cannot be parsed.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use arrowhyp::homeo::{build_seq_homeo, compose, verify_seq_map, ConvergentSeq, PiecewiseHomeo};
use arrowhyp::hyperspace::{
    canonical_rep, equiv_approx, equiv_sim, finite_to_interval, interval_to_finite, rho_fin, varrho, ClosedUnion,
    DeltaTuple, FiniteSet,
};
use arrowhyp::json::{parse_value, rational, Json};
use arrowhyp::vietoris::{
    box_for_lower, box_for_upper, mem_lower, mem_upper, saturation_check, SaturatedBoxSpec, SaturationForm,
};
use arrowhyp::{compare, predecessor, successor, Error, OpenSetSpec, Point, Result, SpaceTag};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "arrowhyp", version, about = "Exact hyperspaces of the double arrow and the Sorgenfrey line")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "ARROWHYP_SEED", default_value_t = 0)]
    seed: u64,
    /// Space for bare point arguments that could belong to either space.
    #[arg(long, global = true, value_enum)]
    space: Option<Space>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Space {
    Arrow,
    Sorgenfrey,
}

impl From<Space> for SpaceTag {
    fn from(s: Space) -> SpaceTag {
        match s {
            Space::Arrow => SpaceTag::Arrow,
            Space::Sorgenfrey => SpaceTag::Sorgenfrey,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    Union,
    Intersection,
    /// Preimage of a single coordinate, for control runs.
    Coordinate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BridgeFrom {
    Finite,
    Interval,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form of a list of closed intervals.
    Canon { union: String },
    /// Canonical tuple of length 2m representing a union.
    Rep {
        union: String,
        #[arg(long)]
        m: usize,
    },
    /// Union of consecutive pairs of a tuple.
    Varrho { tuple: String },
    /// Whether two tuples give the same union.
    Equiv { x: String, y: String },
    /// Whether two tuples have the same set of entries.
    Simequiv { x: String, y: String },
    /// Two-point sets to one-component unions and back.
    Bridge {
        input: String,
        /// Direction; guessed from the document when omitted.
        #[arg(long, value_enum)]
        from: Option<BridgeFrom>,
    },
    /// Vietoris subbasic membership of a union.
    Member {
        #[arg(long, value_enum)]
        kind: Kind,
        union: String,
        open: String,
    },
    /// Neighbourhood box of a tuple inside the preimage of a subbasic set.
    Box {
        #[arg(long, value_enum)]
        kind: Kind,
        tuple: String,
        open: String,
    },
    /// Randomized saturation check of a quoted box family.
    CheckSaturated {
        #[arg(long, value_enum)]
        form: Form,
        #[arg(long)]
        r: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Coordinate for `--form coordinate`.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Homeomorphism carrying one convergent sequence onto another.
    HomeoBuild {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Image of a point.
    HomeoEval { homeo: String, point: String },
    HomeoInverse { homeo: String },
    /// `second ∘ first`: apply `first`, then `second`.
    HomeoCompose { first: String, second: String },
    /// Image of a union under a homeomorphism.
    HomeoImage { homeo: String, union: String },
    /// Checks that a homeomorphism carries the first N terms of one sequence
    /// onto terms of another and fixes the limits. Builds the map when
    /// `--homeo` is absent.
    SeqMap {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 50)]
        check: usize,
        #[arg(long)]
        homeo: Option<String>,
    },
    Succ { point: String },
    Pred { point: String },
    /// -1, 0 or 1 as the first point is below, equal to or above the second.
    Cmp { p: String, q: String },
}

/// A file's contents if `arg` names a file, `arg` itself otherwise.
fn load(arg: &str) -> Result<Value> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        parse_value(&text)
    } else {
        parse_value(arg)
    }
}

fn load_as<T: Json>(arg: &str) -> Result<T> {
    T::from_json(&load(arg)?)
}

fn load_point(arg: &str, space: Option<Space>) -> Result<Point> {
    let tag = space.map(SpaceTag::from);
    match load(arg) {
        Ok(Value::String(s)) => Point::parse(&s, tag),
        _ => Point::parse(arg, tag),
    }
}

fn optional_point(p: Option<Point>) -> Value {
    p.map(|p| p.to_json()).unwrap_or(Value::Null)
}

fn run(cli: &Cli) -> Result<Value> {
    let space = cli.space;
    Ok(match &cli.command {
        Command::Canon { union } => load_as::<ClosedUnion>(union)?.to_json(),
        Command::Rep { union, m } => canonical_rep(&load_as(union)?, *m)?.to_json(),
        Command::Varrho { tuple } => varrho(&load_as(tuple)?)?.to_json(),
        Command::Equiv { x, y } => json!({ "equiv": equiv_approx(&load_as(x)?, &load_as(y)?)? }),
        Command::Simequiv { x, y } => {
            let (x, y): (DeltaTuple, DeltaTuple) = (load_as(x)?, load_as(y)?);
            json!({ "equiv": equiv_sim(&x, &y)?, "x": rho_fin(&x).to_json(), "y": rho_fin(&y).to_json() })
        }
        Command::Bridge { input, from } => {
            let v = load(input)?;
            let from = from.unwrap_or(if v.get("elements").is_some() { BridgeFrom::Finite } else { BridgeFrom::Interval });
            match from {
                BridgeFrom::Finite => finite_to_interval(&FiniteSet::from_json(&v)?)?.to_json(),
                BridgeFrom::Interval => interval_to_finite(&ClosedUnion::from_json(&v)?)?.to_json(),
            }
        }
        Command::Member { kind, union, open } => {
            let (f, v): (ClosedUnion, OpenSetSpec) = (load_as(union)?, load_as(open)?);
            let member = match kind {
                Kind::Lower => mem_lower(&f, &v)?,
                Kind::Upper => mem_upper(&f, &v)?,
            };
            json!({ "member": member })
        }
        Command::Box { kind, tuple, open } => {
            let (x, v): (DeltaTuple, OpenSetSpec) = (load_as(tuple)?, load_as(open)?);
            match kind {
                Kind::Lower => box_for_lower(&x, &v)?.to_json(),
                Kind::Upper => match v.pieces() {
                    [w] => box_for_upper(&x, w)?.to_json(),
                    ps => return Err(Error::NotSinglePiece(ps.len())),
                },
            }
        }
        Command::CheckSaturated { form, r, m, trials, index } => {
            let r = rational(&Value::String(r.clone()))?;
            let form = match form {
                Form::Union => SaturationForm::UnionPreimage,
                Form::Intersection => SaturationForm::IntersectionPreimage,
                Form::Coordinate => SaturationForm::Coordinate(*index),
            };
            let spec = SaturatedBoxSpec::new(form, r, *m)?;
            saturation_check(&spec, *trials, cli.seed)?.to_json()
        }
        Command::HomeoBuild { from, to } => {
            let (s, t): (ConvergentSeq, ConvergentSeq) = (load_as(from)?, load_as(to)?);
            build_seq_homeo(&s, &t)?.to_json()
        }
        Command::HomeoEval { homeo, point } => {
            let h: PiecewiseHomeo = load_as(homeo)?;
            let p = load_point(point, space.or(Some(tag_space(h.tag()))))?;
            json!({ "point": p.to_json(), "image": h.eval(&p)?.to_json() })
        }
        Command::HomeoInverse { homeo } => load_as::<PiecewiseHomeo>(homeo)?.inverse().to_json(),
        Command::HomeoCompose { first, second } => compose(&load_as(first)?, &load_as(second)?)?.to_json(),
        Command::HomeoImage { homeo, union } => {
            let h: PiecewiseHomeo = load_as(homeo)?;
            h.image_closed_union(&load_as(union)?)?.to_json()
        }
        Command::SeqMap { from, to, check, homeo } => {
            let (s, t): (ConvergentSeq, ConvergentSeq) = (load_as(from)?, load_as(to)?);
            let h = match homeo {
                Some(h) => load_as(h)?,
                None => build_seq_homeo(&s, &t)?,
            };
            let report = verify_seq_map(&h, &s, &t, *check);
            let mut v = report.to_json();
            v["ok"] = Value::Bool(report.ok());
            v
        }
        Command::Succ { point } => {
            let p = load_point(point, space)?;
            json!({ "point": p.to_json(), "successor": optional_point(successor(&p)) })
        }
        Command::Pred { point } => {
            let p = load_point(point, space)?;
            json!({ "point": p.to_json(), "predecessor": optional_point(predecessor(&p)) })
        }
        Command::Cmp { p, q } => {
            let p = load_point(p, space)?;
            let q = load_point(q, space.or(Some(tag_space(p.tag()))))?;
            json!({ "cmp": compare(&p, &q)? as i8 })
        }
    })
}

fn tag_space(tag: SpaceTag) -> Space {
    match tag {
        SpaceTag::Arrow => Space::Arrow,
        SpaceTag::Sorgenfrey => Space::Sorgenfrey,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            let text = match cli.output {
                Output::Json => v.to_string(),
                Output::Pretty => serde_json::to_string_pretty(&v).expect("values serialize"),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 2 } else { 1 })
        }
    }
}
