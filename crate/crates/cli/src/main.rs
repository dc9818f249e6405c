//! `tukey` — exact Tukey depth of points and flats, depth histograms,
//! feasibility checks, counting, enumeration and realization.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 property violation or
//! failed construction, 3 degenerate input.

mod checks;
mod document;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tukey_core::{
    affine_depth, convex_depth, count_total, count_with_max_depth, depth_histogram,
    enumerate_valid, format_rational, realize, tukey_depth, validate_point_histogram,
    CandidateHistogram, DepthMode, Error, FlatSpec, RealizationTrace, Result,
};

use document::{result_document, PointSetDocument};

#[derive(Parser)]
#[command(name = "tukey", version, about = "Exact Tukey depth histograms: measure, validate, count, enumerate, realize")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Affine,
    Convex,
}

impl From<Mode> for DepthMode {
    fn from(m: Mode) -> DepthMode {
        match m {
            Mode::Affine => DepthMode::Affine,
            Mode::Convex => DepthMode::Convex,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Depth of one point or one flat of a point-set file
    Depth {
        /// Point-set document (JSON)
        #[arg(long)]
        input: String,
        /// Query point index
        #[arg(long, conflicts_with = "flat")]
        point: Option<usize>,
        /// Comma-separated indices spanning the query flat
        #[arg(long, value_delimiter = ',')]
        flat: Option<Vec<usize>>,
        /// Affine or convex flat depth
        #[arg(long, value_enum, default_value = "affine")]
        mode: Mode,
    },
    /// Depth histogram of all k-flats of a point-set file
    Histogram {
        #[arg(long)]
        input: String,
        /// Flat dimension (0 for points)
        #[arg(long, short, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value = "affine")]
        mode: Mode,
    },
    /// Feasibility of a histogram literal such as "[3,1]"
    Validate {
        histogram: String,
        #[arg(long = "dim", short = 'd', alias = "d")]
        dim: usize,
    },
    /// Number of feasible histograms: total, or with a fixed maximum depth
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long = "dim", short = 'd', alias = "d")]
        dim: u64,
        /// Maximum depth of the deepest point
        #[arg(long)]
        l: Option<u64>,
    },
    /// All feasible histograms of n points, lexicographically
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long = "dim", short = 'd', alias = "d")]
        dim: u64,
    },
    /// Construct a point set realizing a feasible histogram
    Realize {
        histogram: String,
        #[arg(long = "dim", short = 'd', alias = "d")]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the realized point set to this file
        #[arg(long)]
        output: Option<String>,
    },
    /// Run a named property suite, or check one point-set file
    Check {
        /// necessity | removal-invariance | oracle-equivalence |
        /// counting-identities | roundtrip | all
        #[arg(long, conflicts_with = "input")]
        suite: Option<String>,
        #[arg(long)]
        input: Option<String>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Input(_) | Error::RejectionLimit(_) => 1,
        Error::RealizationFailed(_) => 2,
        Error::Degeneracy(_) => 3,
    }
}

fn read_document(path: &str) -> Result<PointSetDocument> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    PointSetDocument::parse(&text)
}

fn parse_histogram_literal(text: &str) -> Result<Vec<u64>> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("histogram literal must be a JSON array: {e}")))?;
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Input("histogram literal must be a JSON array".into()))?;
    arr.iter()
        .map(|v| {
            v.as_u64()
                .ok_or_else(|| Error::Input(format!("histogram entries must be nonnegative integers, got {v}")))
        })
        .collect()
}

fn labeled_entries(entries: &[u64]) -> Value {
    Value::Array(
        entries
            .iter()
            .enumerate()
            .map(|(i, &count)| json!({"depth": i + 1, "count": count}))
            .collect(),
    )
}

fn trace_to_value(trace: &RealizationTrace) -> Value {
    Value::Array(
        trace
            .steps
            .iter()
            .map(|step| {
                json!({
                    "inserted_index": step.inserted_index,
                    "target_depth": step.target_depth,
                    "direction": step.direction.vector().iter().map(format_rational).collect::<Vec<_>>(),
                    "final_position": step.final_position.coords().iter().map(format_rational).collect::<Vec<_>>(),
                    "events": step.events.iter().map(|e| json!({
                        "t": format_rational(&e.t),
                        "crossed": e.crossed,
                        "through_convex_hull": e.through_convex_hull,
                        "depth_before": e.depth_before,
                        "depth_after": e.depth_after,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn run(cli: Cli) -> Result<(Value, bool)> {
    match cli.command {
        Command::Depth { input, point, flat, mode } => {
            let doc = read_document(&input)?;
            let (query_echo, depth) = match (point, flat) {
                (Some(i), None) => (json!({"point": i}), tukey_depth(&doc.set, i)?),
                (None, Some(indices)) => {
                    let flat = FlatSpec::new(indices.clone())?;
                    let depth = match DepthMode::from(mode) {
                        DepthMode::Affine => affine_depth(&doc.set, &flat)?,
                        DepthMode::Convex => convex_depth(&doc.set, &flat)?,
                    };
                    (json!({"flat": indices}), depth)
                }
                _ => {
                    return Err(Error::Input(
                        "pass exactly one of --point or --flat".into(),
                    ))
                }
            };
            let inputs = json!({
                "input": input,
                "query": query_echo,
                "mode": DepthMode::from(mode).to_string(),
                "n": doc.set.len(),
                "dim": doc.set.dim(),
            });
            Ok((result_document("depth", inputs, json!({"depth": depth}), "ok"), true))
        }
        Command::Histogram { input, k, mode } => {
            let doc = read_document(&input)?;
            let h = depth_histogram(&doc.set, k, mode.into())?;
            let inputs = json!({
                "input": input,
                "k": k,
                "mode": DepthMode::from(mode).to_string(),
                "n": doc.set.len(),
                "dim": doc.set.dim(),
            });
            let outputs = json!({
                "entries": h.entries(),
                "labeled": labeled_entries(h.entries()),
                "total": h.total(),
            });
            Ok((result_document("histogram", inputs, outputs, "ok"), true))
        }
        Command::Validate { histogram, dim } => {
            let entries = parse_histogram_literal(&histogram)?;
            let candidate = CandidateHistogram::new(entries.clone(), dim);
            let valid = validate_point_histogram(&candidate)?;
            let inputs = json!({"histogram": entries, "dim": dim});
            Ok((result_document("validate", inputs, json!({"valid": valid}), "ok"), true))
        }
        Command::Count { n, dim, l } => {
            let count = match l {
                Some(l) => count_with_max_depth(n, dim, l)?,
                None => count_total(n, dim)?,
            };
            let inputs = json!({"n": n, "dim": dim, "l": l});
            Ok((
                result_document("count", inputs, json!({"count": count.to_string()}), "ok"),
                true,
            ))
        }
        Command::Enumerate { n, dim } => {
            let all = enumerate_valid(n, dim)?;
            let histograms: Vec<Value> = all
                .iter()
                .map(|h| Value::Array(h.entries().iter().map(|&e| json!(e)).collect()))
                .collect();
            let inputs = json!({"n": n, "dim": dim});
            let outputs = json!({
                "count": all.len().to_string(),
                "histograms": histograms,
            });
            Ok((result_document("enumerate", inputs, outputs, "ok"), true))
        }
        Command::Realize { histogram, dim, seed, output } => {
            let entries = parse_histogram_literal(&histogram)?;
            let candidate = CandidateHistogram::new(entries.clone(), dim);
            let (set, trace) = realize(&candidate, seed)?;
            let measured = depth_histogram(&set, 0, DepthMode::Affine)?;
            let doc = PointSetDocument::new(
                set,
                Some(json!({"seed": seed, "histogram": entries})),
            );
            if let Some(path) = &output {
                fs::write(path, doc.serialize() + "\n")
                    .map_err(|e| Error::Input(format!("cannot write {path}: {e}")))?;
            }
            let inputs = json!({"histogram": entries, "dim": dim, "seed": seed});
            let outputs = json!({
                "measured": measured.entries(),
                "points": doc.to_value(),
                "written_to": output,
                "trace": trace_to_value(&trace),
            });
            Ok((result_document("realize", inputs, outputs, "ok"), true))
        }
        Command::Check { suite, input } => {
            let (inputs, report) = match (suite, input) {
                (Some(name), None) => {
                    (json!({"suite": name}), checks::run_suite(&name)?)
                }
                (None, Some(path)) => {
                    let doc = read_document(&path)?;
                    (json!({"input": path}), checks::check_point_set(&doc.set)?)
                }
                _ => {
                    return Err(Error::Input(
                        "pass exactly one of --suite or --input".into(),
                    ))
                }
            };
            let pass = report.all_pass();
            let outputs = json!({"checks": report.to_value(), "pass": pass});
            let status = if pass { "ok" } else { "property-violation" };
            Ok((result_document("check", inputs, outputs, status), pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((doc, pass)) => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable result"));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            let code = exit_code_for(&err);
            let doc = json!({
                "status": "error",
                "error": err.to_string(),
            });
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("serializable error"));
            ExitCode::from(code)
        }
    }
}
