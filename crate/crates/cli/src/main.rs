//! `permcensus`: count invertible 2x2 matrices over Z/nZ by permanent.

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use output::{num, nums, Format, Provenance, Record, Table};
use permcensus_core::census::enumerate_census;
use permcensus_core::closedform::{g_count, gcd_class_representative, spectrum};
use permcensus_core::modarith::reduce;
use permcensus_core::verify::{run_suites, Suite};
use permcensus_core::{CensusConfig, Error, DEFAULT_CAP};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_OVERFLOW: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "permcensus", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..), global = true)]
    jobs: u16,
    /// Largest modulus that may be enumerated.
    #[arg(long, env = "PERMCENSUS_CAP", default_value_t = DEFAULT_CAP,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of invertible matrices with permanent congruent to x.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        x: i128,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
    },
    /// Full per-residue table from exhaustive enumeration.
    Census {
        #[arg(long)]
        n: u64,
    },
    /// Values of g_n over the gcd-classes of Z/nZ.
    Spectrum {
        #[arg(long)]
        n: u64,
    },
    /// Run identity and bijection suites over every modulus up to --max-n.
    Verify {
        #[arg(long, default_value_t = 20)]
        max_n: u64,
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "all")]
        suites: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Oracle,
    Both,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Oracle => "oracle",
            Method::Both => "both",
        }
    }
}

/// A finished record plus whether every check it reports passed.
struct Outcome {
    record: Record,
    ok: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Overflow => EXIT_OVERFLOW,
        _ => EXIT_INVALID,
    }
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cmd_count(n: u64, x: i128, method: Method, config: &CensusConfig) -> Result<Outcome, Error> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let residue = reduce(x, n);
    let mut results = Map::new();
    let mut ok = true;
    let closed = match method {
        Method::Closed | Method::Both => Some(g_count(n, x)?),
        Method::Oracle => None,
    };
    let table = match method {
        Method::Oracle | Method::Both => Some(enumerate_census(n, config)?),
        Method::Closed => None,
    };
    let oracle = table.as_ref().map(|t| (t.g(x), t.f(x), t.d(x)));

    let provenance = match (closed, oracle) {
        (Some(g), None) => {
            results.insert("g".into(), num(g));
            Provenance::ClosedForm
        }
        (None, Some((g, f, d))) => {
            results.insert("g".into(), num(g));
            results.insert("f".into(), num(f));
            results.insert("d".into(), num(d));
            Provenance::Enumeration
        }
        (Some(closed_g), Some((g, f, d))) => {
            if closed_g == g as u128 {
                results.insert("g".into(), num(g));
            } else {
                ok = false;
                results.insert("g_closed_form".into(), num(closed_g));
                results.insert("g_enumeration".into(), num(g));
            }
            results.insert("f".into(), num(f));
            results.insert("d".into(), num(d));
            results.insert("agree".into(), Value::Bool(ok));
            Provenance::Both
        }
        (None, None) => unreachable!("every method selects a source"),
    };
    results.insert(
        "gcd_class".into(),
        num(gcd_class_representative(n, x)?),
    );

    let cell = |k: &str| match results.get(k) {
        Some(Value::String(s)) => s.clone(),
        _ => String::new(),
    };
    let g_cell = if ok {
        cell("g")
    } else {
        format!("{}|{}", cell("g_closed_form"), cell("g_enumeration"))
    };
    let table = Table {
        header: vec!["n", "x", "method", "provenance", "g", "f", "d"],
        rows: vec![vec![
            n.to_string(),
            residue.to_string(),
            method.as_str().into(),
            provenance.as_str().into(),
            g_cell,
            cell("f"),
            cell("d"),
        ]],
    };
    Ok(Outcome {
        record: Record {
            query: "count",
            params: params(&[
                ("n", num(n)),
                ("x", num(x)),
                ("x_reduced", num(residue)),
                ("method", Value::from(method.as_str())),
            ]),
            results,
            provenance,
            table,
        },
        ok,
    })
}

fn cmd_census(n: u64, config: &CensusConfig) -> Result<Outcome, Error> {
    let t = enumerate_census(n, config)?;
    let mut results = Map::new();
    results.insert("f_counts".into(), nums(&t.f_counts));
    results.insert("d_counts".into(), nums(&t.d_counts));
    results.insert("g_counts".into(), nums(&t.g_counts));
    results.insert("unit_total".into(), num(t.unit_total));
    let rows = (0..n as usize)
        .map(|x| {
            vec![
                n.to_string(),
                x.to_string(),
                t.f_counts[x].to_string(),
                t.d_counts[x].to_string(),
                t.g_counts[x].to_string(),
                t.unit_total.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        ok: t.is_consistent(),
        record: Record {
            query: "census",
            params: params(&[("n", num(n)), ("cap", num(config.cap))]),
            results,
            provenance: Provenance::Enumeration,
            table: Table {
                header: vec!["n", "x", "f_count", "d_count", "g_count", "unit_total"],
                rows,
            },
        },
    })
}

fn cmd_spectrum(n: u64) -> Result<Outcome, Error> {
    let s = spectrum(n)?;
    let classes = s
        .classes
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("representative".into(), num(c.representative));
            m.insert("count".into(), num(c.count));
            Value::Object(m)
        })
        .collect();
    let mut results = Map::new();
    results.insert("classes".into(), Value::Array(classes));
    results.insert("distinct_class_count".into(), num(s.distinct_class_count));
    results.insert("distinct_value_count".into(), num(s.distinct_value_count));
    results.insert("distinct_values".into(), nums(s.distinct_values()));
    let rows = s
        .classes
        .iter()
        .map(|c| {
            vec![
                n.to_string(),
                c.representative.to_string(),
                c.count.to_string(),
                s.distinct_class_count.to_string(),
                s.distinct_value_count.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        ok: true,
        record: Record {
            query: "spectrum",
            params: params(&[("n", num(n))]),
            results,
            provenance: Provenance::ClosedForm,
            table: Table {
                header: vec![
                    "n",
                    "representative",
                    "count",
                    "distinct_class_count",
                    "distinct_value_count",
                ],
                rows,
            },
        },
    })
}

fn cmd_verify(max_n: u64, suites: &str, config: &CensusConfig) -> Result<Outcome, Error> {
    let suites = Suite::parse_list(suites)?;
    let outcomes = run_suites(&suites, max_n, config)?;
    let ok = outcomes.iter().all(|o| o.passed());
    let entries = outcomes
        .iter()
        .map(|o| {
            let mut m = Map::new();
            m.insert("suite".into(), Value::from(o.suite.name()));
            m.insert("passed".into(), Value::Bool(o.passed()));
            m.insert("checks".into(), num(o.checks));
            m.insert(
                "first_failure".into(),
                o.first_failure.clone().map_or(Value::Null, Value::String),
            );
            Value::Object(m)
        })
        .collect();
    let mut results = Map::new();
    results.insert("suites".into(), Value::Array(entries));
    results.insert("all_passed".into(), Value::Bool(ok));
    let provenance = if suites.iter().any(|s| s.needs_oracle()) {
        Provenance::Both
    } else {
        Provenance::ClosedForm
    };
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.suite.name().to_string(),
                max_n.to_string(),
                o.passed().to_string(),
                o.checks.to_string(),
                o.first_failure.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Outcome {
        ok,
        record: Record {
            query: "verify",
            params: params(&[
                ("max_n", num(max_n)),
                (
                    "suites",
                    Value::Array(suites.iter().map(|s| Value::from(s.name())).collect()),
                ),
                ("cap", num(config.cap)),
            ]),
            results,
            provenance,
            table: Table {
                header: vec!["suite", "max_n", "passed", "checks", "first_failure"],
                rows,
            },
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = CensusConfig {
        cap: cli.global.cap,
        jobs: cli.global.jobs as usize,
    };
    let outcome = match &cli.command {
        Command::Count { n, x, method } => cmd_count(*n, *x, *method, &config),
        Command::Census { n } => cmd_census(*n, &config),
        Command::Spectrum { n } => cmd_spectrum(*n),
        Command::Verify { max_n, suites } => cmd_verify(*max_n, suites, &config),
    };
    match outcome {
        Ok(Outcome { record, ok }) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = record.emit(cli.global.format, &mut stdout).and_then(|_| stdout.flush()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                if let Some(Value::Array(suites)) = record.results.get("suites") {
                    for s in suites {
                        if let Some(Value::String(f)) = s.get("first_failure") {
                            eprintln!("failure: {} {f}", s["suite"].as_str().unwrap_or(""));
                        }
                    }
                } else {
                    eprintln!("failure: closed form and enumeration disagree");
                }
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
