//! The `phinv` command line front end.
//!
//! Every subcommand produces one [`OutputRecord`]. Records are printed as
//! human-readable text by default, as one JSON object per line with
//! `--json`, or as CSV with `--csv` for the tabular subcommands (`fermat
//! list`, `smooth`); other subcommands fall back to text under `--csv`.
//! Integers are always serialized as decimal strings.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 capacity or
//! unsettled-status error, 1 internal contract failure.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::construction::{construct_preimages, lower_bound_check};
use crate::error::Error;
use crate::fermat::{FermatPrimeTable, FermatStatus};
use crate::inverse::{
    brute_force_inverse, find_with_multiplicity, inverse_totient, PreimageSet, DEFAULT_BUDGET,
};
use crate::metric::{eta_coordinates, rho, MetricDomain};
use crate::smooth::{self, classified_preimages, ReportRow, ThreeSmoothTarget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "phinv", version, about = "Enumerate and count preimages of Euler's totient function")]
pub struct Cli {
    /// One JSON record per line.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// CSV output for tabular subcommands.
    #[arg(long, global = true)]
    csv: bool,

    /// Default output format when neither --json nor --csv is given.
    #[arg(long, global = true, env = "PHINV_FORMAT", value_enum, hide_env_values = true)]
    format: Option<Format>,

    /// Maximum number of totient evaluations for the brute-force oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Witness file ("index divisor" per line) for composite Fermat numbers;
    /// replaces the bundled witnesses.
    #[arg(long, global = true, value_name = "PATH")]
    witnesses: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

fn parse_natural(s: &str) -> Result<BigUint, String> {
    s.parse::<BigUint>()
        .map_err(|_| format!("{s:?} is not a nonnegative decimal integer"))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full preimage set φ⁻¹(m).
    Inverse {
        #[arg(value_parser = parse_natural)]
        m: BigUint,
    },
    /// Multiplicity A(m) = |φ⁻¹(m)|.
    Count {
        #[arg(value_parser = parse_natural)]
        m: BigUint,
    },
    /// Brute-force preimage set from scanning every x ≤ 2m².
    Oracle {
        #[arg(value_parser = parse_natural)]
        m: BigUint,
    },
    /// Preimages of powers of two.
    Pow2 {
        #[command(subcommand)]
        action: Pow2Action,
    },
    /// Fermat prime table.
    Fermat {
        #[command(subcommand)]
        action: FermatAction,
    },
    /// Substitution-scheme preimages of Q_n with the (constructed, exact) pair.
    Construct { n: usize },
    /// Smallest m ≤ LIMIT with exactly K preimages.
    Search {
        #[arg(long, value_name = "K")]
        multiplicity: usize,
        #[arg(long, value_name = "N", value_parser = parse_natural)]
        limit: BigUint,
    },
    /// Preimages of 2^k·3^n with their classification.
    Smooth {
        k: u32,
        n: u32,
        /// Estimate-versus-exact rows for every k' ≤ k, n' ≤ n.
        #[arg(long)]
        report: bool,
    },
    /// Logarithmic cross-ratio metric.
    Metric(MetricArgs),
}

#[derive(Debug, Subcommand)]
enum Pow2Action {
    /// A(2^e).
    Count { e: u64 },
    /// φ⁻¹(2^e) with each element's structure.
    List { e: u64 },
}

#[derive(Debug, Subcommand)]
enum FermatAction {
    /// Status of every Fermat number in the table.
    List {
        /// Only list the Fermat primes strictly below B.
        #[arg(long, value_name = "B", value_parser = parse_natural)]
        below: Option<BigUint>,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
struct MetricArgs {
    #[command(subcommand)]
    from: Option<MetricFrom>,
    h: Option<f64>,
    g: Option<f64>,
    /// Reference constant; both points must lie on the same side of it.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Debug, Subcommand)]
enum MetricFrom {
    /// Coordinates (2^η₂(m), 3^η₃(m)), their distance and A(m).
    FromM {
        #[arg(value_parser = parse_natural)]
        m: BigUint,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Estimate,
    Oracle,
}

/// One machine-readable result.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub provenance: Provenance,
    pub elapsed_ms: u64,
}

struct Outcome {
    command: &'static str,
    inputs: Vec<(&'static str, String)>,
    result: Value,
    provenance: Provenance,
    human: String,
    csv: Option<String>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Witness { .. } => EXIT_DOMAIN,
        Error::Capacity { .. } | Error::Unsettled { .. } => EXIT_CAPACITY,
        Error::Contract(_) => EXIT_INTERNAL,
    }
}

fn dec(n: &BigUint) -> Value {
    Value::String(n.to_str_radix(10))
}

fn dec_list(xs: &[BigUint]) -> Value {
    Value::Array(xs.iter().map(dec).collect())
}

fn braces(xs: &[BigUint]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn set_result(set: &PreimageSet) -> Value {
    json!({
        "target": dec(set.target()),
        "elements": dec_list(set.elements()),
        "count": set.len().to_string(),
        "probable_primes": set.has_probable_primes(),
    })
}

fn table(cli: &Cli) -> Result<FermatPrimeTable, Error> {
    match &cli.witnesses {
        Some(path) => FermatPrimeTable::from_witness_file(path),
        None => Ok(FermatPrimeTable::default()),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let out = match &cli.command {
        Command::Inverse { m } => {
            let set = inverse_totient(m)?;
            Outcome {
                command: "inverse",
                inputs: vec![("m", m.to_string())],
                result: set_result(&set),
                provenance: Provenance::Exact,
                human: format!("φ⁻¹({m}) = {}\nA({m}) = {}", braces(set.elements()), set.len()),
                csv: None,
            }
        }
        Command::Count { m } => {
            let a = inverse_totient(m)?.len();
            Outcome {
                command: "count",
                inputs: vec![("m", m.to_string())],
                result: json!({ "target": dec(m), "multiplicity": a.to_string() }),
                provenance: Provenance::Exact,
                human: format!("A({m}) = {a}"),
                csv: None,
            }
        }
        Command::Oracle { m } => {
            let set = brute_force_inverse(m, cli.budget)?;
            let mut result = set_result(&set);
            result["scan_limit"] = Value::String((BigUint::from(2u32) * m * m).to_string());
            Outcome {
                command: "oracle",
                inputs: vec![("m", m.to_string()), ("budget", cli.budget.to_string())],
                result,
                provenance: Provenance::Oracle,
                human: format!("φ⁻¹({m}) = {} (brute force)\nA({m}) = {}", braces(set.elements()), set.len()),
                csv: None,
            }
        }
        Command::Pow2 { action: Pow2Action::Count { e } } => {
            let c = table(cli)?.count_pow2_preimages(*e)?;
            let method = if c.fermat_primes_below.is_some() { "theorem" } else { "enumeration" };
            let human = match c.fermat_primes_below {
                Some(t) => format!("A(2^{e}) = {} = 2^{t}", c.count),
                None => format!("A(2^{e}) = {}", c.count),
            };
            Outcome {
                command: "pow2 count",
                inputs: vec![("e", e.to_string())],
                result: json!({
                    "exponent": e.to_string(),
                    "count": dec(&c.count),
                    "fermat_primes_below": c.fermat_primes_below.map(|t| t.to_string()),
                    "method": method,
                }),
                provenance: Provenance::Exact,
                human,
                csv: None,
            }
        }
        Command::Pow2 { action: Pow2Action::List { e } } => {
            let t = table(cli)?;
            let set = t.enumerate_pow2_preimages(*e)?;
            let parts = t.pow2_preimages(*e)?;
            let structure: Vec<Value> = parts
                .iter()
                .map(|p| {
                    json!({
                        "value": dec(&p.value),
                        "two_exponent": p.two_exponent.to_string(),
                        "fermat_indices": p.fermat_indices.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut result = set_result(&set);
            result["structure"] = Value::Array(structure);
            let human = parts
                .iter()
                .map(|p| {
                    let fs: Vec<String> = p.fermat_indices.iter().map(|i| format!("F_{i}")).collect();
                    let fs = if fs.is_empty() { String::from("1") } else { fs.join("*") };
                    format!("{}  = 2^{} * {fs}", p.value, p.two_exponent)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Outcome {
                command: "pow2 list",
                inputs: vec![("e", e.to_string())],
                result,
                provenance: Provenance::Exact,
                human: format!("{human}\nA(2^{e}) = {}", set.len()),
                csv: None,
            }
        }
        Command::Fermat { action: FermatAction::List { below } } => {
            let t = table(cli)?;
            match below {
                Some(b) => {
                    let primes = t.fermat_primes_below(b)?;
                    Outcome {
                        command: "fermat list",
                        inputs: vec![("below", b.to_string())],
                        result: json!({ "below": dec(b), "primes": dec_list(&primes) }),
                        provenance: Provenance::Exact,
                        human: format!("Fermat primes below {b}: {}", braces(&primes)),
                        csv: Some(
                            std::iter::once("prime".to_string())
                                .chain(primes.iter().map(|p| p.to_string()))
                                .collect::<Vec<_>>()
                                .join("\n"),
                        ),
                    }
                }
                None => {
                    let rows: Vec<(u64, &str, String)> = t
                        .entries()
                        .iter()
                        .map(|e| match &e.status {
                            FermatStatus::Prime => (e.index, "prime", String::new()),
                            FermatStatus::Composite { witness } => (e.index, "composite", witness.to_string()),
                            FermatStatus::Unknown => (e.index, "unknown", String::new()),
                        })
                        .collect();
                    let entries: Vec<Value> = rows
                        .iter()
                        .map(|(i, s, w)| {
                            let mut v = json!({ "index": i.to_string(), "status": s });
                            if !w.is_empty() {
                                v["witness"] = Value::String(w.clone());
                            }
                            v
                        })
                        .collect();
                    let human = rows
                        .iter()
                        .map(|(i, s, w)| {
                            if w.is_empty() {
                                format!("F_{i}: {s}")
                            } else {
                                format!("F_{i}: {s} (divisor {w})")
                            }
                        })
                        .chain(std::iter::once(format!("settled through F_{}", t.max_settled_index())))
                        .collect::<Vec<_>>()
                        .join("\n");
                    let csv = std::iter::once("index,status,witness".to_string())
                        .chain(rows.iter().map(|(i, s, w)| format!("{i},{s},{w}")))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Outcome {
                        command: "fermat list",
                        inputs: vec![],
                        result: json!({
                            "entries": entries,
                            "max_settled_index": t.max_settled_index().to_string(),
                        }),
                        provenance: Provenance::Exact,
                        human,
                        csv: Some(csv),
                    }
                }
            }
        }
        Command::Construct { n } => {
            let set = construct_preimages(*n)?;
            let check = lower_bound_check(*n)?;
            let exact = check.exact.map(|a| a.to_string());
            let mut result = set_result(&set);
            result["n"] = Value::String(n.to_string());
            result["constructed"] = Value::String(check.constructed.to_string());
            result["exact"] = json!(exact);
            result["bound_holds"] = json!(check.holds());
            Outcome {
                command: "construct",
                inputs: vec![("n", n.to_string())],
                result,
                provenance: Provenance::Exact,
                human: format!(
                    "Q_{n} = {}\nconstructed = {}\nexact = {}\n{}",
                    set.target(),
                    check.constructed,
                    exact.as_deref().unwrap_or("unavailable"),
                    braces(set.elements())
                ),
                csv: None,
            }
        }
        Command::Search { multiplicity, limit } => {
            let found = find_with_multiplicity(*multiplicity, limit)?;
            let human = match &found {
                Some(m) => format!("smallest m <= {limit} with A(m) = {multiplicity}: {m}"),
                None => format!("no m <= {limit} has A(m) = {multiplicity}"),
            };
            Outcome {
                command: "search",
                inputs: vec![("multiplicity", multiplicity.to_string()), ("limit", limit.to_string())],
                result: json!({ "m": found.as_ref().map(dec) }),
                provenance: Provenance::Exact,
                human,
                csv: None,
            }
        }
        Command::Smooth { k, n, report } => {
            let target = ThreeSmoothTarget::new(*k, *n)?;
            let inputs = vec![("k", k.to_string()), ("n", n.to_string())];
            if *report {
                let rows = smooth::report(*k, *n)?;
                let csv = std::iter::once(ReportRow::CSV_HEADER.to_string())
                    .chain(rows.iter().map(ReportRow::to_csv))
                    .collect::<Vec<_>>()
                    .join("\n");
                let human = format!("# {}\n{csv}", smooth::ESTIMATE_NOTE);
                Outcome {
                    command: "smooth report",
                    inputs,
                    result: json!({
                        "note": smooth::ESTIMATE_NOTE,
                        "rows": serde_json::to_value(&rows).expect("serializable"),
                    }),
                    provenance: Provenance::Estimate,
                    human,
                    csv: Some(csv),
                }
            } else {
                let classified = classified_preimages(target)?;
                let extras = |c: &smooth::ClassifiedPreimage| {
                    c.extra_primes
                        .iter()
                        .map(|p| format!("{}:{}:{}", p.prime, p.u, p.v))
                        .collect::<Vec<_>>()
                        .join(";")
                };
                let csv = std::iter::once("t,class,x,y,extra_primes".to_string())
                    .chain(classified.iter().map(|c| format!("{},{},{},{},{}", c.value, c.class, c.x, c.y, extras(c))))
                    .collect::<Vec<_>>()
                    .join("\n");
                let human = std::iter::once(format!("φ⁻¹({}) for m = {target}:", target.value()))
                    .chain(classified.iter().map(|c| {
                        format!("{:>12}  {:<18}  x={} y={}  {}", c.value.to_string(), c.class.to_string(), c.x, c.y, extras(c))
                    }))
                    .collect::<Vec<_>>()
                    .join("\n");
                Outcome {
                    command: "smooth",
                    inputs,
                    result: json!({
                        "target": dec(&target.value()),
                        "count": classified.len().to_string(),
                        "preimages": classified.iter().map(|c| json!({
                            "t": dec(&c.value),
                            "class": c.class.to_string(),
                            "x": c.x.to_string(),
                            "y": c.y.to_string(),
                            "extra_primes": c.extra_primes.iter().map(|p| json!({
                                "p": dec(&p.prime), "u": p.u.to_string(), "v": p.v.to_string(),
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    }),
                    provenance: Provenance::Exact,
                    human,
                    csv: Some(csv),
                }
            }
        }
        Command::Metric(args) => match (&args.from, args.h, args.g) {
            (Some(MetricFrom::FromM { m }), _, _) => {
                let (h, g) = eta_coordinates(m)?;
                let r = rho(h, g, MetricDomain::unit_above())?;
                let a = inverse_totient(m)?.len();
                Outcome {
                    command: "metric from-m",
                    inputs: vec![("m", m.to_string())],
                    result: json!({
                        "h": h.to_string(), "g": g.to_string(), "rho": r.to_string(),
                        "multiplicity": a.to_string(),
                    }),
                    provenance: Provenance::Exact,
                    human: format!("h = {h}, g = {g}, rho = {r:.9}, A({m}) = {a}"),
                    csv: None,
                }
            }
            (None, Some(h), Some(g)) => {
                let domain = MetricDomain::containing(args.c, h)?;
                let r = rho(h, g, domain)?;
                Outcome {
                    command: "metric",
                    inputs: vec![("h", h.to_string()), ("g", g.to_string()), ("c", args.c.to_string())],
                    result: json!({ "rho": r.to_string(), "side": domain.side() }),
                    provenance: Provenance::Exact,
                    human: format!("{r:.9}"),
                    csv: None,
                }
            }
            _ => return Err(Failure::Usage("metric needs <H> <G> or `from-m <M>`".into())),
        },
    };
    Ok(out)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        cli.format.unwrap_or(Format::Human)
    };
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let written = match format {
        Format::Json => {
            let record = OutputRecord {
                command: outcome.command.to_string(),
                inputs: outcome
                    .inputs
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), Value::String(v)))
                    .collect(),
                result: outcome.result,
                provenance: outcome.provenance,
                elapsed_ms,
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("serializable"))
        }
        Format::Csv => writeln!(out, "{}", outcome.csv.as_deref().unwrap_or(&outcome.human)),
        Format::Human => writeln!(out, "{}", outcome.human),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_INTERNAL,
    }
}
