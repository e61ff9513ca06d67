//! Command-line driver: counting, sequence export, classification, and the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use invseq::enumerate::{count_table_brute_with_limit, CountTable, DEFAULT_COUNT_LIMIT};
use invseq::equivalence::{classify, enumerate_patterns, Level};
use invseq::error::Error;
use invseq::recurrences::{
    rec_count_zeros, rec_table_012_fast, rec_table_210_fast, rec_table_len3,
};
use invseq::verify::{run_suite, SUITES};
use invseq::word::ConsecutivePattern;

#[derive(Parser)]
#[command(name = "invseq", about = "Inversion sequences avoiding consecutive patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Recurrence,
    Fast,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Bfile,
}

#[derive(Args)]
struct CommonOpts {
    /// Pattern as a digit string (comma-separated for letters above 9)
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Brute)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Raise the brute-force size ceiling (default 12)
    #[arg(long)]
    limit: Option<usize>,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long)]
    parallel: Option<usize>,
    /// key=value file supplying defaults for the flags above
    #[arg(long)]
    config: Option<String>,
    /// Include a timestamp in JSON output
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print |I_n(p)|, or |I_{n,k}(p)| with --refine
    Count {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        n: Option<usize>,
        /// Restrict to sequences with last entry k
        #[arg(long)]
        refine: Option<usize>,
        /// Cross-check brute force against the recurrence
        #[arg(long)]
        check: bool,
    },
    /// Print |I_n(p)| for n = 1..n_max
    Sequence {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        n_max: Option<usize>,
        /// First index for b-file output
        #[arg(long, default_value_t = 1)]
        offset: usize,
    },
    /// Partition patterns into generalized Wilf-equivalence classes
    Classify {
        #[command(flatten)]
        common: CommonOpts,
        /// Classify all reduced patterns of this length
        #[arg(long)]
        length: Option<usize>,
        /// Explicit comma-separated pattern list (overrides --length)
        #[arg(long)]
        patterns: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        level: Option<String>,
    },
    /// Run a named verification suite, or "all"
    Verify {
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        timestamp: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Verification(_) => ExitCode::from(1),
                Error::Usage(_) | Error::Limit(_) => ExitCode::from(2),
            }
        }
    }
}

type Result<T> = std::result::Result<T, Error>;

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// key=value defaults; explicit flags win.
fn load_config(path: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{path}:{}: expected key=value", lineno + 1)))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

struct Resolved {
    config: BTreeMap<String, String>,
}

impl Resolved {
    fn new(common: &CommonOpts) -> Result<Self> {
        let config = match &common.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        if let Some(threads) = common.parallel.or_else(|| {
            config
                .get("parallel")
                .and_then(|v| v.parse().ok())
        }) {
            // ignore failure: the pool can only be configured once
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
        Ok(Self { config })
    }

    fn fill<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str) -> Result<Option<T>> {
        if let Some(v) = flag {
            return Ok(Some(v.clone()));
        }
        match self.config.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("bad value for {key} in config: {raw:?}"))),
            None => Ok(None),
        }
    }

    fn require<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str) -> Result<T> {
        self.fill(flag, key)?
            .ok_or_else(|| usage(format!("missing --{key}")))
    }
}

fn timestamp_field(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    })
}

/// Refined table by the requested method; totals-only tables (the 0^r
/// recurrence for r != 3) carry empty rows.
fn build_table(p: &ConsecutivePattern, n_max: usize, method: Method, limit: usize) -> Result<CountTable> {
    match method {
        Method::Brute => count_table_brute_with_limit(p, n_max, limit),
        Method::Recurrence => {
            if p.len() == 3 {
                rec_table_len3(p, n_max)
            } else if p.letters().iter().all(|&l| l == 0) {
                let mut t = CountTable::new(p.to_string(), "recurrence");
                for n in 1..=n_max {
                    t.set_total(n, rec_count_zeros(p.len(), n)?);
                }
                Ok(t)
            } else {
                Err(usage(format!(
                    "method recurrence supports length-3 patterns and 0^r only, not {p}"
                )))
            }
        }
        Method::Fast => match p.to_string().as_str() {
            "012" => rec_table_012_fast(n_max),
            "210" => rec_table_210_fast(n_max),
            _ => Err(usage(format!("method fast supports 012 and 210 only, not {p}"))),
        },
    }
}

fn table_json(t: &CountTable, timestamp: Option<u64>) -> serde_json::Value {
    let totals: Vec<_> = (1..=t.n_max())
        .map(|n| json!({"n": n, "count": t.total(n).to_string()}))
        .collect();
    let mut cells = Vec::new();
    for n in 1..=t.n_max() {
        for k in 0..n {
            let v = t.get(n, k);
            if v > BigUint::ZERO {
                cells.push(json!({"n": n, "k": k, "count": v.to_string()}));
            }
        }
    }
    let mut obj = json!({
        "pattern": t.pattern(),
        "method": t.method(),
        "totals": totals,
        "cells": cells,
    });
    if let Some(ts) = timestamp {
        obj["timestamp"] = json!(ts);
    }
    obj
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count {
            common,
            n,
            refine,
            check,
        } => {
            let resolved = Resolved::new(&common)?;
            let pattern: ConsecutivePattern = resolved.require(&common.pattern, "pattern")?.parse()?;
            let n = resolved.require(&n, "n")?;
            let limit = resolved
                .fill(&common.limit, "limit")?
                .unwrap_or(DEFAULT_COUNT_LIMIT);
            let table = build_table(&pattern, n, common.method, limit)?;
            if check {
                let other = if common.method == Method::Brute {
                    build_table(&pattern, n, Method::Recurrence, limit)?
                } else {
                    build_table(&pattern, n, Method::Brute, limit)?
                };
                for m in 1..=n {
                    if table.total(m) != other.total(m) {
                        return Err(Error::Verification(format!(
                            "brute and recurrence disagree for {pattern} at n = {m}: {} vs {}",
                            table.total(m),
                            other.total(m)
                        )));
                    }
                }
            }
            let value = match refine {
                Some(k) => {
                    if k >= n {
                        BigUint::ZERO
                    } else {
                        table.get(n, k)
                    }
                }
                None => table.total(n),
            };
            println!("{value}");
            Ok(())
        }
        Command::Sequence {
            common,
            n_max,
            offset,
        } => {
            let resolved = Resolved::new(&common)?;
            let pattern: ConsecutivePattern = resolved.require(&common.pattern, "pattern")?.parse()?;
            let n_max = resolved.require(&n_max, "n-max")?;
            let limit = resolved
                .fill(&common.limit, "limit")?
                .unwrap_or(DEFAULT_COUNT_LIMIT);
            let table = build_table(&pattern, n_max, common.method, limit)?;
            match common.format {
                Format::Text => {
                    let mut line = String::new();
                    for n in 1..=n_max {
                        if n > 1 {
                            line.push(' ');
                        }
                        write!(line, "{}", table.total(n)).expect("string write");
                    }
                    println!("{line}");
                }
                Format::Csv => print!("{}", table.to_csv()),
                Format::Bfile => print!("{}", table.to_bfile(offset)),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&table_json(
                        &table,
                        timestamp_field(common.timestamp)
                    ))
                    .expect("serializable")
                ),
            }
            Ok(())
        }
        Command::Classify {
            common,
            length,
            patterns,
            n_max,
            level,
        } => {
            let resolved = Resolved::new(&common)?;
            let level: Level = resolved
                .fill(&level, "level")?
                .unwrap_or_else(|| "wilf".to_string())
                .parse()?;
            let n_max = resolved.require(&n_max, "n-max")?;
            let patterns: Vec<ConsecutivePattern> =
                match resolved.fill(&patterns, "patterns")? {
                    Some(list) => list
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<_>>()?,
                    None => {
                        let r = resolved.require(&length, "length")?;
                        enumerate_patterns(r)?
                    }
                };
            let partition = classify(&patterns, n_max, level)?;
            match common.format {
                Format::Json | Format::Csv | Format::Bfile => {
                    let mut obj =
                        serde_json::to_value(&partition).expect("serializable");
                    if let Some(ts) = timestamp_field(common.timestamp) {
                        obj["timestamp"] = json!(ts);
                    }
                    println!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
                }
                Format::Text => {
                    println!(
                        "{} classes at level {} (n <= {})",
                        partition.classes.len(),
                        partition.level,
                        partition.n_max
                    );
                    for class in &partition.classes {
                        println!("{}", class.join(" "));
                    }
                }
            }
            Ok(())
        }
        Command::Verify {
            suite,
            format,
            timestamp,
        } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                reports.push(run_suite(name)?);
            }
            let passed = reports.iter().all(|r| r.passed);
            match format {
                Format::Text => {
                    for r in &reports {
                        println!("{}: {}", r.suite, if r.passed { "pass" } else { "FAIL" });
                        if let Some(c) = r.first_failure() {
                            println!("  first failure: {} ({} != {})", c.claim, c.lhs, c.rhs);
                        }
                    }
                }
                _ => {
                    let mut obj = json!({"passed": passed, "suites": reports});
                    if let Some(ts) = timestamp_field(timestamp) {
                        obj["timestamp"] = json!(ts);
                    }
                    println!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
                }
            }
            if passed {
                Ok(())
            } else {
                let first = reports
                    .iter()
                    .find_map(|r| r.first_failure())
                    .expect("some suite failed");
                Err(Error::Verification(format!(
                    "{} ({} != {})",
                    first.claim, first.lhs, first.rhs
                )))
            }
        }
    }
}
