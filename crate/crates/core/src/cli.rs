//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 route disagreement or a
//! failed verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{verify_with, VerifyOptions};
use crate::formulas::{closed_form_routes, Engine, FormulaError};
use crate::oracle::{enumerate_tally, OracleConfig, OracleError};
use crate::peakcore::{
    admissible_sets, parse_positions, Count, Group, PeakError, PeakSet, Variant,
};
use crate::store::{self, DEFAULT_CACHE_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "peaktally",
    version,
    about = "Exact peak-set counts for permutations and signed permutations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Oracle worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,

    /// Cache file (default: .peaktally-cache.json).
    #[arg(long, global = true, env = store::CACHE_ENV, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count words of length n with peak set S.
    Count {
        #[command(flatten)]
        variant: VariantArgs,
        /// Peak positions, e.g. "2,5"; empty or omitted means S = {}.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Permit the oracle above its default size caps (hard caps still apply).
        #[arg(long)]
        allow_large: bool,
    },
    /// Counts of every admissible set for 1 <= n <= n-max.
    Table {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        #[arg(long)]
        allow_large: bool,
    },
    /// Binomial-basis polynomial of a peak set.
    Poly {
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Run the full verification battery.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max_sym: u32,
        #[arg(long, default_value_t = 8)]
        n_max_hyp: u32,
        /// Closed forms are checked against the recursion up to this length.
        #[arg(long, default_value_t = 30)]
        closed_n_max: u32,
        /// Print every row, not only failures.
        #[arg(long)]
        rows: bool,
    },
    /// List the admissible peak sets for n.
    Admissible {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, Args)]
pub struct VariantArgs {
    #[arg(long, value_enum, default_value_t = GroupArg::Sym)]
    pub group: GroupArg,
    /// Prepend a zero before computing peaks.
    #[arg(long)]
    pub hat: bool,
}

impl VariantArgs {
    pub fn variant(&self) -> Variant {
        let group = match self.group {
            GroupArg::Sym => Group::Symmetric,
            GroupArg::Hyp => Group::Hyperoctahedral,
        };
        Variant::new(group, self.hat)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Sym,
    Hyp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Oracle,
    Closed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        let code = match e {
            FormulaError::Discrepancy(_)
            | FormulaError::InexactDivision { .. }
            | FormulaError::NegativeCount { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        usage(e.to_string())
    }
}

impl From<PeakError> for Failure {
    fn from(e: PeakError) -> Self {
        usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        usage(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Positions as given; consecutive entries are allowed here and handled by
/// each command.
fn parse_set_arg(text: &str) -> Result<(Vec<u32>, Option<PeakSet>), Failure> {
    let positions = parse_positions(text).map_err(|e| usage(format!("--set: {e}")))?;
    match PeakSet::new(&positions) {
        Ok(set) => Ok((positions, Some(set))),
        Err(PeakError::Consecutive(..)) => Ok((positions, None)),
        Err(e) => Err(usage(format!("--set: {e}"))),
    }
}

fn require_n(flag: &str, n: u32) -> Result<(), Failure> {
    if n < 1 {
        return Err(usage(format!("{flag} must be at least 1")));
    }
    Ok(())
}

struct CacheSession {
    path: Option<PathBuf>,
    writable: bool,
}

impl CacheSession {
    fn open(cli: &Cli, engine: &Engine, err: Out) -> Self {
        if cli.no_cache {
            return CacheSession {
                path: None,
                writable: false,
            };
        }
        let path = cli
            .cache
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE));
        let writable = match store::load_into(&path, engine) {
            Ok(_) => true,
            Err(e) => {
                let _ = writeln!(
                    err,
                    "warning: ignoring cache {}: {e}; it will not be overwritten",
                    path.display()
                );
                false
            }
        };
        CacheSession {
            path: Some(path),
            writable,
        }
    }

    fn close(self, engine: &Engine, err: Out) {
        if let (Some(path), true) = (self.path, self.writable) {
            if let Err(e) = store::save_cache(&path, engine) {
                let _ = writeln!(err, "warning: could not write cache: {e}");
            }
        }
    }
}

fn oracle_config(cli: &Cli, allow_large: bool) -> OracleConfig {
    let threads = cli.threads.map(|t| t as usize);
    if allow_large {
        OracleConfig::unlocked(threads)
    } else {
        OracleConfig {
            threads,
            ..OracleConfig::default()
        }
    }
}

fn warn_large(allow_large: bool, method: Method, variant: Variant, n: u32, err: Out) {
    let default_cap = OracleConfig::default().cap(variant);
    if allow_large && matches!(method, Method::Oracle | Method::All) && n > default_cap {
        let _ = writeln!(
            err,
            "warning: {variant} enumeration at n = {n} is above the default cap of {default_cap} and may take a long time"
        );
    }
}

fn execute(cli: &Cli, out: Out, err: Out) -> Result<i32, Failure> {
    match &cli.command {
        Command::Count {
            variant,
            set,
            n,
            method,
            allow_large,
        } => {
            require_n("--n", *n)?;
            let (positions, set) = parse_set_arg(set)?;
            warn_large(*allow_large, *method, variant.variant(), *n, err);
            let engine = Engine::new();
            let session = CacheSession::open(cli, &engine, err);
            let result = cmd_count(
                cli,
                &engine,
                variant.variant(),
                &positions,
                set,
                *n,
                *method,
                oracle_config(cli, *allow_large),
                out,
            );
            session.close(&engine, err);
            result
        }
        Command::Table {
            variant,
            n_max,
            method,
            allow_large,
        } => {
            require_n("--n-max", *n_max)?;
            if *n_max > 64 {
                return Err(usage("--n-max must be at most 64"));
            }
            warn_large(*allow_large, *method, variant.variant(), *n_max, err);
            let engine = Engine::new();
            let session = CacheSession::open(cli, &engine, err);
            let result = cmd_table(
                cli,
                &engine,
                variant.variant(),
                *n_max,
                *method,
                oracle_config(cli, *allow_large),
                out,
            );
            session.close(&engine, err);
            result
        }
        Command::Poly { set } => {
            let (positions, set) = parse_set_arg(set)?;
            let engine = Engine::new();
            let session = CacheSession::open(cli, &engine, err);
            let result = cmd_poly(cli, &engine, &positions, set, out);
            session.close(&engine, err);
            result
        }
        Command::Verify {
            n_max_sym,
            n_max_hyp,
            closed_n_max,
            rows,
        } => {
            let config = oracle_config(cli, true);
            for (flag, value, cap) in [
                ("--n-max-sym", *n_max_sym, config.max_n_sym),
                ("--n-max-hyp", *n_max_hyp, config.max_n_hyp),
            ] {
                if value > cap {
                    return Err(usage(format!("{flag} must be at most {cap}")));
                }
            }
            if *closed_n_max > 64 {
                return Err(usage("--closed-n-max must be at most 64"));
            }
            let options = VerifyOptions {
                n_max_sym: *n_max_sym,
                n_max_hyp: *n_max_hyp,
                closed_form_n_max: *closed_n_max,
                oracle: config,
                ..VerifyOptions::default()
            };
            // fresh engine: cached values are never trusted here
            let report = verify_with(&Engine::new(), &options).map_err(|e| usage(e.to_string()))?;
            match cli.format {
                Format::Text => write!(out, "{}", report.render_text(*rows))?,
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["check", "params", "lhs", "rhs", "pass"])?;
                    for r in &report.records {
                        w.write_record([
                            r.check,
                            &r.params.to_string(),
                            &r.lhs,
                            &r.rhs,
                            if r.pass { "true" } else { "false" },
                        ])?;
                    }
                    w.flush()?;
                }
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Admissible { variant, n } => {
            require_n("--n", *n)?;
            let variant = variant.variant();
            let sets = admissible_sets(*n, variant)?;
            match cli.format {
                Format::Text => {
                    writeln!(out, "{} admissible sets for {variant}, n = {n}", sets.len())?;
                    for s in &sets {
                        writeln!(out, "{{{s}}}")?;
                    }
                }
                Format::Json => {
                    let list: Vec<Vec<u32>> = sets.iter().map(|s| s.positions()).collect();
                    writeln!(
                        out,
                        "{}",
                        json!({ "variant": variant.token(), "n": n, "count": sets.len(), "sets": list })
                    )?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["set"])?;
                    for s in &sets {
                        w.write_record([s.to_string()])?;
                    }
                    w.flush()?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

struct RouteRow {
    method: String,
    value: Option<String>,
    note: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    cli: &Cli,
    engine: &Engine,
    variant: Variant,
    positions: &[u32],
    set: Option<PeakSet>,
    n: u32,
    method: Method,
    config: OracleConfig,
    out: Out,
) -> Result<i32, Failure> {
    let shown_set = positions
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let Some(set) = set else {
        // consecutive positions can never both be peaks
        return emit_count(
            cli,
            variant,
            positions,
            &shown_set,
            n,
            &Count::zero(),
            &[],
            true,
            out,
        );
    };

    let mut rows: Vec<RouteRow> = Vec::new();
    let want = |m: Method| method == m || method == Method::All;

    if want(Method::Formula) {
        let value = engine.count(variant, set, n)?;
        rows.push(RouteRow {
            method: "recursion".into(),
            value: Some(value.to_string()),
            note: None,
        });
    }
    if want(Method::Oracle) {
        if n <= config.cap(variant) {
            let table = enumerate_tally(variant, n, &config)?;
            rows.push(RouteRow {
                method: "oracle".into(),
                value: Some(table.get(set).to_string()),
                note: None,
            });
        } else if method == Method::Oracle {
            return Err(oracle_refusal(variant, n, &config));
        } else {
            rows.push(RouteRow {
                method: "oracle".into(),
                value: None,
                note: Some(format!(
                    "skipped: n exceeds the oracle cap of {}",
                    config.cap(variant)
                )),
            });
        }
    }
    if want(Method::Closed) {
        let routes = closed_form_routes(engine, variant, set, n)?;
        if routes.is_empty() && method == Method::Closed {
            return Err(usage(format!(
                "no closed form is registered for {variant} with S={{{set}}}"
            )));
        }
        for r in routes {
            rows.push(RouteRow {
                method: format!("closed {}", r.name),
                value: Some(r.value.to_string()),
                note: None,
            });
        }
    }

    let values: Vec<&String> = rows.iter().filter_map(|r| r.value.as_ref()).collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let primary: Count = values[0].parse().unwrap_or_default();
    let code = emit_count(
        cli, variant, positions, &shown_set, n, &primary, &rows, agree, out,
    )?;
    Ok(if agree { code } else { EXIT_FAILURE })
}

fn oracle_refusal(variant: Variant, n: u32, config: &OracleConfig) -> Failure {
    let unlocked = OracleConfig::unlocked(None).cap(variant);
    if n > unlocked {
        usage(format!(
            "oracle refused: {variant} at n = {n} is beyond the hard cap of {unlocked}"
        ))
    } else {
        usage(format!(
            "oracle refused: {variant} at n = {n} exceeds the default cap of {}; pass --allow-large",
            config.cap(variant)
        ))
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_count(
    cli: &Cli,
    variant: Variant,
    positions: &[u32],
    shown_set: &str,
    n: u32,
    count: &Count,
    rows: &[RouteRow],
    agree: bool,
    out: Out,
) -> Result<i32, Failure> {
    let breakdown = rows.len() > 1
        || rows
            .iter()
            .any(|r| r.method != "recursion" && r.method != "oracle");
    match cli.format {
        Format::Text => {
            if breakdown {
                writeln!(out, "{variant} S={{{shown_set}}} n={n}")?;
                for r in rows {
                    let v = r.value.as_deref().unwrap_or("-");
                    let note = r
                        .note
                        .as_deref()
                        .map(|x| format!("  ({x})"))
                        .unwrap_or_default();
                    writeln!(out, "  {:<28} {v}{note}", r.method)?;
                }
                if agree {
                    writeln!(out, "agree: {count}")?;
                } else {
                    writeln!(out, "DISAGREE: routes give different values")?;
                }
            } else {
                writeln!(out, "{count}")?;
            }
        }
        Format::Json => {
            let mut doc = json!({
                "variant": variant.token(),
                "set": positions,
                "n": n,
                "count": count.to_string(),
            });
            if breakdown {
                let routes: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({ "method": r.method, "count": r.value, "note": r.note }))
                    .collect();
                doc["routes"] = Value::from(routes);
                doc["agree"] = Value::from(agree);
            }
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["variant", "set", "n", "method", "count"])?;
            if rows.is_empty() {
                w.write_record([
                    variant.token(),
                    shown_set,
                    &n.to_string(),
                    "",
                    &count.to_string(),
                ])?;
            }
            for r in rows {
                w.write_record([
                    variant.token(),
                    shown_set,
                    &n.to_string(),
                    &r.method,
                    r.value.as_deref().unwrap_or(""),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(
    cli: &Cli,
    engine: &Engine,
    variant: Variant,
    n_max: u32,
    method: Method,
    config: OracleConfig,
    out: Out,
) -> Result<i32, Failure> {
    if matches!(method, Method::Closed) {
        return Err(usage("table supports --method formula, oracle or all"));
    }
    let use_oracle = matches!(method, Method::Oracle | Method::All);
    if use_oracle && n_max > config.cap(variant) {
        return Err(oracle_refusal(variant, n_max, &config));
    }

    let mut rows: Vec<(u32, PeakSet, Count)> = Vec::new();
    let mut disagreements = Vec::new();
    for n in 1..=n_max {
        let table = if use_oracle {
            Some(enumerate_tally(variant, n, &config)?)
        } else {
            None
        };
        for set in admissible_sets(n, variant)? {
            let count = match (&table, method) {
                (Some(t), Method::Oracle) => t.get(set),
                (Some(t), _) => {
                    let f = engine.count(variant, set, n)?;
                    if f != t.get(set) {
                        disagreements.push(format!(
                            "n={n} S={{{set}}}: recursion {f} vs oracle {}",
                            t.get(set)
                        ));
                    }
                    f
                }
                (None, _) => engine.count(variant, set, n)?,
            };
            rows.push((n, set, count));
        }
    }

    match cli.format {
        Format::Text => {
            writeln!(out, "{:>3}  {:<24} count", "n", "set")?;
            for (n, set, count) in &rows {
                writeln!(out, "{n:>3}  {:<24} {count}", format!("{{{set}}}"))?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(n, set, count)| {
                    json!({ "n": n, "set": set.positions(), "count": count.to_string() })
                })
                .collect();
            writeln!(
                out,
                "{}",
                json!({ "variant": variant.token(), "rows": list })
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "set", "count"])?;
            for (n, set, count) in &rows {
                w.write_record([n.to_string(), set.to_string(), count.to_string()])?;
            }
            w.flush()?;
        }
    }
    if disagreements.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Failure {
            code: EXIT_FAILURE,
            message: format!(
                "recursion and oracle disagree:\n{}",
                disagreements.join("\n")
            ),
        })
    }
}

fn cmd_poly(
    cli: &Cli,
    engine: &Engine,
    positions: &[u32],
    set: Option<PeakSet>,
    out: Out,
) -> Result<i32, Failure> {
    let poly = match set {
        Some(s) => engine.poly(s),
        None => engine.poly_of_positions(positions)?,
    };
    let note = if set.is_none() {
        Some("consecutive positions cannot both be peaks")
    } else if positions.first() == Some(&1) {
        Some("position 1 is never a peak without a prepended zero")
    } else {
        None
    };
    let start = positions.last().map_or(1, |&m| m + 1) as i64;
    let samples: Vec<(i64, String)> = (start..start + 6)
        .map(|n| (n, poly.eval(n).to_string()))
        .collect();
    let shown_set = positions
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",");

    match cli.format {
        Format::Text => {
            writeln!(out, "{poly}")?;
            match poly.degree() {
                Some(d) => writeln!(out, "degree: {d}")?,
                None => writeln!(out, "degree: none (zero polynomial)")?,
            }
            if let Some(note) = note {
                writeln!(out, "note: {note}")?;
            }
            for (n, v) in &samples {
                writeln!(out, "  p({n}) = {v}")?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = samples
                .iter()
                .map(|(n, v)| json!({ "n": n, "value": v }))
                .collect();
            writeln!(
                out,
                "{}",
                json!({
                    "set": positions,
                    "poly": poly.to_string(),
                    "coefficients": poly.to_decimal_strings(),
                    "degree": poly.degree(),
                    "note": note,
                    "samples": list,
                })
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["set", "n", "value"])?;
            for (n, v) in &samples {
                w.write_record([shown_set.as_str(), &n.to_string(), v])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}
