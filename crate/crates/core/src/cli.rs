//! The `zeta-partition` command line.
//!
//! [`run`] takes the argument vector and two writers and returns the process
//! exit code: 0 on success, 1 when a verification finds a mathematical
//! mismatch, 2 for usage and range errors.

use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{
    self, column_telescoping, count_range, zeta_minus_one_with_terms, zeta_row_sum_with,
    DensityReport, MAX_POWERFREE_SCAN,
};
use crate::descriptor::SetDescriptor;
use crate::numeral::{factorial, Natural};
use crate::oracle::{self, CheckStatus, FirstAvailable, MAX_DEPTH};
use crate::partition::{classify_a, classify_b};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SCAN_BLOCK: Natural = 1 << 20;

#[derive(Debug, Parser)]
#[command(
    name = "zeta-partition",
    version,
    about = "Classify naturals into the classes A_k of density zeta(k) - 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqFormat {
    Plain,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityFormat {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    First,
    Last,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print "<x> B<m> A<k>" for each argument.
    Classify {
        #[arg(required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// List the members of a set up to --limit.
    Seq {
        set: String,
        #[arg(long)]
        limit: Natural,
        #[arg(long, value_enum, default_value_t = SeqFormat::Plain)]
        format: SeqFormat,
        #[arg(long)]
        progress: bool,
    },
    /// Print the residue classes of B<m> or B<m>,<k>.
    Residues { set: String },
    /// Empirical densities over [1, --limit] against their targets.
    Density {
        #[arg(required = true)]
        sets: Vec<String>,
        #[arg(long)]
        limit: Natural,
        #[arg(long, value_enum, default_value_t = DensityFormat::Table)]
        format: DensityFormat,
        #[arg(long)]
        progress: bool,
    },
    /// Check the greedy construction against the closed form or the missed set.
    Verify {
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
        /// Upper end of the pointwise comparison (default (depth-1)!).
        #[arg(long)]
        limit: Option<Natural>,
    },
    /// Partial sums of zeta(k) - 1 and the telescoping column sum.
    Identity {
        k: u32,
        /// Number of columns M in the telescoping check (default K).
        #[arg(long)]
        limit: Option<u32>,
        /// Explicit terms before the tail correction of each zeta value.
        #[arg(long)]
        zeta_terms: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Io,
}

impl From<io::Error> for Failure {
    fn from(_: io::Error) -> Self {
        Failure::Io
    }
}

type CmdResult = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify { values } => cmd_classify(&values, out),
        Command::Seq { set, limit, format, progress } => {
            cmd_seq(&set, limit, format, progress, out, err)
        }
        Command::Residues { set } => cmd_residues(&set, out),
        Command::Density { sets, limit, format, progress } => {
            cmd_density(&sets, limit, format, progress, out, err)
        }
        Command::Verify { depth, strategy, limit } => cmd_verify(depth, strategy, limit, out),
        Command::Identity { k, limit, zeta_terms } => cmd_identity(k, limit, zeta_terms, out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "mismatch: {msg}");
            EXIT_MISMATCH
        }
        Err(Failure::Io) => EXIT_USAGE,
    }
}

fn parse_descriptor(s: &str) -> Result<SetDescriptor, Failure> {
    s.parse().or_else(|e: crate::descriptor::DescriptorError| usage(e.to_string()))
}

fn check_scan_limit(set: &SetDescriptor, limit: Natural) -> CmdResult {
    if matches!(set, SetDescriptor::Powerfree(_)) && limit > MAX_POWERFREE_SCAN {
        return usage(format!(
            "{set}: limit {limit} exceeds the supported {MAX_POWERFREE_SCAN}"
        ));
    }
    Ok(())
}

fn cmd_classify(values: &[String], out: &mut dyn Write) -> CmdResult {
    let mut parsed = Vec::with_capacity(values.len());
    for v in values {
        match v.parse::<Natural>() {
            Ok(0) => return usage("0 is not a natural number; inputs start at 1"),
            Ok(x) => parsed.push(x),
            Err(_) => return usage(format!("not a natural number: {v:?}")),
        }
    }
    for x in parsed {
        let class = classify_a(x).expect("nonzero input");
        writeln!(out, "{x} B{} A{}", class.m, class.k)?;
    }
    Ok(())
}

/// Scans `[1, limit]` in blocks, handing each block's members to `sink` in
/// ascending order.
fn scan_blocks(
    set: &SetDescriptor,
    limit: Natural,
    progress: bool,
    err: &mut dyn Write,
    mut sink: impl FnMut(&[Natural]) -> io::Result<()>,
) -> CmdResult {
    use rayon::prelude::*;
    let mut start = 1;
    while start <= limit {
        let end = start.saturating_add(SCAN_BLOCK - 1).min(limit);
        let block: Vec<Natural> = (start..=end)
            .into_par_iter()
            .filter(|&x| set.contains(x))
            .collect();
        sink(&block)?;
        if progress {
            writeln!(err, "{set}: scanned {end}/{limit}")?;
        }
        match end.checked_add(1) {
            Some(next) => start = next,
            None => break,
        }
    }
    Ok(())
}

fn cmd_seq(
    set: &str,
    limit: Natural,
    format: SeqFormat,
    progress: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let set = parse_descriptor(set)?;
    check_scan_limit(&set, limit)?;
    let mut index = 0u64;
    scan_blocks(&set, limit, progress, err, |block| {
        for &x in block {
            index += 1;
            match format {
                SeqFormat::Plain => writeln!(out, "{x}")?,
                SeqFormat::Bfile => writeln!(out, "{index} {x}")?,
            }
        }
        Ok(())
    })
}

fn cmd_residues(set: &str, out: &mut dyn Write) -> CmdResult {
    let selector = match parse_descriptor(set)? {
        SetDescriptor::Partition(s) => s,
        other => return usage(format!("{other} is not a union of residue classes")),
    };
    match selector.residues() {
        Ok(classes) => {
            writeln!(out, "{classes}")?;
            Ok(())
        }
        Err(e) => usage(e.to_string()),
    }
}

/// Ten significant digits, trailing zeros trimmed.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if (-5..10).contains(&magnitude) {
        let decimals = (9 - magnitude).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.9e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific format");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

fn density_report(
    set: SetDescriptor,
    limit: Natural,
    progress: bool,
    err: &mut dyn Write,
) -> Result<DensityReport, Failure> {
    check_scan_limit(&set, limit)?;
    let mut count = 0;
    if progress {
        let mut start = 1;
        while start <= limit {
            let end = start.saturating_add(SCAN_BLOCK - 1).min(limit);
            count += count_range(&set, start..=end);
            writeln!(err, "{set}: scanned {end}/{limit}")?;
            match end.checked_add(1) {
                Some(next) => start = next,
                None => break,
            }
        }
    } else {
        count = count_range(&set, 1..=limit);
    }
    DensityReport::new(set, limit, count).or_else(|e| usage(e.to_string()))
}

fn cmd_density(
    sets: &[String],
    limit: Natural,
    format: DensityFormat,
    progress: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if limit == 0 {
        return usage("density needs --limit >= 1");
    }
    let sets = sets.iter().map(|s| parse_descriptor(s)).collect::<Result<Vec<_>, _>>()?;
    let mut reports = Vec::with_capacity(sets.len());
    for set in sets {
        reports.push(density_report(set, limit, progress, err)?);
    }
    match format {
        DensityFormat::Csv => {
            writeln!(out, "set,N,count,empirical,target,abs_error")?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.set, r.n, r.count, r.empirical, r.target, r.abs_error
                )?;
            }
        }
        DensityFormat::Table => {
            let rows: Vec<[String; 6]> = reports
                .iter()
                .map(|r| {
                    [
                        r.set.to_string(),
                        r.n.to_string(),
                        r.count.to_string(),
                        format_significant(r.empirical),
                        format_significant(r.target),
                        format_significant(r.abs_error),
                    ]
                })
                .collect();
            let header = ["set", "N", "count", "empirical", "target", "abs_error"];
            let mut widths = header.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: [&str; 6]| -> String {
                let mut s = format!("{:<w$}", cells[0], w = widths[0]);
                for (cell, w) in cells[1..].iter().zip(&widths[1..]) {
                    s.push_str(&format!("  {cell:>w$}"));
                }
                s
            };
            writeln!(out, "{}", line(header))?;
            for row in &rows {
                writeln!(out, "{}", line(row.each_ref().map(String::as_str)))?;
            }
            for r in &reports {
                if let Some(m) = r.first_empty_column {
                    writeln!(
                        out,
                        "note: {} at N={}: columns B{m} and beyond have no members yet",
                        r.set, r.n
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(
    depth: u32,
    strategy: StrategyArg,
    limit: Option<Natural>,
    out: &mut dyn Write,
) -> CmdResult {
    let min_depth = match strategy {
        StrategyArg::First => 2,
        StrategyArg::Last => 3,
    };
    if !(min_depth..=MAX_DEPTH).contains(&depth) {
        return usage(format!("--depth {depth} outside {min_depth}..={MAX_DEPTH}"));
    }
    let settled = factorial(depth - 1).expect("depth is bounded");
    match strategy {
        StrategyArg::First => {
            let eq = oracle::oracle_equivalence(depth).or_else(|e| usage(e.to_string()))?;
            if let Some(c) = eq.counterexample {
                let side = if c.in_greedy { "greedy only" } else { "closed form only" };
                return Err(Failure::Mismatch(format!(
                    "B{}: residue {} ({side})",
                    c.level, c.residue
                )));
            }
            let assignment = oracle::greedy_assign(&mut FirstAvailable, depth)
                .or_else(|e| usage(e.to_string()))?;
            let bound = limit.unwrap_or(settled).min(settled);
            for x in 1..=bound {
                let expected = classify_b(x).expect("x >= 1");
                let owner = assignment.owner(x);
                if owner != Some(expected) {
                    return Err(Failure::Mismatch(format!(
                        "{x}: greedy owner {owner:?}, classify_b B{expected}"
                    )));
                }
            }
            writeln!(
                out,
                "ok: greedy first-available equals the closed form for B2..B{depth}; owners of 1..{bound} agree with classification"
            )?;
        }
        StrategyArg::Last => {
            let n = limit.unwrap_or(settled);
            let check = oracle::missed_set_check(n, depth).or_else(|e| usage(e.to_string()))?;
            match check.status {
                CheckStatus::Confirmed => {
                    let listed: Vec<String> = check.missed.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "missed = {}", listed.join(" "))?;
                }
                CheckStatus::Mismatch(points) => {
                    return Err(Failure::Mismatch(format!(
                        "missed-set predicate disagrees at {points:?}"
                    )));
                }
                CheckStatus::Inconclusive(points) => {
                    return usage(format!(
                        "depths {} and {depth} disagree below {n} at {points:?}; increase --depth",
                        depth - 1
                    ));
                }
            }
        }
    }
    Ok(())
}

fn cmd_identity(
    k: u32,
    columns: Option<u32>,
    zeta_terms: Option<u64>,
    out: &mut dyn Write,
) -> CmdResult {
    if k < 2 {
        return usage("identity needs K >= 2");
    }
    let sum = match zeta_terms {
        Some(t) => zeta_row_sum_with(k, |s| zeta_minus_one_with_terms(s, t).map(|e| e.value)),
        None => analysis::zeta_row_sum(k),
    }
    .or_else(|e| usage(e.to_string()))?;
    writeln!(out, "K = {k}")?;
    writeln!(out, "sum_(k=2..K) (zeta(k) - 1) = {sum}")?;
    writeln!(out, "defect |1 - sum| = {:e}", (1.0 - sum).abs())?;

    let m = columns.unwrap_or(k);
    if m < 2 {
        return usage("column check needs M >= 2");
    }
    let telescoped = column_telescoping(m).or_else(|e| usage(e.to_string()))?;
    let expected = BigRational::from_integer(BigInt::from(1))
        - BigRational::new(BigInt::from(1), BigInt::from(m));
    let verdict = if telescoped == expected { "exact" } else { "FAILED" };
    writeln!(
        out,
        "sum_(m=2..M) 1/(m(m-1)) = {telescoped} = 1 - 1/{m} with M = {m}: {verdict}"
    )?;
    if telescoped != expected {
        return Err(Failure::Mismatch("column telescoping".into()));
    }
    Ok(())
}
