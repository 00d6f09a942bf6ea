//! Command-line front end: `solve`, `sweep` and `verify`.

pub mod io;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analytic::{self, SolveResult};
use crate::error::Error;
use crate::evolve;
use crate::geom::TerminalTriangle;
use crate::network::default_penalty;
use crate::oracle;

use io::{fmt_real, ProblemSpec, SolveDocument};

/// Accepted band for `j_oracle − j_analytic`.
pub const GAP_LO: f64 = -1e-6;
pub const GAP_HI: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Geometry(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Gap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Geometry(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Gap(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::InvalidTriangle(_) | Error::DegenerateGeometry(_) => CliError::Geometry(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bsn", version, about = "Budgeted Steiner networks over three terminals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal network for one budget.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the budget in the problem file.
        #[arg(long, value_parser = plain_decimal)]
        budget: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        image: Option<PathBuf>,
    },
    /// J(L) table over a budget range, thresholds included.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = plain_decimal, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, value_parser = plain_decimal, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        curve_image: Option<PathBuf>,
    },
    /// Compares the exact solution with the numerical search.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = decimal_list)]
        budgets: DecimalList,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone)]
struct DecimalList(Vec<f64>);

/// Digits with an optional sign and decimal point; no exponents or names.
fn plain_decimal(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let body = t.strip_prefix(['+', '-']).unwrap_or(t);
    let digits = body.chars().filter(|c| c.is_ascii_digit()).count();
    let ok = digits > 0 && body.chars().all(|c| c.is_ascii_digit() || c == '.') && body.matches('.').count() <= 1;
    if !ok {
        return Err(format!("`{s}` is not a plain decimal number"));
    }
    t.parse().map_err(|e| format!("`{s}`: {e}"))
}

fn decimal_list(s: &str) -> Result<DecimalList, String> {
    let v = s.split(',').map(plain_decimal).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty budget list".into());
    }
    Ok(DecimalList(v))
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Tables go to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve { spec, budget, out, image } => cmd_solve(&spec, budget, &out, image.as_deref()),
        Command::Sweep { spec, from, to, samples, out, curve_image } => {
            cmd_sweep(&spec, from, to, samples, &out, curve_image.as_deref())
        }
        Command::Verify { spec, budgets, seed } => cmd_verify(&spec, &budgets.0, seed, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(spec: &Path) -> Result<(ProblemSpec, TerminalTriangle, f64), CliError> {
    let p = ProblemSpec::read(spec)?;
    let t = p.triangle()?;
    let penalty = p.penalty.unwrap_or_else(|| default_penalty(&t));
    Ok((p, t, penalty))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_solve(spec: &Path, budget: Option<f64>, out: &Path, image: Option<&Path>) -> Result<(), CliError> {
    let (p, t, penalty) = load(spec)?;
    let budget = budget
        .or(p.budget)
        .ok_or_else(|| CliError::Usage("no budget given on the command line or in the problem file".into()))?;
    if budget <= 0.0 {
        return Err(CliError::Usage(format!("budget must be positive, got {budget}")));
    }
    let r = analytic::solve_with_penalty(&t, budget, penalty)?;
    write_file(out, &SolveDocument::new(&r, penalty).to_json())?;
    if let Some(path) = image {
        write_file(path, &svg::network_svg(&r.network))?;
    }
    Ok(())
}

pub fn cmd_sweep(
    spec: &Path,
    from: f64,
    to: f64,
    samples: usize,
    out: &Path,
    curve_image: Option<&Path>,
) -> Result<(), CliError> {
    if from >= to {
        return Err(CliError::Usage(format!("empty budget range: --from {from} --to {to}")));
    }
    if from <= 0.0 {
        return Err(CliError::Usage(format!("budgets must be positive, got --from {from}")));
    }
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    let (_, t, penalty) = load(spec)?;
    let trace = evolve::sweep_with_penalty(&t, from, to, samples, penalty)?;
    let mut buf = Vec::new();
    io::write_sweep_csv(&mut buf, &trace.samples)?;
    write_file(out, &String::from_utf8(buf).expect("table is ASCII"))?;
    if let Some(path) = curve_image {
        write_file(path, &svg::curve_svg(&trace.samples, &trace.thresholds, penalty))?;
    }
    Ok(())
}

/// One row of the verification table.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub budget: f64,
    pub analytic: SolveResult,
    pub oracle: oracle::OracleResult,
}

impl Comparison {
    pub fn gap(&self) -> f64 {
        self.oracle.j - self.analytic.objective.j
    }

    pub fn within_band(&self) -> bool {
        let g = self.gap();
        (GAP_LO..=GAP_HI).contains(&g)
    }

    /// Same number of anchors and edges once degenerate anchors are removed.
    pub fn topology_agrees(&self) -> bool {
        let a = &self.analytic.network;
        let o = &self.oracle.best;
        a.anchor_count() == o.anchor_count() && a.edges().len() == o.edges().len()
    }
}

pub fn compare(t: &TerminalTriangle, budget: f64, seed: u64, penalty: f64) -> Result<Comparison, CliError> {
    let analytic = analytic::solve_with_penalty(t, budget, penalty)?;
    let oracle = oracle::solve_with_penalty(t, budget, seed, penalty);
    Ok(Comparison { budget, analytic, oracle })
}

pub fn cmd_verify(spec: &Path, budgets: &[f64], seed: u64, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Some(b) = budgets.iter().find(|b| **b <= 0.0) {
        return Err(CliError::Usage(format!("budgets must be positive, got {b}")));
    }
    let (_, t, penalty) = load(spec)?;
    let rows = budgets.iter().map(|&b| compare(&t, b, seed, penalty)).collect::<Result<Vec<_>, _>>()?;

    let io = |e: std::io::Error| CliError::Usage(format!("cannot write table: {e}"));
    writeln!(stdout, "budget,phase,j_analytic,j_oracle,gap,oracle_topology,topology_agrees,ok").map_err(io)?;
    for r in &rows {
        writeln!(
            stdout,
            "{},{},{},{},{},{},{},{}",
            fmt_real(r.budget),
            r.analytic.phase,
            fmt_real(r.analytic.objective.j),
            fmt_real(r.oracle.j),
            fmt_real(r.gap()),
            r.oracle.topology,
            r.topology_agrees(),
            r.within_band()
        )
        .map_err(io)?;
    }
    let bad: Vec<String> = rows.iter().filter(|r| !r.within_band()).map(|r| r.budget.to_string()).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Gap(format!("gap outside [{GAP_LO}, {GAP_HI}] at budgets {}", bad.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(plain_decimal("2.5"), Ok(2.5));
        assert_eq!(plain_decimal("-3"), Ok(-3.0));
        assert_eq!(plain_decimal(".5"), Ok(0.5));
        for s in ["1e3", "inf", "NaN", "", ".", "1.2.3", "2*3", "0x10"] {
            assert!(plain_decimal(s).is_err(), "{s}");
        }
        assert_eq!(decimal_list("1.8,2.2").unwrap().0, vec![1.8, 2.2]);
        assert!(decimal_list("1.8,,2").is_err());
    }

    #[test]
    fn error_codes() {
        let geo: CliError = Error::InvalidTriangle("collinear".into()).into();
        assert_eq!(geo.exit_code(), 2);
        let wrapped: CliError =
            Error::AtBudget { budget: 1.0, source: Box::new(Error::RootFindingFailure("x".into())) }.into();
        assert_eq!(wrapped.exit_code(), 3);
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["bsn", "frobnicate"], &mut o, &mut e), 1);
        assert_eq!(run(["bsn", "solve", "--spec", "x.json"], &mut o, &mut e), 1);
        assert_eq!(run(["bsn", "--help"], &mut o, &mut e), 0);
    }
}
