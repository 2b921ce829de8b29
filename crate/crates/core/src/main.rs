use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use sivfie::harness::{
    absolute_errors, compare_bases, diagonal_points, emit_report, run_selftest, run_trials, Format, TrialConfig,
};
use sivfie::problems::{builtin, CustomProblemConfig};
use sivfie::stochastic::DEFAULT_SOLVE_GRID;
use sivfie::{build_basis, sample_brownian_path, BasisKind, ProblemSpec, QuadratureRule, SivfieError};

const EXIT_FAILURE: u8 = 1;
const EXIT_SINGULAR: u8 = 2;
const EXIT_INVALID_CONFIG: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sivfie",
    version,
    about = "Chelyshkov operational-matrix solver for 2-D stochastic Ito-Volterra-Fredholm equations"
)]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Built-in problem (1 or 2).
    #[arg(long)]
    problem: Option<String>,
    /// Polynomial degree N.
    #[arg(long = "N", alias = "degree")]
    degree: Option<usize>,
    /// Brownian grid size M (power of two).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one realization and write the diagonal-point error table.
    Solve {
        #[command(flatten)]
        common: Common,
        /// chelyshkov or slp.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run n Monte-Carlo trials and write mean, SD and 95% CI.
    Trials {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed0: Option<u64>,
    },
    /// Solve one realization with both bases and write side-by-side tables.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ProblemRef {
    Number(u32),
    Name(String),
    Custom(Box<CustomProblemConfig>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    problem: Option<ProblemRef>,
    basis: Option<String>,
    #[serde(rename = "N")]
    degree: Option<usize>,
    seed: Option<u64>,
    seed0: Option<u64>,
    n: Option<usize>,
    grid: Option<usize>,
    out: Option<PathBuf>,
    format: Option<String>,
}

fn invalid(msg: impl Into<String>) -> SivfieError {
    SivfieError::InvalidConfig(msg.into())
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, SivfieError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Flag values merged over the config file.
struct Resolved {
    problem: ProblemSpec,
    degree: usize,
    grid: usize,
    out: PathBuf,
    format: Format,
}

fn resolve_common(common: &Common, file: &FileConfig) -> Result<Resolved, SivfieError> {
    let problem = match (&common.problem, &file.problem) {
        (Some(name), _) => builtin(name).ok_or_else(|| invalid(format!("unknown problem '{name}'")))?,
        (None, Some(ProblemRef::Number(k))) => {
            builtin(&k.to_string()).ok_or_else(|| invalid(format!("unknown problem '{k}'")))?
        }
        (None, Some(ProblemRef::Name(name))) => {
            builtin(name).ok_or_else(|| invalid(format!("unknown problem '{name}'")))?
        }
        (None, Some(ProblemRef::Custom(cfg))) => cfg.build()?,
        (None, None) => return Err(invalid("missing --problem")),
    };
    let degree = common.degree.or(file.degree).ok_or_else(|| invalid("missing --N"))?;
    let grid = common.grid.or(file.grid).unwrap_or(DEFAULT_SOLVE_GRID);
    if grid < 2 || !grid.is_power_of_two() {
        return Err(SivfieError::InvalidGrid(grid));
    }
    let out = common
        .out
        .clone()
        .or_else(|| file.out.clone())
        .ok_or_else(|| invalid("missing --out"))?;
    let format = match common.format.as_ref().or(file.format.as_ref()) {
        Some(f) => f.parse()?,
        None => Format::Csv,
    };
    Ok(Resolved {
        problem,
        degree,
        grid,
        out,
        format,
    })
}

fn resolve_basis(flag: &Option<String>, file: &FileConfig) -> Result<BasisKind, SivfieError> {
    match flag.as_ref().or(file.basis.as_ref()) {
        Some(b) => b.parse(),
        None => Ok(BasisKind::Chelyshkov),
    }
}

fn run(cli: Cli) -> Result<ExitCode, SivfieError> {
    let file = load_config(cli.config.as_deref())?;
    let started = Instant::now();
    match cli.command {
        Command::Solve { common, basis, seed } => {
            let r = resolve_common(&common, &file)?;
            let kind = resolve_basis(&basis, &file)?;
            let seed = seed.or(file.seed).unwrap_or(0);
            let basis = build_basis(kind, r.degree)?;
            let rule = QuadratureRule::default_for_degree(r.degree)?;
            let path = sample_brownian_path(r.grid, seed)?;
            let result = sivfie::solve_sivfie(&r.problem, &basis, &path, &rule)?;
            let table = absolute_errors(&result, &r.problem, &diagonal_points())?;
            emit_report(&table, r.format, &r.out)?;
            eprintln!(
                "solved {} (N={}, {kind}, seed {seed}): mean abs error {:.6e}, residual {:.2e}",
                r.problem.name,
                r.degree,
                table.mean_abs_error(),
                result.residual_norm
            );
        }
        Command::Trials {
            common,
            basis,
            n,
            seed0,
        } => {
            let r = resolve_common(&common, &file)?;
            let kind = resolve_basis(&basis, &file)?;
            let n = n.or(file.n).ok_or_else(|| invalid("missing --n"))?;
            let seed0 = seed0.or(file.seed0).unwrap_or(0);
            let config = TrialConfig::new(kind, r.degree, r.grid);
            let stats = run_trials(&r.problem, &config, n, seed0)?;
            emit_report(&stats, r.format, &r.out)?;
            eprintln!(
                "{} trials of {} (N={}, {kind}): mean {:.6e}, sd {:.6e}, 95% CI [{:.6e}, {:.6e}]",
                stats.n, r.problem.name, stats.degree, stats.mean, stats.sd, stats.ci_lo, stats.ci_hi
            );
        }
        Command::Compare { common, seed } => {
            let r = resolve_common(&common, &file)?;
            let seed = seed.or(file.seed).unwrap_or(0);
            let cmp = compare_bases(&r.problem, r.degree, seed, r.grid)?;
            emit_report(&cmp, r.format, &r.out)?;
            eprintln!(
                "compare {} (N={}, seed {seed}): chelyshkov MAE {:.6e}, slp MAE {:.6e}",
                r.problem.name,
                r.degree,
                cmp.left.mean_abs_error(),
                cmp.right.mean_abs_error()
            );
        }
        Command::Selftest => {
            let outcomes = run_selftest();
            let mut failed = 0;
            for o in &outcomes {
                println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                if !o.passed {
                    failed += 1;
                }
            }
            eprintln!("wall clock: {:.3} s", started.elapsed().as_secs_f64());
            if failed > 0 {
                eprintln!("{failed} self-test check(s) failed");
                return Ok(ExitCode::from(EXIT_FAILURE));
            }
            return Ok(ExitCode::SUCCESS);
        }
    }
    eprintln!("wall clock: {:.3} s", started.elapsed().as_secs_f64());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if e.is_singular() {
                EXIT_SINGULAR
            } else {
                match e {
                    SivfieError::InvalidConfig(_)
                    | SivfieError::InvalidGrid(_)
                    | SivfieError::DegreeOverflow { .. } => EXIT_INVALID_CONFIG,
                    _ => EXIT_FAILURE,
                }
            };
            ExitCode::from(code)
        }
    }
}
