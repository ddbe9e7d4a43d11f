//! Command-line front end: solve a model file or generate a benchmark model.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{SolverConfig, SweepOrder};
use crate::error::{Error, Result};
use crate::generate::{generate_model, Family};
use crate::io::{self, ModelDocument, ResultDocument};
use crate::model::{Direction, Norm, Objective};
use crate::solver::{self, Algorithm};

#[derive(Debug, Parser)]
#[command(
    name = "rmdp",
    version,
    about = "Certified value iteration for robust MDPs",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated benchmark model as JSON.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Tr,
    Ssp,
    Lra,
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    C,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Vi,
    Bvi,
    Deflate,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Model document (JSON).
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tr")]
    pub objective: ObjectiveArg,
    /// Defaults to max (min for ssp).
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Payoff of paths that miss the targets: cumulative reward or +inf.
    #[arg(long, value_enum)]
    pub semantics: Option<SemanticsArg>,
    /// Discount factor, only with `--objective disc`.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub algorithm: AlgorithmArg,
    /// Lower bound on positive transition probabilities used when the model has none.
    #[arg(long)]
    pub pmin_floor: Option<f64>,
    /// Target states (comma separated); overrides the document's targets.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// Stop on the relative gap `U - L <= eps * max(1, |L|)`.
    #[arg(long)]
    pub relative: bool,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    /// Record the gap after every sweep in the result.
    #[arg(long)]
    pub trace: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps (values above 1 switch to Jacobi sweeps).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// grid, chain or random-sparse.
    pub family: String,
    /// Grid side length, or number of states.
    pub size: usize,
    #[arg(long, default_value_t = 0.05)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "l1")]
    pub norm: NormArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses the arguments, runs, and returns the process exit code:
/// 0 converged, 2 sound but not converged (or no guarantee), 1 error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Some(Command::Generate(g)) => run_generate(g).map(|_| 0),
        None => run_solve(&cli.solve),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Error::Usage(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::Usage(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run_generate(g: &GenerateArgs) -> Result<()> {
    let family: Family = g.family.parse()?;
    let norm = match g.norm {
        NormArg::L1 => Norm::L1,
        NormArg::L2 => Norm::L2,
        NormArg::Linf => Norm::LInf,
    };
    let gen = generate_model(family, g.size, g.radius, g.seed, norm);
    let doc = ModelDocument::from_model(&gen.model, gen.targets.as_deref());
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    write_out(&g.output, &text)
}

/// Objective from the flags; rejects conflicting combinations.
pub fn build_objective(args: &SolveArgs, targets: Vec<usize>) -> Result<Objective> {
    let direction = args.direction.map(|d| match d {
        DirectionArg::Max => Direction::Max,
        DirectionArg::Min => Direction::Min,
    });
    if args.gamma.is_some() && args.objective != ObjectiveArg::Disc {
        return Err(Error::Usage(
            "--gamma only applies to --objective disc".into(),
        ));
    }
    if args.semantics.is_some() && args.objective != ObjectiveArg::Tr {
        return Err(Error::Usage(
            "--semantics only applies to --objective tr".into(),
        ));
    }
    Ok(match args.objective {
        ObjectiveArg::Tr => {
            let direction = direction.unwrap_or(Direction::Max);
            match args.semantics.unwrap_or(SemanticsArg::C) {
                SemanticsArg::C => Objective {
                    targets,
                    ..Objective::total_reward(direction)
                },
                SemanticsArg::Inf => {
                    if targets.is_empty() {
                        return Err(Error::Usage("--semantics inf needs target states".into()));
                    }
                    Objective::reach_total_reward(direction, targets)
                }
            }
        }
        ObjectiveArg::Ssp => {
            if direction == Some(Direction::Max) {
                return Err(Error::Usage(
                    "stochastic shortest path minimizes; drop --direction max".into(),
                ));
            }
            if targets.is_empty() {
                return Err(Error::Usage("--objective ssp needs target states".into()));
            }
            Objective::ssp(targets)
        }
        ObjectiveArg::Lra => Objective::long_run_average(direction.unwrap_or(Direction::Max)),
        ObjectiveArg::Disc => {
            let gamma = args
                .gamma
                .ok_or_else(|| Error::Usage("--objective disc needs --gamma".into()))?;
            if !(gamma > 0.0 && gamma < 1.0) {
                return Err(Error::GammaOutOfRange(gamma));
            }
            Objective::discounted(direction.unwrap_or(Direction::Max), gamma)
        }
    })
}

fn run_solve(args: &SolveArgs) -> Result<i32> {
    let path = args
        .model
        .as_ref()
        .ok_or_else(|| Error::Usage("--model <path> is required".into()))?;
    if !(args.epsilon > 0.0) {
        return Err(Error::Usage("--epsilon must be positive".into()));
    }
    if args.threads == 0 {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    let loaded = io::parse_model(path)?;
    let model = loaded.model;
    let targets = match &args.targets {
        Some(names) => names
            .iter()
            .map(|n| {
                model
                    .state_index(n)
                    .ok_or_else(|| Error::Usage(format!("unknown target state {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?,
        None => loaded.targets.unwrap_or_default(),
    };
    let objective = build_objective(args, targets)?;
    let mut cfg = SolverConfig {
        relative_gap: args.relative,
        trace: args.trace,
        threads: args.threads,
        ..SolverConfig::default()
    };
    if let Some(f) = args.pmin_floor {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Usage("--pmin-floor must be in (0, 1]".into()));
        }
        cfg.pmin_floor = Some(f);
    }
    if let Some(m) = args.max_iterations {
        cfg.max_iterations = m;
    }
    if args.threads > 1 {
        cfg.sweep_order = SweepOrder::Jacobi;
    }
    let algorithm = match args.algorithm {
        AlgorithmArg::Vi => Algorithm::Vi,
        AlgorithmArg::Bvi => Algorithm::Bvi,
        AlgorithmArg::Deflate => Algorithm::Deflate,
        AlgorithmArg::Auto => Algorithm::Auto,
    };
    let started = Instant::now();
    let report = solver::solve(&model, &objective, algorithm, args.epsilon, &cfg)?;
    let elapsed = started.elapsed().as_secs_f64();
    if !report.bounds.is_consistent() {
        return Err(Error::NumericalFailure(
            "computed bounds cross (lower > upper)".into(),
        ));
    }
    for c in &report.diagnostics {
        eprintln!("note: {c}");
    }
    let doc = ResultDocument::new(&model, &objective, &report, args.epsilon, &cfg, elapsed);
    write_out(&args.output, &doc.to_json())?;
    Ok(if report.converged { 0 } else { 2 })
}
