//! The `wicknls` command line: thirteen subcommands sharing one configuration surface.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use config::RunConfig;
use output::{envelope, write_artifact};

/// Exit code for malformed invocations and invalid parameters.
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "wicknls", version, about = "Numerical laboratory for the Wick-ordered cubic NLS on the 2-torus")]
pub struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "WICKNLS_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw Gaussian fields and check the Wick quartic has mean zero.
    Sample(RunConfig),
    /// Integrate the truncated Wick flow and report mass and energy drift.
    Evolve(RunConfig),
    /// Compare the Wick flow against the gauged flow.
    GaugeCheck(RunConfig),
    /// Weighted two-time test of Gibbs invariance.
    Invariance(RunConfig),
    /// H^s norm of the nonlinear part of the gauged solution.
    Residual(RunConfig),
    /// Exhaustive lattice counts against the counting bounds.
    Count(RunConfig),
    /// Exact base-tensor operator norms against their bounds.
    TensorBounds(RunConfig),
    /// Monte Carlo scaling of random-tensor operator norms.
    RtMc(RunConfig),
    /// Second moment of the stochastic cubic term, closed form and Monte Carlo.
    StochasticNorm(RunConfig),
    /// Norms of the resonant terms as the time cutoff shrinks.
    Resonant(RunConfig),
    /// L4 Strichartz ratio growth.
    Strichartz(RunConfig),
    /// Random check of the dual-vector bound.
    DualBound(RunConfig),
    /// Every check at reduced scale.
    Report {
        /// Run all checks (the only mode).
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        config: RunConfig,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Evolve(_) => "evolve",
            Command::GaugeCheck(_) => "gauge-check",
            Command::Invariance(_) => "invariance",
            Command::Residual(_) => "residual",
            Command::Count(_) => "count",
            Command::TensorBounds(_) => "tensor-bounds",
            Command::RtMc(_) => "rt-mc",
            Command::StochasticNorm(_) => "stochastic-norm",
            Command::Resonant(_) => "resonant",
            Command::Strichartz(_) => "strichartz",
            Command::DualBound(_) => "dual-bound",
            Command::Report { .. } => "report",
        }
    }

    fn config(&self) -> &RunConfig {
        match self {
            Command::Sample(c)
            | Command::Evolve(c)
            | Command::GaugeCheck(c)
            | Command::Invariance(c)
            | Command::Residual(c)
            | Command::Count(c)
            | Command::TensorBounds(c)
            | Command::RtMc(c)
            | Command::StochasticNorm(c)
            | Command::Resonant(c)
            | Command::Strichartz(c)
            | Command::DualBound(c) => c,
            Command::Report { config, .. } => config,
        }
    }
}

/// Runs a parsed command against a resolved configuration.
pub fn execute(command: &Command, cfg: &RunConfig) -> crate::error::Result<Outcome> {
    match command {
        Command::Sample(_) => commands::sample(cfg),
        Command::Evolve(_) => commands::evolve_cmd(cfg),
        Command::GaugeCheck(_) => commands::gauge_check(cfg),
        Command::Invariance(_) => commands::invariance(cfg),
        Command::Residual(_) => commands::residual(cfg),
        Command::Count(_) => commands::count(cfg),
        Command::TensorBounds(_) => commands::tensor_bounds(cfg),
        Command::RtMc(_) => commands::rt_mc(cfg),
        Command::StochasticNorm(_) => commands::stochastic_norm(cfg),
        Command::Resonant(_) => commands::resonant(cfg),
        Command::Strichartz(_) => commands::strichartz(cfg),
        Command::DualBound(_) => commands::dual_bound(cfg),
        Command::Report { .. } => commands::report(cfg),
    }
}

fn run_parsed(cli: &Cli) -> crate::error::Result<i32> {
    let name = cli.command.name();
    let cfg = RunConfig::resolve(cli.command.config())?;
    let outcome = execute(&cli.command, &cfg)?;
    let status = serde_json::to_value(outcome.status)?;
    let status = status.as_str().unwrap_or("fail");
    let dir = cfg.out_dir();
    if let Some(table) = &outcome.table {
        write_artifact(&dir, &format!("{name}.csv"), &table.render(name, &outcome.params))?;
    }
    let json_path = write_artifact(&dir, &format!("{name}.json"), &envelope(name, status, &outcome.params, &outcome.result)?)?;
    println!("{name}: {status} ({})", json_path.display());
    Ok(outcome.status.exit_code())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return EXIT_USAGE;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match run_parsed(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                crate::error::Error::Invalid { .. } | crate::error::Error::NotDyadic(_) | crate::error::Error::Json(_) => {
                    EXIT_USAGE
                }
                _ => 1,
            }
        }
    }
}
