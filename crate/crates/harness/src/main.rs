use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use spde_harness::{Experiment, HarnessError, RunConfig};

/// Simulation and diagnostics for dissipative reaction-diffusion equations
/// with Wiener and Levy noise.
///
/// Exit status: 0 on success, 1 on usage or runtime errors, 2 when an
/// assertion suite reports violations.
#[derive(Parser)]
#[command(name = "spde", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve sample paths and write their spectral coefficients.
    Simulate(RunArgs),
    /// Report which regularity conditions the Levy model satisfies.
    CheckConditions(RunArgs),
    /// Estimate the small-time increment exponent of the Levy convolution.
    GsRegularity(RunArgs),
    /// Tabulate the Yosida continuation as the regularization vanishes.
    YosidaConvergence(RunArgs),
    /// Check the pathwise contraction estimate between two data.
    Contraction(RunArgs),
    /// Check the a priori bound on the solution.
    Apriori(RunArgs),
    /// Tabulate the Cauchy increments of truncated-datum solutions.
    Generalized(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file; defaults apply to omitted keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Number of replicas; overrides the configuration.
    #[arg(long)]
    replicas: Option<usize>,
    /// Worker threads (0: one per core). Does not affect the output.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Command {
    fn split(self) -> (Experiment, RunArgs) {
        match self {
            Command::Simulate(a) => (Experiment::Simulate, a),
            Command::CheckConditions(a) => (Experiment::CheckConditions, a),
            Command::GsRegularity(a) => (Experiment::GsRegularity, a),
            Command::YosidaConvergence(a) => (Experiment::YosidaConvergence, a),
            Command::Contraction(a) => (Experiment::Contraction, a),
            Command::Apriori(a) => (Experiment::Apriori, a),
            Command::Generalized(a) => (Experiment::Generalized, a),
        }
    }
}

fn execute(experiment: Experiment, args: RunArgs) -> Result<i32, HarnessError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    config.experiment = experiment;
    config.seed = args.seed;
    if let Some(r) = args.replicas {
        if r == 0 {
            return Err(HarnessError::Usage("--replicas must be positive".into()));
        }
        config.replicas = r;
    }
    let outcome = spde_harness::run(&config, &args.out, args.threads)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    Ok(spde_harness::exit_code(&outcome))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (experiment, args) = cli.command.split();
    match execute(experiment, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
