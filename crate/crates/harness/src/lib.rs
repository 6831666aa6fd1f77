//! Experiment harness: configuration, the experiment registry, CSV output
//! and run manifests for deterministic replay.
//!
//! Each run writes `manifest.txt` (the canonical configuration, seed
//! included, preceded by comment lines with the library versions) and one or
//! more CSV files whose first line is `# schema: <name> v1`. Replicas draw
//! from `RngStream::new(seed, replica)`, so output bytes depend only on the
//! configuration and the seed, never on the thread count.

pub mod config;
mod csv;
mod experiments;
mod problem;

use std::path::Path;

pub use config::{Experiment, RunConfig};
pub use experiments::Outcome;
pub use problem::build_problem;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spde_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl HarnessError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// Exit status of a completed run: `0`, or `2` when an assertion suite
/// reported violations.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.violations.is_empty() {
        0
    } else {
        2
    }
}

pub const MANIFEST: &str = "manifest.txt";

/// Runs `config` with `threads` workers (`0`: one per core), writing every
/// artifact into `out`.
pub fn run(config: &RunConfig, out: &Path, threads: usize) -> Result<Outcome, HarnessError> {
    std::fs::create_dir_all(out)?;
    let manifest = format!(
        "# spde run manifest\n# harness_version = {}\n# core_version = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        spde_core::VERSION,
        config.render()
    );
    std::fs::write(out.join(MANIFEST), manifest)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| experiments::dispatch(config, out))
}
