use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Write the sparse filtration.
    Sparse,
    /// Write the exact k-th order Čech filtration.
    Exact,
    /// Report sparse sizes against the size bound.
    Compare,
    /// Write persistence diagrams.
    Persistence,
    /// Run the lemma suite and oracle cross-checks.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Sparse,
    Exact,
}

/// Sparse approximation of the k-fold cover filtration.
#[derive(Debug, Clone, Parser)]
#[command(name = "sparsekfold", version)]
pub struct RunConfig {
    /// Point file: one point per line, whitespace or comma separated.
    /// Optional for `verify`, which otherwise uses seeded random instances.
    pub input: Option<PathBuf>,

    #[arg(long, default_value_t = 2)]
    pub k: usize,

    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,

    /// Largest simplex dimension.
    #[arg(long = "max-dim", default_value_t = 1)]
    pub max_dim: usize,

    #[arg(long, value_enum, default_value_t = Mode::Sparse)]
    pub mode: Mode,

    #[arg(long, env = "SPARSEKFOLD_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Abort once this many simplices have been generated.
    #[arg(long = "limit-simplices")]
    pub limit_simplices: Option<usize>,

    /// Largest number of lenses the exact construction may enumerate.
    #[arg(long = "limit-vertices", default_value_t = 100_000)]
    pub limit_vertices: usize,

    /// Filtration whose diagrams `persistence` reports.
    #[arg(long, value_enum, default_value_t = Which::Sparse)]
    pub filtration: Which,

    /// Doubling dimension used in the size bound (defaults to the ambient
    /// dimension).
    #[arg(long = "doubling-dim")]
    pub doubling_dim: Option<f64>,

    /// Number of random instances for `verify` without an input file.
    #[arg(long, default_value_t = 25)]
    pub instances: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k == 0 {
            return Err("--k must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(format!("--epsilon must lie in (0, 1], got {}", self.epsilon));
        }
        if self.input.is_none() && self.mode != Mode::Verify {
            return Err("an input file is required".into());
        }
        Ok(())
    }
}
