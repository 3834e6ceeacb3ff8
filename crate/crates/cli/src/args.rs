//! Command-line flags. Each flag set doubles as the config-file schema: keys
//! are the flag names, and the fully resolved set is what output headers embed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "kitaev", version, about = "Majorana zero modes of the open Kitaev chain")]
pub struct Cli {
    /// Worker threads for scans (results do not depend on it).
    #[arg(long, global = true, env = "KITAEV_THREADS")]
    pub threads: Option<usize>,

    /// TOML or JSON file with the same keys as the flags, or a previous output
    /// file whose embedded configuration is reused. Flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasiparticle energies as CSV (index, value).
    Spectrum(ChainRun),
    /// The two lowest Majorana modes as CSV.
    ZeroModes(ChainRun),
    /// Ground-state energy, gap, parity and densities as JSON.
    Density(ChainRun),
    /// Dump the Majorana matrix, the canonical transform or the covariance matrix.
    Matrix(MatrixRun),
    /// Zero-mode phase diagram over a (delta, mu) grid.
    PhaseScan(GridArgs),
    /// Phase diagram averaged over disorder realizations.
    NoiseScan(NoiseScanRun),
    /// Quantum-dot bias sweep with parity-reversal amplitudes.
    DotSweep(DotRun),
    /// Compare the canonical-form path with brute-force diagonalization.
    OracleCheck(OracleArgs),
}

/// Fill unset fields from a base layer, then from built-in defaults. Fields
/// under `keep` have no default and are not part of the configuration.
macro_rules! layered {
    ($name:ident { $($field:ident = $default:expr),* $(,)? } $(flatten { $($inner:ident),* })? $(keep { $($kept:ident),* })?) => {
        impl $name {
            pub fn overlay(self, base: Self) -> Self {
                Self {
                    $($field: self.$field.or(base.$field),)*
                    $($($inner: self.$inner.overlay(base.$inner),)*)?
                    $($($kept: self.$kept.or(base.$kept),)*)?
                }
            }

            pub fn with_defaults(self) -> Self {
                Self {
                    $($field: self.$field.or(Some($default)),)*
                    $($($inner: self.$inner.with_defaults(),)*)?
                    $($($kept: self.$kept,)*)?
                }
            }
        }
    };
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChainArgs {
    /// Number of sites N.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Hopping amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Pairing magnitude |Δ|.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Pairing phase θ in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Chemical potential.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
}

layered!(ChainArgs { sites = 50, t = 1.0, delta = 0.8, theta = 0.0, mu = 0.4 });

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SiteNoiseArgs {
    /// On-site disorder intensity V₀; potentials are uniform in (-V₀, V₀).
    #[arg(long, allow_negative_numbers = true)]
    pub noise_v0: Option<f64>,
    /// Disorder seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

layered!(SiteNoiseArgs { noise_v0 = 0.0, seed = 0 });

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChainRun {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub noise: SiteNoiseArgs,
    /// Energy below which a quasiparticle counts as a zero mode.
    #[arg(long)]
    pub energy_tol: Option<f64>,
}

layered!(ChainRun { energy_tol = 0.002 } flatten { chain, noise });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// The skew-symmetric Majorana matrix A.
    Majorana,
    /// The orthogonal W with W A Wᵀ block diagonal.
    Transform,
    /// Majorana covariance matrix of the quasiparticle vacuum.
    Covariance,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MatrixRun {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub noise: SiteNoiseArgs,
    #[arg(long, value_enum)]
    pub kind: Option<MatrixKind>,
}

layered!(MatrixRun { kind = MatrixKind::Majorana } flatten { chain, noise });

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GridArgs {
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long)]
    pub delta_max: Option<f64>,
    #[arg(long)]
    pub delta_count: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu_max: Option<f64>,
    #[arg(long)]
    pub mu_count: Option<usize>,
    #[arg(long)]
    pub energy_tol: Option<f64>,
    /// Also require the second level to stay above 10 × energy-tol.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub require_gap: Option<bool>,
}

layered!(GridArgs {
    sites = 60,
    t = 1.0,
    delta_min = 0.05,
    delta_max = 1.2,
    delta_count = 40,
    mu_min = 0.0,
    mu_max = 3.0,
    mu_count = 120,
    energy_tol = 0.002,
    require_gap = false,
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModeArg {
    /// Fresh potentials for every cell and seed.
    PerCell,
    /// Seed k uses the same potentials in every cell.
    FixedAcrossGrid,
}

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct NoiseScanRun {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub noise_v0: Option<f64>,
    /// Disorder realizations per cell.
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub noise_mode: Option<NoiseModeArg>,
    /// Survival fraction above which a cell is called topological.
    #[arg(long)]
    pub majority: Option<f64>,
}

layered!(NoiseScanRun {
    noise_v0 = 1.0,
    seeds = 20,
    seed = 0,
    noise_mode = NoiseModeArg::PerCell,
    majority = 0.5,
} flatten { grid });

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DotRun {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub v_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v_max: Option<f64>,
    #[arg(long)]
    pub v_count: Option<usize>,
    /// Multiplies the dot coupling.
    #[arg(long)]
    pub coupling_scale: Option<f64>,
    /// Drop bias values whose energy reaches the chain gap.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub clamp_to_gap: Option<bool>,
    /// Also diagonalize the chain with the dot as an extra site.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub exact: Option<bool>,
    #[arg(long)]
    pub energy_tol: Option<f64>,
    /// Write all extended-chain levels per bias value to this CSV (implies --exact).
    #[arg(long)]
    #[serde(skip)]
    pub levels: Option<PathBuf>,
}

layered!(DotRun {
    v_min = -3.0,
    v_max = 3.0,
    v_count = 121,
    coupling_scale = 1.0,
    clamp_to_gap = true,
    exact = false,
    energy_tol = 0.002,
} flatten { chain } keep { levels });

#[derive(Debug, Default, Clone, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OracleArgs {
    /// Chain length for every draw (at most 10).
    #[arg(long)]
    pub sites: Option<usize>,
    /// Number of random parameter draws.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

layered!(OracleArgs { sites = 6, trials = 25, seed = 0 });
