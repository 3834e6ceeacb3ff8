use std::path::PathBuf;

use kitaev_core::canonical::{canonicalize, extract_zero_modes, CanonicalForm, DEFAULT_ZERO_TOL};
use kitaev_core::dot::{sweep_bias, DotSweepSpec};
use kitaev_core::fock::{oracle_deviation, OracleDeviation};
use kitaev_core::io::{self, Table};
use kitaev_core::observables::{covariance_matrix, ground_state_report};
use kitaev_core::phase::{scan_phase, scan_with_noise, AxisRange, GridSpec, NoiseMode, NoiseScanSpec};
use kitaev_core::{build_majorana_matrix, sample_noise, ChainParams, MajoranaForm, NoiseConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::args::{
    ChainArgs, ChainRun, DotRun, GridArgs, MatrixKind, MatrixRun, NoiseModeArg, NoiseScanRun, OracleArgs, SiteNoiseArgs,
};
use crate::CliError;

/// Agreement required by `oracle-check`.
pub const ORACLE_TOL: f64 = 1e-9;

/// A file to write: `None` targets the main output.
pub struct Emit {
    pub path: Option<PathBuf>,
    pub text: String,
}

pub struct Outcome {
    pub files: Vec<Emit>,
    /// Nonzero when the run completed but its check failed.
    pub code: i32,
}

impl Outcome {
    fn single(text: String) -> Self {
        Self { files: vec![Emit { path: None, text }], code: 0 }
    }
}

fn chain_params(c: &ChainArgs) -> ChainParams {
    ChainParams::new(c.sites.unwrap(), c.t.unwrap(), c.delta.unwrap(), c.mu.unwrap()).with_theta(c.theta.unwrap())
}

fn majorana_form(chain: &ChainArgs, noise: &SiteNoiseArgs) -> Result<MajoranaForm, CliError> {
    let params = chain_params(chain);
    params.validate()?;
    let v0 = noise.noise_v0.unwrap();
    if !(v0 >= 0.0) || !v0.is_finite() {
        return Err(CliError::usage(format!("--noise-v0 must be non-negative, got {v0}")));
    }
    let potentials = sample_noise(&NoiseConfig::new(v0, noise.seed.unwrap(), 0), params.n_sites);
    Ok(build_majorana_matrix(&params, &potentials)?)
}

fn canonical(run: &ChainRun) -> Result<CanonicalForm, CliError> {
    Ok(canonicalize(&majorana_form(&run.chain, &run.noise)?, DEFAULT_ZERO_TOL)?)
}

fn csv(table: Table, config: &Value, timestamp: &str) -> Result<String, CliError> {
    Ok(table.render(config, timestamp)?)
}

pub fn spectrum(run: &ChainRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let canon = canonical(run)?;
    Ok(Outcome::single(csv(io::spectrum_table(&canon.epsilons), config, ts)?))
}

pub fn zero_modes(run: &ChainRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let pair = extract_zero_modes(&canonical(run)?, run.energy_tol.unwrap())?;
    Ok(Outcome::single(csv(io::zero_mode_table(&pair), config, ts)?))
}

pub fn density(run: &ChainRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let report = ground_state_report(&canonical(run)?, run.energy_tol.unwrap());
    Ok(Outcome::single(io::render_json(config, ts, &report)?))
}

pub fn matrix(run: &MatrixRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let form = majorana_form(&run.chain, &run.noise)?;
    let m = match run.kind.unwrap() {
        MatrixKind::Majorana => form.matrix,
        MatrixKind::Transform => canonicalize(&form, DEFAULT_ZERO_TOL)?.w,
        MatrixKind::Covariance => covariance_matrix(&canonicalize(&form, DEFAULT_ZERO_TOL)?).m,
    };
    Ok(Outcome::single(csv(io::matrix_table(&m), config, ts)?))
}

fn grid_spec(g: &GridArgs) -> GridSpec {
    let mut spec = GridSpec::new(
        AxisRange::new(g.delta_min.unwrap(), g.delta_max.unwrap(), g.delta_count.unwrap()),
        AxisRange::new(g.mu_min.unwrap(), g.mu_max.unwrap(), g.mu_count.unwrap()),
        g.sites.unwrap(),
        g.t.unwrap(),
    );
    spec.energy_tol = g.energy_tol.unwrap();
    spec.require_gap = g.require_gap.unwrap();
    spec
}

pub fn phase_scan(g: &GridArgs, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let points = scan_phase(&grid_spec(g))?;
    Ok(Outcome::single(csv(io::phase_table(&points), config, ts)?))
}

pub fn noise_scan(run: &NoiseScanRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let mut noise = NoiseScanSpec::new(run.noise_v0.unwrap(), run.seeds.unwrap(), run.seed.unwrap());
    noise.mode = match run.noise_mode.unwrap() {
        NoiseModeArg::PerCell => NoiseMode::PerCell,
        NoiseModeArg::FixedAcrossGrid => NoiseMode::FixedAcrossGrid,
    };
    noise.majority = run.majority.unwrap();
    let points = scan_with_noise(&grid_spec(&run.grid), &noise)?;
    Ok(Outcome::single(csv(io::phase_table(&points), config, ts)?))
}

pub fn dot_sweep(run: &DotRun, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let mut spec =
        DotSweepSpec::new(chain_params(&run.chain), run.v_min.unwrap(), run.v_max.unwrap(), run.v_count.unwrap());
    spec.coupling_scale = run.coupling_scale.unwrap();
    spec.clamp_to_gap = run.clamp_to_gap.unwrap();
    spec.compute_exact = run.exact.unwrap() || run.levels.is_some();
    spec.energy_tol = run.energy_tol.unwrap();
    let result = sweep_bias(&spec)?;
    let mut files = vec![Emit { path: None, text: csv(io::sweep_table(&result), config, ts)? }];
    if let Some(path) = &run.levels {
        files.push(Emit { path: Some(path.clone()), text: csv(io::levels_table(&result), config, ts)? });
    }
    Ok(Outcome { files, code: 0 })
}

#[derive(Serialize)]
struct OracleReport {
    sites: usize,
    trials: usize,
    tolerance: f64,
    max_energy_deviation: f64,
    max_density_deviation: f64,
    max_spectrum_deviation: f64,
    parity_mismatch: bool,
    passed: bool,
}

pub fn oracle_check(args: &OracleArgs, config: &Value, ts: &str) -> Result<Outcome, CliError> {
    let (n, trials) = (args.sites.unwrap(), args.trials.unwrap());
    if trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap());
    let mut worst = OracleDeviation::default();
    for _ in 0..trials {
        let params =
            ChainParams::new(n, rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0))
                .with_theta(rng.random_range(0.0..std::f64::consts::TAU));
        let zeros = kitaev_core::SitePotentials::zeros(n);
        worst = worst.max(oracle_deviation(&params, &zeros)?);
    }
    let passed = worst.within(ORACLE_TOL);
    let report = OracleReport {
        sites: n,
        trials,
        tolerance: ORACLE_TOL,
        max_energy_deviation: worst.energy,
        max_density_deviation: worst.density,
        max_spectrum_deviation: worst.spectrum,
        parity_mismatch: worst.parity_mismatch,
        passed,
    };
    eprintln!(
        "oracle-check: {trials} draws at N={n}: energy {:.2e}, density {:.2e}, spectrum {:.2e}, parity mismatch {}",
        worst.energy, worst.density, worst.spectrum, worst.parity_mismatch
    );
    Ok(Outcome {
        files: vec![Emit { path: None, text: io::render_json(config, ts, &report)? }],
        code: if passed { 0 } else { 3 },
    })
}
