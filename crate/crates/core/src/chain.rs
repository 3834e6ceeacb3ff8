//! Chain parameters, the Majorana coefficient matrix, bulk bands and disorder.
//!
//! Majorana operators are indexed from zero in code: site `j` (0-based) owns
//! `γ[2j]` and `γ[2j+1]`, which correspond to `γ_{2j-1}` and `γ_{2j}` of the
//! usual 1-based convention. The pairing phase `θ` is absorbed into the
//! definition `γ[2j] = a_j e^{iθ/2} + h.c.`, so the coefficient matrix depends
//! on `|Δ|` only.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical parameters of an open chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub n_sites: usize,
    /// Hopping amplitude.
    pub t: f64,
    /// Pairing magnitude `|Δ|`.
    pub delta_abs: f64,
    /// Pairing phase in radians. Gauge only; no observable depends on it.
    #[serde(default)]
    pub theta: f64,
    /// Chemical potential.
    pub mu: f64,
}

impl ChainParams {
    pub fn new(n_sites: usize, t: f64, delta_abs: f64, mu: f64) -> Self {
        Self { n_sites, t, delta_abs, theta: 0.0, mu }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_sites(mut self, n_sites: usize) -> Self {
        self.n_sites = n_sites;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::InvalidParameter("n_sites must be at least 1".into()));
        }
        for (name, v) in [("t", self.t), ("delta", self.delta_abs), ("theta", self.theta), ("mu", self.mu)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if self.delta_abs < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pairing magnitude must be non-negative, got {}",
                self.delta_abs
            )));
        }
        Ok(())
    }
}

/// On-site potentials `V_j` entering as `Σ V_j a†_j a_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SitePotentials {
    pub values: Vec<f64>,
}

impl SitePotentials {
    pub fn zeros(n_sites: usize) -> Self {
        Self { values: vec![0.0; n_sites] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl From<Vec<f64>> for SitePotentials {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// One member of a disorder ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Noise intensity `V₀`; potentials are uniform on `(-V₀, V₀)`.
    pub v0: f64,
    pub seed: u64,
    pub draw_index: u64,
}

impl NoiseConfig {
    pub fn new(v0: f64, seed: u64, draw_index: u64) -> Self {
        Self { v0, seed, draw_index }
    }
}

/// Real skew-symmetric coefficient matrix of `H = (i/4) Σ γ_a A_ab γ_b`.
#[derive(Clone, Debug)]
pub struct MajoranaForm {
    pub n_sites: usize,
    pub matrix: DMatrix<f64>,
    pub params: ChainParams,
    pub potentials: SitePotentials,
}

impl MajoranaForm {
    /// Largest `|A_ab + A_ba|`.
    pub fn asymmetry(&self) -> f64 {
        skew_asymmetry(&self.matrix)
    }

    /// Scale the bond between sites `j` and `j+1` (0-based) by `factor`.
    pub(crate) fn scale_bond(&mut self, j: usize, factor: f64) {
        let m = &mut self.matrix;
        for (a, b) in [(2 * j + 1, 2 * j + 2), (2 * j, 2 * j + 3)] {
            m[(a, b)] *= factor;
            m[(b, a)] *= factor;
        }
    }
}

pub(crate) fn skew_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((m[(a, b)] + m[(b, a)]).abs());
        }
    }
    worst
}

/// Build `A` for the chain with per-site chemical potential `μ_j = μ - V_j`.
///
/// `V_j a†_j a_j` equals `V_j (a†_j a_j - 1/2)` up to a constant, so disorder
/// is a local shift of `μ`; the constant is dropped.
pub fn build_majorana_matrix(params: &ChainParams, potentials: &SitePotentials) -> Result<MajoranaForm> {
    params.validate()?;
    let n = params.n_sites;
    if potentials.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: potentials.len() });
    }
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let strong = params.t + params.delta_abs;
    let weak = -params.t + params.delta_abs;
    for j in 0..n {
        let mu_j = params.mu - potentials.values[j];
        a[(2 * j, 2 * j + 1)] = -mu_j;
        a[(2 * j + 1, 2 * j)] = mu_j;
        if j + 1 < n {
            a[(2 * j + 1, 2 * j + 2)] = strong;
            a[(2 * j + 2, 2 * j + 1)] = -strong;
            a[(2 * j, 2 * j + 3)] = weak;
            a[(2 * j + 3, 2 * j)] = -weak;
        }
    }
    Ok(MajoranaForm { n_sites: n, matrix: a, params: *params, potentials: potentials.clone() })
}

/// Bulk quasiparticle bands `±√((2t cos k + μ)² + 4Δ² sin² k)`.
pub fn bulk_dispersion(params: &ChainParams, k: f64) -> (f64, f64) {
    let e = dispersion_sq(params, k).sqrt();
    (e, -e)
}

fn dispersion_sq(params: &ChainParams, k: f64) -> f64 {
    let kinetic = 2.0 * params.t * k.cos() + params.mu;
    let pairing = 2.0 * params.delta_abs * k.sin();
    kinetic * kinetic + pairing * pairing
}

/// Minimum of the upper bulk band over `k ∈ [-π, π]`.
///
/// The band is sampled on `k_samples` uniform points and the best sample is
/// refined by golden-section search within its neighbouring grid cells, so
/// minima between grid points (e.g. `k = 0` on an even grid) are resolved.
pub fn bulk_gap(params: &ChainParams, k_samples: usize) -> Result<f64> {
    if k_samples < 2 {
        return Err(Error::InvalidParameter(format!("k_samples must be at least 2, got {k_samples}")));
    }
    let step = 2.0 * PI / (k_samples - 1) as f64;
    let k_at = |i: usize| -PI + step * i as f64;
    let (best, best_val) = (0..k_samples)
        .map(|i| (i, dispersion_sq(params, k_at(i))))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = k_at(best.saturating_sub(1));
    let hi = k_at((best + 1).min(k_samples - 1));
    let refined = golden_section_min(|k| dispersion_sq(params, k), lo, hi);
    Ok(best_val.min(refined).max(0.0).sqrt())
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Draw `V_j = 2V₀(R_j - 1/2)` with `R_j` uniform on `(0, 1)`.
///
/// `R_j` is the `j`-th 64-bit word of the ChaCha8 stream selected by
/// `(seed, draw_index)`, so every potential is a pure function of
/// `(seed, draw_index, j)`.
pub fn sample_noise(config: &NoiseConfig, n_sites: usize) -> SitePotentials {
    let v0 = config.v0;
    if v0 == 0.0 {
        return SitePotentials::zeros(n_sites);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(config.draw_index);
    rng.set_word_pos(0);
    let values = (0..n_sites)
        .map(|_| {
            let r: f64 = rng.sample(Open01);
            2.0 * v0 * (r - 0.5)
        })
        .collect();
    SitePotentials { values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean(params: &ChainParams) -> MajoranaForm {
        build_majorana_matrix(params, &SitePotentials::zeros(params.n_sites)).unwrap()
    }

    #[test]
    fn single_site_has_only_the_mu_block() {
        let form = clean(&ChainParams::new(1, 0.7, 0.3, 0.4));
        assert_eq!(form.matrix.as_slice(), DMatrix::from_row_slice(2, 2, &[0.0, -0.4, 0.4, 0.0]).as_slice());
    }

    #[test]
    fn kitaev_point_two_sites() {
        let form = clean(&ChainParams::new(2, 1.0, 1.0, 0.0));
        for a in 0..4 {
            for b in 0..4 {
                let expected = match (a, b) {
                    (1, 2) => 2.0,
                    (2, 1) => -2.0,
                    _ => 0.0,
                };
                assert_eq!(form.matrix[(a, b)], expected, "entry ({a},{b})");
            }
        }
    }

    #[test]
    fn fifty_site_coefficients() {
        let form = clean(&ChainParams::new(50, 1.0, 0.8, 0.4));
        let m = &form.matrix;
        for j in 0..50 {
            assert_eq!(m[(2 * j, 2 * j + 1)], -0.4);
            if j < 49 {
                assert!((m[(2 * j + 1, 2 * j + 2)] - 1.8).abs() < 1e-15);
                assert!((m[(2 * j, 2 * j + 3)] + 0.2).abs() < 1e-15);
            }
        }
        assert_eq!(form.asymmetry(), 0.0);
        for a in 0..100usize {
            for b in 0..100 {
                if a.abs_diff(b) > 3 {
                    assert_eq!(m[(a, b)], 0.0);
                }
            }
        }
    }

    #[test]
    fn potentials_shift_mu() {
        let p = ChainParams::new(3, 1.0, 0.5, 0.4);
        let form = build_majorana_matrix(&p, &vec![0.1, -0.2, 0.0].into()).unwrap();
        assert!((form.matrix[(0, 1)] + 0.3).abs() < 1e-15);
        assert!((form.matrix[(2, 3)] + 0.6).abs() < 1e-15);
        assert!((form.matrix[(4, 5)] + 0.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let p = ChainParams::new(3, 1.0, 0.5, 0.4);
        assert!(matches!(
            build_majorana_matrix(&p, &SitePotentials::zeros(2)),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        ));
        assert!(build_majorana_matrix(&p.with_sites(0), &SitePotentials::zeros(0)).is_err());
        let neg = ChainParams::new(3, 1.0, -0.5, 0.4);
        assert!(build_majorana_matrix(&neg, &SitePotentials::zeros(3)).is_err());
    }

    #[test]
    fn theta_does_not_enter() {
        let p = ChainParams::new(6, 1.0, 0.8, 0.4);
        assert_eq!(clean(&p).matrix, clean(&p.with_theta(1.3)).matrix);
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(bulk_dispersion(&ChainParams::new(1, 1.0, 0.8, -2.0), 0.0), (0.0, -0.0));
        let (e, _) = bulk_dispersion(&ChainParams::new(1, 1.0, 0.8, 2.0), PI);
        assert!(e < 1e-15);
        // (2 cos(π/2) + 0.4)² + 4·0.64·1 = 0.16 + 2.56
        let (plus, minus) = bulk_dispersion(&ChainParams::new(1, 1.0, 0.8, 0.4), PI / 2.0);
        assert!((plus - 2.72_f64.sqrt()).abs() < 1e-14);
        assert!((plus - 1.649_242_250_247_070_8).abs() < 1e-12);
        assert_eq!(minus, -plus);
    }

    #[test]
    fn gap_examples() {
        assert!(bulk_gap(&ChainParams::new(1, 1.0, 0.8, 2.0), 10_001).unwrap() < 1e-6);
        assert!((bulk_gap(&ChainParams::new(1, 1.0, 0.8, 0.0), 10_001).unwrap() - 1.6).abs() < 1e-9);
        assert!((bulk_gap(&ChainParams::new(1, 0.0, 0.0, 0.5), 101).unwrap() - 0.5).abs() < 1e-15);
        assert!(bulk_gap(&ChainParams::new(1, 1.0, 0.8, 0.0), 1).is_err());
    }

    #[test]
    fn gap_closes_at_mu_equal_two_t() {
        for delta in [0.1, 0.5, 1.0] {
            for mu in [2.0, -2.0] {
                let g = bulk_gap(&ChainParams::new(1, 1.0, delta, mu), 10_000).unwrap();
                assert!(g < 1e-6, "delta={delta} mu={mu} gap={g}");
            }
        }
    }

    #[test]
    fn gap_oracle_dense_grid_and_calculus() {
        // μ = 0, |Δ| < t: ε² = 4Δ² + 4(t² - Δ²) cos² k, minimal at k = ±π/2.
        for delta in [0.2, 0.5, 0.8] {
            let p = ChainParams::new(1, 1.0, delta, 0.0);
            let brute = (0..=200_000)
                .map(|i| bulk_dispersion(&p, -PI + 2.0 * PI * i as f64 / 200_000.0).0)
                .fold(f64::INFINITY, f64::min);
            assert!((brute - 2.0 * delta).abs() < 1e-9);
            assert!((bulk_gap(&p, 777).unwrap() - 2.0 * delta).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_intensity_noise_is_zero() {
        let v = sample_noise(&NoiseConfig::new(0.0, 99, 4), 10);
        assert!(v.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn noise_is_deterministic_and_bounded() {
        let cfg = NoiseConfig::new(1.0, 12345, 7);
        let a = sample_noise(&cfg, 40);
        let b = sample_noise(&cfg, 40);
        assert_eq!(
            a.values.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.values.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert!(a.values.iter().all(|&v| v > -1.0 && v < 1.0));
        // site j does not depend on how many sites were requested
        let short = sample_noise(&cfg, 10);
        assert_eq!(&a.values[..10], &short.values[..]);
        assert_ne!(a, sample_noise(&NoiseConfig::new(1.0, 12345, 8), 40));
    }

    #[test]
    fn noise_moments() {
        let v0 = 2.0;
        let draws: Vec<f64> =
            (0..1000).flat_map(|d| sample_noise(&NoiseConfig::new(v0, 2024, d), 100).values).collect();
        assert_eq!(draws.len(), 100_000);
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let expected_var = v0 * v0 / 3.0;
        assert!(mean.abs() < 3.0 * (expected_var / n).sqrt(), "mean {mean}");
        assert!((var - expected_var).abs() < 0.05 * expected_var, "var {var}");
    }
}
