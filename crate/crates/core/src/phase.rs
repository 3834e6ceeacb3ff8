//! Zero-mode phase diagrams over `(Δ, μ)` grids, clean and disordered.
//!
//! Cells are numbered row-major with `Δ` outer and `μ` inner. Every cell is
//! an independent work item; disorder draws are keyed by cell and seed index,
//! never by evaluation order, so results do not depend on the worker count.

use serde::{Deserialize, Serialize};

use crate::canonical::{canonicalize, CanonicalForm, DEFAULT_ZERO_TOL};
use crate::chain::{build_majorana_matrix, sample_noise, ChainParams, NoiseConfig, SitePotentials};
use crate::par::{try_map_indexed, Execution};
use crate::{Error, Result, DEFAULT_ENERGY_TOL};

/// `count` evenly spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter(format!("{name} count must be at least 1")));
        }
        if !(self.min <= self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} range must be finite with min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub delta_range: AxisRange,
    pub mu_range: AxisRange,
    pub n_sites: usize,
    pub t: f64,
    pub energy_tol: f64,
    /// Also demand `ε₂ > 10 · energy_tol`, rejecting cells where the bulk gap
    /// has closed. Off by default.
    #[serde(default)]
    pub require_gap: bool,
}

impl GridSpec {
    pub fn new(delta_range: AxisRange, mu_range: AxisRange, n_sites: usize, t: f64) -> Self {
        Self { delta_range, mu_range, n_sites, t, energy_tol: DEFAULT_ENERGY_TOL, require_gap: false }
    }

    pub fn cell_count(&self) -> usize {
        self.delta_range.count * self.mu_range.count
    }

    /// `(delta, mu)` of cell `index`.
    pub fn cell(&self, index: usize) -> (f64, f64) {
        let (i, j) = (index / self.mu_range.count, index % self.mu_range.count);
        (self.delta_range.value(i), self.mu_range.value(j))
    }

    pub fn validate(&self) -> Result<()> {
        self.delta_range.validate("delta")?;
        self.mu_range.validate("mu")?;
        if self.delta_range.min < 0.0 {
            return Err(Error::InvalidParameter("delta range must be non-negative".into()));
        }
        if self.n_sites == 0 {
            return Err(Error::InvalidParameter("n_sites must be at least 1".into()));
        }
        if !(self.energy_tol > 0.0) {
            return Err(Error::InvalidParameter("energy_tol must be positive".into()));
        }
        Ok(())
    }

    fn is_topological(&self, eps1: f64, eps2: f64) -> bool {
        eps1 < self.energy_tol && (!self.require_gap || eps2 > 10.0 * self.energy_tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub delta: f64,
    pub mu: f64,
    /// Lowest energy (mean over realizations for noisy scans).
    pub eps1: f64,
    /// Second-lowest energy, NaN for a single site.
    pub eps2: f64,
    pub has_zero_mode: bool,
    pub survival_fraction: Option<f64>,
    pub n_seeds: Option<usize>,
}

fn canonical_cell(spec: &GridSpec, delta: f64, mu: f64, potentials: &SitePotentials) -> Result<CanonicalForm> {
    let params = ChainParams::new(spec.n_sites, spec.t, delta, mu);
    let tag = |e: Error| Error::AtGridCell { delta, mu, source: Box::new(e) };
    let form = build_majorana_matrix(&params, potentials).map_err(tag)?;
    canonicalize(&form, DEFAULT_ZERO_TOL).map_err(tag)
}

fn lowest_pair(canon: &CanonicalForm) -> (f64, f64) {
    (canon.eps1(), canon.eps2().unwrap_or(f64::NAN))
}

pub fn scan_phase(spec: &GridSpec) -> Result<Vec<PhasePoint>> {
    scan_phase_with(spec, Execution::default())
}

pub fn scan_phase_with(spec: &GridSpec, exec: Execution) -> Result<Vec<PhasePoint>> {
    spec.validate()?;
    let clean = SitePotentials::zeros(spec.n_sites);
    try_map_indexed(exec, spec.cell_count(), |idx| {
        let (delta, mu) = spec.cell(idx);
        let (eps1, eps2) = lowest_pair(&canonical_cell(spec, delta, mu, &clean)?);
        Ok(PhasePoint {
            delta,
            mu,
            eps1,
            eps2,
            has_zero_mode: spec.is_topological(eps1, eps2),
            survival_fraction: None,
            n_seeds: None,
        })
    })
}

/// How disorder realizations relate across grid cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Independent potentials for every cell and seed.
    #[default]
    PerCell,
    /// Seed `s` uses the same potentials in every cell.
    FixedAcrossGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanSpec {
    pub v0: f64,
    pub n_seeds: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub mode: NoiseMode,
    /// A cell is topological when more than this fraction of realizations is.
    pub majority: f64,
}

impl NoiseScanSpec {
    pub fn new(v0: f64, n_seeds: usize, base_seed: u64) -> Self {
        Self { v0, n_seeds, base_seed, mode: NoiseMode::PerCell, majority: 0.5 }
    }

    pub fn noise_config(&self, cell_index: usize, seed_index: usize) -> NoiseConfig {
        let draw = match self.mode {
            NoiseMode::PerCell => (cell_index as u64) * (self.n_seeds as u64) + seed_index as u64,
            NoiseMode::FixedAcrossGrid => seed_index as u64,
        };
        NoiseConfig::new(self.v0, self.base_seed, draw)
    }
}

pub fn scan_with_noise(spec: &GridSpec, noise: &NoiseScanSpec) -> Result<Vec<PhasePoint>> {
    scan_with_noise_with(spec, noise, Execution::default())
}

pub fn scan_with_noise_with(spec: &GridSpec, noise: &NoiseScanSpec, exec: Execution) -> Result<Vec<PhasePoint>> {
    spec.validate()?;
    if noise.n_seeds == 0 {
        return Err(Error::InvalidParameter("n_seeds must be at least 1".into()));
    }
    if !(noise.v0 >= 0.0) || !noise.v0.is_finite() {
        return Err(Error::InvalidParameter(format!("noise intensity must be non-negative, got {}", noise.v0)));
    }
    try_map_indexed(exec, spec.cell_count(), |idx| {
        let (delta, mu) = spec.cell(idx);
        let mut survived = 0usize;
        // running means stay bit-exact when every realization agrees
        let (mut mean1, mut mean2) = (0.0, 0.0);
        for s in 0..noise.n_seeds {
            let potentials = sample_noise(&noise.noise_config(idx, s), spec.n_sites);
            let (eps1, eps2) = lowest_pair(&canonical_cell(spec, delta, mu, &potentials)?);
            if spec.is_topological(eps1, eps2) {
                survived += 1;
            }
            let k = (s + 1) as f64;
            mean1 += (eps1 - mean1) / k;
            mean2 += (eps2 - mean2) / k;
        }
        let fraction = survived as f64 / noise.n_seeds as f64;
        Ok(PhasePoint {
            delta,
            mu,
            eps1: mean1,
            eps2: mean2,
            has_zero_mode: fraction > noise.majority,
            survival_fraction: Some(fraction),
            n_seeds: Some(noise.n_seeds),
        })
    })
}

/// For each `Δ` row (in order of first appearance), the largest `μ` with a
/// zero mode, or `None` when the row has none.
pub fn phase_boundary(points: &[PhasePoint]) -> Vec<(f64, Option<f64>)> {
    let mut rows: Vec<(f64, Option<f64>)> = Vec::new();
    for p in points {
        let idx = match rows.iter().position(|(d, _)| d.to_bits() == p.delta.to_bits()) {
            Some(i) => i,
            None => {
                rows.push((p.delta, None));
                rows.len() - 1
            }
        };
        if p.has_zero_mode {
            let best = &mut rows[idx].1;
            *best = Some(best.map_or(p.mu, |m: f64| m.max(p.mu)));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(delta: f64, mu: f64, has: bool) -> PhasePoint {
        PhasePoint { delta, mu, eps1: 0.0, eps2: 1.0, has_zero_mode: has, survival_fraction: None, n_seeds: None }
    }

    #[test]
    fn axis_values() {
        assert_eq!(AxisRange::new(0.5, 0.9, 1).values(), vec![0.5]);
        assert_eq!(AxisRange::new(0.0, 3.0, 4).values(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn boundary_of_full_grid() {
        let pts: Vec<_> = [0.1, 0.2].iter().flat_map(|&d| [0.0, 1.0, 2.5].map(|m| point(d, m, true))).collect();
        assert_eq!(phase_boundary(&pts), vec![(0.1, Some(2.5)), (0.2, Some(2.5))]);
    }

    #[test]
    fn boundary_of_empty_row() {
        let pts = vec![point(0.0, 0.0, false), point(0.0, 1.0, false), point(0.5, 0.0, true), point(0.5, 1.0, false)];
        assert_eq!(phase_boundary(&pts), vec![(0.0, None), (0.5, Some(0.0))]);
    }

    #[test]
    fn single_cell_points() {
        let spec = GridSpec::new(AxisRange::new(0.8, 0.8, 1), AxisRange::new(0.4, 0.4, 1), 60, 1.0);
        let pts = scan_phase(&spec).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].has_zero_mode);
        let spec = GridSpec::new(AxisRange::new(0.8, 0.8, 1), AxisRange::new(2.5, 2.5, 1), 60, 1.0);
        assert!(!scan_phase(&spec).unwrap()[0].has_zero_mode);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = GridSpec::new(AxisRange::new(0.8, 0.1, 3), AxisRange::new(0.0, 1.0, 3), 10, 1.0);
        assert!(scan_phase(&spec).is_err());
        spec.delta_range = AxisRange::new(0.1, 0.8, 0);
        assert!(scan_phase(&spec).is_err());
        spec.delta_range = AxisRange::new(0.1, 0.8, 2);
        assert!(scan_with_noise(&spec, &NoiseScanSpec::new(1.0, 0, 1)).is_err());
    }

    #[test]
    fn zero_noise_equals_clean() {
        let spec = GridSpec::new(AxisRange::new(0.1, 1.0, 4), AxisRange::new(0.0, 2.5, 6), 12, 1.0);
        let clean = scan_phase(&spec).unwrap();
        let noisy = scan_with_noise(&spec, &NoiseScanSpec::new(0.0, 3, 77)).unwrap();
        for (c, n) in clean.iter().zip(&noisy) {
            assert_eq!(c.has_zero_mode, n.has_zero_mode);
            assert_eq!(c.eps1.to_bits(), n.eps1.to_bits());
            assert_eq!(c.eps2.to_bits(), n.eps2.to_bits());
            let f = n.survival_fraction.unwrap();
            assert!(f == 0.0 || f == 1.0);
        }
    }

    #[test]
    fn fixed_mode_reuses_potentials() {
        let mut noise = NoiseScanSpec::new(1.0, 4, 9);
        noise.mode = NoiseMode::FixedAcrossGrid;
        assert_eq!(noise.noise_config(0, 2), noise.noise_config(17, 2));
        noise.mode = NoiseMode::PerCell;
        assert_ne!(noise.noise_config(0, 2), noise.noise_config(17, 2));
    }
}
