//! A quantum dot coupled to the right end of the chain.
//!
//! The dot is a single level `D` with bias `V`, adding
//! `(V - μ)(D†D - 1/2) + H₁` where `H₁` has exactly the form of a chain bond
//! between the last site and the dot. Near the degenerate ground doublet the
//! coupling acts through the zero mode only, which gives closed-form energies
//! `±√((V-μ)²/4 + |S|²)` and the parity-reversing amplitudes `C₁`, `C₂`.
//! As a non-perturbative reference the dot is also treated as site `N+1` of
//! a longer chain with chemical potential `μ - V`.

use serde::{Deserialize, Serialize};

use crate::canonical::{canonicalize, quasiparticle_transform, CanonicalForm, DEFAULT_ZERO_TOL};
use crate::chain::{build_majorana_matrix, ChainParams, SitePotentials};
use crate::observables::excitation_gap;
use crate::par::{try_map_indexed, Execution};
use crate::{Complex64, Error, Result, DEFAULT_ENERGY_TOL};

/// `S = λ [-(−t+|Δ|)/2 · T_{2N−1,1} + i(t+|Δ|)/2 · T_{2N,1}]` (1-based
/// indices), computed from the bare chain's canonical form.
pub fn coupling_constant(canon: &CanonicalForm, chain: &ChainParams, scale: f64) -> Complex64 {
    let n = canon.n_sites;
    let t = quasiparticle_transform(canon);
    let weak = -chain.t + chain.delta_abs;
    let strong = chain.t + chain.delta_abs;
    let s = t.get(2 * n - 2, 0) * (-0.5 * weak) + t.get(2 * n - 1, 0) * Complex64::new(0.0, 0.5 * strong);
    s * scale
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbative {
    pub e_plus: f64,
    pub rho: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

/// Lower-energy superposition `C₁(α|0̃0⟩ + β|1̃0⟩) + C₂(α|1̃1⟩ + β|0̃1⟩)`.
///
/// `ρ = -[(V-μ)/2 + E₊]/S`, `C₁ = ρ/√(1+|ρ|²)`, `C₂ = 1/√(1+|ρ|²)`; the complex
/// phase of `S` is carried into `C₁` unchanged.
pub fn perturbative_amplitudes(v: f64, mu: f64, s: Complex64) -> Result<Perturbative> {
    if s.norm() == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let detuning = 0.5 * (v - mu);
    let e_plus = detuning.hypot(s.norm());
    let rho = -Complex64::new(detuning + e_plus, 0.0) / s;
    // 1 + |ρ|² without overflow for huge |ρ|
    let norm = rho.norm().hypot(1.0);
    let c1 = rho / norm;
    let c2 = Complex64::new(1.0 / norm, 0.0);
    Ok(Perturbative { e_plus, rho, c1, c2 })
}

/// Chain plus dot as an `(N+1)`-site chain: the extra site carries `μ - V`
/// and its bond to site `N` is scaled by `coupling_scale`.
pub fn exact_extended_chain(chain: &ChainParams, v: f64, coupling_scale: f64) -> Result<CanonicalForm> {
    chain.validate()?;
    let n = chain.n_sites;
    let extended = chain.with_sites(n + 1);
    let mut potentials = SitePotentials::zeros(n + 1);
    potentials.values[n] = v;
    let mut form = build_majorana_matrix(&extended, &potentials)?;
    form.scale_bond(n - 1, coupling_scale);
    canonicalize(&form, DEFAULT_ZERO_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DotSweepSpec {
    pub chain: ChainParams,
    pub v_min: f64,
    pub v_max: f64,
    pub v_count: usize,
    /// Multiplies the coupling (`1.0` is the bare `S`).
    pub coupling_scale: f64,
    /// Drop bias values with `E₊` at or above the chain's excitation gap.
    pub clamp_to_gap: bool,
    /// Also canonicalize the extended chain at every bias value.
    pub compute_exact: bool,
    pub energy_tol: f64,
}

impl DotSweepSpec {
    pub fn new(chain: ChainParams, v_min: f64, v_max: f64, v_count: usize) -> Self {
        Self {
            chain,
            v_min,
            v_max,
            v_count,
            coupling_scale: 1.0,
            clamp_to_gap: true,
            compute_exact: false,
            energy_tol: DEFAULT_ENERGY_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.chain.validate()?;
        if !(self.v_min < self.v_max) {
            return Err(Error::InvalidParameter(format!("need v_min < v_max, got [{}, {}]", self.v_min, self.v_max)));
        }
        if self.v_count < 2 {
            return Err(Error::InvalidParameter("v_count must be at least 2".into()));
        }
        if !(self.coupling_scale > 0.0) || !self.coupling_scale.is_finite() {
            return Err(Error::InvalidParameter("coupling_scale must be positive".into()));
        }
        Ok(())
    }

    pub fn v_at(&self, i: usize) -> f64 {
        self.v_min + (self.v_max - self.v_min) * i as f64 / (self.v_count - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub v: f64,
    pub s: Complex64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub rho: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    /// Lowest quasiparticle energy of the extended chain.
    pub exact_eps1: Option<f64>,
    /// All quasiparticle energies of the extended chain, ascending.
    pub exact_levels: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct DotSweepResult {
    pub points: Vec<SweepPoint>,
    /// Bias values removed by gap clamping.
    pub excluded: Vec<f64>,
    /// Excitation gap of the bare chain.
    pub chain_gap: f64,
    /// Coupling after scaling.
    pub s: Complex64,
}

pub fn sweep_bias(spec: &DotSweepSpec) -> Result<DotSweepResult> {
    sweep_bias_with(spec, Execution::default())
}

pub fn sweep_bias_with(spec: &DotSweepSpec, exec: Execution) -> Result<DotSweepResult> {
    spec.validate()?;
    let chain = &spec.chain;
    let bare = build_majorana_matrix(chain, &SitePotentials::zeros(chain.n_sites))?;
    let canon = canonicalize(&bare, DEFAULT_ZERO_TOL)?;
    let s = coupling_constant(&canon, chain, spec.coupling_scale);
    let chain_gap = excitation_gap(&canon, spec.energy_tol);

    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..spec.v_count {
        let v = spec.v_at(i);
        let amp = perturbative_amplitudes(v, chain.mu, s)?;
        if spec.clamp_to_gap && amp.e_plus >= chain_gap {
            excluded.push(v);
        } else {
            kept.push((v, amp));
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptySweep { gap: chain_gap });
    }

    let points = try_map_indexed(exec, kept.len(), |k| {
        let (v, amp) = kept[k];
        let levels =
            if spec.compute_exact { Some(exact_extended_chain(chain, v, spec.coupling_scale)?.epsilons) } else { None };
        Ok::<_, Error>(SweepPoint {
            v,
            s,
            e_plus: amp.e_plus,
            e_minus: -amp.e_plus,
            rho: amp.rho,
            c1: amp.c1,
            c2: amp.c2,
            exact_eps1: levels.as_ref().map(|l| l[0]),
            exact_levels: levels,
        })
    })?;
    Ok(DotSweepResult { points, excluded, chain_gap, s })
}
