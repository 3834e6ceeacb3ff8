//! Brute-force many-body reference in the occupation-number basis.
//!
//! Basis state `s` is a bitmask with bit `j` set when site `j` (0-based) is
//! occupied. Fermionic signs follow Jordan–Wigner ordering of the sites:
//! `a_j` acting on `s` picks up `(-1)^{popcount(s & ((1 << j) - 1))}`. This
//! is the single sign convention used wherever many-body states appear.
//!
//! The Hamiltonian conserves parity, so each parity sector is diagonalized
//! separately and every eigenvector has definite parity.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::canonical::{canonicalize, DEFAULT_ZERO_TOL};
use crate::chain::{build_majorana_matrix, ChainParams, SitePotentials};
use crate::observables::{ground_state_report, many_body_spectrum};
use crate::{Complex64, Error, Result};

pub const MAX_FOCK_SITES: usize = 10;

/// Two lowest eigenvalues closer than this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct FockHamiltonian {
    pub n_sites: usize,
    pub matrix: DMatrix<Complex64>,
}

fn sign_before(state: usize, site: usize) -> f64 {
    if (state & ((1 << site) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `a_j |s⟩` as `(sign, s')`, or `None` when site `j` is empty.
fn annihilate(state: usize, site: usize) -> Option<(f64, usize)> {
    (state & (1 << site) != 0).then(|| (sign_before(state, site), state & !(1 << site)))
}

fn create(state: usize, site: usize) -> Option<(f64, usize)> {
    (state & (1 << site) == 0).then(|| (sign_before(state, site), state | (1 << site)))
}

pub fn build_fock_hamiltonian(params: &ChainParams, potentials: &SitePotentials) -> Result<FockHamiltonian> {
    params.validate()?;
    let n = params.n_sites;
    if n > MAX_FOCK_SITES {
        return Err(Error::TooManySites { n_sites: n, max: MAX_FOCK_SITES });
    }
    if potentials.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: potentials.len() });
    }
    let dim = 1usize << n;
    let delta = Complex64::from_polar(params.delta_abs, params.theta);
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);

    for s in 0..dim {
        // -Σ (μ - V_j)(n_j - 1/2)
        let diag: f64 = (0..n)
            .map(|j| {
                let occ = ((s >> j) & 1) as f64;
                -(params.mu - potentials.values[j]) * (occ - 0.5)
            })
            .sum();
        h[(s, s)] += Complex64::new(diag, 0.0);

        for j in 0..n.saturating_sub(1) {
            // -t a†_j a_{j+1} + h.c.
            for (from, to) in [(j + 1, j), (j, j + 1)] {
                if let Some((s1, mid)) = annihilate(s, from) {
                    if let Some((s2, out)) = create(mid, to) {
                        h[(out, s)] += Complex64::new(-params.t * s1 * s2, 0.0);
                    }
                }
            }
            // Δ a_j a_{j+1}
            if let Some((s1, mid)) = annihilate(s, j + 1) {
                if let Some((s2, out)) = annihilate(mid, j) {
                    h[(out, s)] += delta * (s1 * s2);
                }
            }
            // Δ* a†_{j+1} a†_j
            if let Some((s1, mid)) = create(s, j) {
                if let Some((s2, out)) = create(mid, j + 1) {
                    h[(out, s)] += delta.conj() * (s1 * s2);
                }
            }
        }
    }
    Ok(FockHamiltonian { n_sites: n, matrix: h })
}

/// Parity `Π_j (1 - 2n_j)` of a basis state.
pub fn state_parity(state: usize) -> i8 {
    if state.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// An eigenstate with definite parity.
#[derive(Clone, Debug, Serialize)]
pub struct FockEigenstate {
    pub energy: f64,
    pub parity: i8,
    pub densities: Vec<f64>,
}

impl FockHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest matrix element connecting states of opposite parity.
    pub fn parity_leakage(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in 0..dim {
                if state_parity(r) != state_parity(c) {
                    worst = worst.max(self.matrix[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// All eigenstates, sorted by energy (ties: even sector first).
    pub fn eigenstates(&self) -> Vec<FockEigenstate> {
        let mut out = Vec::with_capacity(self.dim());
        for parity in [1i8, -1] {
            let basis: Vec<usize> = (0..self.dim()).filter(|&s| state_parity(s) == parity).collect();
            let block = DMatrix::from_fn(basis.len(), basis.len(), |r, c| self.matrix[(basis[r], basis[c])]);
            let eig = SymmetricEigen::new(block);
            for (k, &energy) in eig.eigenvalues.iter().enumerate() {
                let vec = eig.eigenvectors.column(k);
                let mut densities = vec![0.0; self.n_sites];
                for (idx, &s) in basis.iter().enumerate() {
                    let w = vec[idx].norm_sqr();
                    for (j, d) in densities.iter_mut().enumerate() {
                        if s & (1 << j) != 0 {
                            *d += w;
                        }
                    }
                }
                out.push(FockEigenstate { energy, parity, densities });
            }
        }
        out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(b.parity.cmp(&a.parity)));
        out
    }

    pub fn spectrum(&self) -> Vec<f64> {
        self.eigenstates().into_iter().map(|s| s.energy).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleGround {
    pub energy: f64,
    pub parity: i8,
    pub densities: Vec<f64>,
    pub degeneracy_flag: bool,
    /// The other member of a degenerate ground doublet.
    pub second: Option<FockEigenstate>,
}

impl OracleGround {
    /// The ground-state member whose densities are closest (max-norm) to `target`.
    pub fn closest_to(&self, target: &[f64]) -> (i8, &[f64]) {
        let dist = |d: &[f64]| d.iter().zip(target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        match &self.second {
            Some(other) if dist(&other.densities) < dist(&self.densities) => (other.parity, &other.densities),
            _ => (self.parity, &self.densities),
        }
    }
}

pub fn oracle_ground(params: &ChainParams, potentials: &SitePotentials) -> Result<OracleGround> {
    let h = build_fock_hamiltonian(params, potentials)?;
    let mut states = h.eigenstates().into_iter();
    let first = states.next().expect("Fock space is never empty");
    let second = states.next();
    let degenerate = second.as_ref().is_some_and(|s| s.energy - first.energy < DEGENERACY_TOL);
    Ok(OracleGround {
        energy: first.energy,
        parity: first.parity,
        densities: first.densities,
        degeneracy_flag: degenerate,
        second: if degenerate { second } else { None },
    })
}

/// Largest disagreements between the canonical-form path and brute force.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct OracleDeviation {
    pub energy: f64,
    pub density: f64,
    pub spectrum: f64,
    pub parity_mismatch: bool,
}

impl OracleDeviation {
    pub fn max(self, other: Self) -> Self {
        Self {
            energy: self.energy.max(other.energy),
            density: self.density.max(other.density),
            spectrum: self.spectrum.max(other.spectrum),
            parity_mismatch: self.parity_mismatch || other.parity_mismatch,
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        !self.parity_mismatch && self.energy <= tol && self.density <= tol && self.spectrum <= tol
    }
}

/// Compare ground energy, densities, parity and the full spectrum. In a
/// degenerate ground doublet the member closest in density is used.
pub fn oracle_deviation(params: &ChainParams, potentials: &SitePotentials) -> Result<OracleDeviation> {
    let h = build_fock_hamiltonian(params, potentials)?;
    let canon = canonicalize(&build_majorana_matrix(params, potentials)?, DEFAULT_ZERO_TOL)?;
    let report = ground_state_report(&canon, 0.0);

    let states = h.eigenstates();
    let ground = &states[0];
    let mut candidates = vec![ground];
    if states.len() > 1 && states[1].energy - ground.energy < DEGENERACY_TOL {
        candidates.push(&states[1]);
    }
    let dist = |d: &[f64]| d.iter().zip(&report.densities).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let best = candidates
        .into_iter()
        .min_by(|a, b| dist(&a.densities).total_cmp(&dist(&b.densities)))
        .expect("at least one candidate");

    let exact: Vec<f64> = states.iter().map(|s| s.energy).collect();
    let spectrum =
        many_body_spectrum(&canon.epsilons).iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(OracleDeviation {
        energy: (report.energy - ground.energy).abs(),
        density: dist(&best.densities),
        spectrum,
        parity_mismatch: best.parity != report.parity,
    })
}
