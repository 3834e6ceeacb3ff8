//! Numerical toolkit for the open 1D Kitaev chain.
//!
//! The chain Hamiltonian is rewritten in Majorana operators as
//! `H = (i/4) Σ γ_a A_ab γ_b` with a real skew-symmetric `A`. Everything else
//! in the crate is built on a real orthogonal `W` that brings `A` to its
//! canonical block form:
//!
//! * [`chain`] builds `A` (optionally with on-site disorder) and bulk-band quantities.
//! * [`canonical`] computes `W`, the quasiparticle energies and the zero modes.
//! * [`observables`] derives ground-state energy, covariance, densities and parity.
//! * [`phase`] sweeps `(Δ, μ)` grids, clean or with disorder ensembles.
//! * [`dot`] couples a quantum dot to the chain end and tracks parity reversal.
//! * [`fock`] is a brute-force many-body reference for small chains.
//! * [`io`] writes the CSV/JSON data files.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod chain;
pub mod dot;
mod error;
pub mod fock;
pub mod io;
pub mod observables;
pub mod par;
pub mod phase;
mod skew;

pub use canonical::{
    canonicalize, canonicalize_matrix, extract_zero_modes, quasiparticle_transform, zero_mode_count, CanonicalForm,
    QuasiparticleTransform, ZeroModePair, DEFAULT_ZERO_TOL,
};
pub use chain::{
    build_majorana_matrix, bulk_dispersion, bulk_gap, sample_noise, ChainParams, MajoranaForm, NoiseConfig,
    SitePotentials,
};
pub use error::{Error, Result};
pub use par::Execution;

/// Energy below which a quasiparticle counts as a zero mode, in units of `t`.
pub const DEFAULT_ENERGY_TOL: f64 = 0.002;

pub use nalgebra::Complex;
/// Complex scalar used throughout.
pub type Complex64 = Complex<f64>;
