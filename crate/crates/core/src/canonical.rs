//! Canonical block form `W A Wᵀ = ⊕_m [[0, ε_m], [-ε_m, 0]]`.
//!
//! With `γ̃ = W γ` the Hamiltonian becomes `Σ_m ε_m (ã†_m ã_m - 1/2)` where
//! `ã_m = (γ̃_{2m} + i γ̃_{2m+1}) / 2` (0-based rows). Energies are sorted
//! ascending, so rows 0 and 1 of `W` hold the lowest mode. That block is
//! always gauge-fixed: rotated within its span so row 0 has maximal weight on
//! the left half of the chain and a positive largest component.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chain::{skew_asymmetry, MajoranaForm};
use crate::skew::{is_bipartite, jacobi_svd, skew_tridiagonalize};
use crate::{Complex64, Error, Result};

/// Energies below this are treated as an exactly degenerate zero block.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

const ORTHOGONALITY_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-9;
const DETERMINANT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub n_sites: usize,
    /// Orthogonal transform, `γ̃ = W γ`.
    pub w: DMatrix<f64>,
    /// Quasiparticle energies, ascending and non-negative.
    pub epsilons: Vec<f64>,
    /// `det W`, exactly `+1.0` or `-1.0`.
    pub det_w: f64,
    /// `max |W A Wᵀ - canonical|`.
    pub residual: f64,
    /// `max |W Wᵀ - I|`.
    pub orthogonality: f64,
}

impl CanonicalForm {
    /// The block-diagonal target `⊕_m [[0, ε_m], [-ε_m, 0]]`.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let mut c = DMatrix::zeros(2 * self.n_sites, 2 * self.n_sites);
        for (m, &e) in self.epsilons.iter().enumerate() {
            c[(2 * m, 2 * m + 1)] = e;
            c[(2 * m + 1, 2 * m)] = -e;
        }
        c
    }

    pub fn eps1(&self) -> f64 {
        self.epsilons[0]
    }

    /// Second-lowest energy, if the chain has more than one site.
    pub fn eps2(&self) -> Option<f64> {
        self.epsilons.get(1).copied()
    }
}

/// Canonicalize the coefficient matrix of a chain.
pub fn canonicalize(form: &MajoranaForm, zero_tol: f64) -> Result<CanonicalForm> {
    canonicalize_matrix(&form.matrix, zero_tol)
}

/// Canonicalize an arbitrary real skew-symmetric matrix of even dimension.
///
/// `zero_tol` is the energy below which the lowest block counts as exactly
/// degenerate; its orientation is then fixed by convention (largest
/// component of row 1 positive) instead of by the sign of `ε₁`.
pub fn canonicalize_matrix(a: &DMatrix<f64>, zero_tol: f64) -> Result<CanonicalForm> {
    let dim = a.nrows();
    if a.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: a.ncols() });
    }
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("dimension must be even and positive, got {dim}")));
    }
    if !(zero_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("zero_tol must be positive, got {zero_tol}")));
    }
    let scale = a.amax().max(1.0);
    let asymmetry = skew_asymmetry(a);
    if asymmetry > 1e-12 * scale || a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotSkewSymmetric { asymmetry });
    }
    let n = dim / 2;

    // Bring A to the bipartite form (identity for chain matrices).
    let (reduced, q, reflections) = if is_bipartite(a) {
        (a.clone(), None, 0)
    } else {
        let st = skew_tridiagonalize(a);
        (st.t, Some(st.q), st.reflections)
    };
    let b = DMatrix::from_fn(n, n, |i, j| reduced[(2 * i, 2 * j + 1)]);
    let svd = jacobi_svd(&b)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| svd.sigma[x].total_cmp(&svd.sigma[y]).then(x.cmp(&y)));
    let epsilons: Vec<f64> = order.iter().map(|&k| svd.sigma[k]).collect();

    // Rows (2m, 2m+1) are (u_m, v_m) spread over even/odd Majorana indices.
    // Reordering whole pairs permutes rows twice, so det W is unchanged by it.
    let mut p = DMatrix::<f64>::zeros(dim, dim);
    for (m, &k) in order.iter().enumerate() {
        for i in 0..n {
            p[(2 * m, 2 * i)] = svd.u[(i, k)];
            p[(2 * m + 1, 2 * i + 1)] = svd.v[(i, k)];
        }
    }
    let mut w = match &q {
        Some(q) => p * q.transpose(),
        None => p,
    };
    let mut det_w = svd.det_u * if reflections % 2 == 0 { 1.0 } else { -1.0 };

    gauge_fix_lowest_block(&mut w, n);
    if epsilons[0] < zero_tol && largest_component(&w.row(1).transpose()) < 0.0 {
        w.row_mut(1).neg_mut();
        det_w = -det_w;
    }

    let orthogonality = (&w * w.transpose() - DMatrix::<f64>::identity(dim, dim)).amax();
    if orthogonality >= ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { deviation: orthogonality });
    }
    let mut canon = CanonicalForm { n_sites: n, w, epsilons, det_w, residual: 0.0, orthogonality };
    let transformed = &canon.w * a * canon.w.transpose();
    canon.residual = (transformed - canon.block_matrix()).amax();
    let max_eps = canon.epsilons.last().copied().unwrap_or(0.0);
    let tolerance = RESIDUAL_TOL * max_eps.max(1.0);
    if canon.residual >= tolerance {
        return Err(Error::ResidualTooLarge { residual: canon.residual, tolerance });
    }
    let evaluated = canon.w.clone().determinant();
    if (evaluated - canon.det_w).abs() >= DETERMINANT_TOL {
        return Err(Error::DeterminantMismatch { tracked: canon.det_w, evaluated });
    }
    Ok(canon)
}

/// Rotate rows 0 and 1 within their span (a proper rotation, which leaves the
/// block and `det W` invariant) so that row 0 carries the largest possible
/// weight on Majoranas `0..n` and its largest-magnitude entry is positive.
fn gauge_fix_lowest_block(w: &mut DMatrix<f64>, n: usize) {
    let r1: DVector<f64> = w.row(0).transpose();
    let r2: DVector<f64> = w.row(1).transpose();
    let (mut l11, mut l22, mut l12) = (0.0, 0.0, 0.0);
    for a in 0..n {
        l11 += r1[a] * r1[a];
        l22 += r2[a] * r2[a];
        l12 += r1[a] * r2[a];
    }
    let phi = 0.5 * (2.0 * l12).atan2(l11 - l22);
    let (s, c) = phi.sin_cos();
    let mut mode1 = &r1 * c + &r2 * s;
    let mut mode2 = &r2 * c - &r1 * s;
    if largest_component(&mode1) < 0.0 {
        mode1.neg_mut();
        mode2.neg_mut();
    }
    w.set_row(0, &mode1.transpose());
    w.set_row(1, &mode2.transpose());
}

/// The entry of largest magnitude (first one on ties).
fn largest_component(v: &DVector<f64>) -> f64 {
    v.iter().copied().fold(0.0, |best, x| if x.abs() > best.abs() { x } else { best })
}

/// Number of quasiparticles with `ε_m < energy_tol`.
pub fn zero_mode_count(canon: &CanonicalForm, energy_tol: f64) -> usize {
    canon.epsilons.iter().take_while(|&&e| e < energy_tol).count()
}

/// The two Majorana components of the lowest quasiparticle.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroModePair {
    /// Row of `W` for `γ̃₁`, indexed by Majorana.
    pub gamma1_components: Vec<f64>,
    /// Row of `W` for `γ̃₂`.
    pub gamma2_components: Vec<f64>,
    pub eps1: f64,
    /// Weight of `γ̃₁` on the left half of the chain.
    pub localization: f64,
}

pub fn extract_zero_modes(canon: &CanonicalForm, energy_tol: f64) -> Result<ZeroModePair> {
    let eps1 = canon.eps1();
    if zero_mode_count(canon, energy_tol) == 0 {
        return Err(Error::NoZeroMode { eps1, tolerance: energy_tol });
    }
    let gamma1: Vec<f64> = canon.w.row(0).iter().copied().collect();
    let gamma2: Vec<f64> = canon.w.row(1).iter().copied().collect();
    let localization = gamma1[..canon.n_sites].iter().map(|x| x * x).sum();
    Ok(ZeroModePair { gamma1_components: gamma1, gamma2_components: gamma2, eps1, localization })
}

/// `T_{J,j} = W_{2j,J} + i W_{2j+1,J}` (0-based), expressing each Majorana
/// `γ_J = Σ_j (T*_{J,j} ã_j + T_{J,j} ã†_j)`.
#[derive(Clone, Debug)]
pub struct QuasiparticleTransform {
    pub n_sites: usize,
    /// `2N × N`, rows by Majorana index, columns by quasiparticle.
    pub entries: DMatrix<Complex64>,
}

impl QuasiparticleTransform {
    pub fn get(&self, majorana: usize, mode: usize) -> Complex64 {
        self.entries[(majorana, mode)]
    }
}

pub fn quasiparticle_transform(canon: &CanonicalForm) -> QuasiparticleTransform {
    let n = canon.n_sites;
    let w = &canon.w;
    let entries = DMatrix::from_fn(2 * n, n, |big_j, j| Complex64::new(w[(2 * j, big_j)], w[(2 * j + 1, big_j)]));
    QuasiparticleTransform { n_sites: n, entries }
}
