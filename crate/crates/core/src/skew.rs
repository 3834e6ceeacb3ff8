//! Dense kernels behind the canonical decomposition.
//!
//! A real skew-symmetric `A` of size `2N` whose only couplings run between
//! even and odd indices has the form `[[0, B], [-Bᵀ, 0]]` after grouping the
//! indices by parity, and an SVD `B = U Σ Vᵀ` yields its canonical blocks
//! directly. Chain matrices always have this structure. Any other skew
//! matrix is first reduced to skew-tridiagonal form by Householder
//! reflections, which produces the same structure.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

const JACOBI_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 80;

/// True when `a[i][j]` vanishes for every pair of equal parity.
pub(crate) fn is_bipartite(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (0..n).filter(|i| (i + j) % 2 == 0).all(|i| a[(i, j)] == 0.0))
}

/// Orthogonal similarity `A = Q T Qᵀ` with `T` skew-tridiagonal.
pub(crate) struct SkewTridiagonal {
    pub t: DMatrix<f64>,
    pub q: DMatrix<f64>,
    /// Number of Householder reflections applied; `det Q = (-1)^reflections`.
    pub reflections: usize,
}

pub(crate) fn skew_tridiagonalize(a: &DMatrix<f64>) -> SkewTridiagonal {
    let n = a.nrows();
    let mut t = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    let mut reflections = 0;
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: DVector<f64> = t.view((k + 1, k), (len, 1)).column(0).into_owned();
        let tail = x.rows(1, len - 1).norm();
        if tail == 0.0 {
            continue;
        }
        let norm = x.norm();
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let beta = 2.0 / v.norm_squared();

        // S ← P S P with P = I - β v vᵀ; for skew S this is S + v pᵀ - p vᵀ, p = β S v.
        let mut s = t.view_mut((k + 1, k + 1), (len, len));
        let p = (&s * &v) * beta;
        s.ger(1.0, &v, &p, 1.0);
        s.ger(-1.0, &p, &v, 1.0);

        t[(k + 1, k)] = alpha;
        t[(k, k + 1)] = -alpha;
        for i in k + 2..n {
            t[(i, k)] = 0.0;
            t[(k, i)] = 0.0;
        }

        // Q ← Q P on the trailing columns.
        let mut qs = q.view_mut((0, k + 1), (n, len));
        let qv = &qs * &v;
        qs.ger(-beta, &qv, &v, 1.0);
        reflections += 1;
    }
    SkewTridiagonal { t, q, reflections }
}

/// `B = U diag(σ) Vᵀ` with orthogonal `U`, `V` and `σ ≥ 0` (unsorted).
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
    /// Sign of `det U`. `V` is a product of plane rotations, so `det V = +1`.
    pub det_u: f64,
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
///
/// Columns are rotated until every pair is orthogonal to `JACOBI_TOL`
/// relative to their norms, which keeps the singular vectors of tiny
/// singular values accurate.
pub(crate) fn jacobi_svd(b: &DMatrix<f64>) -> Result<Svd> {
    let n = b.ncols();
    let mut g = b.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let mut norms: Vec<f64> = (0..n).map(|j| g.column(j).norm_squared()).collect();
    let mut converged = n < 2;
    let mut worst = 0.0_f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = g.column(p).dot(&g.column(q));
                let off = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                worst = worst.max(off);
                if off <= JACOBI_TOL {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let tan = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let cos = 1.0 / tan.hypot(1.0);
                let sin = cos * tan;
                rotate_columns(&mut g, p, q, cos, sin);
                rotate_columns(&mut v, p, q, cos, sin);
                norms[p] = g.column(p).norm_squared();
                norms[q] = g.column(q).norm_squared();
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, residual: worst });
    }

    let sigma: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut missing = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if s > f64::MIN_POSITIVE * 1e4 {
            u.set_column(j, &(g.column(j) / s));
        } else {
            missing.push(j);
        }
    }
    complete_orthonormal(&mut u, &missing);

    let det = u.clone().determinant();
    if (det.abs() - 1.0).abs() > 1e-8 {
        return Err(Error::NotOrthogonal { deviation: (det.abs() - 1.0).abs() });
    }
    Ok(Svd { u, sigma, v, det_u: det.signum() })
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, cos: f64, sin: f64) {
    for i in 0..m.nrows() {
        let (a, b) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = cos * a - sin * b;
        m[(i, q)] = sin * a + cos * b;
    }
}

/// Fill the columns listed in `missing` with unit vectors orthogonal to all
/// other columns, choosing at each step the coordinate axis with the largest
/// component outside the current span.
fn complete_orthonormal(u: &mut DMatrix<f64>, missing: &[usize]) {
    let n = u.nrows();
    let mut filled: Vec<usize> = (0..u.ncols()).filter(|j| !missing.contains(j)).collect();
    for &j in missing {
        let mut best: Option<DVector<f64>> = None;
        let mut best_norm = -1.0;
        for k in 0..n {
            let mut e = DVector::<f64>::zeros(n);
            e[k] = 1.0;
            for _ in 0..2 {
                for &f in &filled {
                    let c = u.column(f).dot(&e);
                    e.axpy(-c, &u.column(f), 1.0);
                }
            }
            let norm = e.norm();
            if norm > best_norm + 1e-12 {
                best_norm = norm;
                best = Some(e / norm);
            }
        }
        u.set_column(j, &best.expect("matrix has at least one row"));
        filled.push(j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_skew(n: usize, seed: u64) -> DMatrix<f64> {
        // small LCG keeps this test free of extra dependencies
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x = next();
                a[(i, j)] = x;
                a[(j, i)] = -x;
            }
        }
        a
    }

    #[test]
    fn tridiagonalization_is_similarity() {
        for n in [2, 3, 6, 9] {
            let a = random_skew(n, n as u64);
            let st = skew_tridiagonalize(&a);
            let back = &st.q * &st.t * st.q.transpose();
            assert!((back - &a).amax() < 1e-13);
            assert!((&st.q * st.q.transpose() - DMatrix::identity(n, n)).amax() < 1e-13);
            for i in 0..n {
                for j in 0..n {
                    if i.abs_diff(j) > 1 {
                        assert_eq!(st.t[(i, j)], 0.0);
                    }
                }
            }
            let det = st.q.determinant();
            let expected = if st.reflections.is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((det - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_output_is_bipartite() {
        let st = skew_tridiagonalize(&random_skew(8, 3));
        assert!(is_bipartite(&st.t));
        assert!(!is_bipartite(&random_skew(8, 3)));
    }

    #[test]
    fn jacobi_svd_reconstructs() {
        let b = DMatrix::from_fn(7, 7, |i, j| ((i * 7 + j) as f64 * 0.37).sin());
        let svd = jacobi_svd(&b).unwrap();
        let rebuilt = &svd.u * DMatrix::from_diagonal(&DVector::from_vec(svd.sigma.clone())) * svd.v.transpose();
        assert!((rebuilt - &b).amax() < 1e-13);
        assert!((svd.v.determinant() - 1.0).abs() < 1e-12);
        assert!((svd.u.determinant() - svd.det_u).abs() < 1e-12);
    }

    #[test]
    fn jacobi_svd_completes_null_space() {
        let mut b = DMatrix::zeros(4, 4);
        b[(1, 0)] = -2.0;
        b[(2, 1)] = -2.0;
        b[(3, 2)] = -2.0;
        let svd = jacobi_svd(&b).unwrap();
        assert_eq!(svd.sigma, vec![2.0, 2.0, 2.0, 0.0]);
        assert!((&svd.u * svd.u.transpose() - DMatrix::identity(4, 4)).amax() < 1e-15);
        assert_eq!(svd.u[(0, 3)].abs(), 1.0);
    }
}
