#![allow(dead_code)]

use kitaev_core::{
    build_majorana_matrix, canonicalize, CanonicalForm, ChainParams, Complex64, SitePotentials, DEFAULT_ZERO_TOL,
};
use nalgebra::{DMatrix, SymmetricEigen};

pub fn canon(p: &ChainParams) -> CanonicalForm {
    let form = build_majorana_matrix(p, &SitePotentials::zeros(p.n_sites)).unwrap();
    canonicalize(&form, DEFAULT_ZERO_TOL).unwrap()
}

/// Upper half of the eigenvalues of the Hermitian matrix `iA`, ascending.
pub fn hermitian_epsilons(a: &DMatrix<f64>) -> Vec<f64> {
    let ia = a.map(|x| Complex64::new(0.0, x));
    let mut ev: Vec<f64> = SymmetricEigen::new(ia).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.split_off(ev.len() / 2)
}

/// Pfaffian by Parlett–Reid reduction with partial pivoting.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let mut kp = k + 1;
        for i in k + 2..n {
            if a[(i, k)].abs() > a[(kp, k)].abs() {
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (r, i) in (k + 2..n).enumerate() {
                for (c, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[r] * col[c] - col[r] * tau[c];
                }
            }
        }
    }
    pf
}
