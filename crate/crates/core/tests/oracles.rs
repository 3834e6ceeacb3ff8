mod common;

use common::{canon, hermitian_epsilons, pfaffian};
use kitaev_core::fock::{build_fock_hamiltonian, oracle_deviation};
use kitaev_core::observables::covariance_matrix;
use kitaev_core::{build_majorana_matrix, ChainParams, SitePotentials};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng, n: usize) -> ChainParams {
    ChainParams::new(n, rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0))
        .with_theta(rng.random_range(0.0..std::f64::consts::TAU))
}

#[test]
fn pfaffian_oracle_on_known_matrices() {
    let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    assert_eq!(pfaffian(&j), 1.0);
    // Pf of a 4×4 skew matrix is a12 a34 - a13 a24 + a14 a23
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 1.0, 2.0, 3.0, //
            -1.0, 0.0, 4.0, 5.0, //
            -2.0, -4.0, 0.0, 6.0, //
            -3.0, -5.0, -6.0, 0.0,
        ],
    );
    assert!((pfaffian(&a) - (6.0 - 10.0 + 12.0)).abs() < 1e-12);
}

#[test]
fn spectrum_matches_hermitian_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &n in &[2usize, 5, 8] {
        for _ in 0..50 {
            let p = random_params(&mut rng, n);
            let form = build_majorana_matrix(&p, &SitePotentials::zeros(n)).unwrap();
            let reference = hermitian_epsilons(&form.matrix);
            let eps = canon(&p).epsilons;
            for (a, b) in eps.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-9, "{p:?}: {eps:?} vs {reference:?}");
            }
        }
    }
}

#[test]
fn covariance_pfaffian_is_det_w() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for &n in &[2usize, 4, 6] {
        for _ in 0..20 {
            let p = random_params(&mut rng, n);
            let c = canon(&p);
            let pf = pfaffian(&covariance_matrix(&c).m);
            assert!((pf - c.det_w).abs() < 1e-9, "{p:?}: Pf {pf} det {}", c.det_w);
        }
    }
}

#[test]
fn canonical_path_matches_fock_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=8 {
        for _ in 0..6 {
            let p = random_params(&mut rng, n);
            let d = oracle_deviation(&p, &SitePotentials::zeros(n)).unwrap();
            assert!(d.within(1e-9), "{p:?}: {d:?}");
        }
    }
}

#[test]
fn disordered_chains_match_fock_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let n = rng.random_range(2..=6);
        let p = random_params(&mut rng, n);
        let pots = SitePotentials::from((0..n).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>());
        let d = oracle_deviation(&p, &pots).unwrap();
        assert!(d.within(1e-9), "{p:?}: {d:?}");
    }
}

#[test]
fn fock_parity_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 2..=6 {
        let h = build_fock_hamiltonian(&random_params(&mut rng, n), &SitePotentials::zeros(n)).unwrap();
        assert_eq!(h.parity_leakage(), 0.0);
        assert!(h.hermiticity_error() < 1e-14);
    }
}
