mod common;

use common::*;
use proptest::prelude::*;
use symprot::entangle::{product_state, single_product_factors, slater_report, takagi, TwoPhotonMatrix, DEFAULT_RANK_TOL};
use symprot::fock::FockBasis;
use symprot::linalg::{c64, CMatrix, CVector};
use symprot::{FockState, ModeSpace, StateRecipe};

fn matrix_of(text: &str) -> TwoPhotonMatrix {
    TwoPhotonMatrix::from_state(&StateRecipe::parse(text, 1).unwrap().build().unwrap()).unwrap()
}

#[test]
fn named_ranks() {
    let expected = [("phi1", 2), ("phi2", 2), ("phi3", 2), ("s1", 1), ("s2", 1), ("psi1", 2), ("psi2", 2), ("psi3", 4), ("psi4", 4)];
    for (name, rank) in expected {
        let r = slater_report(&matrix_of(name), DEFAULT_RANK_TOL);
        assert_eq!(r.slater_rank, rank, "{name}");
        assert_eq!(r.is_single_product, rank <= 2);
        assert!(r.reconstruction_error < 1e-10);
    }
}

#[test]
fn takagi_values_are_singular_values() {
    let mut r = rng(41);
    for space in [ModeSpace::h0(), ModeSpace::hm(1).unwrap(), "h0+hm:3".parse().unwrap()] {
        let n = space.dim();
        let a = random_matrix(&mut r, n);
        let sym = (&a + a.transpose()) * c64(0.5, 0.0);
        let t = takagi(&TwoPhotonMatrix::new(space, sym.clone()).unwrap(), DEFAULT_RANK_TOL);
        let mut sv: Vec<f64> = sym.singular_values().iter().cloned().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in t.sigma.iter().zip(&sv) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((t.reconstruct() - &sym).norm() < 1e-10);
        let id = CMatrix::identity(n, n);
        assert!((t.u.adjoint() * &t.u - id).norm() < 1e-10);
    }
}

#[test]
fn rank_deficient_takagi_is_still_unitary() {
    let c = matrix_of("psi1");
    let t = takagi(&c, DEFAULT_RANK_TOL);
    assert!((t.u.adjoint() * &t.u - CMatrix::identity(4, 4)).norm() < 1e-10);
    assert!((t.reconstruct() - c.matrix()).norm() < 1e-12);
}

#[test]
fn basis_change_invariance() {
    let mut r = rng(42);
    for name in ["phi3", "psi4", "psi3", "psi1"] {
        let c = matrix_of(name);
        let base = slater_report(&c, DEFAULT_RANK_TOL).singular_values;
        let n = c.matrix().nrows();
        for _ in 0..100 {
            let v = random_unitary(&mut r, n);
            let moved = TwoPhotonMatrix::new(c.space().clone(), v.transpose() * c.matrix() * &v).unwrap();
            let vals = slater_report(&moved, DEFAULT_RANK_TOL).singular_values;
            for (a, b) in base.iter().zip(&vals) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

fn random_two_photon_state(seed: u64, space: &ModeSpace, rank: usize) -> FockState {
    let mut r = rng(seed);
    let n = space.dim();
    let mut c = CMatrix::zeros(n, n);
    for _ in 0..rank {
        let x = CVector::from_fn(n, |_, _| c64(rand::Rng::gen_range(&mut r, -1.0..1.0), rand::Rng::gen_range(&mut r, -1.0..1.0)));
        c += &x * x.transpose();
    }
    TwoPhotonMatrix::new(space.clone(), c).unwrap().to_state().unwrap().normalized().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_two_states_factor_into_two_creation_operators(seed in any::<u64>(), rank in 1usize..=2) {
        let space = ModeSpace::hm(1).unwrap();
        let state = random_two_photon_state(seed, &space, rank);
        let c = TwoPhotonMatrix::from_state(&state).unwrap();
        prop_assert_eq!(slater_report(&c, DEFAULT_RANK_TOL).slater_rank, rank);
        let (u, v) = single_product_factors(&c, DEFAULT_RANK_TOL).unwrap();
        let rebuilt = product_state(&space, &u, &v).unwrap();
        prop_assert!((rebuilt.amplitudes() - state.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn higher_rank_states_do_not_factor(seed in any::<u64>(), rank in 3usize..=4) {
        let space = ModeSpace::hm(2).unwrap();
        let state = random_two_photon_state(seed, &space, rank);
        let c = TwoPhotonMatrix::from_state(&state).unwrap();
        prop_assert_eq!(slater_report(&c, DEFAULT_RANK_TOL).slater_rank, rank);
        prop_assert!(single_product_factors(&c, DEFAULT_RANK_TOL).is_none());
    }

    #[test]
    fn matrix_round_trip(seed in any::<u64>()) {
        let space = ModeSpace::hm(1).unwrap();
        let basis = FockBasis::new(space, 2).unwrap();
        let mut r = rng(seed);
        let amps = CVector::from_fn(basis.len(), |_, _| c64(rand::Rng::gen_range(&mut r, -1.0..1.0), rand::Rng::gen_range(&mut r, -1.0..1.0)));
        let state = FockState::new(basis, amps).unwrap();
        let back = TwoPhotonMatrix::from_state(&state).unwrap().to_state().unwrap();
        prop_assert!((back.amplitudes() - state.amplitudes()).norm() < 1e-14);
    }
}
