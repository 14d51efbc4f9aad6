mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qfilter::qmat::{ComplexMatrix, C64};
use qfilter::{
    bell_diagonal_weights, concurrence, correlation_matrix, fidelity_pure, mutual_information,
    pauli_channel_state, sample, von_neumann_entropy, BellLabel, DensityMatrix, PauliNoiseSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn mutual_information_nonnegative_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(183);
    for _ in 0..10_000 {
        let rank = rng.gen_range(1..=4);
        let rho = sample::density_matrix(&mut rng, 4, rank).unwrap();
        let mi = mutual_information(&rho).unwrap();
        assert!(mi >= -1e-12, "negative mutual information {mi}");
        assert!(mi <= 2.0 + 1e-12);
    }
}

#[test]
fn bell_diagonal_concurrence_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(184);
    for _ in 0..500 {
        let (rho, w) = common::random_bell_diagonal(&mut rng);
        let wmax = w.iter().cloned().fold(0.0, f64::max);
        let closed = (2.0 * wmax - 1.0).max(0.0);
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), closed, epsilon = 1e-9);
    }
}

/// Random X-shaped states built from a positive 2x2 block pair.
fn random_x_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for (i, j) in [(0, 3), (1, 2)] {
        let a: f64 = rng.gen_range(0.0..1.0);
        let b: f64 = rng.gen_range(0.0..1.0);
        let r = rng.gen_range(0.0..1.0) * (a * b).sqrt();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        m.set(i, i, C64::new(a, 0.0));
        m.set(j, j, C64::new(b, 0.0));
        m.set(i, j, C64::from_polar(r, phase));
        m.set(j, i, C64::from_polar(r, -phase));
    }
    DensityMatrix::from_unnormalized(m).unwrap()
}

#[test]
fn x_state_concurrence_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(185);
    for _ in 0..1000 {
        let rho = random_x_state(&mut rng);
        let oracle = common::x_state_concurrence(rho.matrix());
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), oracle, epsilon = 1e-9);
    }
}

#[test]
fn rank2_noise_states_have_one_unit_correlation() {
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        for spec in [PauliNoiseSpec::bit_flip(p).unwrap(), PauliNoiseSpec::phase_flip(p).unwrap()] {
            let rho = pauli_channel_state(&spec);
            let t = correlation_matrix(&rho).unwrap();
            let c = concurrence(&rho).unwrap();
            assert!(t.off_diagonal_max() < 1e-12);
            let mut d: Vec<f64> = t.diag().iter().map(|x| x.abs()).collect();
            d.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_abs_diff_eq!(d[0], 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(d[1], c, epsilon = 1e-9);
            assert_abs_diff_eq!(d[2], c, epsilon = 1e-9);
            assert_abs_diff_eq!(c, 1.0 - p, epsilon = 1e-9);
        }
    }
}

#[test]
fn noise_state_correlation_diagonals() {
    let p = 0.33;
    let bf = correlation_matrix(&pauli_channel_state(&PauliNoiseSpec::bit_flip(p).unwrap())).unwrap();
    let pf = correlation_matrix(&pauli_channel_state(&PauliNoiseSpec::phase_flip(p).unwrap())).unwrap();
    for (got, want) in bf.diag().iter().zip([1.0, -(1.0 - p), 1.0 - p]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
    for (got, want) in pf.diag().iter().zip([1.0 - p, -(1.0 - p), 1.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
}

#[test]
fn bit_flip_reference_values() {
    let rho = pauli_channel_state(&PauliNoiseSpec::bit_flip(0.33).unwrap());
    let s = common::binary_entropy(0.835);
    assert_abs_diff_eq!(s, 0.6461, epsilon = 1e-4);
    assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), s, epsilon = 1e-12);
    assert_abs_diff_eq!(mutual_information(&rho).unwrap(), 2.0 - s, epsilon = 1e-12);
    assert_abs_diff_eq!(mutual_information(&rho).unwrap(), 1.3539, epsilon = 1e-4);
    assert_abs_diff_eq!(concurrence(&rho).unwrap(), 0.67, epsilon = 1e-12);
    let phi = qfilter::bell_state(BellLabel::PhiPlus);
    assert_abs_diff_eq!(fidelity_pure(&rho, &phi).unwrap(), 0.835, epsilon = 1e-12);
    let w = bell_diagonal_weights(&rho).unwrap();
    assert_abs_diff_eq!(w.phi_plus, 0.835, epsilon = 1e-12);
    assert_abs_diff_eq!(w.psi_plus, 0.165, epsilon = 1e-12);
    assert_abs_diff_eq!(w.phi_minus, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(w.psi_minus, 0.0, epsilon = 1e-12);
}

#[test]
fn maximally_mixed_fidelity_is_quarter() {
    let mut rng = ChaCha8Rng::seed_from_u64(186);
    let mixed = DensityMatrix::maximally_mixed(4).unwrap();
    for _ in 0..20 {
        let pure = sample::density_matrix(&mut rng, 4, 1).unwrap();
        assert_abs_diff_eq!(fidelity_pure(&mixed, &pure).unwrap(), 0.25, epsilon = 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mutual_information_local_unitary_invariant(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sample::density_matrix(&mut rng, 4, rank).unwrap();
        let u = ComplexMatrix::kron(&sample::unitary_2(&mut rng), &sample::unitary_2(&mut rng)).unwrap();
        let rotated = rho.transform_unitary(&u).unwrap();
        let before = mutual_information(&rho).unwrap();
        let after = mutual_information(&rotated).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
        let dc = (concurrence(&rho).unwrap() - concurrence(&rotated).unwrap()).abs();
        prop_assert!(dc < 1e-9);
    }

    #[test]
    fn product_states_carry_nothing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::density_matrix(&mut rng, 2, 2).unwrap();
        let b = sample::density_matrix(&mut rng, 2, 1).unwrap();
        let ab = DensityMatrix::product(&a, &b).unwrap();
        prop_assert!(mutual_information(&ab).unwrap().abs() < 1e-9);
        prop_assert!(concurrence(&ab).unwrap() < 1e-9);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sample::density_matrix(&mut rng, 4, rank).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(rho, back);
    }
}
