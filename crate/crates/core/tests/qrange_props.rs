use proptest::prelude::*;
use qradius_core::linalg::{inner, ComplexMatrix, C64};
use qradius_core::qrange::{
    estimate_radius, exact_2x2, sample_oracle, support_function, trace_boundary, AscentConfig, QParameter,
};
use qradius_core::verify::ensemble::{random_matrix, random_phase, random_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(seed: u64) -> AscentConfig {
    AscentConfig::default().with_seed(seed)
}

fn w(a: &ComplexMatrix, q: f64, seed: u64) -> f64 {
    estimate_radius(a, &QParameter::real(q).unwrap(), &cfg(seed)).unwrap().value
}

#[test]
fn optimizer_agrees_with_closed_form_on_2x2() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for i in 0..200 {
        let a = random_matrix(&mut rng, 2);
        for q in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let qp = QParameter::real(q).unwrap();
            let est = estimate_radius(&a, &qp, &cfg(i)).unwrap();
            let (_, exact) = exact_2x2(&a, &qp).unwrap();
            worst = worst.max((est.value - exact).abs());
        }
    }
    assert!(worst <= 1e-6, "worst gap {worst:e}");
}

#[test]
fn sampling_never_beats_optimizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..40 {
        let dim = 2 + i % 3;
        let a = random_matrix(&mut rng, dim);
        let qp = QParameter::real(0.2 + 0.2 * (i % 5) as f64).unwrap();
        let est = estimate_radius(&a, &qp, &cfg(i as u64)).unwrap();
        let sampled = sample_oracle(&a, &qp, 10_000, i as u64).unwrap();
        assert!(sampled <= est.value + 1e-9, "{sampled} > {}", est.value);
    }
}

#[test]
fn classical_value_of_hermitian_is_spectral_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for dim in 2..6 {
        let g = random_matrix(&mut rng, dim);
        let h = &(&g + &g.adjoint()) * C64::new(0.5, 0.0);
        // spectral radius of a Hermitian matrix is its operator norm
        assert!((w(&h, 1.0, 1) - h.operator_norm()).abs() < 1e-6);
    }
}

#[test]
fn support_maximum_matches_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..6 {
        let a = random_matrix(&mut rng, 3);
        let qp = QParameter::real(0.6).unwrap();
        let est = estimate_radius(&a, &qp, &cfg(i)).unwrap();
        let ax = a.apply(est.witness_x.as_slice()).unwrap();
        let z = inner(&ax, est.witness_y.as_slice());
        let h = support_function(&a, &qp, z.arg(), &cfg(i)).unwrap();
        assert!((h - est.value).abs() <= 1e-6, "{h} vs {}", est.value);
    }
}

#[test]
fn boundary_half_planes_hold_for_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..4 {
        let a = random_matrix(&mut rng, 2 + i % 2);
        let qp = QParameter::real(0.3 + 0.2 * i as f64).unwrap();
        let tr = trace_boundary(&a, &qp, 72, &AscentConfig::default().with_seed(i as u64).with_restarts(16)).unwrap();
        assert!(tr.half_plane_violation() <= 1e-7, "{}", tr.half_plane_violation());
        assert!(tr.outer_violation() <= 1e-7, "{}", tr.outer_violation());
    }
}

#[test]
fn jordan_boundary_is_circle() {
    let qp = QParameter::real(0.6).unwrap();
    let tr = trace_boundary(&ComplexMatrix::jordan(2), &qp, 360, &AscentConfig::default().with_restarts(16)).unwrap();
    assert!(tr.half_plane_violation() <= 1e-7);
    for z in &tr.points {
        assert!((z.norm() - 0.9).abs() < 1e-9, "{}", z.norm());
    }
    // vertices of the circumscribed polygon sit at most 0.9/cos(pi/360)
    for z in &tr.outer {
        assert!(z.norm() >= 0.9 - 1e-9 && z.norm() <= 0.9 / (std::f64::consts::PI / 360.0).cos() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homogeneous(seed in 0u64..10_000, dim in 2usize..4, q in 0.1f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim);
        let lam = random_phase(&mut rng) * rng.gen_range(0.1..3.0);
        let lhs = w(&a.scale(lam), q, seed);
        let rhs = lam.norm() * w(&a, q, seed);
        prop_assert!((lhs - rhs).abs() <= 1e-7 * (1.0 + rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn subadditive(seed in 0u64..10_000, dim in 2usize..4, q in 0.1f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim);
        let b = random_matrix(&mut rng, dim);
        prop_assert!(w(&(&a + &b), q, seed) <= w(&a, q, seed) + w(&b, q, seed) + 1e-6);
    }

    #[test]
    fn unitarily_invariant(seed in 0u64..10_000, dim in 2usize..4, q in 0.1f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim);
        let u = random_unitary(&mut rng, dim);
        let b = &(&u.adjoint() * &a) * &u;
        prop_assert!((w(&b, q, seed) - w(&a, q, seed)).abs() <= 1e-6);
    }

    #[test]
    fn phase_of_q_is_irrelevant(seed in 0u64..10_000, dim in 2usize..4, q in 0.1f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim);
        let lam = random_phase(&mut rng);
        let rotated = estimate_radius(&a, &QParameter::new(lam * q).unwrap(), &cfg(seed)).unwrap().value;
        prop_assert!((rotated - w(&a, q, seed)).abs() <= 1e-7);
    }
}
