mod common;

use common::{
    durand_kerner, faddeev_leverrier, match_distance, poly_eval, random_matrix, taylor_exp,
};
use ladders::linalg::eigen::eigenvalues;
use ladders::linalg::{
    determinant, eigensystem, inverse, matrix_exponential, qmutator, singular_values,
    ComplexMatrix, C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=8 {
        for _ in 0..10 {
            let a = random_matrix(n, &mut rng);
            let roots = durand_kerner(&faddeev_leverrier(&a));
            let es = eigensystem(&a).unwrap();
            let d = match_distance(&es.values, &roots);
            assert!(
                d < 1e-9,
                "n={n}: eigenvalues differ from polynomial roots by {d:e}"
            );
            assert!(es.max_residual(&a) < 1e-12 * (1.0 + a.frobenius_norm()));
        }
    }
}

#[test]
fn determinant_is_constant_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=7 {
        let a = random_matrix(n, &mut rng);
        let c = faddeev_leverrier(&a);
        // det(z − A) at z = 0 is (−1)^n det A
        let want = c[0] * if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((determinant(&a) - want).norm() < 1e-12 * (1.0 + want.norm()));
    }
}

#[test]
fn eigenvalues_annihilate_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_matrix(6, &mut rng);
    let c = faddeev_leverrier(&a);
    let scale: f64 = c.iter().map(|x| x.norm()).sum();
    for z in eigenvalues(&a).unwrap() {
        let p = poly_eval(&c, z);
        assert!(p.norm() < 1e-12 * scale * (1.0 + z.norm()).powi(6), "{p}");
    }
}

#[test]
fn exponential_matches_taylor_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=6 {
        let a = random_matrix(n, &mut rng).scale_real(0.3);
        let e = matrix_exponential(&a).unwrap();
        assert!(e.distance(&taylor_exp(&a, 30)) < 1e-14);
    }
}

#[test]
fn exponential_of_large_norm_by_repeated_squares() {
    // exp(8X) = exp(X)^8 with the right side from a small-norm Taylor series
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_matrix(4, &mut rng).scale_real(0.5);
    let big = matrix_exponential(&x.scale_real(8.0)).unwrap();
    let small = taylor_exp(&x, 40);
    let want = small.pow(8);
    assert!(big.distance(&want) < 1e-11 * want.frobenius_norm());
}

#[test]
fn singular_values_square_to_gram_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = random_matrix(5, &mut rng);
    let gram = &a.adjoint() * &a;
    let mut ev: Vec<f64> = eigenvalues(&gram).unwrap().iter().map(|z| z.re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    for (s, l) in singular_values(&a).iter().zip(ev) {
        assert!((s * s - l).abs() < 1e-12 * (1.0 + l));
    }
}

fn arb_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(|v| {
            ComplexMatrix::from_row_major(v.into_iter().map(|(r, i)| C64::new(r, i)).collect())
                .unwrap()
        })
    })
}

proptest! {
    #[test]
    fn adjoint_is_an_involution(a in arb_matrix(6)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn trace_is_cyclic(a in arb_matrix(5), seed in any::<u64>()) {
        let b = random_matrix(a.dim(), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(((&a * &b).trace() - (&b * &a).trace()).norm() < 1e-12 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
    }

    #[test]
    fn qmutator_interpolates(a in arb_matrix(4), q in -1.0f64..=1.0) {
        let b = a.adjoint();
        let direct = &(&a * &b) - &(&b * &a).scale_real(q);
        prop_assert!(qmutator(&a, &b, q).unwrap().distance(&direct) == 0.0);
    }

    #[test]
    fn exp_of_minus_x_is_inverse(a in arb_matrix(5)) {
        let e = matrix_exponential(&a).unwrap();
        let f = matrix_exponential(&(-&a)).unwrap();
        let id = ComplexMatrix::identity(a.dim());
        // ‖X‖_F ≤ 2√2·5 keeps exp(±X) below e^15, so relative error stays tame
        let scale = e.frobenius_norm() * f.frobenius_norm();
        prop_assert!((&e * &f).distance(&id) < 1e-13 * scale.max(1.0));
    }

    #[test]
    fn hermitian_spectrum_is_real(a in arb_matrix(6)) {
        let h = &a + &a.adjoint();
        for z in eigenvalues(&h).unwrap() {
            prop_assert!(z.im.abs() < 1e-12 * (1.0 + h.frobenius_norm()));
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity(a in arb_matrix(6)) {
        if let Ok(inv) = inverse(&a, 1e8) {
            let id = ComplexMatrix::identity(a.dim());
            prop_assert!((&a * &inv).distance(&id) < 1e-7);
        }
    }

    #[test]
    fn eigenvectors_are_unit_and_phase_fixed(a in arb_matrix(5)) {
        let es = eigensystem(&a).unwrap();
        for v in &es.vectors {
            prop_assert!((v.norm() - 1.0).abs() < 1e-13);
            let lead = v.entries().iter().find(|x| x.norm() > 1e-12).unwrap();
            prop_assert!(lead.im == 0.0 && lead.re > 0.0);
        }
    }
}
