mod common;

use common::{faddeev_leverrier, match_distance, random_matrix};
use ladders::chain::{
    discrete_coherent_states, make_chain, verify_biorthogonal, verify_chain_algebra,
    verify_heisenberg,
};
use ladders::linalg::{ComplexMatrix, C64};
use ladders::report::Tolerance;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gammas() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..=10.0, 2..=8)
}

proptest! {
    #[test]
    fn chain_algebra(g in gammas()) {
        let c = make_chain(&g).unwrap();
        let r = verify_chain_algebra(&c, Tolerance::with_override(1e-11));
        let failures: Vec<_> = r.failures().map(|c| (c.name.clone(), c.residual)).collect();
        prop_assert!(r.all_passed, "{:?}", failures);
        prop_assert!(c.gamma().trace().norm() <= 1e-12 * g.iter().map(|x| x * x).sum::<f64>());
    }

    #[test]
    fn characteristic_polynomial_is_binomial(g in gammas()) {
        // det(z − a) = z^M − ∏γ
        let c = make_chain(&g).unwrap();
        let m = g.len();
        let p: f64 = g.iter().product();
        let coeffs = faddeev_leverrier(c.a());
        let mut want = vec![C64::new(0.0, 0.0); m + 1];
        want[m] = C64::new(1.0, 0.0);
        want[0] = C64::new(-p, 0.0);
        for (k, (x, y)) in coeffs.iter().zip(&want).enumerate() {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + p), "coefficient {k}: {x} vs {y}");
        }
    }

    #[test]
    fn spectrum_is_scaled_roots_of_unity(g in gammas()) {
        let c = make_chain(&g).unwrap();
        let m = g.len();
        let gm = g.iter().product::<f64>().powf(1.0 / m as f64);
        let roots: Vec<C64> = (0..m)
            .map(|k| C64::from_polar(gm, std::f64::consts::TAU * k as f64 / m as f64))
            .collect();
        let s = discrete_coherent_states(c.a()).unwrap();
        prop_assert!(match_distance(&s.values, &roots) <= 1e-9);
    }

    #[test]
    fn heisenberg_closed_form(g in gammas(), t in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let c = make_chain(&g).unwrap();
        let r = verify_heisenberg(&c, t, Tolerance::default()).unwrap();
        prop_assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn chain_coherent_states_resolve_identity(g in gammas()) {
        let c = make_chain(&g).unwrap();
        let s = discrete_coherent_states(c.a()).unwrap();
        let r = verify_biorthogonal(c.a(), &s, Tolerance::default());
        prop_assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn duality_is_an_involution(n in 2usize..=6, seed in any::<u64>()) {
        let a = random_matrix(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let fwd = discrete_coherent_states(&a).unwrap();
        let back = discrete_coherent_states(&a.adjoint()).unwrap();
        for (j, z) in fwd.values.iter().enumerate() {
            let k = (0..n)
                .min_by(|&x, &y| (back.values[x] - z.conj()).norm().total_cmp(&(back.values[y] - z.conj()).norm()))
                .unwrap();
            prop_assert!((back.values[k] - z.conj()).norm() <= 1e-9);
            // the eigenvectors of A† are the duals of A, as rays
            prop_assert!(same_ray(&back.phi[k], &fwd.psi[j]) <= 1e-9);
            prop_assert!(same_ray(&back.psi[k], &fwd.phi[j]) <= 1e-9);
        }
    }
}

/// Distance between `u` and the best multiple of `v`, relative to `‖u‖`.
fn same_ray(u: &ladders::ComplexVector, v: &ladders::ComplexVector) -> f64 {
    let s = v.inner(u) / v.inner(v);
    u.distance(&v.scale(s)) / u.norm()
}

#[test]
fn equal_weights_are_not_degenerate() {
    for m in 2..=8 {
        let c = make_chain(&vec![1.0; m]).unwrap();
        assert!(discrete_coherent_states(c.a()).is_ok());
    }
}

#[test]
fn resolution_for_random_five_by_five() {
    let a = random_matrix(5, &mut ChaCha8Rng::seed_from_u64(55));
    let s = discrete_coherent_states(&a).unwrap();
    assert!(s.resolution().distance(&ComplexMatrix::identity(5)) < 1e-9);
    assert!(s.dual_resolution().distance(&ComplexMatrix::identity(5)) < 1e-9);
}
