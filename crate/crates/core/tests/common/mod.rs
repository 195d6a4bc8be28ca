//! Oracles shared by the integration tests. None of these reuse the
//! library's decompositions.

#![allow(dead_code)]

use ladders::linalg::{ComplexMatrix, C64};
use rand::Rng;

/// Characteristic polynomial coefficients `c[0..=n]` (constant term first,
/// `c[n] = 1`) of `det(z·1 − A)` by the Faddeev–LeVerrier recursion.
pub fn faddeev_leverrier(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let mut c = vec![C64::new(0.0, 0.0); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(c[n - k + 1]);
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

pub fn poly_eval(c: &[C64], z: C64) -> C64 {
    c.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &k| acc * z + k)
}

fn poly_derivative(c: &[C64]) -> Vec<C64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &x)| x * k as f64)
        .collect()
}

/// Roots of a monic polynomial by Durand–Kerner iteration, each polished by
/// a few Newton steps.
pub fn durand_kerner(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| seed.powu(k as u32) * (bound / 2.0))
        .collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let zi = roots[i];
            let denom: C64 = (0..n).filter(|&j| j != i).map(|j| zi - roots[j]).product();
            if denom.norm() == 0.0 {
                roots[i] += C64::new(1e-8, 1e-8);
                continue;
            }
            let step = poly_eval(c, zi) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    let dc = poly_derivative(c);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dc, *r);
            if d.norm() > 0.0 {
                *r -= poly_eval(c, *r) / d;
            }
        }
    }
    roots
}

/// Largest distance from any element of `a` to its nearest element of `b`,
/// matched one-to-one greedily.
pub fn match_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut pool = b.to_vec();
    let mut worst: f64 = 0.0;
    for &z in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same count");
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}

pub fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Truncated Taylor series of `exp(X)` for small `‖X‖`.
pub fn taylor_exp(x: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let mut sum = ComplexMatrix::identity(x.dim());
    let mut term = ComplexMatrix::identity(x.dim());
    for k in 1..terms {
        term = (&term * x).scale_real(1.0 / k as f64);
        sum += &term;
    }
    sum
}

pub fn schema_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json")
}

pub fn example_config(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/examples")
        .join(name)
}

/// Validation errors of a report against the published schema.
pub fn schema_errors(report: &serde_json::Value) -> Vec<String> {
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path()).expect("schema file"))
            .expect("schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator
        .iter_errors(report)
        .map(|e| e.to_string())
        .collect()
}
