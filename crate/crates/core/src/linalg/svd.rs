//! Singular values by one-sided Jacobi rotations.
//!
//! Columns are orthogonalized pairwise until every pair is orthogonal to
//! working precision; the singular values are then the column norms. Small
//! singular values come out with high relative accuracy, which is what the
//! resolvent checks need.

use super::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order.
#[allow(clippy::needless_range_loop)]
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.column(c).entries().to_vec()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let x = cols[p][k];
                    let y = cols[q][k] * phase.conj();
                    cols[p][k] = x * c - y * s;
                    cols[q][k] = (x * s + y * c) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn smallest_singular_value(a: &ComplexMatrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}
