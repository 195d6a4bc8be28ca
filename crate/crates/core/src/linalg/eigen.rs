//! Eigenvalues and right eigenvectors of general complex matrices.
//!
//! The matrix is balanced by a diagonal similarity, reduced to upper
//! Hessenberg form with Householder reflectors, and driven to complex Schur
//! form by single-shift QR sweeps (Wilkinson shifts, with an exceptional shift
//! every tenth sweep so that orthogonal matrices such as cyclic shifts do not
//! stall). Eigenvectors come from back substitution on the triangular factor.

use super::matrix::{ComplexMatrix, ComplexVector, C64, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Sweep budget per unit of dimension.
    pub max_iterations_per_dim: usize,
    /// Relative size below which a subdiagonal entry is treated as zero.
    pub deflation_tol: f64,
    /// Eigenvalues are distinct when their minimal gap exceeds this times
    /// the spectral radius.
    pub distinct_rel_gap: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_iterations_per_dim: 500,
            deflation_tol: f64::EPSILON,
            distinct_rel_gap: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<C64>,
    /// Unit-norm right eigenvectors; the first component of non-negligible
    /// modulus is real and positive.
    pub vectors: Vec<ComplexVector>,
    pub distinct: bool,
    pub min_gap: f64,
}

impl EigenSystem {
    /// Matrix whose columns are the eigenvectors.
    pub fn vector_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.vectors).expect("one vector per eigenvalue")
    }

    /// Largest `‖A v − z v‖` over the stored pairs.
    pub fn max_residual(&self, a: &ComplexMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&z, v)| a.apply(v).expect("same dim").distance(&v.scale(z)))
            .fold(0.0, f64::max)
    }
}

pub fn eigensystem(a: &ComplexMatrix) -> Result<EigenSystem> {
    eigensystem_with(a, &EigenOptions::default())
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let mut h = a.clone();
    let n = h.dim();
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    balance(&mut h);
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut h, &mut z);
    schur(&mut h, &mut z, &EigenOptions::default())?;
    Ok(h.diagonal())
}

pub fn eigensystem_with(a: &ComplexMatrix, opts: &EigenOptions) -> Result<EigenSystem> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::NotSquare(0));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut t = a.clone();
    let scaling = balance(&mut t);
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut t, &mut z);
    schur(&mut t, &mut z, opts)?;

    let values = t.diagonal();
    let tri = triangular_eigenvectors(&t);
    let vectors = (0..n)
        .map(|k| {
            let y = z.apply(&tri[k]).expect("same dim");
            let x = ComplexVector::new(
                y.entries()
                    .iter()
                    .zip(&scaling)
                    .map(|(v, d)| v * d)
                    .collect(),
            );
            normalize_phase(x)
        })
        .collect();

    let min_gap = min_pairwise_gap(&values);
    let radius = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let distinct = n == 1 || min_gap > opts.distinct_rel_gap * radius;
    Ok(EigenSystem {
        values,
        vectors,
        distinct,
        min_gap,
    })
}

pub fn min_pairwise_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Scales to unit norm and rotates the first non-negligible component onto
/// the positive real axis.
pub fn normalize_phase(v: ComplexVector) -> ComplexVector {
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    let v = v.scale(C64::new(1.0 / norm, 0.0));
    let Some(k) = v.entries().iter().position(|z| z.norm() > 1e-12) else {
        return v;
    };
    let lead = v.entries()[k];
    let mut data = v.scale(lead.conj() / lead.norm()).entries().to_vec();
    // the rotated lead is real up to rounding; make it exactly so
    data[k] = C64::new(lead.norm(), 0.0);
    ComplexVector::new(data)
}

/// Diagonal similarity `D⁻¹ A D` by powers of two equalizing row and column
/// norms. Returns the diagonal of `D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut d = vec![1.0; n];
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let f = (0.5 * (r / c).log2()).round().exp2();
            if f != 1.0 && c * f + r / f < 0.95 * (c + r) {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

/// Householder reduction to upper Hessenberg form; accumulates into `z`.
fn hessenberg(h: &mut ComplexMatrix, z: &mut ComplexMatrix) {
    let n = h.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|r| h[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vnorm;
        }
        // H <- P H, P = I - 2 v v† acting on rows k+1..n
        for c in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, c)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, c)] -= vi * s * 2.0;
            }
        }
        // H <- H P and Z <- Z P on columns k+1..n
        for m in [&mut *h, &mut *z] {
            for r in 0..n {
                let s: C64 = v
                    .iter()
                    .enumerate()
                    .map(|(i, vi)| m[(r, k + 1 + i)] * vi)
                    .sum();
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] -= s * vi.conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for r in k + 2..n {
            h[(r, k)] = ZERO;
        }
    }
}

/// Unitary rotation `[[c, s], [-conj(s), c]]` that zeroes `b` in `(a, b)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let r = (an * an + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur form of a Hessenberg matrix; accumulates into `z`.
fn schur(h: &mut ComplexMatrix, z: &mut ComplexMatrix, opts: &EigenOptions) -> Result<()> {
    let n = h.dim();
    if n == 1 {
        return Ok(());
    }
    let max_total = opts.max_iterations_per_dim * n;
    let hnorm = h.frobenius_norm();
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            if s == 0.0 {
                s = hnorm;
            }
            if h[(l, l - 1)].l1_norm() <= opts.deflation_tol * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_total {
            return Err(Error::Convergence { iterations: total });
        }

        let shift = if since_deflation.is_multiple_of(10) {
            let mut s = C64::new(h[(hi, hi - 1)].re.abs(), 0.0);
            if hi >= 2 {
                s += h[(hi - 1, hi - 2)].re.abs();
            }
            s + h[(hi, hi)] + C64::new(0.0, 0.37 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for col in k..n {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * c + s * y;
                h[(k + 1, col)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let last_row = (k + 2).min(hi);
            for r in 0..=last_row {
                let u = h[(r, k)];
                let v = h[(r, k + 1)];
                h[(r, k)] = u * c + v * s.conj();
                h[(r, k + 1)] = -u * s + v * c;
            }
            for r in 0..n {
                let u = z[(r, k)];
                let v = z[(r, k + 1)];
                z[(r, k)] = u * c + v * s.conj();
                z[(r, k + 1)] = -u * s + v * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }
    for r in 1..n {
        for c in 0..r {
            h[(r, c)] = ZERO;
        }
    }
    Ok(())
}

/// Eigenvectors of an upper triangular matrix by back substitution.
/// Near-equal diagonal entries are separated by a floor on the pivot so that
/// defective matrices still yield finite vectors.
fn triangular_eigenvectors(t: &ComplexMatrix) -> Vec<ComplexVector> {
    let n = t.dim();
    let small = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut x = vec![ZERO; n];
            x[k] = ONE;
            for i in (0..k).rev() {
                let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
                let mut d = t[(i, i)] - lambda;
                if d.norm() < small {
                    d = C64::new(small, 0.0);
                }
                x[i] = -s / d;
            }
            let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if scale > 1e100 {
                for v in x.iter_mut() {
                    *v /= scale;
                }
            }
            ComplexVector::new(x)
        })
        .collect()
}
