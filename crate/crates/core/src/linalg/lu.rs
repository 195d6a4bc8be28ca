//! LU factorization with partial pivoting, and the solves built on it.

use super::matrix::{ComplexMatrix, ComplexVector, C64, ZERO};
use crate::error::{Error, Result};

/// Largest 1-norm condition number accepted by [`inverse`].
pub const DEFAULT_MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct Lu {
    // L (unit lower, below the diagonal) and U packed together.
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pivot == 0.0 {
                return Err(Error::Singular {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                for c in 0..n {
                    let tmp = lu[(k, c)];
                    lu[(k, c)] = lu[(p, c)];
                    lu[(p, c)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for r in k + 1..n {
                let m = lu[(r, k)] / d;
                lu[(r, k)] = m;
                if m == ZERO {
                    continue;
                }
                for c in k + 1..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= m * u;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn determinant(&self) -> C64 {
        self.lu.diagonal().iter().product::<C64>() * self.sign
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &ComplexVector) -> Result<ComplexVector> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: b.dim(),
            });
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[(r, c)] * x[c];
            }
            x[r] = s / self.lu[(r, r)];
        }
        Ok(ComplexVector::new(x))
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let cols = (0..b.dim())
            .map(|c| self.solve(&b.column(c)))
            .collect::<Result<Vec<_>>>()?;
        ComplexMatrix::from_columns(&cols)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_matrix(&ComplexMatrix::identity(self.dim()))
            .expect("identity has matching dimension")
    }
}

/// Inverse together with its 1-norm condition number `‖A‖₁‖A⁻¹‖₁`.
pub fn inverse_with_condition(a: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let inv = Lu::factor(a)?.inverse();
    let cond = a.one_norm() * inv.one_norm();
    Ok((inv, cond))
}

/// Inverse of `a`, refusing matrices with condition number above `max_condition`.
pub fn inverse(a: &ComplexMatrix, max_condition: f64) -> Result<ComplexMatrix> {
    let (inv, cond) = inverse_with_condition(a)?;
    if !cond.is_finite() || cond > max_condition {
        return Err(Error::Singular { condition: cond });
    }
    Ok(inv)
}

pub fn determinant(a: &ComplexMatrix) -> C64 {
    match Lu::factor(a) {
        Ok(lu) => lu.determinant(),
        Err(_) => ZERO,
    }
}

/// Solves `A x = b` in one shot.
pub fn solve(a: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    Lu::factor(a)?.solve(b)
}
