//! Dense square complex matrices and vectors.
//!
//! Storage is row-major. Every operator of the crate (ladder operators,
//! correction operators, number operators, similarity transforms) is carried
//! by [`ComplexMatrix`], so arithmetic here is kept small and predictable:
//! products are plain triple loops, which is fine for the dimensions we deal
//! with (a few dozen at most).

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// nonzero perfect square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::NotSquare(entries.len()));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare(0));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| real(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| real(x)).collect();
        Self::from_diagonal(&d)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::NotSquare(0));
        }
        let mut m = Self::zeros(dim);
        for (c, col) in columns.iter().enumerate() {
            if col.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: col.dim(),
                });
            }
            for r in 0..dim {
                m[(r, c)] = col[r];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector::new((0..self.dim).map(|r| self[(r, c)]).collect())
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self[(r, c)] == ZERO))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(real(s))
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.dim(),
            });
        }
        Ok(ComplexVector::new(
            (0..self.dim)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    /// `self^k`, with `self^0` the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in distance");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self.row(r).iter().map(|z| format!("{z:.6}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// The operator impls panic on dimension mismatch; use the `try_*` methods
// where the dimensions come from user input.

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs)
            .expect("matrix difference dimension mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn from_real(xs: &[f64]) -> Self {
        Self::new(xs.iter().map(|&x| real(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    /// Canonical basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch in inner product"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.data.iter().map(|z| z * s).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in distance");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.data.iter().map(|z| z.conj()).collect())
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, k: usize) -> &C64 {
        &self.data[k]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, k: usize) -> &mut C64 {
        &mut self.data[k]
    }
}

/// q-mutator `[X, Y]_q = XY − qYX`.
pub fn qmutator(x: &ComplexMatrix, y: &ComplexMatrix, q: f64) -> Result<ComplexMatrix> {
    let xy = x.try_mul(y)?;
    let yx = y.try_mul(x)?;
    Ok(&xy - &yx.scale_real(q))
}

pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    qmutator(x, y, 1.0)
}

/// Rank-one operator `|u⟩⟨v|`, entry `(j, k) = u_j · conj(v_k)`.
pub fn rank_one(u: &ComplexVector, v: &ComplexVector) -> Result<ComplexMatrix> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(ComplexMatrix::from_fn(u.dim(), |j, k| u[j] * v[k].conj()))
}
