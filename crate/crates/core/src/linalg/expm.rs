//! Matrix exponential.
//!
//! Diagonal inputs are exponentiated entrywise. Everything else goes through
//! scaling and squaring with the degree-13 Padé approximant.

use super::lu::Lu;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm bound under which the [13/13] approximant is accurate to unit roundoff.
const THETA_13: f64 = 5.371920351148152;

pub fn matrix_exponential(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x.is_diagonal() {
        let d: Vec<C64> = x.diagonal().iter().map(|z| z.exp()).collect();
        return Ok(ComplexMatrix::from_diagonal(&d));
    }

    let n = x.dim();
    let norm = x.one_norm();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = x.scale_real(2f64.powi(-squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let inner_u = &(&a6.scale_real(b[13]) + &a4.scale_real(b[11])) + &a2.scale_real(b[9]);
    let mut u = &a6 * &inner_u;
    u += &a6.scale_real(b[7]);
    u += &a4.scale_real(b[5]);
    u += &a2.scale_real(b[3]);
    u += &id.scale_real(b[1]);
    let u = &a * &u;

    let inner_v = &(&a6.scale_real(b[12]) + &a4.scale_real(b[10])) + &a2.scale_real(b[8]);
    let mut v = &a6 * &inner_v;
    v += &a6.scale_real(b[6]);
    v += &a4.scale_real(b[4]);
    v += &a2.scale_real(b[2]);
    v += &id.scale_real(b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = Lu::factor(&q)?.solve_matrix(&p)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{real, ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn zero_maps_to_identity() {
        let e = matrix_exponential(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn diagonal_is_entrywise() {
        let x = ComplexMatrix::from_diagonal(&[C64::new(0.0, PI), ZERO]);
        let e = matrix_exponential(&x).unwrap();
        assert!((e[(0, 0)] - real(-1.0)).norm() < 1e-15);
        assert_eq!(e[(1, 1)], ONE);
        assert_eq!(e[(0, 1)], ZERO);
    }

    #[test]
    fn nilpotent_series_terminates() {
        // exp of a strictly upper 3x3 shift: I + S + S^2/2
        let s =
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])
                .unwrap();
        let e = matrix_exponential(&s).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.5], &[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0]])
                .unwrap();
        assert!(e.distance(&expected) < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        // exp(t [[0, -1], [1, 0]]) is the rotation by t
        let t = 7.3;
        let g = ComplexMatrix::from_real_rows(&[&[0.0, -t], &[t, 0.0]]).unwrap();
        let e = matrix_exponential(&g).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]]).unwrap();
        assert!(e.distance(&expected) < 1e-13);
    }

    #[test]
    fn rejects_non_finite() {
        let mut x = ComplexMatrix::zeros(2);
        x[(0, 1)] = real(f64::INFINITY);
        assert!(matches!(matrix_exponential(&x), Err(Error::NonFinite)));
    }
}
