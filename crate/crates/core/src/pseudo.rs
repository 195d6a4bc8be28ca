//! Truncated pseudo-quons: similarity deformations of a truncated quon.
//!
//! Given a quon family `(C, K)` and an invertible, non-unitary `R`, the pair
//! `D = R C R⁻¹`, `G = R C† R⁻¹` obeys `[D, G]_q = 1 − (L+1) Q` with
//! `Q = R K R⁻¹`, while `G ≠ D†`. The regime side conditions carry over with
//! `Ñ = G D` in place of `N_C`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, inverse_with_condition, qmutator, rank_one, real, ComplexMatrix, ComplexVector,
    C64, ONE,
};
use crate::quon::{beta, QuonFamily, Regime};
use crate::report::{Tolerance, VerificationReport};

/// Condition number above which `R` is rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Entries of `R` outside the regime pattern must be below this.
pub const PATTERN_TOL: f64 = 1e-14;

pub const INVERSE_TOL: f64 = 1e-12;
pub const SIMILARITY_TOL: f64 = 1e-11;
pub const DEFORMED_TOL: f64 = 1e-10;
pub const EXAMPLE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct PseudoTriple {
    base: QuonFamily,
    r: ComplexMatrix,
    r_inv: ComplexMatrix,
    condition: f64,
    d: ComplexMatrix,
    g: ComplexMatrix,
    q_op: ComplexMatrix,
}

pub fn deform(f: &QuonFamily, r: &ComplexMatrix) -> Result<PseudoTriple> {
    if r.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: r.dim(),
        });
    }
    let (r_inv, condition) = inverse_with_condition(r)?;
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let d = &(r * f.c()) * &r_inv;
    let g = &(r * &f.c_dagger()) * &r_inv;
    let q_op = &(r * f.k()) * &r_inv;
    Ok(PseudoTriple {
        base: f.clone(),
        r: r.clone(),
        r_inv,
        condition,
        d,
        g,
        q_op,
    })
}

impl PseudoTriple {
    pub fn base(&self) -> &QuonFamily {
        &self.base
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn r_inv(&self) -> &ComplexMatrix {
        &self.r_inv
    }

    /// 1-norm condition number of `R`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    pub fn g(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn q_op(&self) -> &ComplexMatrix {
        &self.q_op
    }

    /// `Ñ = G D`.
    pub fn n_tilde(&self) -> ComplexMatrix {
        &self.g * &self.d
    }

    /// `‖R R⁻¹ − 1‖_F`.
    pub fn inverse_residual(&self) -> f64 {
        (&self.r * &self.r_inv).distance(&ComplexMatrix::identity(self.r.dim()))
    }
}

/// True when `R` is invertible and has the sparsity the regime needs for
/// `[K, R] = 0`: bordered (last row and column zero except the corner) for
/// the quon rule, diagonal for the boson-like rule.
pub fn r_block_validator(r: &ComplexMatrix, regime: Regime) -> bool {
    let n = r.dim();
    let last = n - 1;
    let forbidden = |row: usize, col: usize| match regime {
        Regime::QuonRule => (row == last) != (col == last),
        Regime::BosonLikeRule => row != col,
    };
    let pattern_ok = (0..n)
        .flat_map(|row| (0..n).map(move |col| (row, col)))
        .filter(|&(row, col)| forbidden(row, col))
        .all(|(row, col)| r[(row, col)].norm() <= PATTERN_TOL);
    pattern_ok
        && matches!(inverse_with_condition(r), Ok((_, c)) if c.is_finite() && c <= MAX_CONDITION)
}

/// Residuals of the deformed commutation rule and of the regime conditions
/// for `D`, `G`, `Q` and `Ñ`.
pub fn validate_regime_conditions(t: &PseudoTriple, tol: Tolerance) -> VerificationReport {
    let f = &t.base;
    let q = f.q();
    let lf = f.l() as f64;
    let factor = (q - 1.0) / (lf + 1.0);
    let sim_tol = tol.resolve(SIMILARITY_TOL);
    let def_tol = tol.resolve(DEFORMED_TOL);
    let id = ComplexMatrix::identity(f.dim());
    let mut report = VerificationReport::new(format!("pseudo {}", f.descriptor()));
    report.note("cond_1(R)", t.condition);
    report.check("R R^-1 = 1", t.inverse_residual(), tol.resolve(INVERSE_TOL));

    report.check_close("D R = R C", &(&t.d * &t.r), &(&t.r * f.c()), sim_tol);
    report.check_close(
        "G R = R C+",
        &(&t.g * &t.r),
        &(&t.r * &f.c_dagger()),
        sim_tol,
    );

    let lhs = qmutator(&t.d, &t.g, q).expect("same dim");
    let rhs = &id - &t.q_op.scale_real(lf + 1.0);
    report.check_close("[D,G]_q = 1 - (L+1) Q", &lhs, &rhs, def_tol);

    let n_t = t.n_tilde();
    let dd = t.d.adjoint();
    let gd = t.g.adjoint();
    let n_td = n_t.adjoint();
    match f.regime() {
        Regime::QuonRule => {
            report.check("QD = 0", (&t.q_op * &t.d).frobenius_norm(), def_tol);
            report.check("GQ = 0", (&t.g * &t.q_op).frobenius_norm(), def_tol);
            let target = &(-&t.d) + &(&n_t * &t.d).scale_real(1.0 - q);
            report.check_close(
                "[N~,D] = -D + (1-q) N~ D",
                &commutator(&n_t, &t.d).unwrap(),
                &target,
                def_tol,
            );
            let target = &(-&gd) + &(&n_td * &gd).scale_real(1.0 - q);
            report.check_close(
                "[N~+,G+] = -G+ + (1-q) N~+ G+",
                &commutator(&n_td, &gd).unwrap(),
                &target,
                def_tol,
            );
        }
        Regime::BosonLikeRule => {
            let target = (&n_t * &t.d).scale_real(factor);
            report.check_close("QD = (q-1)/(L+1) N~ D", &(&t.q_op * &t.d), &target, def_tol);
            let target = (&t.g * &n_t).scale_real(factor);
            report.check_close("GQ = (q-1)/(L+1) G N~", &(&t.g * &t.q_op), &target, def_tol);
            report.check_close(
                "[N~,D] = -D",
                &commutator(&n_t, &t.d).unwrap(),
                &(-&t.d),
                def_tol,
            );
            report.check_close(
                "[N~+,G+] = -G+",
                &commutator(&n_td, &gd).unwrap(),
                &(-&gd),
                def_tol,
            );
        }
    }

    // With R in the regime's block form, [K, R] = 0, so Q = K and the side
    // conditions hold with K itself.
    let kd = f.k() * &t.d;
    let kgd = f.k() * &gd;
    let (kd_target, kgd_target) = match f.regime() {
        Regime::QuonRule => (ComplexMatrix::zeros(f.dim()), ComplexMatrix::zeros(f.dim())),
        Regime::BosonLikeRule => (
            (&n_t * &t.d).scale_real(factor),
            (&n_td * &gd).scale_real(factor),
        ),
    };
    if r_block_validator(&t.r, f.regime()) {
        report.check_close("Q = K", &t.q_op, f.k(), def_tol);
        report.check_close("K D (block-form R)", &kd, &kd_target, def_tol);
        report.check_close("K G+ (block-form R)", &kgd, &kgd_target, def_tol);
        let adj = qmutator(&gd, &dd, q).unwrap();
        let rhs = &id - &f.k().scale_real(lf + 1.0);
        report.check_close("[G+,D+]_q = 1 - (L+1) K", &adj, &rhs, def_tol);
    } else {
        let reason = "R is not in the block form required by the regime";
        report.skip("Q = K", reason);
        report.skip("[G+,D+]_q = 1 - (L+1) K", reason);
        report.note("||K D - target||_F (general R)", kd.distance(&kd_target));
        report.note("||K G+ - target||_F (general R)", kgd.distance(&kgd_target));
    }

    let rr = &t.r.adjoint() * &t.r;
    let k_rr = commutator(f.k(), &rr).unwrap().frobenius_norm();
    if k_rr <= sim_tol * rr.frobenius_norm().max(1.0) {
        report.check_close("Q = Q+ ([K, R+R] = 0)", &t.q_op.adjoint(), &t.q_op, sim_tol);
    } else {
        report.skip("Q = Q+ ([K, R+R] = 0)", "K does not commute with R+R");
        report.note("||Q - Q+||_F", t.q_op.distance(&t.q_op.adjoint()));
    }

    let k_idem = (f.k() * f.k()).distance(f.k());
    let q_idem = (&t.q_op * &t.q_op).distance(&t.q_op);
    report.note("||Q^2 - Q||_F", q_idem);
    report.check_claim(
        "Q^2 = Q exactly when K^2 = K",
        (q_idem <= def_tol) == (k_idem <= tol.resolve(1e-12)),
    );
    report
}

/// Biorthogonal pair of bases: `⟨φₙ, ψₘ⟩ = δₙₘ`.
#[derive(Clone, Debug)]
pub struct BiorthogonalPair {
    pub phi: Vec<ComplexVector>,
    pub psi: Vec<ComplexVector>,
}

impl BiorthogonalPair {
    /// Cross Gram matrix, entry `(n, m) = ⟨φₙ, ψₘ⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.phi.len(), |n, m| self.phi[n].inner(&self.psi[m]))
    }

    /// `Σₙ |φₙ⟩⟨ψₙ|`.
    pub fn resolution(&self) -> ComplexMatrix {
        sum_rank_one(&self.phi, &self.psi)
    }

    /// `Σₙ |ψₙ⟩⟨φₙ|`.
    pub fn dual_resolution(&self) -> ComplexMatrix {
        sum_rank_one(&self.psi, &self.phi)
    }
}

pub(crate) fn sum_rank_one(kets: &[ComplexVector], bras: &[ComplexVector]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(kets[0].dim());
    for (k, b) in kets.iter().zip(bras) {
        out += &rank_one(k, b).expect("same dim");
    }
    out
}

/// The four-dimensional worked example: a fixed biorthogonal pair generated
/// by the upper bidiagonal `R` of ones, and the operators it induces.
#[derive(Clone, Debug)]
pub struct ExampleFixture {
    pub q: f64,
    pub betas: [f64; 3],
    pub phi_psi: BiorthogonalPair,
    pub r: ComplexMatrix,
    pub e: ComplexMatrix,
    pub f: ComplexMatrix,
    pub q_op: ComplexMatrix,
    pub k: ComplexMatrix,
    pub c: ComplexMatrix,
}

pub const EXAMPLE_DEFAULT_Q: f64 = 0.5;

pub fn example_fixture(q: f64) -> ExampleFixture {
    let v = ComplexVector::from_real;
    let phi = vec![
        v(&[1.0, 0.0, 0.0, 0.0]),
        v(&[1.0, 1.0, 0.0, 0.0]),
        v(&[0.0, 1.0, 1.0, 0.0]),
        v(&[0.0, 0.0, 1.0, 1.0]),
    ];
    let psi = vec![
        v(&[1.0, -1.0, 1.0, -1.0]),
        v(&[0.0, 1.0, -1.0, 1.0]),
        v(&[0.0, 0.0, 1.0, -1.0]),
        v(&[0.0, 0.0, 0.0, 1.0]),
    ];
    let r = ComplexMatrix::from_real_rows(&[
        &[1.0, 1.0, 0.0, 0.0],
        &[0.0, 1.0, 1.0, 0.0],
        &[0.0, 0.0, 1.0, 1.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4");
    let betas = [beta(0, q), beta(1, q), beta(2, q)];
    let b2: Vec<f64> = betas.iter().map(|b| b * b).collect();

    let mut e = ComplexMatrix::zeros(4);
    let mut f = ComplexMatrix::zeros(4);
    let mut c = ComplexMatrix::zeros(4);
    for n in 0..3 {
        let w = real(betas[n]);
        e += &rank_one(&phi[n], &psi[n + 1]).unwrap().scale(w);
        f += &rank_one(&phi[n + 1], &psi[n]).unwrap().scale(w);
        c[(n, n + 1)] = w;
    }

    let weights = [
        1.0 - b2[0],
        1.0 + q * b2[0] - b2[1],
        1.0 + q * b2[1] - b2[2],
        1.0 + q * b2[2],
    ];
    let mut q_op = ComplexMatrix::zeros(4);
    for (n, w) in weights.iter().enumerate() {
        q_op += &rank_one(&phi[n], &psi[n]).unwrap().scale_real(w / 4.0);
    }
    let k = ComplexMatrix::from_real_diagonal(&weights.map(|w| w / 4.0));

    ExampleFixture {
        q,
        betas,
        phi_psi: BiorthogonalPair { phi, psi },
        r,
        e,
        f,
        q_op,
        k,
        c,
    }
}

pub fn verify_example(fx: &ExampleFixture, tol: Tolerance) -> VerificationReport {
    let t = tol.resolve(EXAMPLE_TOL);
    let id = ComplexMatrix::identity(4);
    let mut report = VerificationReport::new(format!("example_fixture q={}", fx.q));

    report.check_close("<phi_n, psi_m> = delta_nm", &fx.phi_psi.gram(), &id, t);

    let r_inv_adj = crate::linalg::inverse(&fx.r, MAX_CONDITION)
        .expect("example R is invertible")
        .adjoint();
    let riesz: f64 = (0..4)
        .map(|n| {
            let e = ComplexVector::basis(4, n);
            let dphi = fx.r.apply(&e).unwrap().distance(&fx.phi_psi.phi[n]);
            let dpsi = r_inv_adj.apply(&e).unwrap().distance(&fx.phi_psi.psi[n]);
            dphi.hypot(dpsi)
        })
        .fold(0.0, f64::hypot);
    report.check("phi_n = R e_n, psi_n = (R^-1)+ e_n", riesz, t);

    report.check_close("sum |phi_n><psi_n| = 1", &fx.phi_psi.resolution(), &id, t);
    report.check_close(
        "sum |psi_n><phi_n| = 1",
        &fx.phi_psi.dual_resolution(),
        &id,
        t,
    );

    let lhs = qmutator(&fx.e, &fx.f, fx.q).unwrap();
    report.check_close(
        "[E,F]_q = 1 - 4Q",
        &lhs,
        &(&id - &fx.q_op.scale_real(4.0)),
        t,
    );

    let cc = &fx.c * &fx.c.adjoint();
    let ctc = &fx.c.adjoint() * &fx.c;
    let rhs = (&(&id - &cc) + &ctc.scale_real(fx.q)).scale_real(0.25);
    report.check_close("K = (1 - CC+ + q C+C)/4", &fx.k, &rhs, t);

    let r_inv = r_inv_adj.adjoint();
    report.check_close("Q = R K R^-1", &fx.q_op, &(&(&fx.r * &fx.k) * &r_inv), t);
    report.check_close("E = R C R^-1", &fx.e, &(&(&fx.r * &fx.c) * &r_inv), t);
    report.check_close(
        "F = R C+ R^-1",
        &fx.f,
        &(&(&fx.r * &fx.c.adjoint()) * &r_inv),
        t,
    );
    report
}

/// Random matrix with entries uniform in `[-1, 1]` (real and imaginary
/// parts), redrawn until its condition number is at most `max_condition`.
pub fn random_invertible<R: Rng>(dim: usize, rng: &mut R, max_condition: f64) -> ComplexMatrix {
    loop {
        let m = ComplexMatrix::from_fn(dim, |_, _| {
            C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        });
        if let Ok((_, c)) = inverse_with_condition(&m) {
            if c.is_finite() && c <= max_condition {
                return m;
            }
        }
    }
}

/// Random invertible matrix in the bordered form the quon rule needs.
pub fn random_bordered<R: Rng>(dim: usize, rng: &mut R, max_condition: f64) -> ComplexMatrix {
    let last = dim - 1;
    loop {
        let mut m = random_invertible(dim, rng, f64::INFINITY);
        for k in 0..last {
            m[(k, last)] = C64::new(0.0, 0.0);
            m[(last, k)] = C64::new(0.0, 0.0);
        }
        if m[(last, last)].norm() < 0.1 {
            m[(last, last)] = ONE;
        }
        if let Ok((_, c)) = inverse_with_condition(&m) {
            if c.is_finite() && c <= max_condition {
                return m;
            }
        }
    }
}

/// Random diagonal matrix with entries of modulus in `[0.1, 2]`.
pub fn random_diagonal<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let d: Vec<C64> = (0..dim)
        .map(|_| {
            C64::from_polar(
                rng.gen_range(0.1..=2.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    ComplexMatrix::from_diagonal(&d)
}
