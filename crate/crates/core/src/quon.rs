//! Truncated bosons and truncated quons.
//!
//! A truncated quon on `L + 1` levels is an upper bidiagonal lowering
//! operator `C` with weights `β₀ … β_{L−1}` together with a diagonal
//! correction `K` such that
//!
//! ```text
//! C C† − q C† C = 1 − (L + 1) K.
//! ```
//!
//! Two families are built. Under [`Regime::QuonRule`] the weights are the
//! quon weights `βₙ² = (1 − q^{n+1}) / (1 − q)`, so that the number-like
//! operator `N_C = C†C` keeps the quon commutator
//! `[N_C, C] = −C + (1 − q) N_C C` and `KC = 0`. Under
//! [`Regime::BosonLikeRule`] the weights are bosonic, `[N_C, C] = −C` holds
//! for every `q`, and `KC = (q − 1)/(L + 1) N_C C`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, qmutator, rank_one, real, ComplexMatrix, ComplexVector, ZERO};
use crate::report::{Tolerance, VerificationReport};

/// Distance from 1 below which `q` is treated as exactly 1.
pub const Q_ONE_THRESHOLD: f64 = 1e-12;

pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `[N_C, C] = −C + (1 − q) N_C C`, quon weights.
    QuonRule,
    /// `[N_C, C] = −C`, bosonic weights.
    BosonLikeRule,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::QuonRule => write!(f, "quon rule"),
            Regime::BosonLikeRule => write!(f, "boson-like rule"),
        }
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&q) {
        return Err(Error::param("q", format!("{q} is outside [-1, 1]")));
    }
    Ok(())
}

fn check_levels(l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::param("L", "must be at least 1"));
    }
    Ok(())
}

/// Quon weight `βₙ = sqrt((1 − q^{n+1}) / (1 − q))`, or `sqrt(n + 1)` at `q = 1`.
pub fn beta(n: usize, q: f64) -> f64 {
    let sq = if (1.0 - q).abs() < Q_ONE_THRESHOLD {
        (n + 1) as f64
    } else {
        (1.0 - q.powi(n as i32 + 1)) / (1.0 - q)
    };
    sq.max(0.0).sqrt()
}

/// `βₙ! = βₙ βₙ₋₁ ⋯ β₁`; the empty product for `n = 0` is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QFactorial {
    pub n: usize,
    pub q: f64,
    pub value: f64,
}

pub fn q_factorial(n: usize, q: f64) -> QFactorial {
    QFactorial {
        n,
        q,
        value: (1..=n).map(|k| beta(k, q)).product(),
    }
}

fn upper_bidiagonal(weights: &[f64]) -> ComplexMatrix {
    let dim = weights.len() + 1;
    let mut m = ComplexMatrix::zeros(dim);
    for (n, &w) in weights.iter().enumerate() {
        m[(n, n + 1)] = real(w);
    }
    m
}

/// Truncated boson `A = Σ_{n<L} sqrt(n+1) |eₙ⟩⟨eₙ₊₁|` on `L + 1` levels.
pub fn make_truncated_boson(l: usize) -> Result<ComplexMatrix> {
    check_levels(l)?;
    let w: Vec<f64> = (0..l).map(|n| ((n + 1) as f64).sqrt()).collect();
    Ok(upper_bidiagonal(&w))
}

/// Projector `K₀ = |e_L⟩⟨e_L|`.
pub fn boson_projector(l: usize) -> ComplexMatrix {
    let e = ComplexVector::basis(l + 1, l);
    rank_one(&e, &e).expect("same dim")
}

/// Checks `[A, A†] = 1 − (L+1) K₀` and the projector properties of `K₀`.
pub fn verify_truncated_boson(l: usize, tol: Tolerance) -> Result<VerificationReport> {
    let a = make_truncated_boson(l)?;
    let k0 = boson_projector(l);
    let id = ComplexMatrix::identity(l + 1);
    let t = tol.resolve(IDENTITY_TOL);
    let mut report = VerificationReport::new(format!("truncated_boson L={l}"));
    let rhs = &id - &k0.scale_real((l + 1) as f64);
    report.check_close(
        "[A,A+] = 1 - (L+1) K0",
        &commutator(&a, &a.adjoint())?,
        &rhs,
        t,
    );
    report.check_close("K0 = K0^2", &(&k0 * &k0), &k0, t);
    report.check_close("K0 = K0+", &k0.adjoint(), &k0, t);
    report.check("K0 A = 0", (&k0 * &a).frobenius_norm(), t);
    report.check(
        "(A+)^(L+1) = 0",
        a.adjoint().pow(l as u32 + 1).frobenius_norm(),
        t,
    );
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct QuonFamily {
    l: usize,
    q: f64,
    regime: Regime,
    betas: Vec<f64>,
    c: ComplexMatrix,
    k: ComplexMatrix,
}

pub fn make_quon_family(l: usize, q: f64, regime: Regime) -> Result<QuonFamily> {
    check_levels(l)?;
    check_q(q)?;
    let lf = l as f64;
    let (betas, k_diag): (Vec<f64>, Vec<f64>) = match regime {
        Regime::QuonRule => {
            let betas: Vec<f64> = (0..=l).map(|n| beta(n, q)).collect();
            let mut k = vec![0.0; l + 1];
            k[l] = betas[l] * betas[l] / (lf + 1.0);
            (betas, k)
        }
        Regime::BosonLikeRule => {
            let betas: Vec<f64> = (0..=l).map(|n| ((n + 1) as f64).sqrt()).collect();
            let mut k: Vec<f64> = (0..=l).map(|n| n as f64 * (q - 1.0) / (lf + 1.0)).collect();
            k[l] = (1.0 + lf * q) / (lf + 1.0);
            (betas, k)
        }
    };
    let c = upper_bidiagonal(&betas[..l]);
    let k = ComplexMatrix::from_real_diagonal(&k_diag);
    Ok(QuonFamily {
        l,
        q,
        regime,
        betas,
        c,
        k,
    })
}

impl QuonFamily {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.l + 1
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `β₀ … β_L` (only the first `L` appear in `C`).
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn c_dagger(&self) -> ComplexMatrix {
        self.c.adjoint()
    }

    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn descriptor(&self) -> String {
        format!("L={} q={} regime={}", self.l, self.q, self.regime)
    }

    fn weight(&self, n: isize) -> f64 {
        if n < 0 {
            0.0
        } else {
            self.betas[n as usize]
        }
    }

    /// `C eₙ = β_{n−1} e_{n−1}` with `β_{−1} = 0`.
    pub fn lower(&self, n: usize) -> Result<ComplexVector> {
        if n > self.l {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.l,
            });
        }
        let mut v = ComplexVector::zeros(self.dim());
        if n > 0 {
            v[n - 1] = real(self.weight(n as isize - 1));
        }
        Ok(v)
    }

    /// `C† eₙ = βₙ eₙ₊₁` for `n < L`.
    pub fn raise(&self, n: usize) -> Result<ComplexVector> {
        if n + 1 > self.l {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.l - 1,
            });
        }
        let mut v = ComplexVector::zeros(self.dim());
        v[n + 1] = real(self.weight(n as isize));
        Ok(v)
    }

    /// Normalizer of `(C†)ⁿ e₀`: the q-factorial `β_{n−1}!` for the quon rule,
    /// `sqrt(n!)` for the boson-like rule.
    pub fn state_normalizer(&self, n: usize) -> f64 {
        match self.regime {
            Regime::QuonRule => {
                if n == 0 {
                    1.0
                } else {
                    q_factorial(n - 1, self.q).value
                }
            }
            Regime::BosonLikeRule => (1..=n).map(|k| (k as f64).sqrt()).product(),
        }
    }

    /// `eₙ` rebuilt from the vacuum as `(C†)ⁿ e₀ / normalizer`.
    pub fn generate_state(&self, n: usize) -> Result<ComplexVector> {
        if n > self.l {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.l,
            });
        }
        if let Some(k) = (0..n).find(|&k| self.betas[k] == 0.0) {
            return Err(Error::DegenerateNormalizer { index: k });
        }
        let norm = self.state_normalizer(n);
        if norm == 0.0 {
            return Err(Error::DegenerateNormalizer { index: n });
        }
        let cd = self.c_dagger();
        let mut v = ComplexVector::basis(self.dim(), 0);
        for _ in 0..n {
            v = cd.apply(&v)?;
        }
        Ok(v.scale(real(1.0 / norm)))
    }

    /// `N_C = C†C`.
    pub fn number_operator(&self) -> ComplexMatrix {
        &self.c_dagger() * &self.c
    }

    /// `N = log(1 − N_C (1 − q)) / log q`, defined for `0 < q < 1` and the
    /// quon rule; it has eigenvalue `m` on `e_m`.
    ///
    /// The diagonal of `1 − N_C (1 − q)` is `1 − (1 − q) β²_{m−1}`. Subtracting
    /// loses every digit once `q^m` is below machine epsilon, so the entries
    /// are built from the weight recursion `β²_m = 1 + q β²_{m−1}`, under
    /// which each entry is `q` times the previous one.
    pub fn quon_logarithmic_number(&self) -> Result<ComplexMatrix> {
        self.check_log_domain()?;
        let lq = self.q.ln();
        let mut x = 1.0f64;
        let d: Vec<f64> = (0..self.dim())
            .map(|_| {
                let m = x.ln() / lq;
                x *= self.q;
                m
            })
            .collect();
        Ok(ComplexMatrix::from_real_diagonal(&d))
    }

    /// The same operator evaluated literally from the entries of `N_C`.
    /// Ill-conditioned for small `q` and large `L`.
    pub fn quon_logarithmic_number_direct(&self) -> Result<ComplexMatrix> {
        self.check_log_domain()?;
        // N_C is diagonal, so the matrix logarithm acts entrywise.
        let lq = self.q.ln();
        let d: Vec<f64> = self
            .number_operator()
            .diagonal()
            .iter()
            .map(|z| (1.0 - z.re * (1.0 - self.q)).ln() / lq)
            .collect();
        Ok(ComplexMatrix::from_real_diagonal(&d))
    }

    fn check_log_domain(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::param("q", format!("{} is outside (0, 1)", self.q)));
        }
        if self.regime != Regime::QuonRule {
            return Err(Error::param(
                "regime",
                "logarithmic number needs quon weights",
            ));
        }
        Ok(())
    }

    /// Right-hand side of the regime's `KC` side condition.
    pub fn kc_target(&self) -> ComplexMatrix {
        match self.regime {
            Regime::QuonRule => ComplexMatrix::zeros(self.dim()),
            Regime::BosonLikeRule => {
                let f = (self.q - 1.0) / (self.l as f64 + 1.0);
                (&self.number_operator() * &self.c).scale_real(f)
            }
        }
    }

    /// Right-hand side of the regime's `[N_C, C]` rule.
    pub fn number_commutator_target(&self) -> ComplexMatrix {
        let minus_c = -&self.c;
        match self.regime {
            Regime::QuonRule => {
                let nc = &self.number_operator() * &self.c;
                &minus_c + &nc.scale_real(1.0 - self.q)
            }
            Regime::BosonLikeRule => minus_c,
        }
    }
}

/// Residuals of every identity the family is built to satisfy.
pub fn verify_regime(f: &QuonFamily, tol: Tolerance) -> VerificationReport {
    let t = tol.resolve(IDENTITY_TOL);
    let mut report = VerificationReport::new(f.descriptor());
    let id = ComplexMatrix::identity(f.dim());
    let cd = f.c_dagger();
    let lf = f.l as f64;

    let lhs = qmutator(&f.c, &cd, f.q).expect("same dim");
    let rhs = &id - &f.k.scale_real(lf + 1.0);
    report.check_close("[C,C+]_q = 1 - (L+1) K", &lhs, &rhs, t);

    let n_c = f.number_operator();
    let comm = commutator(&n_c, &f.c).expect("same dim");
    let name = match f.regime {
        Regime::QuonRule => "[N_C,C] = -C + (1-q) N_C C",
        Regime::BosonLikeRule => "[N_C,C] = -C",
    };
    report.check_close(name, &comm, &f.number_commutator_target(), t);

    let kc_name = match f.regime {
        Regime::QuonRule => "KC = 0",
        Regime::BosonLikeRule => "KC = (q-1)/(L+1) N_C C",
    };
    report.check_close(kc_name, &(&f.k * &f.c), &f.kc_target(), t);
    report.check_close("K = K+", &f.k.adjoint(), &f.k, t);
    report.check("(C+)^(L+1) = 0", cd.pow(f.l as u32 + 1).frobenius_norm(), t);

    let off_pattern: f64 = (0..f.dim())
        .flat_map(|r| (0..f.dim()).map(move |c| (r, c)))
        .filter(|&(r, c)| c != r + 1)
        .map(|(r, c)| f.c[(r, c)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    report.check("C strictly upper bidiagonal", off_pattern, t);

    let diag_nc: Vec<f64> = (0..f.dim())
        .map(|n| {
            let w = f.weight(n as isize - 1);
            w * w
        })
        .collect();
    report.check_close(
        "N_C = diag(beta_{n-1}^2)",
        &n_c,
        &ComplexMatrix::from_real_diagonal(&diag_nc),
        t,
    );

    let idem = (&f.k * &f.k).distance(&f.k);
    report.note("||K^2 - K||_F", idem);
    let expect_idem = (f.q - 1.0).abs() <= t || f.k.max_abs() == 0.0;
    report.check_claim(
        "K^2 = K exactly when q = 1 (or K = 0)",
        (idem <= t) == expect_idem,
    );
    report
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceObstruction {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfiable: bool,
}

/// Trace test for `[c, c†]_q = 1` with quon weights on `L + 1` levels:
/// `Σ_{n<L} (1 − q^{n+1})` must equal `L + 1`.
pub fn trace_obstruction(l: usize, q: f64) -> TraceObstruction {
    let lhs: f64 = (0..l).map(|n| 1.0 - q.powi(n as i32 + 1)).sum();
    let rhs = (l + 1) as f64;
    TraceObstruction {
        lhs,
        rhs,
        satisfiable: (lhs - rhs).abs() <= 1e-12,
    }
}

/// `(1 − q)^{−1/2}` times the cyclic shift on `L + 1` levels; it satisfies
/// `[c, c†]_q = 1` exactly.
pub fn make_circulant_quon(l: usize, q: f64) -> Result<ComplexMatrix> {
    check_levels(l)?;
    check_q(q)?;
    if q >= 1.0 {
        return Err(Error::param(
            "q",
            "circulant normalization 1/sqrt(1-q) is singular at q = 1",
        ));
    }
    let s = 1.0 / (1.0 - q).sqrt();
    let dim = l + 1;
    Ok(ComplexMatrix::from_fn(dim, |r, c| {
        if c == (r + 1) % dim {
            real(s)
        } else {
            ZERO
        }
    }))
}

pub fn verify_circulant(l: usize, q: f64, tol: Tolerance) -> Result<VerificationReport> {
    let c = make_circulant_quon(l, q)?;
    let t = tol.resolve(IDENTITY_TOL);
    let id = ComplexMatrix::identity(l + 1);
    let cd = c.adjoint();
    let mut report = VerificationReport::new(format!("circulant_quon L={l} q={q}"));
    report.check_close("[c,c+]_q = 1", &qmutator(&c, &cd, q)?, &id, t);
    let scaled = id.scale_real(1.0 / (1.0 - q));
    report.check_close("c c+ = 1/(1-q)", &(&c * &cd), &scaled, t);
    report.check_close("c+ c = 1/(1-q)", &(&cd * &c), &scaled, t);
    Ok(report)
}
