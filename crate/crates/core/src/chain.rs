//! Weighted ladder operators on a closed chain and discrete coherent states.
//!
//! `a†` moves `eⱼ` to `γⱼ₊₁ eⱼ₊₁` and wraps `e_{M−1}` back to `γ₀ e₀`, so no
//! basis vector is annihilated. The commutator `Γ = [a, a†]` is diagonal and
//! takes over the role of the identity: `[N, a] = −Γa`, `[N, a†] = a†Γ`.
//!
//! Any matrix with a simple spectrum has a finite family of coherent states
//! (its eigenvectors) together with a unique biorthogonal dual family, the
//! eigenvectors of its adjoint.

use crate::error::{Error, Result};
use crate::linalg::eigen::EigenOptions;
use crate::linalg::{
    commutator, eigensystem_with, inverse, matrix_exponential, real, smallest_singular_value,
    ComplexMatrix, ComplexVector, C64, I,
};
use crate::report::{Tolerance, VerificationReport};

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const HEISENBERG_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-10;
pub const RESOLUTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ChainSystem {
    gammas: Vec<f64>,
    a: ComplexMatrix,
    a_dagger: ComplexMatrix,
    n: ComplexMatrix,
    gamma: ComplexMatrix,
}

/// Builds the chain with `a(j, j+1) = γⱼ₊₁` and `a(M−1, 0) = γ₀`.
pub fn make_chain(gammas: &[f64]) -> Result<ChainSystem> {
    let m = gammas.len();
    if m < 2 {
        return Err(Error::param(
            "gammas",
            format!("chain length must be at least 2, got {m}"),
        ));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::param(
            "gammas",
            format!("weights must be positive and finite, got {g}"),
        ));
    }
    let mut a = ComplexMatrix::zeros(m);
    for j in 0..m - 1 {
        a[(j, j + 1)] = real(gammas[j + 1]);
    }
    a[(m - 1, 0)] = real(gammas[0]);
    let a_dagger = a.adjoint();
    let n = ComplexMatrix::from_real_diagonal(&gammas.iter().map(|g| g * g).collect::<Vec<_>>());
    let gamma = ComplexMatrix::from_real_diagonal(
        &(0..m)
            .map(|j| gammas[(j + 1) % m].powi(2) - gammas[j].powi(2))
            .collect::<Vec<_>>(),
    );
    Ok(ChainSystem {
        gammas: gammas.to_vec(),
        a,
        a_dagger,
        n,
        gamma,
    })
}

impl ChainSystem {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn a_dagger(&self) -> &ComplexMatrix {
        &self.a_dagger
    }

    /// `N = a†a = diag(γⱼ²)`.
    pub fn n(&self) -> &ComplexMatrix {
        &self.n
    }

    /// `Γ = [a, a†] = diag(γⱼ₊₁² − γⱼ²)`.
    pub fn gamma(&self) -> &ComplexMatrix {
        &self.gamma
    }

    pub fn weight_product(&self) -> f64 {
        self.gammas.iter().product()
    }

    /// Geometric mean of the weights; the spectrum of `a` is this times the
    /// `M`-th roots of unity.
    pub fn mean_weight(&self) -> f64 {
        self.weight_product().powf(1.0 / self.len() as f64)
    }

    pub fn descriptor(&self) -> String {
        let g: Vec<String> = self.gammas.iter().map(|g| format!("{g}")).collect();
        format!("chain M={} gammas=[{}]", self.len(), g.join(", "))
    }
}

pub fn verify_chain_algebra(c: &ChainSystem, tol: Tolerance) -> VerificationReport {
    let t = tol.resolve(ALGEBRA_TOL);
    let m = c.len();
    let id = ComplexMatrix::identity(m);
    let (a, ad, n, g) = (&c.a, &c.a_dagger, &c.n, &c.gamma);
    let mut report = VerificationReport::new(c.descriptor());

    report.check_close("N = a+ a", &(ad * a), n, t);
    report.check_close("[a,a+] = Gamma", &commutator(a, ad).unwrap(), g, t);
    report.check_close(
        "[N,a] = -Gamma a",
        &commutator(n, a).unwrap(),
        &(-&(g * a)),
        t,
    );
    report.check_close(
        "[N,a+] = a+ Gamma",
        &commutator(n, ad).unwrap(),
        &(ad * g),
        t,
    );
    report.check(
        "[N,Gamma] = 0",
        commutator(n, g).unwrap().frobenius_norm(),
        t,
    );
    report.check_close("a a+ = Gamma + N", &(a * ad), &(g + n), t);
    report.check(
        "[Gamma+N,Gamma] = 0",
        commutator(&(g + n), g).unwrap().frobenius_norm(),
        t,
    );

    // Each entry of a^M is a single product of M weights, so the rounding
    // error is relative to that product.
    let p = c.weight_product();
    let target = id.scale_real(p);
    report.check(
        "a^M = prod(gamma) * I",
        a.pow(m as u32).distance(&target) / p,
        t,
    );
    report.check(
        "(a+)^M = prod(gamma) * I",
        ad.pow(m as u32).distance(&target) / p,
        t,
    );
    report.note("||[a,a+] - 1||_F", commutator(a, ad).unwrap().distance(&id));
    report
}

/// `a(t) = exp(iNt) a exp(−iNt)`.
pub fn heisenberg_evolve(c: &ChainSystem, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::param("t", "time must be finite"));
    }
    let fwd = matrix_exponential(&c.n.scale(I * t))?;
    let back = matrix_exponential(&c.n.scale(-I * t))?;
    Ok(&(&fwd * &c.a) * &back)
}

pub fn verify_heisenberg(c: &ChainSystem, t: f64, tol: Tolerance) -> Result<VerificationReport> {
    let tt = tol.resolve(HEISENBERG_TOL);
    let at = heisenberg_evolve(c, t)?;
    let closed = &matrix_exponential(&c.gamma.scale(-I * t))? * &c.a;
    let mut report = VerificationReport::new(format!("{} t={t}", c.descriptor()));
    report.check_close(format!("a(t) = exp(-i Gamma t) a, t={t}"), &at, &closed, tt);
    report.check_close(
        format!("a+(t) a(t) = a+ a, t={t}"),
        &(&at.adjoint() * &at),
        &c.n,
        tt,
    );
    Ok(report)
}

/// Eigenvalues `zⱼ` of a matrix `A` with eigenvectors `Φⱼ` and the dual
/// family `ψⱼ`, so that `⟨Φⱼ, ψₖ⟩ = δⱼₖ`.
#[derive(Clone, Debug)]
pub struct BiorthogonalSystem {
    pub values: Vec<C64>,
    pub phi: Vec<ComplexVector>,
    pub psi: Vec<ComplexVector>,
}

impl BiorthogonalSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σⱼ |Φⱼ⟩⟨ψⱼ|`.
    pub fn resolution(&self) -> ComplexMatrix {
        crate::pseudo::sum_rank_one(&self.phi, &self.psi)
    }

    /// `Σⱼ |ψⱼ⟩⟨Φⱼ|`.
    pub fn dual_resolution(&self) -> ComplexMatrix {
        crate::pseudo::sum_rank_one(&self.psi, &self.phi)
    }

    /// Entry `(j, k) = ⟨Φⱼ, ψₖ⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |j, k| self.phi[j].inner(&self.psi[k]))
    }

    /// Largest `‖A Φⱼ − zⱼ Φⱼ‖`.
    pub fn eigen_residual(&self, a: &ComplexMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.phi)
            .map(|(&z, v)| a.apply(v).unwrap().distance(&v.scale(z)))
            .fold(0.0, f64::max)
    }

    /// Largest `‖A† ψⱼ − z̄ⱼ ψⱼ‖`.
    pub fn dual_eigen_residual(&self, a: &ComplexMatrix) -> f64 {
        let ad = a.adjoint();
        self.values
            .iter()
            .zip(&self.psi)
            .map(|(&z, v)| ad.apply(v).unwrap().distance(&v.scale(z.conj())))
            .fold(0.0, f64::max)
    }
}

pub fn discrete_coherent_states(a: &ComplexMatrix) -> Result<BiorthogonalSystem> {
    let opts = EigenOptions::default();
    let es = eigensystem_with(a, &opts)?;
    if !es.distinct {
        let radius = es.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        return Err(Error::DegenerateSpectrum {
            gap: es.min_gap,
            threshold: opts.distinct_rel_gap * radius,
        });
    }
    let v = es.vector_matrix();
    let duals = inverse(&v.adjoint(), crate::linalg::lu::DEFAULT_MAX_CONDITION)?;
    let psi = (0..a.dim()).map(|k| duals.column(k)).collect();
    Ok(BiorthogonalSystem {
        values: es.values,
        phi: es.vectors,
        psi,
    })
}

/// Checks the eigen-equations, biorthonormality and both resolutions of the
/// identity for `s` against `a`.
pub fn verify_biorthogonal(
    a: &ComplexMatrix,
    s: &BiorthogonalSystem,
    tol: Tolerance,
) -> VerificationReport {
    let et = tol.resolve(EIGEN_TOL);
    let rt = tol.resolve(RESOLUTION_TOL);
    let id = ComplexMatrix::identity(a.dim());
    let mut report = VerificationReport::new(format!("biorthogonal system, dim {}", a.dim()));
    report.check("A Phi_j = z_j Phi_j", s.eigen_residual(a), et);
    report.check("A+ psi_j = conj(z_j) psi_j", s.dual_eigen_residual(a), et);
    report.check("<Phi_j, psi_k> = delta_jk", s.gram().distance(&id), et);
    report.check_close("sum |Phi_j><psi_j| = 1", &s.resolution(), &id, rt);
    report.check_close("sum |psi_j><Phi_j| = 1", &s.dual_resolution(), &id, rt);
    report
}

/// `σ_min(A − z·1) / ‖A‖_F`: how far `z` is from admitting a nonzero
/// solution of `AΦ = zΦ`.
pub fn eigen_equation_margin(a: &ComplexMatrix, z: C64) -> f64 {
    let shifted = a - &ComplexMatrix::identity(a.dim()).scale(z);
    smallest_singular_value(&shifted) / a.frobenius_norm()
}

/// Closed-form coherent states of the length-4 chain, eigenvalues ordered
/// `(−γ, −iγ, iγ, γ)`, each vector carrying the overall factor 1/2 and last
/// component 1.
pub fn chain_coherent_closed_form(c: &ChainSystem) -> Result<BiorthogonalSystem> {
    if c.len() != 4 {
        return Err(Error::UnsupportedLength(c.len()));
    }
    let g = c.gammas();
    let gm = c.mean_weight();
    let u = gm / g[0];
    let v = gm * gm / (g[0] * g[1]);
    let w = g[3] / gm;
    let values = vec![real(-gm), -I * gm, I * gm, real(gm)];
    // Φⱼ = ½(s u, s² v, s³ w, 1) with s = zⱼ/γ; the dual inverts the ratios.
    let one = real(1.0);
    let half = real(0.5);
    let phi = values
        .iter()
        .map(|z| {
            let s = z / gm;
            ComplexVector::new(vec![
                s * u * half,
                s * s * v * half,
                s * s * s * w * half,
                half,
            ])
        })
        .collect();
    let psi = values
        .iter()
        .map(|z| {
            let s = z / gm;
            ComplexVector::new(vec![
                s * half / u,
                s * s * half / v,
                s * s * s * half / w,
                one * half,
            ])
        })
        .collect();
    Ok(BiorthogonalSystem { values, phi, psi })
}

/// Closed-form checks for a length-4 chain, including a cross-check against
/// the numerical coherent states after scaling every vector to last
/// component 1.
pub fn verify_closed_form(c: &ChainSystem, tol: Tolerance) -> Result<VerificationReport> {
    let cf = chain_coherent_closed_form(c)?;
    let mut report = VerificationReport::new(format!("closed form, {}", c.descriptor()));
    let et = tol.resolve(EIGEN_TOL);
    report.absorb(
        "",
        verify_biorthogonal(c.a(), &cf, Tolerance { global: Some(et) }),
    );

    let num = discrete_coherent_states(c.a())?;
    let mut spec_err: f64 = 0.0;
    let mut phi_err: f64 = 0.0;
    let mut psi_err: f64 = 0.0;
    for (j, z) in cf.values.iter().enumerate() {
        let k = nearest(&num.values, *z);
        spec_err = spec_err.max((num.values[k] - z).norm());
        phi_err = phi_err.max(last_one(&num.phi[k]).distance(&last_one(&cf.phi[j])));
        psi_err = psi_err.max(last_one(&num.psi[k]).distance(&last_one(&cf.psi[j])));
    }
    report.check(
        "spectrum = {-g, -ig, ig, g}",
        spec_err,
        tol.resolve(RESOLUTION_TOL),
    );
    report.check(
        "numerical Phi matches closed form",
        phi_err,
        tol.resolve(RESOLUTION_TOL),
    );
    report.check(
        "numerical psi matches closed form",
        psi_err,
        tol.resolve(RESOLUTION_TOL),
    );
    Ok(report)
}

fn nearest(values: &[C64], z: C64) -> usize {
    (0..values.len())
        .min_by(|&i, &j| (values[i] - z).norm().total_cmp(&(values[j] - z).norm()))
        .expect("nonempty")
}

fn last_one(v: &ComplexVector) -> ComplexVector {
    let last = v.entries()[v.dim() - 1];
    v.scale(last.inv())
}

/// Expansion coefficients of `exp(iNt) Φⱼ` in the closed-form basis of a
/// length-4 chain.
#[derive(Clone, Debug, PartialEq)]
pub struct InstabilityProfile {
    pub overlap_profile: Vec<C64>,
}

pub fn coherent_state_instability(c: &ChainSystem, j: usize, t: f64) -> Result<InstabilityProfile> {
    let cf = chain_coherent_closed_form(c)?;
    if j >= cf.dim() {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: cf.dim() - 1,
        });
    }
    let evolved = matrix_exponential(&c.n.scale(I * t))?.apply(&cf.phi[j])?;
    Ok(InstabilityProfile {
        overlap_profile: cf.psi.iter().map(|p| p.inner(&evolved)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_layout() {
        let c = make_chain(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 2.0, 0.0, 0.0],
            &[0.0, 0.0, 3.0, 0.0],
            &[0.0, 0.0, 0.0, 4.0],
            &[1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(c.a(), &expected);
        assert_eq!(c.n().diagonal(), [1.0, 4.0, 9.0, 16.0].map(real));
        assert_eq!(c.gamma().diagonal(), [3.0, 5.0, 7.0, -15.0].map(real));
        assert_eq!(c.gamma().trace(), real(0.0));
        // a† e_j = γ_{j+1} e_{j+1}, wrapping to γ_0 e_0
        let e3 = ComplexVector::basis(4, 3);
        assert_eq!(c.a_dagger().apply(&e3).unwrap(), ComplexVector::basis(4, 0));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(make_chain(&[1.0]).is_err());
        assert!(make_chain(&[1.0, 0.0]).is_err());
        assert!(make_chain(&[1.0, -2.0, 3.0]).is_err());
        assert!(make_chain(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn equal_weights() {
        let c = make_chain(&[1.0; 4]).unwrap();
        assert_eq!(c.gamma(), &ComplexMatrix::zeros(4));
        for t in [0.0, 0.7, 10.0] {
            assert!(heisenberg_evolve(&c, t).unwrap().distance(c.a()) < 1e-14);
        }
    }

    #[test]
    fn algebra_report() {
        let c = make_chain(&[1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(c.a().pow(4), ComplexMatrix::identity(4).scale_real(4.0));
        let r = verify_chain_algebra(&c, Tolerance::default());
        assert!(r.all_passed);
        assert!(r.notes[0].value > 0.0);
        let r = verify_chain_algebra(
            &make_chain(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            Tolerance::default(),
        );
        assert!(r.find("a^M = prod(gamma) * I").unwrap().passed);
    }

    #[test]
    fn heisenberg() {
        let c = make_chain(&[1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(heisenberg_evolve(&c, 0.0).unwrap(), *c.a());
        assert!(
            verify_heisenberg(&c, 0.3, Tolerance::default())
                .unwrap()
                .all_passed
        );
        assert!(heisenberg_evolve(&c, f64::INFINITY).is_err());
    }

    #[test]
    fn diagonal_is_self_dual() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let s = discrete_coherent_states(&a).unwrap();
        for k in 0..3 {
            assert!((s.values[k] - real(k as f64 + 1.0)).norm() < 1e-15);
            assert!(s.phi[k].distance(&ComplexVector::basis(3, k)) < 1e-15);
            assert!(s.psi[k].distance(&ComplexVector::basis(3, k)) < 1e-15);
        }
    }

    #[test]
    fn repeated_eigenvalue_is_degenerate() {
        let a =
            ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]])
                .unwrap();
        assert!(matches!(
            discrete_coherent_states(&a),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn closed_form_unit_weights() {
        let c = make_chain(&[1.0; 4]).unwrap();
        let cf = chain_coherent_closed_form(&c).unwrap();
        let half = ComplexVector::from_real(&[0.5; 4]);
        assert!(cf.phi[3].distance(&half) < 1e-15);
        assert!(cf.psi[3].distance(&half) < 1e-15);
        let r = verify_closed_form(&c, Tolerance::default()).unwrap();
        assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn closed_form_matches_printed_vectors() {
        let g = [0.7, 2.5, 1.3, 4.0];
        let c = make_chain(&g).unwrap();
        let cf = chain_coherent_closed_form(&c).unwrap();
        let gm = (g.iter().product::<f64>()).powf(0.25);
        let p = |xs: [C64; 4]| ComplexVector::new(xs.map(|x| x * 0.5).to_vec());
        let (u, v, w) = (gm / g[0], gm * gm / (g[0] * g[1]), g[3] / gm);
        let phi0 = p([real(-u), real(v), real(-w), real(1.0)]);
        let phi1 = p([-I * u, real(-v), I * w, real(1.0)]);
        let psi0 = p([real(-1.0 / u), real(1.0 / v), real(-1.0 / w), real(1.0)]);
        // dual of the -iγ state carries -i in its first slot
        let psi1 = p([-I / u, real(-1.0 / v), I / w, real(1.0)]);
        assert!(cf.phi[0].distance(&phi0) < 1e-14);
        assert!(cf.phi[1].distance(&phi1) < 1e-14);
        assert!(cf.psi[0].distance(&psi0) < 1e-14);
        assert!(cf.psi[1].distance(&psi1) < 1e-14);
        let r = verify_closed_form(&c, Tolerance::default()).unwrap();
        assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn fourth_root_mean() {
        let c = make_chain(&[16.0, 1.0, 1.0, 1.0]).unwrap();
        let cf = chain_coherent_closed_form(&c).unwrap();
        let want = [real(-2.0), -I * 2.0, I * 2.0, real(2.0)];
        for (z, w) in cf.values.iter().zip(want) {
            assert!((z - w).norm() < 1e-15);
        }
        assert!(matches!(
            chain_coherent_closed_form(&make_chain(&[1.0; 5]).unwrap()),
            Err(Error::UnsupportedLength(5))
        ));
    }

    #[test]
    fn instability() {
        let c = make_chain(&[1.0; 4]).unwrap();
        let t = 0.8;
        let prof = coherent_state_instability(&c, 2, t)
            .unwrap()
            .overlap_profile;
        for (k, p) in prof.iter().enumerate() {
            let want = if k == 2 {
                C64::from_polar(1.0, t)
            } else {
                real(0.0)
            };
            assert!((p - want).norm() < 1e-14);
        }
        let c = make_chain(&[1.0, 2.0, 1.0, 2.0]).unwrap();
        let at0 = coherent_state_instability(&c, 0, 0.0)
            .unwrap()
            .overlap_profile;
        assert!((at0[0] - real(1.0)).norm() < 1e-14);
        let prof = coherent_state_instability(&c, 0, 1.0)
            .unwrap()
            .overlap_profile;
        assert!(prof.iter().filter(|p| p.norm() > 1e-6).count() >= 2);
        assert!(coherent_state_instability(&c, 4, 1.0).is_err());
    }
}
