//! Builds the family a config describes and runs every verification that
//! applies to it.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{
    discrete_coherent_states, eigen_equation_margin, make_chain, verify_biorthogonal,
    verify_chain_algebra, verify_closed_form, verify_heisenberg,
};
use crate::config::{Family, FamilyConfig};
use crate::error::{Error, Result};
use crate::linalg::eigen::eigenvalues;
use crate::linalg::{ComplexMatrix, C64};
use crate::matrix_io::dump_matrix;
use crate::pseudo::{
    deform, example_fixture, random_bordered, random_diagonal, random_invertible,
    validate_regime_conditions, verify_example,
};
use crate::quon::{
    make_circulant_quon, make_quon_family, make_truncated_boson, trace_obstruction,
    verify_circulant, verify_regime, verify_truncated_boson, QuonFamily, Regime,
};
use crate::report::{Tolerance, VerificationReport};

pub const DEFAULT_SEED: u64 = 0;
/// Condition bound for randomly drawn similarities.
pub const RANDOM_R_CONDITION: f64 = 1e6;
pub const HEISENBERG_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
pub const LOG_NUMBER_TOL: f64 = 1e-10;
/// Sample points per matrix for the off-spectrum margin.
pub const MARGIN_SAMPLES: usize = 20;
pub const MARGIN_FLOOR: f64 = 1e-8;

/// Operator names accepted by `dump --what`.
pub const OPERATOR_NAMES: [&str; 9] = ["a", "adagger", "N", "Gamma", "C", "K", "D", "G", "Q"];

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub tol: Tolerance,
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    pub dump_dir: Option<PathBuf>,
}

fn seed_of(cfg: &FamilyConfig, opts: &SuiteOptions) -> u64 {
    opts.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED)
}

pub fn run_suite(cfg: &FamilyConfig, opts: &SuiteOptions) -> Result<VerificationReport> {
    let seed = seed_of(cfg, opts);
    let tol = opts.tol;
    let mut report = match &cfg.family {
        Family::TruncatedBoson { l } => verify_truncated_boson(*l, tol)?,
        Family::TruncatedQuon { l, q } => {
            quon_suite(&make_quon_family(*l, *q, Regime::QuonRule)?, tol)
        }
        Family::BosonlikeQuon { l, q } => {
            quon_suite(&make_quon_family(*l, *q, Regime::BosonLikeRule)?, tol)
        }
        Family::CirculantQuon { l, q } => {
            let mut r = verify_circulant(*l, *q, tol)?;
            let ob = trace_obstruction(*l, *q);
            r.note("bidiagonal trace obstruction: sum (1 - q^(n+1))", ob.lhs);
            r.note("bidiagonal trace obstruction: L + 1", ob.rhs);
            r
        }
        Family::Pseudo { l, q, regime, r } => {
            let f = make_quon_family(*l, *q, *regime)?;
            let mut report =
                VerificationReport::new(format!("pseudo {} seed={seed}", f.descriptor()));
            report.absorb("base", verify_regime(&f, tol));
            match r {
                Some(r) => report.absorb("R", validate_regime_conditions(&deform(&f, r)?, tol)),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let general = random_invertible(f.dim(), &mut rng, RANDOM_R_CONDITION);
                    report.absorb(
                        "random R",
                        validate_regime_conditions(&deform(&f, &general)?, tol),
                    );
                    let block = block_form(&f, &mut rng);
                    report.absorb(
                        "block-form R",
                        validate_regime_conditions(&deform(&f, &block)?, tol),
                    );
                }
            }
            report
        }
        Family::Chain { gammas } => chain_suite(gammas, tol)?,
        Family::ExampleFixture { q } => verify_example(&example_fixture(*q), tol),
        Family::GeneralMatrix { matrix } => general_suite(matrix, seed, tol)?,
    };

    if let Some(dir) = &opts.dump_dir {
        std::fs::create_dir_all(dir)?;
        for (name, m) in operators(cfg, opts)? {
            let path = dir.join(format!("{name}.txt"));
            dump_matrix(&m, &path)?;
            report.matrices_dumped.push(path.display().to_string());
        }
    }
    report.generated_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(report)
}

fn block_form(f: &QuonFamily, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    match f.regime() {
        Regime::QuonRule => random_bordered(f.dim(), rng, RANDOM_R_CONDITION),
        Regime::BosonLikeRule => random_diagonal(f.dim(), rng),
    }
}

fn quon_suite(f: &QuonFamily, tol: Tolerance) -> VerificationReport {
    let mut report = verify_regime(f, tol);
    let (q, l) = (f.q(), f.l());
    if f.regime() == Regime::QuonRule {
        let ob = trace_obstruction(l, q);
        report.note("trace obstruction: sum (1 - q^(n+1))", ob.lhs);
        report.note("trace obstruction: L + 1", ob.rhs);
    }
    match (
        f.quon_logarithmic_number(),
        f.quon_logarithmic_number_direct(),
    ) {
        (Ok(n), Ok(direct)) => {
            let want =
                ComplexMatrix::from_real_diagonal(&(0..=l).map(|m| m as f64).collect::<Vec<_>>());
            report.check_close(
                "log-form N = diag(0..L)",
                &n,
                &want,
                tol.resolve(LOG_NUMBER_TOL),
            );
            report.note(
                "||log-form N from N_C entries - diag(0..L)||_F",
                direct.distance(&want),
            );
        }
        _ => report.skip(
            "log-form N = diag(0..L)",
            "needs 0 < q < 1 and the quon rule",
        ),
    }
    report
}

fn chain_suite(gammas: &[f64], tol: Tolerance) -> Result<VerificationReport> {
    let c = make_chain(gammas)?;
    let mut report = verify_chain_algebra(&c, tol);
    for t in HEISENBERG_TIMES {
        report.absorb("", verify_heisenberg(&c, t, tol)?);
    }
    let values = eigenvalues(c.a())?;
    let m = c.len();
    let g = c.mean_weight();
    let spec_err = (0..m)
        .map(|k| {
            let root = C64::from_polar(g, std::f64::consts::TAU * k as f64 / m as f64);
            values
                .iter()
                .map(|z| (z - root).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    report.check(
        "spectrum = gamma * M-th roots of unity",
        spec_err,
        tol.resolve(crate::chain::RESOLUTION_TOL),
    );
    match discrete_coherent_states(c.a()) {
        Ok(s) => report.absorb("coherent states", verify_biorthogonal(c.a(), &s, tol)),
        Err(Error::DegenerateSpectrum { .. }) => {
            report.skip("coherent states", "degenerate spectrum")
        }
        Err(e) => return Err(e),
    }
    if m == 4 {
        report.absorb("closed form", verify_closed_form(&c, tol)?);
    }
    Ok(report)
}

const COHERENT_CHECKS: [&str; 5] = [
    "A Phi_j = z_j Phi_j",
    "A+ psi_j = conj(z_j) psi_j",
    "<Phi_j, psi_k> = delta_jk",
    "sum |Phi_j><psi_j| = 1",
    "sum |psi_j><Phi_j| = 1",
];

fn general_suite(a: &ComplexMatrix, seed: u64, tol: Tolerance) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("general_matrix dim={} seed={seed}", a.dim()));
    let values = match discrete_coherent_states(a) {
        Ok(s) => {
            report.absorb("", verify_biorthogonal(a, &s, tol));
            s.values
        }
        Err(Error::DegenerateSpectrum { .. }) => {
            for name in COHERENT_CHECKS {
                report.skip(name, "degenerate spectrum");
            }
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    let radius = values
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(a.frobenius_norm());
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margin = f64::INFINITY;
    let mut taken = 0;
    while taken < MARGIN_SAMPLES {
        let z = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)) * radius;
        if values.iter().all(|v| (v - z).norm() > 1e-6) {
            margin = margin.min(eigen_equation_margin(a, z));
            taken += 1;
        }
    }
    report.note("min sigma_min(A - z) / ||A||_F off the spectrum", margin);
    report.check_claim(
        "A Phi = z Phi has only Phi = 0 off the spectrum",
        margin > MARGIN_FLOOR,
    );
    Ok(report)
}

/// Every named operator the config's family provides.
pub fn operators(
    cfg: &FamilyConfig,
    opts: &SuiteOptions,
) -> Result<Vec<(&'static str, ComplexMatrix)>> {
    let seed = seed_of(cfg, opts);
    Ok(match &cfg.family {
        Family::TruncatedBoson { l } => {
            let a = make_truncated_boson(*l)?;
            let n = &a.adjoint() * &a;
            vec![("adagger", a.adjoint()), ("a", a), ("N", n)]
        }
        Family::TruncatedQuon { l, q } | Family::BosonlikeQuon { l, q } => {
            let regime = if matches!(cfg.family, Family::TruncatedQuon { .. }) {
                Regime::QuonRule
            } else {
                Regime::BosonLikeRule
            };
            let f = make_quon_family(*l, *q, regime)?;
            vec![
                ("C", f.c().clone()),
                ("K", f.k().clone()),
                ("N", f.number_operator()),
            ]
        }
        Family::CirculantQuon { l, q } => vec![("C", make_circulant_quon(*l, *q)?)],
        Family::Pseudo { l, q, regime, r } => {
            let f = make_quon_family(*l, *q, *regime)?;
            let r = match r {
                Some(r) => r.clone(),
                None => random_invertible(
                    f.dim(),
                    &mut ChaCha8Rng::seed_from_u64(seed),
                    RANDOM_R_CONDITION,
                ),
            };
            let t = deform(&f, &r)?;
            vec![
                ("C", f.c().clone()),
                ("K", f.k().clone()),
                ("D", t.d().clone()),
                ("G", t.g().clone()),
                ("Q", t.q_op().clone()),
            ]
        }
        Family::Chain { gammas } => {
            let c = make_chain(gammas)?;
            vec![
                ("a", c.a().clone()),
                ("adagger", c.a_dagger().clone()),
                ("N", c.n().clone()),
                ("Gamma", c.gamma().clone()),
            ]
        }
        Family::ExampleFixture { q } => {
            let fx = example_fixture(*q);
            vec![
                ("C", fx.c),
                ("K", fx.k),
                ("D", fx.e),
                ("G", fx.f),
                ("Q", fx.q_op),
            ]
        }
        Family::GeneralMatrix { matrix } => {
            vec![("a", matrix.clone()), ("adagger", matrix.adjoint())]
        }
    })
}

/// The operator whose spectrum `ladders spectrum` prints: the lowering
/// operator of the family.
pub fn principal_operator(cfg: &FamilyConfig, opts: &SuiteOptions) -> Result<ComplexMatrix> {
    let ops = operators(cfg, opts)?;
    let pick = ["a", "D", "C"];
    pick.iter()
        .find_map(|p| ops.iter().find(|(n, _)| n == p))
        .map(|(_, m)| m.clone())
        .ok_or_else(|| Error::param("kind", "family has no lowering operator"))
}

/// Eigenvalues sorted by argument in `(−π, π]`, then modulus. Imaginary
/// parts at rounding level count as zero, so real negative eigenvalues sort
/// last rather than first.
pub fn sorted_spectrum(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let mut v = eigenvalues(a)?;
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let arg = |z: &C64| {
        let im = if z.im.abs() <= 1e-13 * scale {
            0.0
        } else {
            z.im
        };
        im.atan2(z.re)
    };
    v.sort_by(|x, y| {
        arg(x)
            .total_cmp(&arg(y))
            .then(x.norm().total_cmp(&y.norm()))
    });
    Ok(v)
}

pub fn write_report(report: &VerificationReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json() + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn run(text: &str) -> VerificationReport {
        run_suite(&parse_config(text).unwrap(), &SuiteOptions::default()).unwrap()
    }

    #[test]
    fn truncated_quon_passes() {
        let r = run("kind = truncated_quon\nL = 4\nq = 0.3\n");
        assert!(r.checks.len() >= 5);
        assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn chain_power_check_present() {
        let r = run("kind = chain\ngammas = [1, 2, 3, 4]\n");
        assert!(r.find("a^M = prod(gamma) * I").unwrap().passed);
        assert!(r.all_passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn repeated_eigenvalue_skips_coherent_checks() {
        let r = run("kind = general_matrix\nmatrix = [[2, 1, 0], [0, 2, 0], [0, 0, 5]]\n");
        assert_eq!(r.skipped.len(), COHERENT_CHECKS.len());
        assert!(r.skipped.iter().all(|s| s.reason == "degenerate spectrum"));
        assert!(r.all_passed);
    }

    #[test]
    fn every_kind_runs() {
        for text in [
            "kind = truncated_boson\nL = 5\n",
            "kind = bosonlike_quon\nL = 3\nq = -0.4\n",
            "kind = circulant_quon\nL = 4\nq = -0.5\n",
            "kind = pseudo\nL = 3\nq = 0.5\nseed = 3\n",
            "kind = pseudo\nL = 3\nq = 0.5\nregime = boson_like_rule\n",
            "kind = example_fixture\n",
            "kind = general_matrix\nmatrix = [[1, 2i], [0.5, -1]]\n",
        ] {
            let r = run(text);
            assert!(
                r.all_passed,
                "{text}: {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = parse_config("kind = pseudo\nL = 4\nq = 0.2\n").unwrap();
        let opts = SuiteOptions {
            seed: Some(11),
            ..Default::default()
        };
        let mut a = run_suite(&cfg, &opts).unwrap();
        let mut b = run_suite(&cfg, &opts).unwrap();
        a.generated_at = 0;
        b.generated_at = 0;
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn spectrum_order() {
        let a = ComplexMatrix::from_diagonal(&[
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(1.0, 0.0),
        ]);
        let s = sorted_spectrum(&a).unwrap();
        assert_eq!(
            s,
            vec![
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0)
            ]
        );
    }
}
