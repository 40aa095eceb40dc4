//! The acceptance suite: one entry per shipped guarantee, runnable from the
//! dedicated integration test target or the CLI `selftest` subcommand. Each
//! criterion pins its tolerances and runtime budget in code.

use std::time::Instant;

use crate::algebra::Element;
use crate::builder::{
    build_invariant_pair, nacs_extension_test, product_structure, verify_borel_decomposition,
    verify_cr, verify_nacs, verify_solvable, ProductMode, StructurePair,
};
use crate::builtins;
use crate::error::Result;
use crate::linalg::{c, cr, C};
use crate::par::Strategy;
use crate::pipeline::{
    cmd_build, condition_agreement_sweep, grassmann_sweep, su2_agreement_sweep,
    su2_passing_family_sweep, OutputFormat, PipelineConfig,
};
use crate::root::{standard_cartan_borel, with_opposite_borel};
use crate::su2::{
    check_condition_iv_analytic, invariance_verdict, iwasawa_decompose, random_su2,
    sample_transversality, ActionParams, Sl2,
};
use crate::subspace::Subspace;
use crate::tol::Tolerances;
use crate::transversality::MorphismSpec;

use nalgebra::Matrix2;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} [{}] ({:.2}s{}) {}",
            self.index,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds,
            self.budget_seconds
                .map(|b| format!(" / budget {b:.0}s"))
                .unwrap_or_default(),
            self.detail
        )
    }
}

fn run_criterion<F>(
    index: usize,
    name: &'static str,
    budget: Option<f64>,
    f: F,
) -> CriterionResult
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    let (mut pass, detail) = match outcome {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(budget) = budget {
        if seconds > budget {
            pass = false;
        }
    }
    CriterionResult {
        index,
        name,
        pass,
        seconds,
        budget_seconds: budget,
        detail,
    }
}

fn build_config(algebra: &str, morphism: &str, tol: f64, seed: u64) -> PipelineConfig {
    PipelineConfig {
        algebra: Some(algebra.into()),
        morphism: Some(morphism.into()),
        checks: vec!["all".into()],
        tolerance: tol,
        output: OutputFormat::Json,
        seed,
    }
}

/// Criterion 1: the SU(2) invariant nacs is reproduced exactly:
/// `l = <e2 + i e3>`, `l' = <e1, e2 + i e3>`, `xi` proportional to `e1`,
/// and every verifier passes.
pub fn criterion_1(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(1, "su2 invariant nacs reproduction", Some(1.0), || {
        let run = cmd_build(build_config("su2", "[[1,0]]", tol.base, seed))?;
        if !run.overall_pass {
            return Ok((false, "pipeline reported failure".into()));
        }
        let su2 = builtins::su2();
        let (g, data) = standard_cartan_borel(&su2, tol)?;
        let spec = MorphismSpec::from_rows(1, 1, &[cr(1.0)])?;
        let pair = build_invariant_pair(&spec, &data, tol)?;

        let want_l = Subspace::complex_span(
            &g,
            vec![Element::from_complex(vec![cr(0.0), cr(1.0), c(0.0, 1.0)])],
            tol,
        )?;
        let want_lp = Subspace::complex_span(
            &g,
            vec![
                Element::from_complex(vec![cr(1.0), cr(0.0), cr(0.0)]),
                Element::from_complex(vec![cr(0.0), cr(1.0), c(0.0, 1.0)]),
            ],
            tol,
        )?;
        if !pair.l().equals(&want_l, tol) {
            return Ok((false, "l is not <e2 + i e3>".into()));
        }
        if !pair.l_prime().map_or(false, |lp| lp.equals(&want_lp, tol)) {
            return Ok((false, "l' is not <e1, e2 + i e3>".into()));
        }
        let xi = pair.xi().expect("nacs pair has xi");
        let coords = xi.coords();
        let off_axis = (coords[1].norm_sqr() + coords[2].norm_sqr()).sqrt();
        if off_axis > tol.base || coords[0].re <= 0.0 {
            return Ok((false, "xi is not a positive multiple of e1".into()));
        }

        let reports = [
            verify_cr(&pair, tol),
            verify_nacs(&pair, tol)?,
            verify_solvable(&pair, tol),
            verify_borel_decomposition(&pair, &data, tol),
        ];
        for rep in &reports {
            if !rep.pass {
                return Ok((false, format!("{} failed", rep.name)));
            }
            if let Some(worst) = rep.worst_residual() {
                if worst > tol.base {
                    return Ok((false, format!("{} residual {worst:.3e}", rep.name)));
                }
            }
        }
        Ok((true, "l = u, l' = b, xi ~ e1, all verifiers pass".into()))
    })
}

/// Criterion 2: the CR-without-nacs family `l_alpha` passes `verify_cr` but
/// admits no extension over the standard Borel and its opposite.
pub fn criterion_2(tol: &Tolerances, _seed: u64) -> CriterionResult {
    run_criterion(2, "CR structures without nacs", Some(1.0), || {
        let su2 = builtins::su2();
        let (g, data) = standard_cartan_borel(&su2, tol)?;
        let opposite = with_opposite_borel(&data, tol)?;
        let candidates = [data, opposite];
        for alpha in [1.0, -2.0, 0.5] {
            let l = Subspace::complex_span(
                &g,
                vec![Element::from_complex(vec![
                    cr(1.0),
                    cr(alpha),
                    c(0.0, alpha),
                ])],
                tol,
            )?;
            let pair = StructurePair::new_complex(l.clone());
            if !verify_cr(&pair, tol).pass {
                return Ok((false, format!("l_alpha with alpha = {alpha} fails CR")));
            }
            let extension = nacs_extension_test(&l, &candidates, tol)?;
            if extension.report.pass || extension.pair.is_some() {
                return Ok((
                    false,
                    format!("l_alpha with alpha = {alpha} unexpectedly extends to a nacs"),
                ));
            }
        }
        Ok((true, "alpha in {1, -2, 0.5}: CR passes, no nacs extension".into()))
    })
}

/// Criterion 3: SVD rank checks agree with the elimination oracle on 1000
/// seeded draws per shape; near-degenerate draws stay under 2%.
pub fn criterion_3(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(3, "condition/oracle equivalence", Some(10.0), || {
        // ranks of su(2), su(3), su(4)
        let summary = condition_agreement_sweep(&[1, 2, 3], 1000, seed, tol, Strategy::Auto);
        let near_fraction = summary.near_degenerate as f64 / summary.total as f64;
        let pass = summary.clean()
            && summary.agreements + summary.near_degenerate == summary.total
            && near_fraction <= 0.02;
        Ok((
            pass,
            format!(
                "{} draws, {} agree, {} near-degenerate ({:.2}%)",
                summary.total,
                summary.agreements,
                summary.near_degenerate,
                100.0 * near_fraction
            ),
        ))
    })
}

/// Criterion 4: sampled transversality agrees with the analytic condition on
/// 500 conditioned draws, and the worked triple reproduces
/// (pass+invariant, pass+non-invariant, fail).
pub fn criterion_4(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(4, "su2 analytic/sampled agreement", Some(60.0), || {
        let summary = su2_agreement_sweep(
            500,
            seed,
            &[0.5, 1.0, 2.0],
            512,
            &[0.25, 0.5, 1.0, 2.0, 4.0],
            tol,
            Strategy::Auto,
        );
        if !summary.clean() || summary.agreements != summary.total {
            return Ok((
                false,
                format!("sweep exceptions: {:?}", summary.exceptions.first()),
            ));
        }
        let radii = [0.5, 1.0, 2.0];
        let triple = [
            (ActionParams::new(cr(0.0), cr(1.0))?, true, Some(true)),
            (
                ActionParams::new(cr(1.0 / 3.0), cr(1.0))?,
                true,
                Some(false),
            ),
            (ActionParams::new(c(0.0, 1.0), cr(1.0))?, false, None),
        ];
        for (p, want_pass, want_invariant) in triple {
            let analytic = check_condition_iv_analytic(&p, tol).pass;
            let sampled = sample_transversality(&p, &radii, 512, tol)?.pass;
            if analytic != want_pass || sampled != want_pass {
                return Ok((
                    false,
                    format!(
                        "triple case a={}, b={}: analytic {analytic}, sampled {sampled}",
                        p.a, p.b
                    ),
                ));
            }
            if invariance_verdict(&p, tol) != want_invariant {
                return Ok((
                    false,
                    format!("triple case a={}, b={}: wrong invariance verdict", p.a, p.b),
                ));
            }
        }
        Ok((
            true,
            format!("500/500 agreement; triple (0,1), (1/3,1), (i,1) reproduced"),
        ))
    })
}

/// Criterion 5: fiber propagation. Radius-1 passes imply passes on all of
/// {1/4, 1/2, 1, 2, 4}; exercised over the conditioned sweep (vacuously) and
/// over a seeded family of genuinely passing actions.
pub fn criterion_5(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(5, "fiber propagation", Some(60.0), || {
        let radii = [0.25, 0.5, 1.0, 2.0, 4.0];
        let summary = su2_passing_family_sweep(100, seed, &radii, 512, tol, Strategy::Auto);
        let pass = summary.clean() && summary.agreements == summary.total;
        Ok((
            pass,
            format!(
                "{} passing actions propagate to all radii{}",
                summary.agreements,
                summary
                    .exceptions
                    .first()
                    .map(|e| format!("; first exception: {e}"))
                    .unwrap_or_default()
            ),
        ))
    })
}

/// Criterion 6: the algebraic invariant suite.
pub fn criterion_6(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(6, "algebraic invariants", None, || {
        // exact Jacobi
        for name in ["su2", "su3", "su4", "so3"] {
            let alg = builtins::by_name(name)?;
            let rep = alg.check_jacobi(tol);
            if !rep.pass || rep.checks[0].residual != Some(0.0) {
                return Ok((false, format!("{name} Jacobi residual is not exactly 0")));
            }
        }
        for name in ["su2", "su3", "su4"] {
            let alg = builtins::by_name(name)?;
            let (g, data) = standard_cartan_borel(&alg, tol)?;
            // b dimension identity
            if data.borel_b().unwrap().dim_real() != alg.dim() + data.rank() {
                return Ok((false, format!("{name}: dim_R b != dim_R k + rank")));
            }
            // eigen residuals
            let r_basis = data.cartan_r().basis_elements();
            for (root, space) in data.roots().iter().zip(data.root_spaces()) {
                for x in space.basis_elements() {
                    for (h, &alpha) in r_basis.iter().zip(&root.values) {
                        let resid = g
                            .bracket(h, &x)?
                            .sub(&x.scale(alpha))
                            .norm();
                        if resid > tol.eigen {
                            return Ok((
                                false,
                                format!("{name}: eigen residual {resid:.3e} exceeds 1e-9"),
                            ));
                        }
                    }
                }
            }
            // bracket table [g_a, g_b]
            let n_roots = data.roots().len();
            for i in 0..n_roots {
                for j in 0..n_roots {
                    let ri = &data.roots()[i];
                    let rj = &data.roots()[j];
                    let sum = ri.plus(rj);
                    let target = data.find_root(&sum, tol.cluster);
                    let zero_sum = sum
                        .torus_values
                        .iter()
                        .all(|v| v.norm() <= tol.cluster);
                    for u in data.root_spaces()[i].basis_elements() {
                        for v in data.root_spaces()[j].basis_elements() {
                            let br = g.bracket(&u, &v)?;
                            if br.norm() <= tol.base {
                                continue;
                            }
                            let ok = if let Some(k) = target {
                                data.root_spaces()[k].residual_of(&br) <= tol.base
                            } else if zero_sum {
                                data.cartan_r().residual_of(&br) <= tol.base
                            } else {
                                false // bracket must vanish, but it did not
                            };
                            if !ok {
                                return Ok((
                                    false,
                                    format!("{name}: [g_a, g_b] landed outside g_(a+b)"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        // Grassmann identity on 500 random pairs
        let grassmann = grassmann_sweep(500, seed, tol)?;
        if !grassmann.clean() {
            return Ok((
                false,
                format!("Grassmann exceptions: {:?}", grassmann.exceptions.first()),
            ));
        }
        Ok((
            true,
            "Jacobi exact, eigen residuals <= 1e-9, Borel dims, bracket table, Grassmann".into(),
        ))
    })
}

/// Criterion 7: product constructions.
pub fn criterion_7(tol: &Tolerances, _seed: u64) -> CriterionResult {
    run_criterion(7, "product constructions", Some(1.0), || {
        // su2 nacs
        let su2 = builtins::su2();
        let (_g2, data2) = standard_cartan_borel(&su2, tol)?;
        let nacs_pair = build_invariant_pair(
            &MorphismSpec::from_rows(1, 1, &[cr(1.0)])?,
            &data2,
            tol,
        )?;
        // su3 complex pair
        let su3 = builtins::by_name("su3")?;
        let (_g3, data3) = standard_cartan_borel(&su3, tol)?;
        let complex_pair = build_invariant_pair(
            &MorphismSpec::from_rows(2, 1, &[cr(1.0), c(0.0, 1.0)])?,
            &data3,
            tol,
        )?;

        let hopf = product_structure(&nacs_pair, None, ProductMode::NacsTimesCircle, tol)?;
        if hopf.l().dim_complex() != Some(2) {
            return Ok((false, "su2 x u1 product has the wrong dimension".into()));
        }
        if !verify_cr(&hopf, tol).pass {
            return Ok((false, "su2 x u1 product fails verify_cr".into()));
        }

        let double = product_structure(
            &nacs_pair,
            Some(&nacs_pair),
            ProductMode::NacsTimesNacs,
            tol,
        )?;
        if double.l().dim_complex() != Some(3) {
            return Ok((false, "su2 x su2 product has the wrong dimension".into()));
        }
        if !verify_cr(&double, tol).pass {
            return Ok((false, "su2 x su2 product fails verify_cr".into()));
        }

        let su3_circle =
            product_structure(&complex_pair, None, ProductMode::ComplexTimesCircle, tol)?;
        if !verify_nacs(&su3_circle, tol)?.pass {
            return Ok((false, "su3 x u1 product fails verify_nacs".into()));
        }
        Ok((
            true,
            "su2 nacs x S^1, su2 x su2, su3 complex x S^1 all verified".into(),
        ))
    })
}

/// Criterion 8: Iwasawa round-trip over 1000 random unimodular matrices.
pub fn criterion_8(tol: &Tolerances, seed: u64) -> CriterionResult {
    run_criterion(8, "Iwasawa round-trip", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            // random SL(2,C): normalize a random matrix by a square root of
            // its determinant
            let mut draw = || -> C {
                c(
                    rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
                    rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
                )
            };
            let g = loop {
                let m = Matrix2::new(draw(), draw(), draw(), draw());
                let det: C = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
                if det.norm() > 1e-3 {
                    break Sl2::new(m / det.sqrt(), tol).expect("unimodular by construction");
                }
            };
            let (k, a, u) = iwasawa_decompose(&g);
            if k.unitary_residual() > tol.tight {
                return Ok((false, "k is not unitary".into()));
            }
            if !a.is_diagonal_positive(tol) {
                return Ok((false, "a is not positive diagonal".into()));
            }
            if !u.is_upper_unipotent(tol) {
                return Ok((false, "u is not upper unipotent".into()));
            }
            let recon = k.mul(&a).mul(&u);
            let residual =
                (recon.matrix() - g.matrix()).norm() / g.matrix().norm();
            worst = worst.max(residual);
        }
        // also exercise the random SU(2) sampler's membership
        let k = random_su2(&mut rng);
        if k.unitary_residual() > tol.tight {
            return Ok((false, "random SU(2) sampler left the group".into()));
        }
        Ok((
            worst <= tol.tight,
            format!("1000 matrices, worst reconstruction residual {worst:.3e}"),
        ))
    })
}

/// Run the whole suite.
pub fn run_all(tol: &Tolerances, seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1(tol, seed),
        criterion_2(tol, seed),
        criterion_3(tol, seed),
        criterion_4(tol, seed),
        criterion_5(tol, seed),
        criterion_6(tol, seed),
        criterion_7(tol, seed),
        criterion_8(tol, seed),
    ]
}

/// Run a subset by criterion number (1-based).
pub fn run_selected(tol: &Tolerances, seed: u64, selected: &[usize]) -> Vec<CriterionResult> {
    let table: [fn(&Tolerances, u64) -> CriterionResult; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    selected
        .iter()
        .filter_map(|&i| table.get(i.wrapping_sub(1)).map(|f| f(tol, seed)))
        .collect()
}
