//! Orchestration used by the CLI and the acceptance suite: load inputs, run
//! the construction/verification pipelines, emit structured run reports, and
//! drive the seeded random sweeps.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element, LieAlgebra};
use crate::builder::{
    build_invariant_pair, verify_borel_decomposition, verify_cr, verify_nacs, verify_solvable,
    StructurePair,
};
use crate::builtins;
use crate::error::{Error, Result};
use crate::linalg::{c, C};
use crate::par::{map_indexed, Strategy};
use crate::report::VerificationReport;
use crate::root::{standard_cartan_borel, CartanBorelData, CartanBorelJson};
use crate::su2::{
    check_condition_iv_analytic, run_action_pipeline, sample_transversality_with, ActionParams,
    Su2ActionReport,
};
use crate::tol::Tolerances;
use crate::transversality::{
    check_conditions, oracle_kernel_check, parameter_count_for_rank, random_morphism,
    ConditionReport, MorphismSpec,
};

// ---------------------------------------------------------------------------
// Config and run report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    pub checks: Vec<String>,
    pub tolerance: f64,
    pub output: OutputFormat,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<Tolerances> {
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(Error::argument(format!(
                "tolerance must lie in (0, 1e-2), got {}",
                self.tolerance
            )));
        }
        if self.checks.is_empty() {
            return Err(Error::argument("at least one check must be requested"));
        }
        Ok(Tolerances::from_base(self.tolerance))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: PipelineConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub describe: Option<CartanBorelJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub su2_action: Option<Su2ActionReport>,
    pub reports: Vec<VerificationReport>,
    pub overall_pass: bool,
    pub wall_time_seconds: f64,
}

impl RunReport {
    fn new(config: PipelineConfig) -> Self {
        RunReport {
            config,
            condition: None,
            oracle: None,
            describe: None,
            su2_action: None,
            reports: Vec::new(),
            overall_pass: true,
            wall_time_seconds: 0.0,
        }
    }

    fn push(&mut self, report: VerificationReport) {
        self.overall_pass &= report.pass;
        self.reports.push(report);
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(d) = &self.describe {
            out.push_str(&format!(
                "algebra {}: dim {}, rank {}\n",
                d.algebra, d.dim, d.rank
            ));
            for (i, root) in d.roots.iter().enumerate() {
                let vals: Vec<String> = root
                    .iter()
                    .map(|(re, im)| format!("{re:+.4}{im:+.4}i"))
                    .collect();
                let tag = match &d.positive {
                    Some(p) if p.contains(&i) => " (positive)",
                    _ => "",
                };
                out.push_str(&format!("  root {i}: [{}]{}\n", vals.join(", "), tag));
            }
            if let (Some(b), Some(u)) = (&d.borel, &d.nilpotent) {
                out.push_str(&format!(
                    "  borel b: {} basis vectors; u = [b, b]: {}\n",
                    b.len(),
                    u.len()
                ));
            }
        }
        if let Some(c) = &self.condition {
            out.push_str(&format!(
                "condition {:?}: {}{}\n",
                c.condition,
                if c.pass { "PASS" } else { "FAIL" },
                if c.near_degenerate { " (near-degenerate)" } else { "" }
            ));
        }
        if let Some(s) = &self.su2_action {
            out.push_str(&format!(
                "su2 action: analytic {}, sampled {}, invariant {:?}, mu {:?}\n",
                s.analytic_pass, s.sampled_pass, s.invariant, s.mu
            ));
        }
        for rep in &self.reports {
            out.push_str(&format!(
                "[{}] {}\n",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.name
            ));
            for check in &rep.checks {
                let residual = check
                    .residual
                    .map(|r| format!(" residual={r:.3e}"))
                    .unwrap_or_default();
                let value = check
                    .value
                    .map(|v| format!(" value={v}"))
                    .unwrap_or_default();
                let detail = check
                    .detail
                    .as_ref()
                    .map(|d| format!(" ({d})"))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "    [{}] {}{}{}{}\n",
                    if check.pass { "ok" } else { "FAIL" },
                    check.name,
                    residual,
                    value,
                    detail
                ));
            }
        }
        out.push_str(&format!(
            "overall: {} ({:.3}s)\n",
            if self.overall_pass { "PASS" } else { "FAIL" },
            self.wall_time_seconds
        ));
        out
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

/// A built-in name, or a path to an algebra-spec JSON file.
pub fn load_algebra(source: &str) -> Result<Arc<LieAlgebra>> {
    if builtins::BUILTIN_NAMES.contains(&source) {
        return builtins::by_name(source);
    }
    let text = std::fs::read_to_string(source).map_err(|e| {
        Error::argument(format!(
            "'{source}' is neither a built-in algebra nor a readable file: {e}"
        ))
    })?;
    let spec = AlgebraSpec::from_json(&text)?;
    let name = std::path::Path::new(source)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("user")
        .to_string();
    spec.build(name)
}

/// Parse a morphism matrix for an algebra of rank `q`: either inline
/// row-major `[[re, im], ...]` or a path to a morphism-spec JSON.
pub fn load_morphism(source: &str, q: usize) -> Result<MorphismSpec> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('[') {
        let pairs: Vec<(f64, f64)> = serde_json::from_str(trimmed)
            .map_err(|e| Error::argument(format!("inline matrix must be [[re, im], ...]: {e}")))?;
        let l = parameter_count_for_rank(q);
        let entries: Vec<C> = pairs.iter().map(|&(re, im)| c(re, im)).collect();
        return MorphismSpec::from_rows(q, l, &entries);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::argument(format!("cannot read morphism file '{source}': {e}")))?;
    MorphismSpec::from_json(&text)
}

fn jacobi_gate(alg: &Arc<LieAlgebra>, tol: &Tolerances) -> Result<VerificationReport> {
    let report = alg.check_jacobi(tol);
    if !report.pass {
        let detail = report.checks[0]
            .detail
            .clone()
            .unwrap_or_else(|| "unknown witness".into());
        return Err(Error::precondition(format!(
            "algebra fails the Jacobi identity: {detail}, residual {:?}",
            report.checks[0].residual
        )));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// `describe`: dimensions, rank, torus, roots, Borel data.
pub fn cmd_describe(config: PipelineConfig) -> Result<RunReport> {
    let tol = config.validate()?;
    let start = Instant::now();
    let source = config
        .algebra
        .clone()
        .ok_or_else(|| Error::argument("describe needs an algebra"))?;
    let alg = load_algebra(&source)?;
    let mut run = RunReport::new(config);
    run.push(jacobi_gate(&alg, &tol)?);

    match standard_cartan_borel(&alg, &tol) {
        Ok((_g, data)) => {
            run.describe = Some(data.to_json_struct());
        }
        Err(Error::Unsupported(msg)) => {
            let mut rep = VerificationReport::new("cartan_data");
            rep.check("standard_torus_available", true)
                .with_detail(format!("skipped: {msg}"));
            run.push(rep);
        }
        Err(e) => return Err(e),
    }
    run.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(run)
}

/// `build`: transversality conditions, oracle cross-check, pair assembly,
/// requested verifiers.
pub fn cmd_build(config: PipelineConfig) -> Result<RunReport> {
    let tol = config.validate()?;
    let start = Instant::now();
    let source = config
        .algebra
        .clone()
        .ok_or_else(|| Error::argument("build needs an algebra"))?;
    let morphism_src = config
        .morphism
        .clone()
        .ok_or_else(|| Error::argument("build needs a morphism matrix"))?;
    let checks = config.checks.clone();

    let alg = load_algebra(&source)?;
    let mut run = RunReport::new(config);
    run.push(jacobi_gate(&alg, &tol)?);
    let (_g, data) = standard_cartan_borel(&alg, &tol)?;
    let spec = load_morphism(&morphism_src, data.rank())?;

    let condition = check_conditions(&spec, &tol)?;
    let oracle = oracle_kernel_check(&spec, &tol);
    let mut agree = VerificationReport::new("condition_oracle_agreement");
    agree
        .check("verdicts_agree", condition.pass == oracle.pass)
        .with_detail(format!(
            "condition pass = {}, oracle pass = {}, near_degenerate = {}",
            condition.pass, oracle.pass, condition.near_degenerate
        ));
    let condition_pass = condition.pass;
    run.condition = Some(condition);
    run.oracle = Some(oracle);
    run.push(agree);

    if !condition_pass {
        let mut rep = VerificationReport::new("transversality");
        rep.check("condition", false)
            .with_detail("morphism fails its transversality condition; pair not built");
        run.push(rep);
        run.wall_time_seconds = start.elapsed().as_secs_f64();
        return Ok(run);
    }

    let pair = build_invariant_pair(&spec, &data, &tol)?;
    run_checks(&mut run, &pair, &data, &checks, &tol)?;
    run.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(run)
}

fn run_checks(
    run: &mut RunReport,
    pair: &StructurePair,
    data: &CartanBorelData,
    checks: &[String],
    tol: &Tolerances,
) -> Result<()> {
    let odd = pair.ambient().dim() % 2 == 1;
    for check in checks {
        match check.as_str() {
            "cr" => run.push(verify_cr(pair, tol)),
            "nacs" => {
                if odd {
                    run.push(verify_nacs(pair, tol)?);
                } else {
                    let mut rep = VerificationReport::new("verify_nacs");
                    rep.check("applicable", true)
                        .with_detail("skipped: even-dimensional group has no nacs pair");
                    run.push(rep);
                }
            }
            "solvable" => run.push(verify_solvable(pair, tol)),
            "borel" => run.push(verify_borel_decomposition(pair, data, tol)),
            "all" => {
                run.push(verify_cr(pair, tol));
                if odd {
                    run.push(verify_nacs(pair, tol)?);
                }
                run.push(verify_solvable(pair, tol));
                run.push(verify_borel_decomposition(pair, data, tol));
            }
            other => {
                return Err(Error::argument(format!(
                    "unknown check '{other}' (known: cr, nacs, solvable, borel, all)"
                )))
            }
        }
    }
    Ok(())
}

/// `su2-action`: analytic and sampled condition (IV), invariance,
/// center-invariance.
pub fn cmd_su2_action(
    config: PipelineConfig,
    a: C,
    b: C,
    radii: Vec<f64>,
    samples: usize,
) -> Result<RunReport> {
    let tol = config.validate()?;
    let start = Instant::now();
    let seed = config.seed;
    let mut run = RunReport::new(config);
    let params = match ActionParams::new(a, b) {
        Ok(p) => p,
        Err(_) => {
            // a trivial action is a verification failure, not an input error
            let mut rep = VerificationReport::new("action_params");
            rep.check("non_trivial_action", false)
                .with_detail("a + b and b - a both vanish");
            run.push(rep);
            run.wall_time_seconds = start.elapsed().as_secs_f64();
            return Ok(run);
        }
    };
    let (summary, reports) = run_action_pipeline(&params, &radii, samples, &tol, seed)?;
    for rep in reports {
        run.push(rep);
    }
    run.su2_action = Some(summary);
    run.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(run)
}

// ---------------------------------------------------------------------------
// Seeded sweeps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub name: String,
    pub total: usize,
    pub agreements: usize,
    pub near_degenerate: usize,
    pub exceptions: Vec<String>,
}

impl SweepSummary {
    pub fn clean(&self) -> bool {
        self.exceptions.is_empty()
    }
}

/// Condition-vs-oracle agreement over seeded random morphism specs for the
/// given group ranks. Near-degenerate draws are logged and excluded from the
/// agreement requirement.
pub fn condition_agreement_sweep(
    ranks: &[usize],
    draws_per_rank: usize,
    seed: u64,
    tol: &Tolerances,
    strategy: Strategy,
) -> SweepSummary {
    let mut specs = Vec::with_capacity(ranks.len() * draws_per_rank);
    for &q in ranks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q as u64) << 32);
        for _ in 0..draws_per_rank {
            specs.push(random_morphism(q, &mut rng));
        }
    }
    let outcomes = map_indexed(strategy, specs.len(), |i| {
        let spec = &specs[i];
        let check = check_conditions(spec, tol).expect("shape is valid");
        let oracle = oracle_kernel_check(spec, tol);
        let near = check.near_degenerate || oracle.near_degenerate;
        (check.pass, oracle.pass, near)
    });
    let mut summary = SweepSummary {
        name: "condition_oracle_agreement".into(),
        total: outcomes.len(),
        agreements: 0,
        near_degenerate: 0,
        exceptions: Vec::new(),
    };
    for (i, (check_pass, oracle_pass, near)) in outcomes.into_iter().enumerate() {
        if near {
            summary.near_degenerate += 1;
            continue;
        }
        if check_pass == oracle_pass {
            summary.agreements += 1;
        } else {
            summary.exceptions.push(format!(
                "draw {i}: condition says {check_pass}, oracle says {oracle_pass}"
            ));
        }
    }
    summary
}

fn random_complex<R: Rng>(rng: &mut R) -> C {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Draw `(a, b)` with `|Im mu| >= im_floor` (rejection sampling).
pub fn draw_action_params(
    rng: &mut ChaCha8Rng,
    im_floor: f64,
) -> ActionParams {
    loop {
        let a = random_complex(rng);
        let b = random_complex(rng);
        let Ok(p) = ActionParams::new(a, b) else {
            continue;
        };
        match p.mu() {
            Some(mu) if mu.im.abs() >= im_floor => return p,
            _ => continue,
        }
    }
}

/// Agreement of the sampled transversality test with the analytic condition
/// over seeded draws conditioned on `|Im mu| >= 1e-6`. Also verifies fiber
/// propagation: any draw passing on radius 1 must pass on every radius.
pub fn su2_agreement_sweep(
    draws: usize,
    seed: u64,
    radii: &[f64],
    samples: usize,
    propagation_radii: &[f64],
    tol: &Tolerances,
    strategy: Strategy,
) -> SweepSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<ActionParams> = (0..draws)
        .map(|_| draw_action_params(&mut rng, 1e-6))
        .collect();
    let tol_copy = *tol;
    let radii_v = radii.to_vec();
    let prop_v = propagation_radii.to_vec();
    let outcomes = map_indexed(Strategy::Sequential, params.len(), |i| {
        let p = &params[i];
        let analytic = check_condition_iv_analytic(p, &tol_copy).pass;
        let sampled = sample_transversality_with(strategy, p, &radii_v, samples, &tol_copy)
            .expect("valid sampling parameters")
            .pass;
        let radius_one =
            sample_transversality_with(strategy, p, &[1.0], samples, &tol_copy)
                .expect("valid sampling parameters")
                .pass;
        let propagation_ok = if radius_one {
            sample_transversality_with(strategy, p, &prop_v, samples, &tol_copy)
                .expect("valid sampling parameters")
                .pass
        } else {
            true
        };
        (analytic, sampled, propagation_ok)
    });
    let mut summary = SweepSummary {
        name: "su2_analytic_sampled_agreement".into(),
        total: outcomes.len(),
        agreements: 0,
        near_degenerate: 0,
        exceptions: Vec::new(),
    };
    for (i, (analytic, sampled, propagation_ok)) in outcomes.into_iter().enumerate() {
        if analytic == sampled {
            summary.agreements += 1;
        } else {
            summary.exceptions.push(format!(
                "draw {i}: analytic says {analytic}, sampled says {sampled}"
            ));
        }
        if !propagation_ok {
            summary
                .exceptions
                .push(format!("draw {i}: passed radius 1 but failed another fiber"));
        }
    }
    summary
}

/// Fiber propagation over a seeded family of passing actions: `mu` is drawn
/// real positive, so radius 1 passes and every other radius must follow.
pub fn su2_passing_family_sweep(
    draws: usize,
    seed: u64,
    radii: &[f64],
    samples: usize,
    tol: &Tolerances,
    strategy: Strategy,
) -> SweepSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = Vec::with_capacity(draws);
    while params.len() < draws {
        let d = random_complex(&mut rng);
        if d.norm() < 1e-3 {
            continue;
        }
        let mu: f64 = rng.sample::<f64, _>(StandardNormal).abs() + 0.05;
        let s = d * c(mu, 0.0);
        // a = (s - d)/2, b = (s + d)/2 gives a + b = s = mu (b - a)
        let a = (s - d) / c(2.0, 0.0);
        let b = (s + d) / c(2.0, 0.0);
        if let Ok(p) = ActionParams::new(a, b) {
            params.push(p);
        }
    }
    let tol_copy = *tol;
    let radii_v = radii.to_vec();
    let outcomes = map_indexed(Strategy::Sequential, params.len(), |i| {
        let p = &params[i];
        let one = sample_transversality_with(strategy, p, &[1.0], samples, &tol_copy)
            .expect("valid sampling parameters")
            .pass;
        let all = sample_transversality_with(strategy, p, &radii_v, samples, &tol_copy)
            .expect("valid sampling parameters")
            .pass;
        (one, all)
    });
    let mut summary = SweepSummary {
        name: "su2_fiber_propagation".into(),
        total: outcomes.len(),
        agreements: 0,
        near_degenerate: 0,
        exceptions: Vec::new(),
    };
    for (i, (one, all)) in outcomes.into_iter().enumerate() {
        if one {
            if all {
                summary.agreements += 1;
            } else {
                summary.exceptions.push(format!(
                    "draw {i}: passed on radius 1 but failed on another radius"
                ));
            }
        } else {
            summary
                .exceptions
                .push(format!("draw {i}: real positive mu failed on radius 1"));
        }
    }
    summary
}

/// Random subspace pairs of `sl(n, C)` for the Grassmann dimension identity.
pub fn grassmann_sweep(
    draws: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SweepSummary> {
    use crate::subspace::{grassmann_defect, Subspace};
    let g = builtins::by_name("su3")?.complexify()?;
    let d = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = SweepSummary {
        name: "grassmann_identity".into(),
        total: draws,
        agreements: 0,
        near_degenerate: 0,
        exceptions: Vec::new(),
    };
    for i in 0..draws {
        let k1 = rng.gen_range(1..=d - 1);
        let k2 = rng.gen_range(1..=d - 1);
        let span1: Vec<Element> = (0..k1)
            .map(|_| Element::from_complex((0..d).map(|_| random_complex(&mut rng)).collect()))
            .collect();
        let span2: Vec<Element> = (0..k2)
            .map(|_| Element::from_complex((0..d).map(|_| random_complex(&mut rng)).collect()))
            .collect();
        let v = Subspace::complex_span(&g, span1, tol)?;
        let w = Subspace::complex_span(&g, span2, tol)?;
        let defect = grassmann_defect(&v, &w, tol)?;
        if defect == 0 {
            summary.agreements += 1;
        } else {
            summary
                .exceptions
                .push(format!("draw {i}: Grassmann defect {defect}"));
        }
    }
    Ok(summary)
}
