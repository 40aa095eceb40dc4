//! The SU(2)/SL(2,C) geometric model.
//!
//! `G/U` is identified with `C^2 \ {0}`; the compact group sits inside as the
//! unit sphere `S^3` and the fibers of the projection to `A` are the spheres
//! of radius `lambda`. A one-parameter two-sided action is encoded by
//! `(a, b)`: its orbits are `t -> (e^{(a+b)t} z, e^{(b-a)t} w)` with velocity
//! field `eta = (a+b) z d/dz + (b-a) w d/dw`. The transversality condition
//! holds exactly when `(a+b)/(b-a)` is real and positive; the structure is
//! left-invariant exactly when `a = 0`.

use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, cr, C};
use crate::par::{map_indexed, Strategy};
use crate::report::VerificationReport;
use crate::tol::Tolerances;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Parameters of the action `Lambda(t) = (e^{at}, e^{bt})`.
#[derive(Debug, Clone, Copy)]
pub struct ActionParams {
    pub a: C,
    pub b: C,
}

impl ActionParams {
    pub fn new(a: C, b: C) -> Result<Self> {
        if (a + b).norm() == 0.0 && (b - a).norm() == 0.0 {
            return Err(Error::argument(
                "trivial action: a + b and b - a both vanish",
            ));
        }
        Ok(ActionParams { a, b })
    }

    /// `a + b`, the `z`-coefficient of the velocity field.
    pub fn sum(&self) -> C {
        self.a + self.b
    }

    /// `b - a`, the `w`-coefficient of the velocity field.
    pub fn diff(&self) -> C {
        self.b - self.a
    }

    /// `mu = (a+b)/(b-a)` when defined.
    pub fn mu(&self) -> Option<C> {
        let d = self.diff();
        (d.norm() > 0.0).then(|| self.sum() / d)
    }

    /// Orbit map `phi(t, (z, w))` in closed form.
    pub fn orbit(&self, t: C, z: C, w: C) -> (C, C) {
        ((self.sum() * t).exp() * z, (self.diff() * t).exp() * w)
    }
}

/// A point of a fiber `K a`: `|z|^2 + |w|^2 = radius^2`.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    pub z: C,
    pub w: C,
    pub radius: f64,
}

impl SpherePoint {
    pub fn new(z: C, w: C) -> Result<Self> {
        let radius = (z.norm_sqr() + w.norm_sqr()).sqrt();
        if radius == 0.0 {
            return Err(Error::argument("the origin lies on no fiber"));
        }
        Ok(SpherePoint { z, w, radius })
    }

    pub fn checked(z: C, w: C, radius: f64, tol: &Tolerances) -> Result<Self> {
        let actual = (z.norm_sqr() + w.norm_sqr()).sqrt();
        if (actual - radius).abs() > tol.tight * radius.max(1.0) {
            return Err(Error::argument(format!(
                "point has norm {actual}, not the claimed radius {radius}"
            )));
        }
        Ok(SpherePoint { z, w, radius })
    }
}

/// An element of SL(2,C).
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2 {
    m: Matrix2<C>,
}

impl Sl2 {
    pub fn new(m: Matrix2<C>, tol: &Tolerances) -> Result<Self> {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if (det - cr(1.0)).norm() > tol.tight {
            return Err(Error::argument(format!(
                "matrix determinant {det} is not 1"
            )));
        }
        Ok(Sl2 { m })
    }

    pub fn identity() -> Self {
        Sl2 {
            m: Matrix2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2<C> {
        &self.m
    }

    pub fn mul(&self, other: &Sl2) -> Sl2 {
        Sl2 {
            m: self.m * other.m,
        }
    }

    pub fn apply(&self, z: C, w: C) -> (C, C) {
        let v = self.m * Vector2::new(z, w);
        (v[0], v[1])
    }

    /// Deviation from SU(2): `|m^H m - I|` plus the determinant defect.
    pub fn unitary_residual(&self) -> f64 {
        (self.m.adjoint() * self.m - Matrix2::identity()).norm()
    }

    pub fn is_diagonal_positive(&self, tol: &Tolerances) -> bool {
        self.m[(0, 1)].norm() <= tol.tight
            && self.m[(1, 0)].norm() <= tol.tight
            && self.m[(0, 0)].im.abs() <= tol.tight
            && self.m[(0, 0)].re > 0.0
            && self.m[(1, 1)].im.abs() <= tol.tight
            && self.m[(1, 1)].re > 0.0
    }

    pub fn is_upper_unipotent(&self, tol: &Tolerances) -> bool {
        (self.m[(0, 0)] - cr(1.0)).norm() <= tol.tight
            && (self.m[(1, 1)] - cr(1.0)).norm() <= tol.tight
            && self.m[(1, 0)].norm() <= tol.tight
    }
}

// ---------------------------------------------------------------------------
// Velocity field and the analytic condition (IV)
// ---------------------------------------------------------------------------

/// `eta = ((a+b) z, (b-a) w)`, the velocity of the real-time orbit flow.
pub fn eta_field(p: &ActionParams, pt: &SpherePoint) -> (C, C) {
    (p.sum() * pt.z, p.diff() * pt.w)
}

/// Analytic transversality: condition (IV) holds iff `b - a != 0` and
/// `mu = (a+b)/(b-a)` is real and strictly positive. The report also carries
/// the weaker one-dimensional-orbit diagnostic (no `mu` in R^-).
pub fn check_condition_iv_analytic(p: &ActionParams, tol: &Tolerances) -> VerificationReport {
    let mut report = VerificationReport::new("condition_iv_analytic");
    let scale = p.sum().norm().max(p.diff().norm());
    if p.diff().norm() <= tol.base * scale {
        report
            .check("locally_free_on_fiber", false)
            .with_detail("b - a = 0: the velocity field vanishes on every sphere");
        report.check("mu_real_positive", false).with_detail("mu undefined");
        return report;
    }
    let mu = p.mu().expect("diff is nonzero");
    let imag_ok = mu.im.abs() <= tol.base * mu.norm().max(1.0);
    let positive = mu.re > tol.base;
    report
        .check("mu_real_positive", imag_ok && positive)
        .with_value(mu.re)
        .with_detail(format!("mu = {} + {}i", mu.re, mu.im));
    // 1-dimensional orbit intersection fails only for mu in R^-
    let negative_mu = imag_ok && mu.re < -tol.base;
    report
        .check("one_dimensional_orbit_intersection", !negative_mu)
        .with_detail("fails exactly when mu is real and negative");
    report
}

// ---------------------------------------------------------------------------
// Quasi-uniform sphere grid
// ---------------------------------------------------------------------------

// 2D Kronecker sequence constants from the plastic number.
const ALPHA_1: f64 = 0.754_877_666_246_692_7;
const ALPHA_2: f64 = 0.569_840_290_998_053_2;

/// Deterministic quasi-uniform grid on the sphere of the given radius:
/// stratified Hopf angle (`sin^2 beta` uniform) with low-discrepancy phases.
pub fn sphere_grid(n: usize, radius: f64) -> Vec<SpherePoint> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let sin_b = t.sqrt();
            let cos_b = (1.0 - t).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (k as f64 * ALPHA_1).fract();
            let psi = 2.0 * std::f64::consts::PI * (k as f64 * ALPHA_2).fract();
            SpherePoint {
                z: C::from_polar(radius * cos_b, phi),
                w: C::from_polar(radius * sin_b, psi),
                radius,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Sampled transversality
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct SampleOutcome {
    /// `<eta, x>`: the complex radial pairing driving both (i) and (ii).
    radial: C,
    /// Hopf parameter `s = |w|^2 / rho^2` of the sample.
    s: f64,
    /// `|eta|^2 / (scale rho)^2`.
    eta_rel_sq: f64,
    transversal: bool,
    locally_free: bool,
}

/// Infimum of `|eta|^2` over the fiber, extrapolated from the samples.
///
/// For this action family `|eta|^2 / rho^2` is affine in `s`, so a
/// least-squares line through the sampled values recovers the endpoint
/// values at the poles `s = 0, 1` — where zeros hide between samples.
fn fiber_infimum(outcomes: &[SampleOutcome]) -> f64 {
    let n = outcomes.len() as f64;
    let (mut sum_s, mut sum_y, mut sum_ss, mut sum_sy) = (0.0, 0.0, 0.0, 0.0);
    for o in outcomes {
        sum_s += o.s;
        sum_y += o.eta_rel_sq;
        sum_ss += o.s * o.s;
        sum_sy += o.s * o.eta_rel_sq;
    }
    let denom = n * sum_ss - sum_s * sum_s;
    if denom.abs() < 1e-300 {
        return outcomes
            .iter()
            .map(|o| o.eta_rel_sq)
            .fold(f64::INFINITY, f64::min);
    }
    let beta = (n * sum_sy - sum_s * sum_y) / denom;
    let alpha = (sum_y - beta * sum_s) / n;
    (alpha.min(alpha + beta)).max(0.0)
}

/// Rank of the stacked tangent system `[Re eta, Im eta | T_x(sphere)]` by row
/// reduction; transversality at the sample means full rank 4.
fn stacked_rank(eta: (C, C), x: (C, C), tol: f64) -> usize {
    // realified columns: e1 = eta, e2 = i eta (normalized), plus the
    // projector I - n n^T onto the sphere tangent space (rank 3)
    let en = (eta.0.norm_sqr() + eta.1.norm_sqr()).sqrt();
    let (ez, ew) = (eta.0 / cr(en), eta.1 / cr(en));
    let e1 = [ez.re, ez.im, ew.re, ew.im];
    let e2 = [-ez.im, ez.re, -ew.im, ew.re];
    let norm = (x.0.norm_sqr() + x.1.norm_sqr()).sqrt();
    let nvec = [
        x.0.re / norm,
        x.0.im / norm,
        x.1.re / norm,
        x.1.im / norm,
    ];
    // rows of the 4 x 6 system
    let mut cols: Vec<[f64; 4]> = vec![e1, e2];
    for j in 0..4 {
        let mut col = [0.0; 4];
        for i in 0..4 {
            col[i] = ((i == j) as i32 as f64) - nvec[i] * nvec[j];
        }
        cols.push(col);
    }
    // row reduction on the transpose (6 rows of length 4)
    let mut rows: Vec<[f64; 4]> = cols;
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..4 {
        let pivot = (rank..rows.len())
            .max_by(|&p, &q| rows[p][col].abs().partial_cmp(&rows[q][col].abs()).unwrap())
            .unwrap();
        if rows[pivot][col].abs() <= tol * scale {
            continue;
        }
        rows.swap(rank, pivot);
        let head = rows[rank];
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / head[col];
            if f != 0.0 {
                for j in col..4 {
                    row[j] -= f * head[j];
                }
            }
        }
        rank += 1;
        if rank == 4 {
            break;
        }
    }
    rank
}

/// Best common phase for `Re(lambda c) = 0` over the sampled radial pairings,
/// with its relative residual: the singular-value ratio of the 2-column
/// system whose rows are the direction vectors `[Re c, -Im c] / |c|`.
///
/// The ratio is computed from a Gram-Schmidt triangularization so that tiny
/// residuals are not drowned by the squaring of normal equations: for an
/// upper-triangular `R`, `sigma_min = |det R| / sigma_max` involves no
/// cancellation.
fn common_phase(radials: &[C]) -> (C, f64) {
    // accumulate the two columns of the row-normalized system
    let mut col_x = Vec::with_capacity(radials.len());
    let mut col_y = Vec::with_capacity(radials.len());
    for v in radials {
        let n = v.norm();
        if n > 0.0 {
            col_x.push(v.re / n);
            col_y.push(-v.im / n);
        }
    }
    if col_x.is_empty() {
        return (cr(1.0), 0.0);
    }
    let r11 = col_x.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (r12, r22) = if r11 > 0.0 {
        let r12 = col_x
            .iter()
            .zip(&col_y)
            .map(|(x, y)| x * y)
            .sum::<f64>()
            / r11;
        let w_sq = col_x
            .iter()
            .zip(&col_y)
            .map(|(x, y)| {
                let w = y - x / r11 * r12;
                w * w
            })
            .sum::<f64>();
        (r12, w_sq.sqrt())
    } else {
        (0.0, col_y.iter().map(|y| y * y).sum::<f64>().sqrt())
    };
    // singular values of R = [[r11, r12], [0, r22]]
    let f = r11 * r11 + r12 * r12 + r22 * r22;
    let g = (r11 * r22).abs();
    let smax = ((f + (f * f - 4.0 * g * g).max(0.0).sqrt()) / 2.0).sqrt();
    let smin = if smax > 0.0 { g / smax } else { 0.0 };
    let residual = if smax > 0.0 { smin / smax } else { 0.0 };
    // right singular vector for smin from R^T R (direction only)
    let (a2, ab, b2) = (
        r11 * r11,
        r11 * r12,
        r12 * r12 + r22 * r22,
    );
    let target = smin * smin;
    let (vx, vy) = if ab.abs() > 1e-300 {
        (ab, target - a2)
    } else if a2 <= b2 {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let norm = (vx * vx + vy * vy).sqrt();
    let lambda = if norm > 0.0 {
        c(vx / norm, vy / norm)
    } else {
        cr(1.0)
    };
    (lambda, residual)
}

/// Detect a sign flip of the radial crossing orientation across the fiber:
/// the field is then tangent to the sphere somewhere between samples, which
/// breaks (i) even though no sample sits exactly at the tangency.
fn tangency_between_samples(radials: &[C]) -> bool {
    let dominant = radials
        .iter()
        .cloned()
        .max_by(|p, q| p.norm().partial_cmp(&q.norm()).unwrap());
    let u = match dominant {
        Some(u) if u.norm() > 0.0 => u / cr(u.norm()),
        _ => return false,
    };
    let mut pos = false;
    let mut neg = false;
    for v in radials {
        if v.norm() == 0.0 {
            continue;
        }
        let s = (v * u.conj()).re / v.norm();
        pos |= s > 0.5;
        neg |= s < -0.5;
    }
    pos && neg
}

/// Sampled transversality over the given fibers.
pub fn sample_transversality(
    p: &ActionParams,
    radii: &[f64],
    samples_per_sphere: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    sample_transversality_with(Strategy::Auto, p, radii, samples_per_sphere, tol)
}

pub fn sample_transversality_with(
    strategy: Strategy,
    p: &ActionParams,
    radii: &[f64],
    samples_per_sphere: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if samples_per_sphere < 100 {
        return Err(Error::precondition(
            "sampled transversality needs at least 100 points per sphere",
        ));
    }
    if radii.iter().any(|&r| r <= 0.0) {
        return Err(Error::argument("radii must be positive"));
    }
    let mut report = VerificationReport::new("condition_iv_sampled");
    let field_scale = p.sum().norm().max(p.diff().norm());
    let mut all_radials: Vec<C> = Vec::new();

    for &radius in radii {
        let grid = sphere_grid(samples_per_sphere, radius);
        let p_copy = *p;
        let outcomes: Vec<SampleOutcome> = map_indexed(strategy, grid.len(), |k| {
            let pt = &grid[k];
            let eta = eta_field(&p_copy, pt);
            let eta_norm_sq = eta.0.norm_sqr() + eta.1.norm_sqr();
            let rel = field_scale * radius;
            let locally_free = eta_norm_sq.sqrt() > tol.base * rel;
            let radial = eta.0 * pt.z.conj() + eta.1 * pt.w.conj();
            let transversal = locally_free
                && stacked_rank(eta, (pt.z, pt.w), tol.base) == 4;
            SampleOutcome {
                radial,
                s: pt.w.norm_sqr() / (radius * radius),
                eta_rel_sq: eta_norm_sq / (rel * rel),
                transversal,
                locally_free,
            }
        });

        let free_fail = outcomes.iter().position(|o| !o.locally_free);
        if let Some(k) = free_fail {
            report
                .check(format!("fiber_{radius}_locally_free"), false)
                .with_detail(format!(
                    "velocity field vanishes near sample {k}: ({:.6}, {:.6})",
                    grid[k].z, grid[k].w
                ));
            continue;
        }
        report.check(format!("fiber_{radius}_locally_free"), true);

        // zeros of the field hiding between samples: extrapolate |eta|^2 to
        // the fiber poles
        let infimum = fiber_infimum(&outcomes);
        let zero_floor = tol.cluster * tol.cluster;
        let inf_ok = infimum > zero_floor;
        let check = report.check(format!("fiber_{radius}_field_bounded_below"), inf_ok);
        check.with_value(infimum.sqrt());
        if !inf_ok {
            let k_min = (0..outcomes.len())
                .min_by(|&i, &j| {
                    outcomes[i]
                        .eta_rel_sq
                        .partial_cmp(&outcomes[j].eta_rel_sq)
                        .unwrap()
                })
                .unwrap();
            check.with_detail(format!(
                "field infimum extrapolates to ~0 near ({:.6}, {:.6})",
                grid[k_min].z, grid[k_min].w
            ));
            continue;
        }

        let rank_fail = outcomes.iter().position(|o| !o.transversal);
        let rank_ok = rank_fail.is_none();
        let check = report.check(format!("fiber_{radius}_transversal_rank"), rank_ok);
        if let Some(k) = rank_fail {
            check.with_detail(format!(
                "stacked tangent system drops rank at sample {k}: ({:.6}, {:.6})",
                grid[k].z, grid[k].w
            ));
        }

        let radials: Vec<C> = outcomes.iter().map(|o| o.radial).collect();
        let tangency = tangency_between_samples(&radials);
        report
            .check(format!("fiber_{radius}_no_tangency_between_samples"), !tangency)
            .with_detail(
                "the radial crossing orientation must not flip along the fiber",
            );

        let (lambda, residual) = common_phase(&radials);
        report
            .residual_check(format!("fiber_{radius}_common_lambda"), residual, tol.lambda);
        if let Some(last) = report.checks.last_mut() {
            last.detail = Some(format!(
                "per-fiber lambda = {:.6} + {:.6}i",
                lambda.re, lambda.im
            ));
        }
        all_radials.extend(radials);
    }

    if !all_radials.is_empty() {
        let (lambda, residual) = common_phase(&all_radials);
        report.residual_check("global_common_lambda", residual, tol.lambda);
        if let Some(last) = report.checks.last_mut() {
            last.detail = Some(format!(
                "global lambda = {:.6} + {:.6}i over {} samples",
                lambda.re,
                lambda.im,
                all_radials.len()
            ));
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Invariance
// ---------------------------------------------------------------------------

/// Haar-ish random SU(2) element from a normalized quaternion.
pub fn random_su2<R: Rng>(rng: &mut R) -> Sl2 {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-6 {
            continue;
        }
        let (a, b, cq, d) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        return Sl2 {
            m: Matrix2::new(c(a, b), c(cq, d), c(-cq, d), c(a, -b)),
        };
    }
}

/// Left-invariance of the induced structure. Analytically the structure is
/// invariant iff `a = 0`; the verdict is corroborated by testing
/// `k . F'_x = F'_{k . x}` on random group elements: `k eta(x)` must be
/// complex-parallel to `eta(k x)`.
pub fn check_invariance(p: &ActionParams, tol: &Tolerances, seed: u64) -> Result<VerificationReport> {
    let analytic = check_condition_iv_analytic(p, tol);
    if !analytic.pass {
        return Err(Error::precondition(
            "invariance is only defined once condition IV holds",
        ));
    }
    let mut report = VerificationReport::new("invariance");
    let invariant_analytic = p.a.norm() <= tol.base;
    report
        .check("analytic_verdict", true)
        .with_value(p.a.norm())
        .with_detail(if invariant_analytic {
            "invariant: a = 0"
        } else {
            "non-invariant: a != 0"
        });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sphere_grid(16, 1.0);
    let mut worst = 0.0f64;
    let mut witness = String::new();
    for trial in 0..50 {
        let k = random_su2(&mut rng);
        let pt = &points[trial % points.len()];
        let eta_x = eta_field(p, pt);
        let moved = k.apply(eta_x.0, eta_x.1);
        let (kz, kw) = k.apply(pt.z, pt.w);
        let target = eta_field(
            p,
            &SpherePoint {
                z: kz,
                w: kw,
                radius: pt.radius,
            },
        );
        let t_norm = (target.0.norm_sqr() + target.1.norm_sqr()).sqrt();
        let m_norm = (moved.0.norm_sqr() + moved.1.norm_sqr()).sqrt();
        if t_norm == 0.0 || m_norm == 0.0 {
            continue;
        }
        // residual of moved against the complex line through target
        let inner = (moved.0 * target.0.conj() + moved.1 * target.1.conj()) / cr(t_norm * t_norm);
        let r0 = moved.0 - inner * target.0;
        let r1 = moved.1 - inner * target.1;
        let residual = (r0.norm_sqr() + r1.norm_sqr()).sqrt() / m_norm;
        if residual > worst {
            worst = residual;
            witness = format!(
                "k = {:?}, x = ({:.4}, {:.4}), parallelism residual {residual:.3e}",
                k.m, pt.z, pt.w
            );
        }
    }
    let invariant_numeric = worst <= tol.lambda;
    report
        .check("numeric_orbit_invariance", true)
        .with_residual(worst)
        .with_detail(witness);
    report
        .check("analytic_numeric_agreement", invariant_analytic == invariant_numeric)
        .with_detail(format!(
            "analytic says {}, numeric sweep says {}",
            invariant_analytic, invariant_numeric
        ));
    Ok(report)
}

/// Verdict helper used by the pipeline: `Some(true/false)` once IV holds.
pub fn invariance_verdict(p: &ActionParams, tol: &Tolerances) -> Option<bool> {
    check_condition_iv_analytic(p, tol)
        .pass
        .then(|| p.a.norm() <= tol.base)
}

// ---------------------------------------------------------------------------
// Center invariance
// ---------------------------------------------------------------------------

/// The central involution `nu(z, w) = (-z, -w)` commutes with the whole
/// action family: orbits map onto orbits exactly.
pub fn center_invariance(p: &ActionParams, tol: &Tolerances) -> VerificationReport {
    let mut report = VerificationReport::new("center_invariance");
    let grid = sphere_grid(100, 1.0);
    // nu is an involution
    let mut worst_inv = 0.0f64;
    for pt in &grid {
        let (z2, w2) = (-(-pt.z), -(-pt.w));
        worst_inv = worst_inv.max((z2 - pt.z).norm() + (w2 - pt.w).norm());
    }
    report.residual_check("involution", worst_inv, tol.tight);

    // nu(phi(t, x)) = phi(t, nu(x)) on sampled orbit times
    let times = [
        cr(0.3),
        c(0.0, 0.7),
        c(-0.4, 0.2),
        c(0.1, -0.9),
    ];
    let mut worst = 0.0f64;
    for pt in grid.iter().take(25) {
        for t in times {
            let (oz, ow) = p.orbit(t, pt.z, pt.w);
            let (nz, nw) = p.orbit(t, -pt.z, -pt.w);
            let scale = (oz.norm_sqr() + ow.norm_sqr()).sqrt().max(1.0);
            worst = worst.max(((-oz - nz).norm() + (-ow - nw).norm()) / scale);
        }
    }
    report.residual_check("orbits_commute_with_nu", worst, tol.base);
    report
}

// ---------------------------------------------------------------------------
// Iwasawa decomposition and the fibration over A
// ---------------------------------------------------------------------------

/// `g = k a u` with `k` in SU(2), `a = diag(lambda, 1/lambda)` with
/// `lambda > 0`, and `u` upper unipotent. Computed from the first column:
/// `lambda` is its norm and `k`'s first column its normalization.
pub fn iwasawa_decompose(g: &Sl2) -> (Sl2, Sl2, Sl2) {
    let m = g.matrix();
    let col_norm = (m[(0, 0)].norm_sqr() + m[(1, 0)].norm_sqr()).sqrt();
    let k = Matrix2::new(
        m[(0, 0)] / cr(col_norm),
        -(m[(1, 0)] / cr(col_norm)).conj(),
        m[(1, 0)] / cr(col_norm),
        (m[(0, 0)] / cr(col_norm)).conj(),
    );
    // k^H g is upper triangular with (0,0) entry col_norm and determinant 1
    let t = k.adjoint() * m;
    let a = Matrix2::new(cr(col_norm), cr(0.0), cr(0.0), cr(1.0 / col_norm));
    let u = Matrix2::new(cr(1.0), t[(0, 1)] / cr(col_norm), cr(0.0), cr(1.0));
    (Sl2 { m: k }, Sl2 { m: a }, Sl2 { m: u })
}

/// The fibration `G/U -> A`: radius of the fiber through `(z, w)`.
pub fn project_to_a(z: C, w: C) -> Result<f64> {
    let r = (z.norm_sqr() + w.norm_sqr()).sqrt();
    if r == 0.0 {
        return Err(Error::argument("the origin lies on no fiber"));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Pipeline report
// ---------------------------------------------------------------------------

/// CLI-facing summary of the full SU(2) action analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Su2ActionReport {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub mu: Option<(f64, f64)>,
    pub analytic_pass: bool,
    pub sampled_pass: bool,
    pub invariant: Option<bool>,
    pub witnesses: Vec<String>,
}

pub fn run_action_pipeline(
    p: &ActionParams,
    radii: &[f64],
    samples_per_sphere: usize,
    tol: &Tolerances,
    seed: u64,
) -> Result<(Su2ActionReport, Vec<VerificationReport>)> {
    let analytic = check_condition_iv_analytic(p, tol);
    let sampled = sample_transversality(p, radii, samples_per_sphere, tol)?;
    let center = center_invariance(p, tol);
    let mut reports = vec![analytic.clone(), sampled.clone(), center];
    let invariant = invariance_verdict(p, tol);
    if analytic.pass {
        reports.push(check_invariance(p, tol, seed)?);
    }
    let witnesses: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failed_checks()
                .map(|c| {
                    format!(
                        "{}.{}: {}",
                        r.name,
                        c.name,
                        c.detail.clone().unwrap_or_else(|| "failed".into())
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let report = Su2ActionReport {
        a: (p.a.re, p.a.im),
        b: (p.b.re, p.b.im),
        mu: p.mu().map(|m| (m.re, m.im)),
        analytic_pass: analytic.pass,
        sampled_pass: sampled.pass,
        invariant,
        witnesses,
    };
    Ok((report, reports))
}
