//! Seeded property sweeps for the SU(2)/SL(2,C) geometric model.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use liecr::par::Strategy;
use liecr::pipeline::{su2_agreement_sweep, su2_passing_family_sweep};
use liecr::su2::{
    check_invariance, eta_field, invariance_verdict, iwasawa_decompose, project_to_a, random_su2,
    run_action_pipeline, sample_transversality, sphere_grid, ActionParams, Sl2,
};
use liecr::tol::Tolerances;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn sampled_and_analytic_verdicts_agree_on_random_draws() {
    let tol = Tolerances::default();
    let summary = su2_agreement_sweep(
        60,
        7,
        &[0.5, 1.0, 2.0],
        256,
        &[0.25, 0.5, 1.0, 2.0, 4.0],
        &tol,
        Strategy::Auto,
    );
    assert_eq!(summary.agreements, summary.total, "{:?}", summary.exceptions);
    assert!(summary.clean(), "{:?}", summary.exceptions);
}

#[test]
fn passing_family_propagates_across_fibers() {
    let tol = Tolerances::default();
    let summary = su2_passing_family_sweep(
        20,
        11,
        &[0.25, 0.5, 1.0, 2.0, 4.0],
        256,
        &tol,
        Strategy::Auto,
    );
    assert_eq!(summary.agreements, summary.total, "{:?}", summary.exceptions);
}

#[test]
fn invariance_verdicts_follow_the_a_parameter() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // a = 0 with any valid b: invariant
    for _ in 0..10 {
        let b = loop {
            let b = c(
                rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
                rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
            );
            if b.norm() > 0.1 {
                break b;
            }
        };
        let p = ActionParams::new(cr(0.0), b).unwrap();
        assert_eq!(invariance_verdict(&p, &tol), Some(true));
        let report = check_invariance(&p, &tol, 5).unwrap();
        assert!(report.pass);
    }
    // |a| >= 0.1 with mu = 3 (b = 2a): passing and non-invariant
    for _ in 0..10 {
        let a = loop {
            let a = c(
                rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
                rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
            );
            if a.norm() >= 0.1 {
                break a;
            }
        };
        let p = ActionParams::new(a, a * cr(2.0)).unwrap();
        assert_eq!(invariance_verdict(&p, &tol), Some(false), "a = {a}");
        let report = check_invariance(&p, &tol, 5).unwrap();
        assert!(report.pass, "verdicts must agree for a = {a}");
        let numeric = report
            .checks
            .iter()
            .find(|ch| ch.name == "numeric_orbit_invariance")
            .unwrap();
        assert!(numeric.residual.unwrap() > 1e-3, "non-invariance witness");
    }
}

#[test]
fn iwasawa_round_trip_with_memberships() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut draw = || -> Complex64 {
        c(
            rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
            rand::Rng::sample(&mut rng, rand_distr::StandardNormal),
        )
    };
    for _ in 0..200 {
        let g = loop {
            let m = nalgebra::Matrix2::new(draw(), draw(), draw(), draw());
            let det: Complex64 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            if det.norm() > 1e-3 {
                break Sl2::new(m / det.sqrt(), &tol).unwrap();
            }
        };
        let (k, a, u) = iwasawa_decompose(&g);
        assert!(k.unitary_residual() <= tol.tight);
        assert!(a.is_diagonal_positive(&tol));
        assert!(u.is_upper_unipotent(&tol));
        let recon = k.mul(&a).mul(&u);
        let residual = (recon.matrix() - g.matrix()).norm() / g.matrix().norm();
        assert!(residual <= tol.tight, "reconstruction residual {residual:.3e}");
        // the A-projection of the first column recovers a's entry
        let col = (g.matrix()[(0, 0)], g.matrix()[(1, 0)]);
        let lambda = project_to_a(col.0, col.1).unwrap();
        assert!((lambda - a.matrix()[(0, 0)].re).abs() <= 1e-10 * lambda);
    }
}

#[test]
fn random_su2_lies_in_the_group() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let k = random_su2(&mut rng);
        assert!(k.unitary_residual() <= tol.tight);
    }
}

#[test]
fn hopf_action_passes_on_every_fiber() {
    let tol = Tolerances::default();
    let p = ActionParams::new(cr(0.0), cr(1.0)).unwrap();
    let report = sample_transversality(&p, &[0.25, 0.5, 1.0, 2.0, 4.0], 256, &tol).unwrap();
    assert!(report.pass);
}

#[test]
fn action_pipeline_summary_shape() {
    let tol = Tolerances::default();
    let p = ActionParams::new(cr(1.0 / 3.0), cr(1.0)).unwrap();
    let (summary, _reports) = run_action_pipeline(&p, &[0.5, 1.0, 2.0], 256, &tol, 0).unwrap();
    assert!(summary.analytic_pass);
    assert!(summary.sampled_pass);
    assert_eq!(summary.invariant, Some(false));
    let mu = summary.mu.unwrap();
    assert!((mu.0 - 2.0).abs() < 1e-12 && mu.1.abs() < 1e-12);
    let json = serde_json::to_string(&summary).unwrap();
    assert!(json.starts_with("{\"a\":"));
}

#[test]
fn grid_respects_the_fibration() {
    // every grid point of radius rho projects to rho
    for &rho in &[0.25, 1.0, 3.0] {
        for pt in sphere_grid(128, rho) {
            assert!((project_to_a(pt.z, pt.w).unwrap() - rho).abs() < 1e-12);
        }
    }
    // eta scales linearly along the fiber direction
    let p = ActionParams::new(cr(0.2), c(0.7, 0.3)).unwrap();
    let pt1 = sphere_grid(16, 1.0)[5];
    let pt2 = liecr::su2::SpherePoint::new(pt1.z * cr(2.0), pt1.w * cr(2.0)).unwrap();
    let e1 = eta_field(&p, &pt1);
    let e2 = eta_field(&p, &pt2);
    assert!((e2.0 - e1.0 * cr(2.0)).norm() < 1e-14);
    assert!((e2.1 - e1.1 * cr(2.0)).norm() < 1e-14);
}
