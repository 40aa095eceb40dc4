//! Seeded property sweeps for the algebra layer: bilinearity and
//! antisymmetry of the bracket, complexification behavior, derived-series
//! monotonicity, and real-form recovery.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use liecr::algebra::{Element, Field, LieAlgebra};
use liecr::builtins;
use liecr::subspace::Subspace;
use liecr::tol::Tolerances;

fn random_element(rng: &mut ChaCha8Rng, dim: usize) -> Element {
    Element::from_complex(
        (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect(),
    )
}

#[test]
fn bracket_is_bilinear_and_antisymmetric() {
    let g = builtins::by_name("su3").unwrap().complexify().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dim = g.dim();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = random_element(&mut rng, dim);
        let y = random_element(&mut rng, dim);
        let z = random_element(&mut rng, dim);
        let a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let b = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        // antisymmetry
        let anti = g
            .bracket(&x, &y)
            .unwrap()
            .add(&g.bracket(&y, &x).unwrap())
            .norm();
        // bilinearity in the first slot
        let lhs = g.bracket(&x.scale(a).add(&y.scale(b)), &z).unwrap();
        let rhs = g
            .bracket(&x, &z)
            .unwrap()
            .scale(a)
            .add(&g.bracket(&y, &z).unwrap().scale(b));
        let scale = lhs.norm().max(1.0);
        worst = worst.max(anti).max(lhs.sub(&rhs).norm() / scale);
    }
    assert!(worst <= 1e-12, "worst residual {worst:.3e}");
}

#[test]
fn complexify_preserves_jacobi_outcome() {
    let tol = Tolerances::default();
    // passing algebra stays passing
    let su3 = builtins::by_name("su3").unwrap();
    assert!(su3.check_jacobi(&tol).pass);
    assert!(su3.complexify().unwrap().check_jacobi(&tol).pass);

    // failing algebra stays failing
    let broken = LieAlgebra::from_numeric_table(
        "broken",
        Field::Real,
        vec!["e1".into(), "e2".into(), "e3".into()],
        vec![
            (0, 1, vec![(0, Complex64::new(0.1, 0.0)), (2, Complex64::new(2.0, 0.0))]),
            (1, 2, vec![(0, Complex64::new(2.0, 0.0))]),
            (2, 0, vec![(1, Complex64::new(2.0, 0.0))]),
        ],
    )
    .unwrap();
    assert!(!broken.check_jacobi(&tol).pass);
    assert!(!broken.complexify().unwrap().check_jacobi(&tol).pass);
}

#[test]
fn derived_series_is_monotone_and_short() {
    let tol = Tolerances::default();
    let g = builtins::by_name("su3").unwrap().complexify().unwrap();
    let (_g, data) = liecr::root::standard_cartan_borel(&builtins::by_name("su3").unwrap(), &tol)
        .unwrap();
    let b = data.borel_b().unwrap();
    let series = b.derived_series(&tol).unwrap();
    assert!(series.len() <= g.dim() + 1);
    for pair in series.windows(2) {
        assert!(pair[1].dim_real() < pair[0].dim_real());
    }
}

#[test]
fn real_form_fixed_set_recovers_the_compact_algebra() {
    let tol = Tolerances::default();
    for name in ["su2", "su3", "su4"] {
        let alg = builtins::by_name(name).unwrap();
        let g = alg.complexify().unwrap();
        let k = Subspace::real_form(&g, &tol).unwrap();
        assert_eq!(k.dim_real(), alg.dim(), "{name}: dimension");
        for i in 0..alg.dim() {
            assert!(
                k.contains_element(&g.basis_element(i), &tol),
                "{name}: basis vector {i} lies in the fixed set"
            );
        }
    }
}

#[test]
fn intersect_commutes_and_idempotent_on_random_spans() {
    let tol = Tolerances::default();
    let g = builtins::su2().complexify().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let v = Subspace::complex_span(
            &g,
            vec![random_element(&mut rng, 3), random_element(&mut rng, 3)],
            &tol,
        )
        .unwrap();
        let w = Subspace::complex_span(&g, vec![random_element(&mut rng, 3)], &tol).unwrap();
        let vw = v.intersect(&w, &tol).unwrap();
        let wv = w.intersect(&v, &tol).unwrap();
        assert!(vw.equals(&wv, &tol));
        assert!(v.intersect(&v, &tol).unwrap().equals(&v, &tol));
    }
}
