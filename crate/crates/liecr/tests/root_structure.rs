//! Structural invariants of the Cartan/Borel pipeline on the built-in
//! algebras.

use liecr::builtins;
use liecr::root::{standard_cartan_borel, with_opposite_borel};
use liecr::subspace::Subspace;
use liecr::tol::Tolerances;

#[test]
fn torus_is_borel_meet_compact_form() {
    let tol = Tolerances::default();
    for name in ["su2", "su3", "su4"] {
        let alg = builtins::by_name(name).unwrap();
        let (g, data) = standard_cartan_borel(&alg, &tol).unwrap();
        let k = Subspace::real_form(&g, &tol).unwrap();
        let meet = data.borel_b().unwrap().intersect(&k, &tol).unwrap();
        assert!(
            meet.equals(data.torus_t(), &tol),
            "{name}: t != b /\\ k"
        );
        // and the meet is maximal Abelian: it has the rank of the group
        assert_eq!(meet.dim_real(), data.rank(), "{name}: wrong torus rank");
    }
}

#[test]
fn opposite_borel_meets_borel_in_cartan() {
    let tol = Tolerances::default();
    for name in ["su2", "su3", "su4"] {
        let alg = builtins::by_name(name).unwrap();
        let (_g, data) = standard_cartan_borel(&alg, &tol).unwrap();
        let opposite = with_opposite_borel(&data, &tol).unwrap();
        let meet = data
            .borel_b()
            .unwrap()
            .intersect(opposite.borel_b().unwrap(), &tol)
            .unwrap();
        assert!(meet.equals(data.cartan_r(), &tol), "{name}: b /\\ b' != r");
    }
}

#[test]
fn root_counts_and_space_dimensions() {
    let tol = Tolerances::default();
    let cases = [("su2", 2usize), ("su3", 6), ("su4", 12)];
    for (name, count) in cases {
        let alg = builtins::by_name(name).unwrap();
        let (_g, data) = standard_cartan_borel(&alg, &tol).unwrap();
        assert_eq!(data.roots().len(), count, "{name}: root count");
        for space in data.root_spaces() {
            assert_eq!(space.dim_complex(), Some(1), "{name}: root space dim");
        }
        // roots come in +/- pairs and none is zero
        for root in data.roots() {
            assert!(
                root.torus_values.iter().any(|v| v.norm() > tol.cluster),
                "{name}: zero root listed"
            );
            let neg = root.negated();
            assert!(
                data.find_root(&neg, tol.cluster).is_some(),
                "{name}: unpaired root"
            );
        }
    }
}

#[test]
fn eigen_residuals_within_bound() {
    let tol = Tolerances::default();
    let alg = builtins::by_name("su3").unwrap();
    let (g, data) = standard_cartan_borel(&alg, &tol).unwrap();
    let r_basis = data.cartan_r().basis_elements();
    let mut worst = 0.0f64;
    for (root, space) in data.roots().iter().zip(data.root_spaces()) {
        for x in space.basis_elements() {
            for (h, &alpha) in r_basis.iter().zip(&root.values) {
                let resid = g.bracket(h, &x).unwrap().sub(&x.scale(alpha)).norm() / x.norm();
                worst = worst.max(resid);
            }
        }
    }
    assert!(worst <= tol.eigen, "worst eigen residual {worst:.3e}");
}

#[test]
fn borel_data_serializes() {
    let tol = Tolerances::default();
    let alg = builtins::by_name("su3").unwrap();
    let (_g, data) = standard_cartan_borel(&alg, &tol).unwrap();
    let json = serde_json::to_string(&data.to_json_struct()).unwrap();
    assert!(json.contains("\"rank\":2"));
    assert!(json.contains("\"roots\""));
}

#[test]
fn nilpotent_u_is_derived_algebra_of_borel() {
    let tol = Tolerances::default();
    for name in ["su2", "su3", "su4"] {
        let alg = builtins::by_name(name).unwrap();
        let (_g, data) = standard_cartan_borel(&alg, &tol).unwrap();
        let b = data.borel_b().unwrap();
        let derived = b.bracket_span(b, &tol).unwrap();
        assert!(
            derived.equals(data.nilpotent_u().unwrap(), &tol),
            "{name}: [b, b] != u"
        );
        let series = b.derived_series(&tol).unwrap();
        assert!(series.last().unwrap().is_zero(), "{name}: b not solvable");
    }
}
