//! Property tests for the transversality conditions: oracle agreement,
//! reparametrization invariance, scaling invariance, and the injectivity
//! consequence of condition (II).

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use liecr::linalg::rank_c;
use liecr::tol::Tolerances;
use liecr::transversality::{
    check_conditions, oracle_kernel_check, parameter_count_for_rank, MorphismSpec,
};

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn morphism(q: usize) -> impl Strategy<Value = MorphismSpec> {
    let l = parameter_count_for_rank(q);
    proptest::collection::vec(complex_entry(), q * l)
        .prop_map(move |entries| MorphismSpec::from_rows(q, l, &entries).unwrap())
}

proptest! {
    #[test]
    fn oracle_agrees_with_rank_checks(q in 1usize..=3, seed_entries in proptest::collection::vec(complex_entry(), 12)) {
        let tol = Tolerances::default();
        let l = parameter_count_for_rank(q);
        let entries = &seed_entries[..q * l];
        let spec = MorphismSpec::from_rows(q, l, entries).unwrap();
        let check = check_conditions(&spec, &tol).unwrap();
        let oracle = oracle_kernel_check(&spec, &tol);
        if !check.near_degenerate && !oracle.near_degenerate {
            prop_assert_eq!(check.pass, oracle.pass);
        }
    }

    #[test]
    fn real_scaling_never_changes_the_verdict(q in 1usize..=3, scale in 0.1f64..10.0, spec in morphism(3)) {
        // reuse the rank-3 entry pool for any q by truncation
        let tol = Tolerances::default();
        let l = parameter_count_for_rank(q);
        let m = spec.matrix();
        let entries: Vec<Complex64> = (0..q * l).map(|i| m[(i / l, i % l)]).collect();
        let base = MorphismSpec::from_rows(q, l, &entries).unwrap();
        let scaled_entries: Vec<Complex64> = entries.iter().map(|z| z * scale).collect();
        let scaled = MorphismSpec::from_rows(q, l, &scaled_entries).unwrap();
        let before = check_conditions(&base, &tol).unwrap();
        let after = check_conditions(&scaled, &tol).unwrap();
        if !before.near_degenerate && !after.near_degenerate {
            prop_assert_eq!(before.pass, after.pass);
        }
    }

    #[test]
    fn even_case_right_factor_invariance(spec in morphism(2), factor in complex_entry(), shift in complex_entry()) {
        // any invertible right factor reparametrizes C^l without changing (I);
        // for l = 1 that is multiplication by a nonzero scalar
        let tol = Tolerances::default();
        prop_assume!(factor.norm() > 0.2);
        let _ = shift;
        let m = spec.matrix() * DMatrix::from_element(1, 1, factor);
        let reparam = MorphismSpec::new(m).unwrap();
        let before = check_conditions(&spec, &tol).unwrap();
        let after = check_conditions(&reparam, &tol).unwrap();
        if !before.near_degenerate && !after.near_degenerate {
            prop_assert_eq!(before.pass, after.pass);
        }
    }

    #[test]
    fn odd_case_flag_preserving_right_factor_invariance(spec in morphism(3), s in complex_entry(), d in complex_entry(), off in complex_entry()) {
        // invertible reparametrizations of C^l preserving the distinguished
        // subgroup {0} x C^r (first row proportional to the z_1 functional):
        // [[s, 0], [off, d]] with s, d != 0
        let tol = Tolerances::default();
        prop_assume!(d.norm() > 0.2 && s.norm() > 0.2);
        let zero = Complex64::new(0.0, 0.0);
        let factor = DMatrix::from_row_slice(2, 2, &[s, zero, off, d]);
        let reparam = MorphismSpec::new(spec.matrix() * factor).unwrap();
        let before = check_conditions(&spec, &tol).unwrap();
        let after = check_conditions(&reparam, &tol).unwrap();
        if !before.near_degenerate && !after.near_degenerate {
            prop_assert_eq!(before.pass, after.pass);
        }
    }

    #[test]
    fn condition_ii_implies_restricted_injectivity(spec in morphism(3)) {
        // passing (II) forces the linear part to be injective on {0} x C^r
        let tol = Tolerances::default();
        let report = check_conditions(&spec, &tol).unwrap();
        if report.pass {
            let m = spec.matrix();
            let restricted = m.columns(1, m.ncols() - 1).into_owned();
            prop_assert_eq!(rank_c(&restricted, tol.base), m.ncols() - 1);
        }
    }
}
