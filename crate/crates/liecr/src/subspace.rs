//! Linear subspaces of a Lie algebra.
//!
//! A subspace is stored with the spanning set it was built from plus a cached
//! orthonormal internal basis. Complex-linear subspaces keep a complex basis
//! and a realified one; real-linear subspaces (e.g. the compact form `k`
//! inside `g`, or intersections with it) live in realified coordinates, where
//! `C^d` is treated as `R^(2d)` with the real parts stacked over the
//! imaginary parts.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Element, Field, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{
    nullspace_onb_c, nullspace_onb_r, projection_residual_c, projection_residual_r,
    range_onb_c, range_onb_r, realify_basis, realify_vec, unrealify_vec, CMat, RMat,
};
use crate::report::VerificationReport;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanField {
    Real,
    Complex,
}

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: Arc<LieAlgebra>,
    field: SpanField,
    span: Vec<Element>,
    /// Complex orthonormal basis, columns; present iff `field == Complex`.
    basis_c: Option<CMat>,
    /// Realified orthonormal basis, columns (2d x dim_real).
    basis_r: RMat,
}

impl Subspace {
    // -- constructors -------------------------------------------------------

    pub fn complex_span(
        ambient: &Arc<LieAlgebra>,
        span: Vec<Element>,
        tol: &Tolerances,
    ) -> Result<Subspace> {
        if ambient.field() != Field::Complex {
            return Err(Error::argument(
                "complex-linear subspaces require a complex ambient algebra",
            ));
        }
        let d = ambient.dim();
        for v in &span {
            if v.dim() != d {
                return Err(Error::argument("span vector dimension mismatch"));
            }
        }
        let mut m = CMat::zeros(d, span.len());
        for (j, v) in span.iter().enumerate() {
            m.set_column(j, v.coords());
        }
        let basis_c = range_onb_c(&m, tol.base);
        let sub = Subspace {
            ambient: ambient.clone(),
            field: SpanField::Complex,
            basis_r: realify_basis(&basis_c),
            basis_c: Some(basis_c),
            span,
        };
        sub.validate_span(tol)?;
        Ok(sub)
    }

    pub fn real_span(
        ambient: &Arc<LieAlgebra>,
        span: Vec<Element>,
        tol: &Tolerances,
    ) -> Result<Subspace> {
        let d = ambient.dim();
        for v in &span {
            if v.dim() != d {
                return Err(Error::argument("span vector dimension mismatch"));
            }
        }
        let mut m = RMat::zeros(2 * d, span.len());
        for (j, v) in span.iter().enumerate() {
            m.set_column(j, &realify_vec(v.coords()));
        }
        let basis_r = range_onb_r(&m, tol.base);
        let sub = Subspace {
            ambient: ambient.clone(),
            field: SpanField::Real,
            basis_c: None,
            basis_r,
            span,
        };
        sub.validate_span(tol)?;
        Ok(sub)
    }

    pub fn zero(ambient: &Arc<LieAlgebra>, field: SpanField) -> Subspace {
        let d = ambient.dim();
        Subspace {
            ambient: ambient.clone(),
            field,
            span: Vec::new(),
            basis_c: matches!(field, SpanField::Complex).then(|| CMat::zeros(d, 0)),
            basis_r: RMat::zeros(2 * d, 0),
        }
    }

    /// The whole algebra, complex-linear over a complex algebra and
    /// real-linear otherwise.
    pub fn full(ambient: &Arc<LieAlgebra>, tol: &Tolerances) -> Subspace {
        let span: Vec<Element> = (0..ambient.dim()).map(|k| ambient.basis_element(k)).collect();
        match ambient.field() {
            Field::Complex => Self::complex_span(ambient, span, tol).expect("full space"),
            Field::Real => Self::real_span(ambient, span, tol).expect("full space"),
        }
    }

    pub(crate) fn from_complex_onb(ambient: &Arc<LieAlgebra>, basis: CMat) -> Subspace {
        let span = (0..basis.ncols())
            .map(|j| Element::from_vector(basis.column(j).into_owned()))
            .collect();
        Subspace {
            ambient: ambient.clone(),
            field: SpanField::Complex,
            basis_r: realify_basis(&basis),
            basis_c: Some(basis),
            span,
        }
    }

    pub(crate) fn from_real_onb(ambient: &Arc<LieAlgebra>, basis: RMat) -> Subspace {
        let span = (0..basis.ncols())
            .map(|j| Element::from_vector(unrealify_vec(&basis.column(j).into_owned())))
            .collect();
        Subspace {
            ambient: ambient.clone(),
            field: SpanField::Real,
            basis_c: None,
            basis_r: basis,
            span,
        }
    }

    /// The fixed set of the real-form conjugation: the compact form `k`
    /// realized inside `g` as a real subspace.
    pub fn real_form(g: &Arc<LieAlgebra>, tol: &Tolerances) -> Result<Subspace> {
        let s = g
            .conjugation_matrix()
            .ok_or_else(|| Error::argument(format!("algebra {} designates no real form", g.name())))?;
        let d = g.dim();
        // realified sigma: x -> S conj(x)
        let mut op = RMat::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                let z = s[(i, j)];
                // sigma(e_j) = S[:, j] on real part, conj flips the sign of
                // the imaginary input block
                op[(i, j)] += z.re;
                op[(i + d, j)] += z.im;
                op[(i, j + d)] += z.im;
                op[(i + d, j + d)] += -z.re;
            }
        }
        let fixed = nullspace_onb_r(&(op - RMat::identity(2 * d, 2 * d)), tol.base);
        if fixed.ncols() != d {
            return Err(Error::numerical(format!(
                "fixed set of the conjugation has real dimension {} (expected {})",
                fixed.ncols(),
                d
            )));
        }
        Ok(Subspace::from_real_onb(g, fixed))
    }

    fn validate_span(&self, tol: &Tolerances) -> Result<()> {
        for v in &self.span {
            let r = self.residual_of(v);
            if r > tol.base && v.norm() > tol.base {
                return Err(Error::numerical(format!(
                    "span vector escapes its own orthonormalized basis (residual {r:.3e})"
                )));
            }
        }
        Ok(())
    }

    // -- accessors ----------------------------------------------------------

    pub fn ambient(&self) -> &Arc<LieAlgebra> {
        &self.ambient
    }

    pub fn field(&self) -> SpanField {
        self.field
    }

    pub fn span(&self) -> &[Element] {
        &self.span
    }

    pub fn dim_real(&self) -> usize {
        self.basis_r.ncols()
    }

    pub fn dim_complex(&self) -> Option<usize> {
        self.basis_c.as_ref().map(|b| b.ncols())
    }

    pub fn is_zero(&self) -> bool {
        self.dim_real() == 0
    }

    pub fn basis_complex(&self) -> Option<&CMat> {
        self.basis_c.as_ref()
    }

    pub fn basis_realified(&self) -> &RMat {
        &self.basis_r
    }

    /// Internal basis as algebra elements (complex columns, or unrealified
    /// real columns).
    pub fn basis_elements(&self) -> Vec<Element> {
        match &self.basis_c {
            Some(b) => (0..b.ncols())
                .map(|j| Element::from_vector(b.column(j).into_owned()))
                .collect(),
            None => (0..self.basis_r.ncols())
                .map(|j| Element::from_vector(unrealify_vec(&self.basis_r.column(j).into_owned())))
                .collect(),
        }
    }

    // -- membership ---------------------------------------------------------

    /// Relative distance from `v` to the subspace (0 for members).
    pub fn residual_of(&self, v: &Element) -> f64 {
        match &self.basis_c {
            Some(b) => projection_residual_c(b, v.coords()),
            None => projection_residual_r(&self.basis_r, &realify_vec(v.coords())),
        }
    }

    pub fn contains_element(&self, v: &Element, tol: &Tolerances) -> bool {
        self.residual_of(v) <= tol.base
    }

    /// Worst residual of the other space's internal basis against this one.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..other.basis_r.ncols() {
            let col = other.basis_r.column(j).into_owned();
            worst = worst.max(projection_residual_r(&self.basis_r, &col));
        }
        worst
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.containment_residual(other) <= tol.base
    }

    /// Same set of points: mutual containment within tolerance.
    pub fn equals(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.dim_real() == other.dim_real()
            && self.contains_subspace(other, tol)
            && other.contains_subspace(self, tol)
    }

    // -- lattice operations -------------------------------------------------

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if !self.ambient.compatible(&other.ambient) {
            return Err(Error::argument(format!(
                "subspaces of different algebras ({} vs {})",
                self.ambient.name(),
                other.ambient.name()
            )));
        }
        Ok(())
    }

    /// Intersection. Complex with complex stays complex; any real operand
    /// realifies the computation and yields a real-linear subspace.
    pub fn intersect(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        match (&self.basis_c, &other.basis_c) {
            (Some(b1), Some(b2)) => {
                let d = self.ambient.dim();
                let id = CMat::identity(d, d);
                let p1 = &id - b1 * b1.adjoint();
                let p2 = &id - b2 * b2.adjoint();
                let mut stacked = CMat::zeros(2 * d, d);
                stacked.view_mut((0, 0), (d, d)).copy_from(&p1);
                stacked.view_mut((d, 0), (d, d)).copy_from(&p2);
                let kernel = nullspace_onb_c(&stacked, tol.base);
                Ok(Subspace::from_complex_onb(&self.ambient, kernel))
            }
            _ => {
                let n = self.basis_r.nrows();
                let id = RMat::identity(n, n);
                let p1 = &id - &self.basis_r * self.basis_r.transpose();
                let p2 = &id - &other.basis_r * other.basis_r.transpose();
                let mut stacked = RMat::zeros(2 * n, n);
                stacked.view_mut((0, 0), (n, n)).copy_from(&p1);
                stacked.view_mut((n, 0), (n, n)).copy_from(&p2);
                let kernel = nullspace_onb_r(&stacked, tol.base);
                Ok(Subspace::from_real_onb(&self.ambient, kernel))
            }
        }
    }

    /// Sum of subspaces; complex when both operands are complex.
    pub fn sum(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        match (&self.basis_c, &other.basis_c) {
            (Some(b1), Some(b2)) => {
                let d = self.ambient.dim();
                let mut m = CMat::zeros(d, b1.ncols() + b2.ncols());
                m.view_mut((0, 0), (d, b1.ncols())).copy_from(b1);
                m.view_mut((0, b1.ncols()), (d, b2.ncols())).copy_from(b2);
                Ok(Subspace::from_complex_onb(
                    &self.ambient,
                    range_onb_c(&m, tol.base),
                ))
            }
            _ => {
                let n = self.basis_r.nrows();
                let (k1, k2) = (self.basis_r.ncols(), other.basis_r.ncols());
                let mut m = RMat::zeros(n, k1 + k2);
                m.view_mut((0, 0), (n, k1)).copy_from(&self.basis_r);
                m.view_mut((0, k1), (n, k2)).copy_from(&other.basis_r);
                Ok(Subspace::from_real_onb(
                    &self.ambient,
                    range_onb_r(&m, tol.base),
                ))
            }
        }
    }

    /// Image under the real-form conjugation (anti-linear, so complex
    /// subspaces map to complex subspaces).
    pub fn conjugate(&self, tol: &Tolerances) -> Result<Subspace> {
        let spans: Vec<Element> = self
            .basis_elements()
            .iter()
            .map(|v| {
                self.ambient
                    .conjugate_element(v)
                    .ok_or_else(|| Error::argument("ambient algebra designates no real form"))
            })
            .collect::<Result<_>>()?;
        match self.field {
            SpanField::Complex => Subspace::complex_span(&self.ambient, spans, tol),
            SpanField::Real => Subspace::real_span(&self.ambient, spans, tol),
        }
    }

    /// Complex span of the same coordinate vectors inside the complexified
    /// algebra (e.g. `t` inside `g` becomes the Cartan subalgebra `t^C`).
    pub fn complexified_in(&self, g: &Arc<LieAlgebra>, tol: &Tolerances) -> Result<Subspace> {
        if g.dim() != self.ambient.dim() {
            return Err(Error::argument(
                "complexified ambient dimension does not match",
            ));
        }
        Subspace::complex_span(g, self.basis_elements(), tol)
    }

    // -- Lie-algebraic verifiers ---------------------------------------------

    /// Closure under the bracket: `[u, v]` projects into the space for all
    /// internal basis pairs.
    pub fn is_subalgebra(&self, tol: &Tolerances) -> VerificationReport {
        let mut report = VerificationReport::new("is_subalgebra");
        let basis = self.basis_elements();
        let mut worst = 0.0f64;
        let mut witness = None;
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let br = self
                    .ambient
                    .bracket(&basis[i], &basis[j])
                    .expect("basis elements have ambient dimension");
                // scale residual to the operand sizes, not the (possibly
                // small) bracket
                let scale = br.norm().max(1.0);
                let r = self.residual_of(&br) * br.norm() / scale;
                if r > worst {
                    worst = r;
                    witness = Some((i, j));
                }
            }
        }
        let pass = worst <= tol.base;
        let check = report.check("bracket_closure", pass);
        check.with_residual(worst);
        if let Some((i, j)) = witness {
            check.with_detail(format!("worst internal basis pair ({i}, {j})"));
        }
        report
    }

    /// `[V, W] <= V`, with `V <= W` as a checked precondition.
    pub fn is_ideal_in(&self, w: &Subspace, tol: &Tolerances) -> Result<VerificationReport> {
        self.check_same_ambient(w)?;
        let containment = w.containment_residual(self);
        if containment > tol.base {
            return Err(Error::precondition(format!(
                "is_ideal_in requires V <= W (containment residual {containment:.3e})"
            )));
        }
        let mut report = VerificationReport::new("is_ideal_in");
        let vb = self.basis_elements();
        let wb = w.basis_elements();
        let mut worst = 0.0f64;
        let mut witness = None;
        for (i, v) in vb.iter().enumerate() {
            for (j, wv) in wb.iter().enumerate() {
                let br = self.ambient.bracket(v, wv).expect("dimensions agree");
                let scale = br.norm().max(1.0);
                let r = self.residual_of(&br) * br.norm() / scale;
                if r > worst {
                    worst = r;
                    witness = Some((i, j));
                }
            }
        }
        let pass = worst <= tol.base;
        let check = report.check("bracket_into_ideal", pass);
        check.with_residual(worst);
        if let Some((i, j)) = witness {
            check.with_detail(format!("worst pair (V[{i}], W[{j}])"));
        }
        Ok(report)
    }

    /// Span of `[u_i, v_j]` over internal basis pairs.
    pub fn bracket_span(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut brackets = Vec::new();
        for u in self.basis_elements() {
            for v in other.basis_elements() {
                let br = self.ambient.bracket(&u, &v)?;
                if br.norm() > tol.base {
                    brackets.push(br);
                }
            }
        }
        match (self.field, other.field) {
            (SpanField::Complex, SpanField::Complex) => {
                Subspace::complex_span(&self.ambient, brackets, tol)
            }
            (SpanField::Real, SpanField::Real) => Subspace::real_span(&self.ambient, brackets, tol),
            _ => Err(Error::argument(
                "bracket span of mixed real/complex subspaces is not defined",
            )),
        }
    }

    /// Derived series `V >= [V,V] >= ...` until the dimension stabilizes.
    pub fn derived_series(&self, tol: &Tolerances) -> Result<Vec<Subspace>> {
        let sub_report = self.is_subalgebra(tol);
        if !sub_report.pass {
            return Err(Error::precondition(format!(
                "derived_series requires a subalgebra (closure residual {:?})",
                sub_report.worst_residual()
            )));
        }
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.bracket_span(last, tol)?;
            if next.dim_real() >= last.dim_real() {
                break;
            }
            let stop = next.is_zero();
            series.push(next);
            if stop {
                break;
            }
            if series.len() > self.ambient.dim() + 2 {
                return Err(Error::numerical(
                    "derived series failed to stabilize within the dimension bound",
                ));
            }
        }
        Ok(series)
    }

    pub fn is_solvable(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.derived_series(tol)?.last().unwrap().is_zero())
    }

    /// Coordinates of the internal basis for serialization.
    pub fn basis_coordinates(&self) -> Vec<Vec<(f64, f64)>> {
        self.basis_elements()
            .iter()
            .map(|e| e.coords().iter().map(|z| (z.re, z.im)).collect())
            .collect()
    }
}

/// Grassmann bookkeeping for two subspaces of the same kind.
pub fn grassmann_defect(a: &Subspace, b: &Subspace, tol: &Tolerances) -> Result<i64> {
    let inter = a.intersect(b, tol)?;
    let sum = a.sum(b, tol)?;
    Ok((inter.dim_real() + sum.dim_real()) as i64 - (a.dim_real() + b.dim_real()) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::linalg::{c, cr};

    fn sl2() -> Arc<LieAlgebra> {
        builtins::su2().complexify().unwrap()
    }

    fn el(v: Vec<crate::linalg::C>) -> Element {
        Element::from_complex(v)
    }

    fn nilpotent_u(g: &Arc<LieAlgebra>, tol: &Tolerances) -> Subspace {
        Subspace::complex_span(g, vec![el(vec![cr(0.0), cr(1.0), c(0.0, 1.0)])], tol).unwrap()
    }

    fn borel_b(g: &Arc<LieAlgebra>, tol: &Tolerances) -> Subspace {
        Subspace::complex_span(
            g,
            vec![
                el(vec![cr(1.0), cr(0.0), cr(0.0)]),
                el(vec![cr(0.0), cr(1.0), c(0.0, 1.0)]),
            ],
            tol,
        )
        .unwrap()
    }

    #[test]
    fn one_dimensional_span_is_subalgebra() {
        let g = sl2();
        let tol = Tolerances::default();
        let u = nilpotent_u(&g, &tol);
        assert!(u.is_subalgebra(&tol).pass);
    }

    #[test]
    fn e2_e3_span_fails_subalgebra_with_witness() {
        let su2 = builtins::su2();
        let tol = Tolerances::default();
        let v = Subspace::real_span(
            &su2,
            vec![su2.basis_element(1), su2.basis_element(2)],
            &tol,
        )
        .unwrap();
        let rep = v.is_subalgebra(&tol);
        assert!(!rep.pass);
        // witness: [e2, e3] = 2 e1 escapes the span
        assert!(rep.checks[0].residual.unwrap() > 1e-3);
    }

    #[test]
    fn full_algebra_is_subalgebra() {
        let g = sl2();
        let tol = Tolerances::default();
        assert!(Subspace::full(&g, &tol).is_subalgebra(&tol).pass);
    }

    #[test]
    fn u_is_ideal_in_borel() {
        let g = sl2();
        let tol = Tolerances::default();
        let u = nilpotent_u(&g, &tol);
        let b = borel_b(&g, &tol);
        assert!(u.is_ideal_in(&b, &tol).unwrap().pass);
        // every subalgebra is an ideal in itself
        assert!(b.is_ideal_in(&b, &tol).unwrap().pass);
    }

    #[test]
    fn cartan_line_is_not_an_ideal_in_borel() {
        let g = sl2();
        let tol = Tolerances::default();
        let h = Subspace::complex_span(&g, vec![g.basis_element(0)], &tol).unwrap();
        let b = borel_b(&g, &tol);
        let rep = h.is_ideal_in(&b, &tol).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn ideal_precondition_rejects_non_contained() {
        let g = sl2();
        let tol = Tolerances::default();
        let u = nilpotent_u(&g, &tol);
        let h = Subspace::complex_span(&g, vec![g.basis_element(0)], &tol).unwrap();
        assert!(matches!(
            h.is_ideal_in(&u, &tol),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn derived_series_of_borel() {
        let g = sl2();
        let tol = Tolerances::default();
        let b = borel_b(&g, &tol);
        let series = b.derived_series(&tol).unwrap();
        let dims: Vec<usize> = series.iter().map(|s| s.dim_real()).collect();
        assert_eq!(dims, vec![4, 2, 0]);
        assert!(b.is_solvable(&tol).unwrap());
    }

    #[test]
    fn sl2_is_not_solvable() {
        let g = sl2();
        let tol = Tolerances::default();
        let full = Subspace::full(&g, &tol);
        let series = full.derived_series(&tol).unwrap();
        assert_eq!(series.len(), 1);
        assert!(!full.is_solvable(&tol).unwrap());
    }

    #[test]
    fn zero_space_is_solvable() {
        let g = sl2();
        let tol = Tolerances::default();
        let z = Subspace::zero(&g, SpanField::Complex);
        assert!(z.is_solvable(&tol).unwrap());
    }

    #[test]
    fn u_meets_compact_form_trivially() {
        let g = sl2();
        let tol = Tolerances::default();
        let u = nilpotent_u(&g, &tol);
        let k = Subspace::real_form(&g, &tol).unwrap();
        assert_eq!(k.dim_real(), 3);
        let meet = u.intersect(&k, &tol).unwrap();
        assert!(meet.is_zero());
    }

    #[test]
    fn borel_meets_compact_form_in_torus_line() {
        let g = sl2();
        let tol = Tolerances::default();
        let b = borel_b(&g, &tol);
        let k = Subspace::real_form(&g, &tol).unwrap();
        let meet = b.intersect(&k, &tol).unwrap();
        assert_eq!(meet.dim_real(), 1);
        // spanned by e1
        let e1 = g.basis_element(0);
        assert!(meet.contains_element(&e1, &tol));
    }

    #[test]
    fn intersection_is_idempotent_and_commutative() {
        let g = sl2();
        let tol = Tolerances::default();
        let b = borel_b(&g, &tol);
        let u = nilpotent_u(&g, &tol);
        let bb = b.intersect(&b, &tol).unwrap();
        assert!(bb.equals(&b, &tol));
        let x = b.intersect(&u, &tol).unwrap();
        let y = u.intersect(&b, &tol).unwrap();
        assert!(x.equals(&y, &tol));
        assert!(x.equals(&u, &tol));
    }

    #[test]
    fn grassmann_identity_on_root_lines() {
        let g = sl2();
        let tol = Tolerances::default();
        let b = borel_b(&g, &tol);
        let u = nilpotent_u(&g, &tol);
        assert_eq!(grassmann_defect(&b, &u, &tol).unwrap(), 0);
    }

    #[test]
    fn conjugate_of_u_is_opposite_root_line() {
        let g = sl2();
        let tol = Tolerances::default();
        let u = nilpotent_u(&g, &tol);
        let ubar = u.conjugate(&tol).unwrap();
        let expected = Subspace::complex_span(
            &g,
            vec![el(vec![cr(0.0), cr(1.0), c(0.0, -1.0)])],
            &tol,
        )
        .unwrap();
        assert!(ubar.equals(&expected, &tol));
    }
}
