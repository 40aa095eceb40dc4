//! Finite-dimensional Lie algebras given by structure constants.
//!
//! An algebra is a basis, a sparse antisymmetric bracket table and, for
//! complex algebras with a designated compact real form, an anti-linear
//! conjugation whose fixed set realizes that form. Built-in algebras
//! additionally carry their structure constants as exact Gaussian rationals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{to_c64, GaussRat};
use crate::linalg::{c, cr, CMat, CVec, C};
use crate::report::VerificationReport;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Sparse bracket coefficients for the ordered pair `(i, j)` with `i < j`.
type Row = Vec<(usize, C)>;
type ExactRow = Vec<(usize, GaussRat)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    coords: CVec,
}

impl Element {
    pub fn from_complex(coords: Vec<C>) -> Self {
        Element {
            coords: CVec::from_vec(coords),
        }
    }

    pub fn from_real(coords: Vec<f64>) -> Self {
        Element {
            coords: CVec::from_iterator(coords.len(), coords.into_iter().map(cr)),
        }
    }

    pub fn from_vector(coords: CVec) -> Self {
        Element { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Element {
            coords: CVec::zeros(dim),
        }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut coords = CVec::zeros(dim);
        coords[k] = cr(1.0);
        Element { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn scale(&self, s: C) -> Element {
        Element {
            coords: &self.coords * s,
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        Element {
            coords: &self.coords + &other.coords,
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element {
            coords: &self.coords - &other.coords,
        }
    }

    /// Largest imaginary component; real elements report ~0.
    pub fn imag_magnitude(&self) -> f64 {
        self.coords.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    field: Field,
    basis_names: Vec<String>,
    /// Numeric table, canonical pairs `i < j` only.
    table: Vec<Vec<Row>>,
    /// Exact table mirroring `table`, present for built-ins.
    exact: Option<Vec<Vec<ExactRow>>>,
    /// Anti-linear conjugation `sigma(x) = S conj(x)`; `S` is stored.
    conjugation: Option<CMat>,
}

impl LieAlgebra {
    pub fn from_numeric_table(
        name: impl Into<String>,
        field: Field,
        basis_names: Vec<String>,
        entries: Vec<(usize, usize, Vec<(usize, C)>)>,
    ) -> Result<Arc<Self>> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::argument("algebra dimension must be positive"));
        }
        let mut table: Vec<Vec<Row>> = vec![vec![Vec::new(); dim]; dim];
        let mut seen = vec![vec![false; dim]; dim];
        for (i, j, coeffs) in entries {
            if i >= dim || j >= dim || coeffs.iter().any(|&(k, _)| k >= dim) {
                return Err(Error::argument(format!(
                    "bracket entry ({i},{j}) has an index out of range for dimension {dim}"
                )));
            }
            if i == j {
                if coeffs.iter().any(|&(_, v)| v.norm() > 0.0) {
                    return Err(Error::argument(format!(
                        "nonzero bracket [b{i}, b{i}] contradicts antisymmetry"
                    )));
                }
                continue;
            }
            let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let mut row: Row = coeffs
                .into_iter()
                .filter(|&(_, v)| v.norm() > 0.0)
                .map(|(k, v)| (k, v * cr(sign)))
                .collect();
            row.sort_by_key(|&(k, _)| k);
            if seen[a][b] {
                // antisymmetric completion: if both orders are supplied they
                // must agree
                if !rows_match(&table[a][b], &row) {
                    return Err(Error::argument(format!(
                        "bracket entries for ({a},{b}) and ({b},{a}) are inconsistent"
                    )));
                }
            } else {
                table[a][b] = row;
                seen[a][b] = true;
            }
        }
        Ok(Arc::new(LieAlgebra {
            name: name.into(),
            dim,
            field,
            basis_names,
            table,
            exact: None,
            conjugation: None,
        }))
    }

    pub(crate) fn from_exact_table(
        name: impl Into<String>,
        field: Field,
        basis_names: Vec<String>,
        entries: Vec<(usize, usize, ExactRow)>,
    ) -> Arc<Self> {
        let dim = basis_names.len();
        let mut table: Vec<Vec<Row>> = vec![vec![Vec::new(); dim]; dim];
        let mut exact: Vec<Vec<ExactRow>> = vec![vec![Vec::new(); dim]; dim];
        for (i, j, coeffs) in entries {
            assert!(i < j && j < dim, "exact tables use canonical pairs");
            table[i][j] = coeffs.iter().map(|(k, v)| (*k, to_c64(v))).collect();
            exact[i][j] = coeffs;
        }
        Arc::new(LieAlgebra {
            name: name.into(),
            dim,
            field,
            basis_names,
            table,
            exact: Some(exact),
            conjugation: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn basis_element(&self, k: usize) -> Element {
        Element::basis(self.dim, k)
    }

    pub fn conjugation_matrix(&self) -> Option<&CMat> {
        self.conjugation.as_ref()
    }

    /// Structural compatibility; used to validate that two values live in the
    /// same algebra.
    pub fn compatible(&self, other: &LieAlgebra) -> bool {
        self.name == other.name && self.dim == other.dim && self.field == other.field
    }

    /// Bracket coefficients of basis elements, honoring antisymmetry.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Row {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.table[i][j].clone()
        } else {
            self.table[j][i]
                .iter()
                .map(|&(k, v)| (k, -v))
                .collect()
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        if x.dim() != self.dim || y.dim() != self.dim {
            return Err(Error::argument(format!(
                "bracket operands of dimension {}/{} do not match the algebra dimension {}",
                x.dim(),
                y.dim(),
                self.dim
            )));
        }
        let mut out = CVec::zeros(self.dim);
        for i in 0..self.dim {
            let xi = x.coords[i];
            if xi.norm() == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                let yj = y.coords[j];
                if yj.norm() == 0.0 || i == j {
                    continue;
                }
                let factor = xi * yj;
                if i < j {
                    for &(k, v) in &self.table[i][j] {
                        out[k] += factor * v;
                    }
                } else {
                    for &(k, v) in &self.table[j][i] {
                        out[k] -= factor * v;
                    }
                }
            }
        }
        Ok(Element { coords: out })
    }

    /// Matrix of `ad(h) = [h, .]` in the algebra basis.
    pub fn ad_matrix(&self, h: &Element) -> Result<CMat> {
        let mut m = CMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(h, &self.basis_element(j))?;
            m.set_column(j, col.coords());
        }
        Ok(m)
    }

    /// Killing form `K(x, y) = tr(ad x ad y)`.
    pub fn killing_form(&self, x: &Element, y: &Element) -> Result<C> {
        let ax = self.ad_matrix(x)?;
        let ay = self.ad_matrix(y)?;
        Ok((ax * ay).trace())
    }

    /// Check the Jacobi identity over all basis triples. Exact algebras are
    /// evaluated in rational arithmetic and report residual exactly zero.
    pub fn check_jacobi(&self, tol: &Tolerances) -> VerificationReport {
        let mut report = VerificationReport::new("jacobi");
        let (residual, witness) = match &self.exact {
            Some(exact) => self.jacobi_exact(exact),
            None => self.jacobi_numeric(),
        };
        let pass = residual <= tol.jacobi;
        let check = report.check("max_triple_residual", pass);
        check.with_residual(residual);
        if let Some((i, j, k)) = witness {
            check.with_detail(format!(
                "worst triple ({}, {}, {}) = ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1,
                self.basis_names[i],
                self.basis_names[j],
                self.basis_names[k]
            ));
        }
        report
    }

    fn jacobi_numeric(&self) -> (f64, Option<(usize, usize, usize)>) {
        let mut worst = 0.0;
        let mut witness = None;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let bi = self.basis_element(i);
                    let bj = self.basis_element(j);
                    let bk = self.basis_element(k);
                    let t1 = self
                        .bracket(&self.bracket(&bi, &bj).unwrap(), &bk)
                        .unwrap();
                    let t2 = self
                        .bracket(&self.bracket(&bj, &bk).unwrap(), &bi)
                        .unwrap();
                    let t3 = self
                        .bracket(&self.bracket(&bk, &bi).unwrap(), &bj)
                        .unwrap();
                    let r = t1.add(&t2).add(&t3).norm();
                    if r > worst {
                        worst = r;
                        witness = Some((i, j, k));
                    }
                }
            }
        }
        (worst, witness)
    }

    fn jacobi_exact(&self, exact: &[Vec<ExactRow>]) -> (f64, Option<(usize, usize, usize)>) {
        use crate::exact::gzero;
        let coeff = |i: usize, j: usize| -> Vec<(usize, GaussRat)> {
            if i == j {
                Vec::new()
            } else if i < j {
                exact[i][j].clone()
            } else {
                exact[j][i].iter().map(|(k, v)| (*k, -v.clone())).collect()
            }
        };
        let mut worst = 0.0f64;
        let mut witness = None;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let mut acc = vec![gzero(); self.dim];
                    // [[bi,bj],bk] + [[bj,bk],bi] + [[bk,bi],bj]
                    for &(a, b, cc) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, v) in coeff(a, b) {
                            for (n, w) in coeff(m, cc) {
                                acc[n] = acc[n].clone() + v.clone() * w;
                            }
                        }
                    }
                    let r = acc
                        .iter()
                        .map(|z| to_c64(z).norm())
                        .fold(0.0, f64::max);
                    if r > worst {
                        worst = r;
                        witness = Some((i, j, k));
                    }
                }
            }
        }
        (worst, witness)
    }

    /// Extend scalars from R to C. The basis and structure constants are
    /// unchanged; the coordinate-wise conjugation is installed as the
    /// compact-real-form involution.
    pub fn complexify(self: &Arc<Self>) -> Result<Arc<LieAlgebra>> {
        if self.field == Field::Complex {
            return Err(Error::argument(format!(
                "algebra {} is already complex",
                self.name
            )));
        }
        Ok(Arc::new(LieAlgebra {
            name: format!("{}^C", self.name),
            dim: self.dim,
            field: Field::Complex,
            basis_names: self.basis_names.clone(),
            table: self.table.clone(),
            exact: self.exact.clone(),
            conjugation: Some(CMat::identity(self.dim, self.dim)),
        }))
    }

    /// Apply the real-form conjugation `sigma(x) = S conj(x)`.
    pub fn conjugate_element(&self, x: &Element) -> Option<Element> {
        let s = self.conjugation.as_ref()?;
        let conj: CVec = x.coords.map(|z| z.conj());
        Some(Element { coords: s * conj })
    }

    /// Validate the involution axioms of the conjugation, when present.
    pub fn check_conjugation(&self, tol: &Tolerances) -> VerificationReport {
        let mut report = VerificationReport::new("real_form_conjugation");
        let s = match &self.conjugation {
            Some(s) => s,
            None => {
                report.check("present", true).with_detail("no conjugation designated");
                return report;
            }
        };
        // sigma^2 = id  <=>  S conj(S) = I
        let s_conj = s.map(|z| z.conj());
        let residual = (s * s_conj - CMat::identity(self.dim, self.dim)).norm();
        report.residual_check("involution", residual, tol.base);
        // bracket preserving on basis pairs
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let bi = self.basis_element(i);
                let bj = self.basis_element(j);
                let lhs = self
                    .conjugate_element(&self.bracket(&bi, &bj).unwrap())
                    .unwrap();
                let rhs = self
                    .bracket(
                        &self.conjugate_element(&bi).unwrap(),
                        &self.conjugate_element(&bj).unwrap(),
                    )
                    .unwrap();
                worst = worst.max(lhs.sub(&rhs).norm());
            }
        }
        report.residual_check("bracket_preserving", worst, tol.base);
        report
    }

    /// Direct sum of two algebras over the same field. Exactness and
    /// conjugations are combined blockwise when both factors carry them.
    pub fn direct_sum(a: &Arc<LieAlgebra>, b: &Arc<LieAlgebra>) -> Result<Arc<LieAlgebra>> {
        if a.field != b.field {
            return Err(Error::argument(
                "direct sum factors must share the scalar field",
            ));
        }
        let dim = a.dim + b.dim;
        let mut basis_names: Vec<String> =
            a.basis_names.iter().map(|n| format!("{n}.1")).collect();
        basis_names.extend(b.basis_names.iter().map(|n| format!("{n}.2")));

        let mut table: Vec<Vec<Row>> = vec![vec![Vec::new(); dim]; dim];
        for i in 0..a.dim {
            for j in (i + 1)..a.dim {
                table[i][j] = a.table[i][j].clone();
            }
        }
        for i in 0..b.dim {
            for j in (i + 1)..b.dim {
                table[a.dim + i][a.dim + j] = b.table[i][j]
                    .iter()
                    .map(|&(k, v)| (a.dim + k, v))
                    .collect();
            }
        }
        let exact = match (&a.exact, &b.exact) {
            (Some(ea), Some(eb)) => {
                let mut exact: Vec<Vec<ExactRow>> = vec![vec![Vec::new(); dim]; dim];
                for i in 0..a.dim {
                    for j in (i + 1)..a.dim {
                        exact[i][j] = ea[i][j].clone();
                    }
                }
                for i in 0..b.dim {
                    for j in (i + 1)..b.dim {
                        exact[a.dim + i][a.dim + j] = eb[i][j]
                            .iter()
                            .map(|(k, v)| (a.dim + k, v.clone()))
                            .collect();
                    }
                }
                Some(exact)
            }
            _ => None,
        };
        let conjugation = match (&a.conjugation, &b.conjugation) {
            (Some(sa), Some(sb)) => {
                let mut s = CMat::zeros(dim, dim);
                s.view_mut((0, 0), (a.dim, a.dim)).copy_from(sa);
                s.view_mut((a.dim, a.dim), (b.dim, b.dim)).copy_from(sb);
                Some(s)
            }
            (None, None) => None,
            _ => {
                return Err(Error::argument(
                    "direct sum factors must both or neither designate a real form",
                ))
            }
        };
        Ok(Arc::new(LieAlgebra {
            name: format!("{}(+){}", a.name, b.name),
            dim,
            field: a.field,
            basis_names,
            table,
            exact,
            conjugation,
        }))
    }
}

fn rows_match(a: &Row, b: &Row) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter()
        .zip(b)
        .all(|(&(ka, va), &(kb, vb))| ka == kb && (va - vb).norm() <= 1e-12)
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------

/// On-disk algebra description:
/// `{ "dim": n, "field": "real"|"complex", "basis": [names],
///    "brackets": [[i, j, [[k, re, im], ...]], ...] }`, 0-indexed, omitted
/// entries zero, antisymmetric completion applied on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub field: Field,
    pub basis: Vec<String>,
    pub brackets: Vec<(usize, usize, Vec<(usize, f64, f64)>)>,
}

impl AlgebraSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn build(self, name: impl Into<String>) -> Result<Arc<LieAlgebra>> {
        if self.basis.len() != self.dim {
            return Err(Error::argument(format!(
                "basis has {} names but dim is {}",
                self.basis.len(),
                self.dim
            )));
        }
        let entries = self
            .brackets
            .into_iter()
            .map(|(i, j, coeffs)| {
                (
                    i,
                    j,
                    coeffs
                        .into_iter()
                        .map(|(k, re, im)| (k, c(re, im)))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        LieAlgebra::from_numeric_table(name, self.field, self.basis, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn su2() -> Arc<LieAlgebra> {
        builtins::by_name("su2").unwrap()
    }

    #[test]
    fn su2_bracket_defining_relation() {
        let alg = su2();
        let got = alg
            .bracket(&alg.basis_element(0), &alg.basis_element(1))
            .unwrap();
        // [e1, e2] = 2 e3
        assert!((got.coords() - Element::from_real(vec![0.0, 0.0, 2.0]).coords()).norm() < 1e-15);
    }

    #[test]
    fn bracket_of_element_with_itself_vanishes() {
        let alg = su2();
        let x = Element::from_complex(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.25, -1.0)]);
        let alg_c = alg.complexify().unwrap();
        assert!(alg_c.bracket(&x, &x).unwrap().norm() < 1e-15);
    }

    #[test]
    fn sl2_root_vector_bracket() {
        // [e2 + i e3, e2 - i e3] = -4i e1
        let g = su2().complexify().unwrap();
        let u = Element::from_complex(vec![cr(0.0), cr(1.0), c(0.0, 1.0)]);
        let v = Element::from_complex(vec![cr(0.0), cr(1.0), c(0.0, -1.0)]);
        let got = g.bracket(&u, &v).unwrap();
        let want = Element::from_complex(vec![c(0.0, -4.0), cr(0.0), cr(0.0)]);
        assert!(got.sub(&want).norm() < 1e-14);
    }

    #[test]
    fn bracket_dimension_mismatch_is_an_error() {
        let alg = su2();
        let bad = Element::zero(4);
        assert!(matches!(
            alg.bracket(&bad, &alg.basis_element(0)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn jacobi_exact_zero_on_builtin() {
        let tol = Tolerances::default();
        let rep = su2().check_jacobi(&tol);
        assert!(rep.pass);
        assert_eq!(rep.checks[0].residual, Some(0.0));
    }

    #[test]
    fn jacobi_fails_on_perturbed_constants() {
        let tol = Tolerances::default();
        // su(2) with a spurious e1 component injected into [e1, e2]; note
        // that rescaling c(1,2,3) alone cannot break Jacobi here, since every
        // term of the (1,2,3) identity is then a bracket of parallel vectors
        let alg = LieAlgebra::from_numeric_table(
            "su2-broken",
            Field::Real,
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![
                (0, 1, vec![(0, cr(0.1)), (2, cr(2.1))]),
                (1, 2, vec![(0, cr(2.0))]),
                (2, 0, vec![(1, cr(2.0))]),
            ],
        )
        .unwrap();
        let rep = alg.check_jacobi(&tol);
        assert!(!rep.pass);
        let detail = rep.checks[0].detail.clone().unwrap();
        assert!(detail.contains("(1, 2, 3)"));
    }

    #[test]
    fn complexify_su2_and_refuse_twice() {
        let g = su2().complexify().unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.field(), Field::Complex);
        assert!(g.complexify().is_err());
        let tol = Tolerances::default();
        assert!(g.check_jacobi(&tol).pass);
        assert!(g.check_conjugation(&tol).pass);
    }

    #[test]
    fn u1_complexifies_to_abelian_line() {
        let g = builtins::by_name("u1").unwrap().complexify().unwrap();
        assert_eq!(g.dim(), 1);
        let x = g.basis_element(0);
        assert!(g.bracket(&x, &x).unwrap().norm() == 0.0);
    }

    #[test]
    fn antisymmetric_completion_and_conflicts() {
        // only (2,0) given: (0,2) must come out negated
        let alg = LieAlgebra::from_numeric_table(
            "toy",
            Field::Real,
            vec!["a".into(), "b".into(), "c".into()],
            vec![(2, 0, vec![(1, cr(1.0))])],
        )
        .unwrap();
        let got = alg
            .bracket(&alg.basis_element(0), &alg.basis_element(2))
            .unwrap();
        assert!((got.coords()[1] - cr(-1.0)).norm() < 1e-15);

        let conflict = LieAlgebra::from_numeric_table(
            "bad",
            Field::Real,
            vec!["a".into(), "b".into()],
            vec![(0, 1, vec![(0, cr(1.0))]), (1, 0, vec![(0, cr(1.0))])],
        );
        assert!(conflict.is_err());
    }

    #[test]
    fn algebra_spec_json_round_trip() {
        let json = r#"{
            "dim": 3,
            "field": "real",
            "basis": ["e1", "e2", "e3"],
            "brackets": [[0, 1, [[2, 2.0, 0.0]]], [1, 2, [[0, 2.0, 0.0]]], [2, 0, [[1, 2.0, 0.0]]]]
        }"#;
        let spec = AlgebraSpec::from_json(json).unwrap();
        let alg = spec.build("user-su2").unwrap();
        let tol = Tolerances::default();
        assert!(alg.check_jacobi(&tol).pass);
        assert!(!alg.is_exact());
    }
}
