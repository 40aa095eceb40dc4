//! Cartan data and the root-space decomposition `g = r (+) sum g_a`.
//!
//! The decomposition is computed by sequential joint-eigenspace refinement:
//! starting from the whole algebra, each real torus generator `t_j` splits
//! the current invariant subspaces into eigenspaces of `ad(t_j)`, clustering
//! eigenvalues within an absolute radius to absorb float noise. Spaces whose
//! accumulated eigenvalue tuple is zero must reproduce `r` (that is the
//! self-centralizing precondition); the rest become root spaces.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Element, Field, LieAlgebra};
use crate::builtins;
use crate::error::{Error, Result};
use crate::linalg::{complex_eigenvalues, nullspace_onb_c_abs, CMat, CVec, C};
use crate::subspace::Subspace;
use crate::tol::Tolerances;

/// A root: the joint eigenvalue functional of `ad(r)` on its root space.
#[derive(Debug, Clone)]
pub struct Root {
    /// Values on the internal (complex, orthonormal) basis of the Cartan
    /// subalgebra.
    pub values: Vec<C>,
    /// Values on the real torus basis `t_1..t_q`; purely imaginary for
    /// compact forms. These drive the positivity ordering and the morphism
    /// identification.
    pub torus_values: Vec<C>,
}

impl Root {
    pub fn negated(&self) -> Root {
        Root {
            values: self.values.iter().map(|v| -v).collect(),
            torus_values: self.torus_values.iter().map(|v| -v).collect(),
        }
    }

    pub fn plus(&self, other: &Root) -> Root {
        Root {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            torus_values: self
                .torus_values
                .iter()
                .zip(&other.torus_values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn distance(&self, other: &Root) -> f64 {
        self.torus_values
            .iter()
            .zip(&other.torus_values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Root, radius: f64) -> bool {
        self.distance(other) <= radius
    }

    /// Evaluation tuple on the `i t_j` basis, real for compact forms.
    /// `a(i t_j) = i a(t_j)`, and for purely imaginary `a(t_j)` this is
    /// `-Im a(t_j)`.
    pub fn lex_tuple(&self) -> Vec<f64> {
        self.torus_values.iter().map(|v| (C::i() * v).re).collect()
    }

    /// Lexicographic sign against the generic element of `i t`: positive iff
    /// the first significant entry of the evaluation tuple is positive.
    pub fn is_positive(&self, radius: f64) -> bool {
        for x in self.lex_tuple() {
            if x.abs() > radius {
                return x > 0.0;
            }
        }
        false
    }
}

#[derive(Debug, Clone)]
pub struct CartanBorelData {
    algebra: Arc<LieAlgebra>,
    /// Maximal Abelian subalgebra of the compact form, realized inside `g`.
    torus_t: Subspace,
    /// Cartan subalgebra `r = t^C`.
    cartan_r: Subspace,
    roots: Vec<Root>,
    root_spaces: Vec<Subspace>,
    positive: Option<Vec<usize>>,
    borel_b: Option<Subspace>,
    nilpotent_u: Option<Subspace>,
}

impl CartanBorelData {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn torus_t(&self) -> &Subspace {
        &self.torus_t
    }

    pub fn cartan_r(&self) -> &Subspace {
        &self.cartan_r
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_spaces(&self) -> &[Subspace] {
        &self.root_spaces
    }

    pub fn rank(&self) -> usize {
        self.cartan_r.dim_complex().unwrap_or(0)
    }

    pub fn positive(&self) -> Option<&[usize]> {
        self.positive.as_deref()
    }

    pub fn borel_b(&self) -> Option<&Subspace> {
        self.borel_b.as_ref()
    }

    pub fn nilpotent_u(&self) -> Option<&Subspace> {
        self.nilpotent_u.as_ref()
    }

    /// The real torus basis `t_1..t_q` (orthonormal) fixing the
    /// identification of the Cartan subgroup with `(C*)^q`.
    pub fn torus_basis(&self) -> Vec<Element> {
        self.torus_t.basis_elements()
    }

    /// Index of the root matching `root` within the cluster radius.
    pub fn find_root(&self, root: &Root, radius: f64) -> Option<usize> {
        self.roots.iter().position(|r| r.approx_eq(root, radius))
    }
}

/// The designated maximal Abelian subalgebra of a built-in compact algebra:
/// the diagonal generators for `su(n)`, `<e1>` for `su2`/`so3`.
pub fn standard_torus(alg: &Arc<LieAlgebra>, tol: &Tolerances) -> Result<Subspace> {
    let idx = builtins::torus_indices(alg).ok_or_else(|| {
        Error::unsupported(format!(
            "no standard torus for algebra '{}'; supply one explicitly",
            alg.name()
        ))
    })?;
    let span: Vec<Element> = idx.iter().map(|&k| alg.basis_element(k)).collect();
    let torus = Subspace::real_span(alg, span, tol)?;
    for u in torus.basis_elements() {
        for v in torus.basis_elements() {
            if alg.bracket(&u, &v)?.norm() > tol.base {
                return Err(Error::numerical("designated torus is not Abelian"));
            }
        }
    }
    Ok(torus)
}

/// Simultaneous eigendecomposition of `ad(r)` acting on `g`.
///
/// Preconditions: `g` complex with a designated real form, `r` a complex,
/// Abelian, self-centralizing subspace stable under the conjugation.
pub fn root_decomposition(
    g: &Arc<LieAlgebra>,
    r: &Subspace,
    tol: &Tolerances,
) -> Result<CartanBorelData> {
    if g.field() != Field::Complex {
        return Err(Error::argument("root decomposition requires a complex algebra"));
    }
    if r.dim_complex().is_none() || r.is_zero() {
        return Err(Error::argument(
            "the Cartan candidate must be a nonzero complex subspace",
        ));
    }
    let rank = r.dim_complex().unwrap();
    // Abelian check
    for u in r.basis_elements() {
        for v in r.basis_elements() {
            let br = g.bracket(&u, &v)?;
            if br.norm() > tol.base {
                return Err(Error::precondition(format!(
                    "Cartan candidate is not Abelian (bracket norm {:.3e})",
                    br.norm()
                )));
            }
        }
    }
    // real torus extraction: t = r /\ k
    let k = Subspace::real_form(g, tol)?;
    let torus_t = r.intersect(&k, tol)?;
    if torus_t.dim_real() != rank {
        return Err(Error::precondition(format!(
            "Cartan candidate is not the complexification of a torus of the \
             compact form (real points have dimension {}, rank is {})",
            torus_t.dim_real(),
            rank
        )));
    }
    let torus_elems = torus_t.basis_elements();
    {
        let respan = Subspace::complex_span(g, torus_elems.clone(), tol)?;
        if !respan.equals(r, tol) {
            return Err(Error::precondition(
                "complex span of the torus does not reproduce the Cartan candidate",
            ));
        }
    }

    // sequential refinement
    let d = g.dim();
    let mut spaces: Vec<(CMat, Vec<C>)> = vec![(CMat::identity(d, d), Vec::new())];
    for t in &torus_elems {
        let ad = g.ad_matrix(t)?;
        let ad_scale = ad.norm().max(1.0);
        let mut next = Vec::new();
        for (basis, tuple) in &spaces {
            let restricted = basis.adjoint() * &ad * basis;
            // the refinement subspaces must stay ad-invariant
            let invariance = (&ad * basis - basis * &restricted).norm();
            if invariance > tol.cluster * ad_scale {
                return Err(Error::numerical(format!(
                    "eigenspace refinement lost ad-invariance (residual {invariance:.3e})"
                )));
            }
            let eigs = complex_eigenvalues(&restricted)?;
            let clusters = cluster_eigenvalues(&eigs, tol.cluster);
            let mut captured = 0;
            for (center, multiplicity) in clusters {
                let shifted = &restricted
                    - CMat::from_diagonal(&CVec::from_element(restricted.nrows(), center));
                let local = nullspace_onb_c_abs(&shifted, tol.cluster * ad_scale);
                if local.ncols() != multiplicity {
                    return Err(Error::numerical(format!(
                        "defective eigenstructure: eigenvalue {center} has multiplicity \
                         {multiplicity} but a {}-dimensional eigenspace",
                        local.ncols()
                    )));
                }
                captured += local.ncols();
                let mut new_tuple = tuple.clone();
                new_tuple.push(center);
                next.push((basis * local, new_tuple));
            }
            if captured != restricted.nrows() {
                return Err(Error::numerical(
                    "defective eigenstructure: eigenspaces do not fill the space",
                ));
            }
        }
        spaces = next;
    }

    // classify zero space vs root spaces
    let mut zero_space: Option<CMat> = None;
    let mut raw_roots: Vec<(Vec<C>, CMat)> = Vec::new();
    for (basis, tuple) in spaces {
        if tuple.iter().all(|v| v.norm() <= tol.cluster) {
            if zero_space.is_some() {
                return Err(Error::numerical("multiple zero-eigenvalue components"));
            }
            zero_space = Some(basis);
        } else {
            raw_roots.push((tuple, basis));
        }
    }
    let zero_space = zero_space
        .map(|b| Subspace::from_complex_onb(g, b))
        .unwrap_or_else(|| Subspace::zero(g, crate::subspace::SpanField::Complex));
    if !zero_space.equals(r, tol) {
        return Err(Error::precondition(format!(
            "Cartan candidate is not self-centralizing: joint kernel has complex \
             dimension {:?}, r has {:?}",
            zero_space.dim_complex(),
            r.dim_complex()
        )));
    }

    // express r's internal basis over the torus basis to transport the
    // eigenvalue tuples
    let mut t_mat = CMat::zeros(d, rank);
    for (j, t) in torus_elems.iter().enumerate() {
        t_mat.set_column(j, t.coords());
    }
    let gram = t_mat.adjoint() * &t_mat;
    let gram_inv = gram
        .try_inverse()
        .ok_or_else(|| Error::numerical("torus basis Gram matrix is singular"))?;
    let r_basis = r.basis_elements();

    let mut roots = Vec::new();
    let mut root_spaces = Vec::new();
    for (tuple, basis) in raw_roots {
        let mut values = Vec::with_capacity(rank);
        for rb in &r_basis {
            let gamma = &gram_inv * (t_mat.adjoint() * rb.coords());
            let val: C = gamma
                .iter()
                .zip(&tuple)
                .map(|(c_j, lam)| c_j * lam)
                .sum();
            values.push(val);
        }
        roots.push(Root {
            values,
            torus_values: tuple,
        });
        root_spaces.push(Subspace::from_complex_onb(g, basis));
    }

    // deterministic ordering: positives (under the lex rule) first, by
    // descending lex tuple
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = roots[a].lex_tuple();
        let kb = roots[b].lex_tuple();
        kb.partial_cmp(&ka).unwrap()
    });
    let roots: Vec<Root> = order.iter().map(|&i| roots[i].clone()).collect();
    let root_spaces: Vec<Subspace> = order.iter().map(|&i| root_spaces[i].clone()).collect();

    // completeness and pairing
    let total: usize = root_spaces.iter().map(|s| s.dim_complex().unwrap()).sum();
    if total + rank != d {
        return Err(Error::numerical(format!(
            "root spaces and Cartan do not fill the algebra ({total} + {rank} != {d})"
        )));
    }
    for root in &roots {
        let neg = root.negated();
        if !roots.iter().any(|r2| r2.approx_eq(&neg, tol.cluster)) {
            return Err(Error::numerical("roots do not come in +/- pairs"));
        }
    }

    let data = CartanBorelData {
        algebra: g.clone(),
        torus_t,
        cartan_r: r.clone(),
        roots,
        root_spaces,
        positive: None,
        borel_b: None,
        nilpotent_u: None,
    };
    validate_eigen_residuals(&data, tol)?;
    Ok(data)
}

fn validate_eigen_residuals(data: &CartanBorelData, tol: &Tolerances) -> Result<()> {
    let g = &data.algebra;
    let r_basis = data.cartan_r.basis_elements();
    for (root, space) in data.roots.iter().zip(&data.root_spaces) {
        for x in space.basis_elements() {
            for (h, &alpha_h) in r_basis.iter().zip(&root.values) {
                let lhs = g.bracket(h, &x)?;
                let rhs = x.scale(alpha_h);
                let residual = lhs.sub(&rhs).norm() / x.norm();
                if residual > tol.eigen {
                    return Err(Error::numerical(format!(
                        "eigen residual {residual:.3e} exceeds the bound"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn cluster_eigenvalues(eigs: &[C], radius: f64) -> Vec<(C, usize)> {
    let mut sorted: Vec<C> = eigs.to_vec();
    sorted.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite eigenvalues")
    });
    let mut clusters: Vec<(Vec<C>, C)> = Vec::new();
    for lam in sorted {
        match clusters.last_mut() {
            Some((members, rep)) if (lam - *rep).norm() <= radius => members.push(lam),
            _ => clusters.push((vec![lam], lam)),
        }
    }
    clusters
        .into_iter()
        .map(|(members, _)| {
            let n = members.len();
            let mean = members.iter().sum::<C>() / C::new(n as f64, 0.0);
            (mean, n)
        })
        .collect()
}

/// The default positive system: lexicographic sign of the evaluation tuple
/// on the `i t_j` basis.
pub fn default_positive_system(data: &CartanBorelData, tol: &Tolerances) -> Vec<usize> {
    (0..data.roots.len())
        .filter(|&i| data.roots[i].is_positive(tol.cluster))
        .collect()
}

/// Complement of a positive system: the opposite Borel's choice.
pub fn opposite_positive_system(data: &CartanBorelData, positive: &[usize]) -> Vec<usize> {
    (0..data.roots.len())
        .filter(|i| !positive.contains(i))
        .collect()
}

/// Assemble `b = r (+) u` from a choice of positive roots.
///
/// The choice must contain exactly one of each `+/-` pair and be closed under
/// addition inside the root set.
pub fn build_borel(
    data: &CartanBorelData,
    positive: &[usize],
    tol: &Tolerances,
) -> Result<CartanBorelData> {
    let n_roots = data.roots.len();
    for &i in positive {
        if i >= n_roots {
            return Err(Error::argument(format!("root index {i} out of range")));
        }
    }
    // exactly one of each +/- pair
    for i in 0..n_roots {
        let neg = data.roots[i].negated();
        let j = data
            .find_root(&neg, tol.cluster)
            .ok_or_else(|| Error::numerical("unpaired root"))?;
        let picked = positive.contains(&i) as usize + positive.contains(&j) as usize;
        if picked != 1 {
            return Err(Error::precondition(format!(
                "positive choice must contain exactly one of each +/- pair \
                 (roots {i} and {j}: {picked} chosen)"
            )));
        }
    }
    // closure under addition
    for &i in positive {
        for &j in positive {
            let sum = data.roots[i].plus(&data.roots[j]);
            if let Some(k) = data.find_root(&sum, tol.cluster) {
                if !positive.contains(&k) {
                    return Err(Error::precondition(format!(
                        "positive choice is not closed under addition: \
                         roots {i} + {j} = {k} not chosen"
                    )));
                }
            }
        }
    }

    let g = &data.algebra;
    let mut u_span = Vec::new();
    for &i in positive {
        u_span.extend(data.root_spaces[i].basis_elements());
    }
    let nilpotent_u = if u_span.is_empty() {
        Subspace::zero(g, crate::subspace::SpanField::Complex)
    } else {
        Subspace::complex_span(g, u_span, tol)?
    };
    let borel_b = data.cartan_r.sum(&nilpotent_u, tol)?;

    // structural postconditions
    if !borel_b.is_subalgebra(tol).pass {
        return Err(Error::numerical("assembled Borel is not a subalgebra"));
    }
    let derived = borel_b.bracket_span(&borel_b, tol)?;
    if !derived.equals(&nilpotent_u, tol) {
        return Err(Error::numerical("[b, b] does not reproduce u"));
    }
    if !borel_b.is_solvable(tol)? {
        return Err(Error::numerical("assembled Borel is not solvable"));
    }

    Ok(CartanBorelData {
        algebra: data.algebra.clone(),
        torus_t: data.torus_t.clone(),
        cartan_r: data.cartan_r.clone(),
        roots: data.roots.clone(),
        root_spaces: data.root_spaces.clone(),
        positive: Some(positive.to_vec()),
        borel_b: Some(borel_b),
        nilpotent_u: Some(nilpotent_u),
    })
}

/// Full standard pipeline for a built-in compact algebra: designated torus,
/// complexification, root decomposition, default Borel.
pub fn standard_cartan_borel(
    alg: &Arc<LieAlgebra>,
    tol: &Tolerances,
) -> Result<(Arc<LieAlgebra>, CartanBorelData)> {
    let torus = standard_torus(alg, tol)?;
    let g = alg.complexify()?;
    let r = torus.complexified_in(&g, tol)?;
    let data = root_decomposition(&g, &r, tol)?;
    let positive = default_positive_system(&data, tol);
    let data = build_borel(&data, &positive, tol)?;
    Ok((g, data))
}

/// The same Cartan data with the opposite Borel.
pub fn with_opposite_borel(data: &CartanBorelData, tol: &Tolerances) -> Result<CartanBorelData> {
    let positive = data
        .positive
        .as_ref()
        .ok_or_else(|| Error::argument("no positive system chosen yet"))?;
    let opposite = opposite_positive_system(data, positive);
    build_borel(data, &opposite, tol)
}

// ---------------------------------------------------------------------------
// JSON mirror
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct CartanBorelJson {
    pub algebra: String,
    pub dim: usize,
    pub rank: usize,
    /// Roots as eigenvalue tuples on the internal Cartan basis, `[re, im]`.
    pub roots: Vec<Vec<(f64, f64)>>,
    pub positive: Option<Vec<usize>>,
    pub torus: Vec<Vec<(f64, f64)>>,
    pub cartan: Vec<Vec<(f64, f64)>>,
    pub root_spaces: Vec<Vec<Vec<(f64, f64)>>>,
    pub borel: Option<Vec<Vec<(f64, f64)>>>,
    pub nilpotent: Option<Vec<Vec<(f64, f64)>>>,
}

impl CartanBorelData {
    pub fn to_json_struct(&self) -> CartanBorelJson {
        CartanBorelJson {
            algebra: self.algebra.name().to_string(),
            dim: self.algebra.dim(),
            rank: self.rank(),
            roots: self
                .roots
                .iter()
                .map(|r| r.values.iter().map(|v| (v.re, v.im)).collect())
                .collect(),
            positive: self.positive.clone(),
            torus: self.torus_t.basis_coordinates(),
            cartan: self.cartan_r.basis_coordinates(),
            root_spaces: self
                .root_spaces
                .iter()
                .map(|s| s.basis_coordinates())
                .collect(),
            borel: self.borel_b.as_ref().map(|s| s.basis_coordinates()),
            nilpotent: self.nilpotent_u.as_ref().map(|s| s.basis_coordinates()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr};

    #[test]
    fn standard_tori_of_builtins() {
        let tol = Tolerances::default();
        for (name, dim) in [("su2", 1), ("su3", 2), ("su4", 3), ("so3", 1)] {
            let alg = builtins::by_name(name).unwrap();
            let t = standard_torus(&alg, &tol).unwrap();
            assert_eq!(t.dim_real(), dim, "torus of {name}");
        }
        assert!(matches!(
            standard_torus(&builtins::u1(), &tol),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sl2_root_decomposition_matches_hand_computation() {
        let tol = Tolerances::default();
        let (g, data) = standard_cartan_borel(&builtins::su2(), &tol).unwrap();
        assert_eq!(data.rank(), 1);
        assert_eq!(data.roots().len(), 2);

        // g_alpha = <e2 + i e3> has ad(e1) eigenvalue -2i
        let u = Subspace::complex_span(
            &g,
            vec![Element::from_complex(vec![cr(0.0), cr(1.0), c(0.0, 1.0)])],
            &tol,
        )
        .unwrap();
        let idx = (0..2)
            .find(|&i| data.root_spaces()[i].equals(&u, &tol))
            .expect("root space <e2 + i e3> present");
        let alpha_e1 = data.roots()[idx].torus_values[0];
        assert!((alpha_e1 - c(0.0, -2.0)).norm() < 1e-9);

        // the default positive system must select it: b = <e1, e2 + i e3>
        assert_eq!(data.positive().unwrap(), &[idx]);
        let b = data.borel_b().unwrap();
        assert_eq!(b.dim_complex(), Some(2));
        assert!(b.contains_element(&g.basis_element(0), &tol));
        assert!(data.nilpotent_u().unwrap().equals(&u, &tol));
    }

    #[test]
    fn sl3_has_six_one_dimensional_root_spaces() {
        let tol = Tolerances::default();
        let (_g, data) = standard_cartan_borel(&builtins::by_name("su3").unwrap(), &tol).unwrap();
        assert_eq!(data.roots().len(), 6);
        for s in data.root_spaces() {
            assert_eq!(s.dim_complex(), Some(1));
        }
        assert_eq!(data.borel_b().unwrap().dim_complex(), Some(5));
        assert_eq!(data.nilpotent_u().unwrap().dim_complex(), Some(3));
    }

    #[test]
    fn borel_dimension_identity() {
        // dim_R b = dim_R k + rank
        let tol = Tolerances::default();
        for name in ["su2", "su3", "su4"] {
            let alg = builtins::by_name(name).unwrap();
            let dim_k = alg.dim();
            let (_g, data) = standard_cartan_borel(&alg, &tol).unwrap();
            let b = data.borel_b().unwrap();
            assert_eq!(b.dim_real(), dim_k + data.rank(), "identity for {name}");
        }
    }

    #[test]
    fn non_closed_positive_choice_is_rejected() {
        let tol = Tolerances::default();
        let alg = builtins::by_name("su3").unwrap();
        let torus = standard_torus(&alg, &tol).unwrap();
        let g = alg.complexify().unwrap();
        let r = torus.complexified_in(&g, &tol).unwrap();
        let data = root_decomposition(&g, &r, &tol).unwrap();
        let default = default_positive_system(&data, &tol);
        assert_eq!(default.len(), 3);
        // swap one simple root for its negative while keeping the highest
        // root: breaks additive closure for some pair
        let mut found_bad = false;
        for flip in 0..3 {
            let mut choice = Vec::new();
            for (pos, &i) in default.iter().enumerate() {
                if pos == flip {
                    let neg = data.roots()[i].negated();
                    choice.push(data.find_root(&neg, tol.cluster).unwrap());
                } else {
                    choice.push(i);
                }
            }
            if matches!(build_borel(&data, &choice, &tol), Err(Error::Precondition(_))) {
                found_bad = true;
            }
        }
        assert!(found_bad, "some flipped choice must violate closure");
    }

    #[test]
    fn non_self_centralizing_candidate_is_rejected() {
        let tol = Tolerances::default();
        let g = builtins::by_name("su3").unwrap().complexify().unwrap();
        // a single torus line inside su(3) is Abelian but not self-centralizing
        let r = Subspace::complex_span(&g, vec![g.basis_element(0)], &tol).unwrap();
        assert!(matches!(
            root_decomposition(&g, &r, &tol),
            Err(Error::Precondition(_))
        ));
    }
}
