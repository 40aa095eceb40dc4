//! Numeric linear-algebra helpers: SVD-based rank and subspace kernels,
//! realification of complex spaces, complex eigenvalues.
//!
//! Rank decisions are always relative: singular values are kept when they
//! exceed `tol * sigma_max`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C = Complex64;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> C {
    Complex64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// Singular value machinery
// ---------------------------------------------------------------------------

/// Singular values through the Hermitian augmentation `[[0, A], [A^H, 0]]`,
/// whose eigenvalues are `+/- sigma`. nalgebra's direct complex SVD only
/// delivers sqrt(eps)-accurate singular data on some well-conditioned
/// inputs, which is not good enough for the 1e-10 rank cuts used here; the
/// symmetric eigensolver resolves small singular values with linear (not
/// squared) precision.
pub fn singular_values_c(m: &CMat) -> Vec<f64> {
    let (d, k) = (m.nrows(), m.ncols());
    if d == 0 || k == 0 {
        return Vec::new();
    }
    let n = d + k;
    let mut h = CMat::zeros(n, n);
    h.view_mut((0, d), (d, k)).copy_from(m);
    h.view_mut((d, 0), (k, d)).copy_from(&m.adjoint());
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values.truncate(d.min(k));
    values.iter().map(|&x| x.max(0.0)).collect()
}

pub fn singular_values_r(m: &RMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

pub fn rank_from_singulars(sv: &[f64], tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

pub fn rank_c(m: &CMat, tol: f64) -> usize {
    rank_from_singulars(&singular_values_c(m), tol)
}

pub fn rank_r(m: &RMat, tol: f64) -> usize {
    rank_from_singulars(&singular_values_r(m), tol)
}

/// Orthonormal basis with the prescribed rank, by pivoted two-pass modified
/// Gram-Schmidt over the original columns. The output vectors are exact
/// linear combinations of the inputs, so membership residuals of the basis
/// in any enclosing space stay at rounding level regardless of conditioning.
fn pivoted_mgs_c(m: &CMat, rank: usize) -> CMat {
    let d = m.nrows();
    let mut remaining: Vec<CVec> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<CVec> = Vec::with_capacity(rank);
    while basis.len() < rank && !remaining.is_empty() {
        let mut best: Option<(f64, usize, CVec)> = None;
        for (idx, col) in remaining.iter().enumerate() {
            let mut w = col.clone();
            for _pass in 0..2 {
                for q in &basis {
                    let coeff = q.dotc(&w);
                    w -= q * coeff;
                }
            }
            let n = w.norm();
            if best.as_ref().map(|(bn, _, _)| n > *bn).unwrap_or(true) {
                best = Some((n, idx, w));
            }
        }
        let (n, idx, w) = best.expect("remaining is nonempty");
        remaining.swap_remove(idx);
        if n <= 0.0 {
            break;
        }
        basis.push(w / cr(n));
    }
    let mut out = CMat::zeros(d, basis.len());
    for (j, q) in basis.iter().enumerate() {
        out.set_column(j, q);
    }
    out
}

fn pivoted_mgs_r(m: &RMat, rank: usize) -> RMat {
    let d = m.nrows();
    let mut remaining: Vec<RVec> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<RVec> = Vec::with_capacity(rank);
    while basis.len() < rank && !remaining.is_empty() {
        let mut best: Option<(f64, usize, RVec)> = None;
        for (idx, col) in remaining.iter().enumerate() {
            let mut w = col.clone();
            for _pass in 0..2 {
                for q in &basis {
                    let coeff = q.dot(&w);
                    w -= q * coeff;
                }
            }
            let n = w.norm();
            if best.as_ref().map(|(bn, _, _)| n > *bn).unwrap_or(true) {
                best = Some((n, idx, w));
            }
        }
        let (n, idx, w) = best.expect("remaining is nonempty");
        remaining.swap_remove(idx);
        if n <= 0.0 {
            break;
        }
        basis.push(w / n);
    }
    let mut out = RMat::zeros(d, basis.len());
    for (j, q) in basis.iter().enumerate() {
        out.set_column(j, q);
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the (orthonormal)
/// columns of `b` in `C^k`, completed greedily from coordinate directions.
fn orthonormal_complement_c(b: &CMat) -> CMat {
    let k = b.nrows();
    let r = b.ncols();
    let mut cols: Vec<CVec> = (0..r).map(|j| b.column(j).into_owned()).collect();
    let mut complement: Vec<CVec> = Vec::with_capacity(k - r);
    while cols.len() < k {
        let mut best: Option<(f64, CVec)> = None;
        for i in 0..k {
            let mut w = CVec::zeros(k);
            w[i] = cr(1.0);
            for _pass in 0..2 {
                for q in &cols {
                    let coeff = q.dotc(&w);
                    w -= q * coeff;
                }
            }
            let n = w.norm();
            if best.as_ref().map(|(bn, _)| n > *bn).unwrap_or(true) {
                best = Some((n, w));
            }
        }
        let (n, w) = best.expect("k > 0");
        let q = w / cr(n);
        cols.push(q.clone());
        complement.push(q);
    }
    let mut out = CMat::zeros(k, complement.len());
    for (j, q) in complement.iter().enumerate() {
        out.set_column(j, q);
    }
    out
}

fn orthonormal_complement_r(b: &RMat) -> RMat {
    let k = b.nrows();
    let r = b.ncols();
    let mut cols: Vec<RVec> = (0..r).map(|j| b.column(j).into_owned()).collect();
    let mut complement: Vec<RVec> = Vec::with_capacity(k - r);
    while cols.len() < k {
        let mut best: Option<(f64, RVec)> = None;
        for i in 0..k {
            let mut w = RVec::zeros(k);
            w[i] = 1.0;
            for _pass in 0..2 {
                for q in &cols {
                    let coeff = q.dot(&w);
                    w -= q * coeff;
                }
            }
            let n = w.norm();
            if best.as_ref().map(|(bn, _)| n > *bn).unwrap_or(true) {
                best = Some((n, w));
            }
        }
        let (n, w) = best.expect("k > 0");
        let q = w / n;
        cols.push(q.clone());
        complement.push(q);
    }
    let mut out = RMat::zeros(k, complement.len());
    for (j, q) in complement.iter().enumerate() {
        out.set_column(j, q);
    }
    out
}

/// Orthonormal basis of the column space, as matrix columns. The rank comes
/// from the singular spectrum; the basis from pivoted Gram-Schmidt.
pub fn range_onb_c(m: &CMat, tol: f64) -> CMat {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let rank = rank_from_singulars(&singular_values_c(m), tol);
    pivoted_mgs_c(m, rank)
}

pub fn range_onb_r(m: &RMat, tol: f64) -> RMat {
    if m.ncols() == 0 || m.nrows() == 0 {
        return RMat::zeros(m.nrows(), 0);
    }
    let rank = rank_from_singulars(&singular_values_r(m), tol);
    pivoted_mgs_r(m, rank)
}

/// Orthonormal basis of the (right) nullspace `{x : m x = 0}`: the
/// orthogonal complement of the row space.
pub fn nullspace_onb_c(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let row_space = range_onb_c(&m.adjoint(), tol);
    orthonormal_complement_c(&row_space)
}

/// Nullspace with an absolute singular-value threshold; used when the kernel
/// is defined by an absolute eigenvalue-cluster radius rather than a relative
/// rank cut.
pub fn nullspace_onb_c_abs(m: &CMat, abs_tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let rank = singular_values_c(m).iter().filter(|&&s| s > abs_tol).count();
    let row_space = pivoted_mgs_c(&m.adjoint(), rank);
    orthonormal_complement_c(&row_space)
}

pub fn nullspace_onb_r(m: &RMat, tol: f64) -> RMat {
    let n = m.ncols();
    if n == 0 {
        return RMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return RMat::identity(n, n);
    }
    let row_space = range_onb_r(&m.transpose(), tol);
    orthonormal_complement_r(&row_space)
}

// ---------------------------------------------------------------------------
// Realification: C^d as R^(2d), real part stacked over imaginary part
// ---------------------------------------------------------------------------

pub fn realify_vec(v: &CVec) -> RVec {
    let d = v.len();
    RVec::from_fn(2 * d, |i, _| {
        if i < d {
            v[i].re
        } else {
            v[i - d].im
        }
    })
}

pub fn unrealify_vec(v: &RVec) -> CVec {
    let d = v.len() / 2;
    CVec::from_fn(d, |i, _| C::new(v[i], v[i + d]))
}

/// Multiplication by `i` in realified coordinates: `(re, im) -> (-im, re)`.
pub fn realified_mul_i(v: &RVec) -> RVec {
    let d = v.len() / 2;
    RVec::from_fn(2 * d, |i, _| if i < d { -v[i + d] } else { v[i - d] })
}

/// Realify a complex column basis: each complex column `v` contributes the
/// real columns `realify(v)` and `realify(i v)`.
pub fn realify_basis(b: &CMat) -> RMat {
    let (d, k) = (b.nrows(), b.ncols());
    let mut out = RMat::zeros(2 * d, 2 * k);
    for j in 0..k {
        let col: CVec = b.column(j).into_owned();
        out.set_column(2 * j, &realify_vec(&col));
        out.set_column(2 * j + 1, &realified_mul_i(&realify_vec(&col)));
    }
    out
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

/// Relative residual of `v` against the orthonormal column basis `b`:
/// `|v - b b^H v| / |v|`, and `0` for `v = 0`.
pub fn projection_residual_c(b: &CMat, v: &CVec) -> f64 {
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    if b.ncols() == 0 {
        return 1.0;
    }
    let coeffs = b.adjoint() * v;
    let proj = b * coeffs;
    (v - proj).norm() / norm
}

pub fn projection_residual_r(b: &RMat, v: &RVec) -> f64 {
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    if b.ncols() == 0 {
        return 1.0;
    }
    let coeffs = b.transpose() * v;
    let proj = b * coeffs;
    (v - proj).norm() / norm
}

// ---------------------------------------------------------------------------
// Complex eigenvalues
// ---------------------------------------------------------------------------

/// Eigenvalues of a general complex matrix.
///
/// Skew-Hermitian and Hermitian matrices (the adjoint operators of compact
/// forms restricted to orthonormal bases) are routed through the symmetric
/// eigensolver, which is stable where the Francis iteration can stall; the
/// general case falls back to the Schur decomposition.
pub fn complex_eigenvalues(m: &CMat) -> Result<Vec<C>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::argument("eigenvalues of a non-square matrix"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let scale = m.norm().max(1.0);
    let herm_residual = (m - m.adjoint()).norm();
    if herm_residual <= 1e-10 * scale {
        let eig = nalgebra::SymmetricEigen::new(m.clone());
        return Ok(eig.eigenvalues.iter().map(|&x| cr(x)).collect());
    }
    let skew_residual = (m + m.adjoint()).norm();
    if skew_residual <= 1e-10 * scale {
        // i m is Hermitian; eigenvalues of m are -i times its (real) spectrum
        let h = m.map(|z| C::i() * z);
        let eig = nalgebra::SymmetricEigen::new(h);
        return Ok(eig.eigenvalues.iter().map(|&x| c(0.0, -x)).collect());
    }
    let schur = m
        .clone()
        .try_schur(1e-13, 100_000)
        .ok_or_else(|| Error::numerical("Schur iteration did not converge"))?;
    let (_q, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_wide_complex_matrix() {
        // kernel of [1, i] is spanned by (i, 1)/sqrt(2) up to phase
        let m = CMat::from_row_slice(1, 2, &[cr(1.0), c(0.0, 1.0)]);
        let ns = nullspace_onb_c(&m, 1e-12);
        assert_eq!(ns.ncols(), 1);
        let v: CVec = ns.column(0).into_owned();
        assert!((&m * &v).norm() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realify_round_trip_and_i_action() {
        let v = CVec::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.25)]);
        let rv = realify_vec(&v);
        assert_eq!(unrealify_vec(&rv), v);
        let iv = unrealify_vec(&realified_mul_i(&rv));
        for k in 0..2 {
            assert!((iv[k] - C::i() * v[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn skew_matrix_eigenvalues() {
        let m = CMat::from_row_slice(2, 2, &[cr(0.0), cr(-2.0), cr(2.0), cr(0.0)]);
        let mut eigs = complex_eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((eigs[0] - c(0.0, -2.0)).norm() < 1e-10);
        assert!((eigs[1] - c(0.0, 2.0)).norm() < 1e-10);
    }

    #[test]
    fn rank_of_degenerate_matrix() {
        let m = RMat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(rank_r(&m, 1e-10), 1);
    }
}
