//! Transversality conditions (I) and (II).
//!
//! A morphism of the Cartan subgroup is encoded by a complex `q x l` matrix
//! `M`. Its realification `A` interleaves `[Re | -Im]` column pairs; `B`
//! drops the first two columns. The even case (`q = 2l`) asks for
//! `det A != 0`; the odd case (`q = 2l - 1`) asks for full ranks
//! `rank A = q` and `rank B = q - 1`.
//!
//! `oracle_kernel_check` is an independent brute-force route: it assembles
//! the underlying homogeneous real system straight from `M` and reduces it by
//! Gaussian elimination, never touching the SVD path used by the rank checks.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, rank_from_singulars, singular_values_r, CMat, RMat, C};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct MorphismSpec {
    m: CMat,
}

impl MorphismSpec {
    /// Wrap a `q x l` matrix, enforcing the shape invariant `q in {2l, 2l-1}`.
    pub fn new(m: CMat) -> Result<Self> {
        let (q, l) = (m.nrows(), m.ncols());
        if l == 0 || (q != 2 * l && q + 1 != 2 * l) {
            return Err(Error::argument(format!(
                "morphism matrix must be (2l x l) or ((2l-1) x l), got {q} x {l}"
            )));
        }
        Ok(MorphismSpec { m })
    }

    pub fn from_rows(q: usize, l: usize, entries: &[C]) -> Result<Self> {
        if entries.len() != q * l {
            return Err(Error::argument(format!(
                "expected {} entries for a {q} x {l} matrix, got {}",
                q * l,
                entries.len()
            )));
        }
        Self::new(CMat::from_row_slice(q, l, entries))
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn q(&self) -> usize {
        self.m.nrows()
    }

    pub fn l(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_even_case(&self) -> bool {
        self.q() % 2 == 0
    }

    /// `r` with `rank = 2r` (even) or `rank = 2r + 1` (odd).
    pub fn r(&self) -> usize {
        if self.is_even_case() {
            self.l()
        } else {
            self.l() - 1
        }
    }
}

/// Parameter count `l` for a group of rank `q`.
pub fn parameter_count_for_rank(q: usize) -> usize {
    if q % 2 == 0 {
        q / 2
    } else {
        (q + 1) / 2
    }
}

/// Gaussian random morphism spec of the proper shape for rank `q`.
pub fn random_morphism<R: Rng>(q: usize, rng: &mut R) -> MorphismSpec {
    let l = parameter_count_for_rank(q);
    let entries: Vec<C> = (0..q * l)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    MorphismSpec::from_rows(q, l, &entries).expect("shape is valid by construction")
}

#[derive(Debug, Clone)]
pub struct TransversalityMatrices {
    /// `q x 2l`: columns `2j, 2j+1` are `Re M[:,j]`, `-Im M[:,j]`.
    pub a: RMat,
    /// `q x (2l - 2)`: `a` with the first two columns removed.
    pub b: RMat,
}

pub fn build_matrices(spec: &MorphismSpec) -> TransversalityMatrices {
    let (q, l) = (spec.q(), spec.l());
    let mut a = RMat::zeros(q, 2 * l);
    for j in 0..l {
        for i in 0..q {
            a[(i, 2 * j)] = spec.m[(i, j)].re;
            a[(i, 2 * j + 1)] = -spec.m[(i, j)].im;
        }
    }
    let b = a.columns(2, 2 * l - 2).into_owned();
    TransversalityMatrices { a, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    I,
    II,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub pass: bool,
    /// The decision quantity sits within a factor of 10 of the threshold;
    /// the verdict is fragile.
    pub near_degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<f64>,
    /// `|det A| / prod of row norms` for condition I.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values_a: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values_b: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_b: Option<usize>,
    /// Oracle: dimension of the solution space of `Re(M z) = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_kernel_dim: Option<usize>,
    /// Oracle, odd case: solution-space dimension with `z_1 = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_kernel_dim: Option<usize>,
}

impl ConditionReport {
    fn blank(condition: Condition) -> Self {
        ConditionReport {
            condition,
            pass: false,
            near_degenerate: false,
            determinant: None,
            det_margin: None,
            singular_values_a: None,
            singular_values_b: None,
            rank_a: None,
            rank_b: None,
            full_kernel_dim: None,
            restricted_kernel_dim: None,
        }
    }
}

/// Condition (I), even case: `det A != 0` against a row-norm-scaled
/// threshold.
pub fn check_condition_i(spec: &MorphismSpec, tol: &Tolerances) -> Result<ConditionReport> {
    if !spec.is_even_case() {
        return Err(Error::WrongCondition(format!(
            "condition I applies to the even case q = 2l, got q = {}",
            spec.q()
        )));
    }
    let mats = build_matrices(spec);
    let det = mats.a.determinant();
    let row_norm_product: f64 = (0..mats.a.nrows())
        .map(|i| mats.a.row(i).norm())
        .product();
    let margin = if row_norm_product > 0.0 {
        det.abs() / row_norm_product
    } else {
        0.0
    };
    let mut report = ConditionReport::blank(Condition::I);
    report.pass = margin > tol.base;
    report.near_degenerate = tol.is_near_degenerate(margin);
    report.determinant = Some(det);
    report.det_margin = Some(margin);
    report.singular_values_a = Some(singular_values_r(&mats.a));
    Ok(report)
}

/// Condition (II), odd case: `rank A = 2r + 1` and `rank B = 2r`.
pub fn check_condition_ii(spec: &MorphismSpec, tol: &Tolerances) -> Result<ConditionReport> {
    if spec.is_even_case() {
        return Err(Error::WrongCondition(format!(
            "condition II applies to the odd case q = 2l - 1, got q = {}",
            spec.q()
        )));
    }
    let mats = build_matrices(spec);
    let (q, r) = (spec.q(), spec.r());
    let sv_a = singular_values_r(&mats.a);
    let sv_b = singular_values_r(&mats.b);
    let rank_a = rank_from_singulars(&sv_a, tol.base);
    let rank_b = rank_from_singulars(&sv_b, tol.base);

    let margin_a = critical_ratio(&sv_a, q);
    let margin_b = if 2 * r == 0 {
        None
    } else {
        Some(critical_ratio(&sv_b, 2 * r))
    };
    let mut report = ConditionReport::blank(Condition::II);
    report.pass = rank_a == q && rank_b == 2 * r;
    report.near_degenerate = tol.is_near_degenerate(margin_a)
        || margin_b.is_some_and(|m| tol.is_near_degenerate(m));
    report.singular_values_a = Some(sv_a);
    report.singular_values_b = Some(sv_b);
    report.rank_a = Some(rank_a);
    report.rank_b = Some(rank_b);
    Ok(report)
}

/// Dispatch on the parity of the shape.
pub fn check_conditions(spec: &MorphismSpec, tol: &Tolerances) -> Result<ConditionReport> {
    if spec.is_even_case() {
        check_condition_i(spec, tol)
    } else {
        check_condition_ii(spec, tol)
    }
}

/// Ratio of the `needed`-th singular value to the largest: the margin by
/// which the matrix achieves rank `needed`.
fn critical_ratio(sv: &[f64], needed: usize) -> f64 {
    let smax = sv.first().copied().unwrap_or(0.0);
    if needed == 0 {
        return 1.0;
    }
    if smax <= 0.0 {
        return 0.0;
    }
    sv.get(needed - 1).copied().unwrap_or(0.0) / smax
}

/// Independent brute-force oracle for the transversality conditions.
///
/// Solves `Re(M z) = 0` (and its `z_1 = 0` restriction in the odd case) by
/// Gaussian elimination on the real system written directly from `M`, then
/// compares the kernel dimensions against the statement of the conditions.
pub fn oracle_kernel_check(spec: &MorphismSpec, tol: &Tolerances) -> ConditionReport {
    let (q, l) = (spec.q(), spec.l());
    // variables (x_1, y_1, ..., x_l, y_l); row k: sum_j Re(m_kj) x_j - Im(m_kj) y_j
    let full_rows: Vec<Vec<f64>> = (0..q)
        .map(|k| {
            (0..l)
                .flat_map(|j| [spec.m[(k, j)].re, -spec.m[(k, j)].im])
                .collect()
        })
        .collect();
    let (full_nullity, full_margin) = eliminate_nullity(full_rows, 2 * l, tol.base);

    let mut report = ConditionReport::blank(if spec.is_even_case() {
        Condition::I
    } else {
        Condition::II
    });
    report.full_kernel_dim = Some(full_nullity);
    let mut margins = vec![full_margin];
    if spec.is_even_case() {
        report.pass = full_nullity == 0;
    } else {
        let restricted_rows: Vec<Vec<f64>> = (0..q)
            .map(|k| {
                (1..l)
                    .flat_map(|j| [spec.m[(k, j)].re, -spec.m[(k, j)].im])
                    .collect()
            })
            .collect();
        let (restricted_nullity, restricted_margin) =
            eliminate_nullity(restricted_rows, 2 * (l - 1), tol.base);
        report.restricted_kernel_dim = Some(restricted_nullity);
        report.pass = restricted_nullity == 0 && full_nullity == 1;
        margins.push(restricted_margin);
    }
    report.near_degenerate = margins
        .into_iter()
        .any(|m| tol.is_near_degenerate(m));
    report
}

/// Row reduction with partial pivoting; returns the kernel dimension and the
/// smallest pivot-decision margin encountered (relative to the largest
/// entry).
fn eliminate_nullity(mut rows: Vec<Vec<f64>>, ncols: usize, tol: f64) -> (usize, f64) {
    if ncols == 0 {
        return (0, 1.0);
    }
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    if scale <= 0.0 {
        return (ncols, 1.0);
    }
    let threshold = tol * scale;
    let mut rank = 0;
    let mut margin = f64::INFINITY;
    let nrows = rows.len();
    for col in 0..ncols {
        let pivot = (rank..nrows)
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap());
        let pivot = match pivot {
            Some(p) => p,
            None => break,
        };
        let pval = rows[pivot][col].abs();
        margin = margin.min(pval / scale);
        if pval <= threshold {
            continue; // column has no usable pivot: contributes to the kernel
        }
        rows.swap(rank, pivot);
        let head = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / head[col];
            if f != 0.0 {
                for j in col..ncols {
                    row[j] -= f * head[j];
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    (ncols - rank, if margin.is_finite() { margin } else { 1.0 })
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------

/// `{ "q": q, "l": l, "M": [[re, im], ...] }`, row major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismSpecJson {
    pub q: usize,
    pub l: usize,
    #[serde(rename = "M")]
    pub m: Vec<(f64, f64)>,
}

impl MorphismSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        let spec: MorphismSpecJson = serde_json::from_str(json)?;
        let entries: Vec<C> = spec.m.iter().map(|&(re, im)| c(re, im)).collect();
        MorphismSpec::from_rows(spec.q, spec.l, &entries)
    }

    pub fn to_json_struct(&self) -> MorphismSpecJson {
        MorphismSpecJson {
            q: self.q(),
            l: self.l(),
            m: self
                .m
                .row_iter()
                .flat_map(|row| row.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>())
                .collect(),
        }
    }
}
