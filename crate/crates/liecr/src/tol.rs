//! Tolerance policy.
//!
//! Every rank, residual and pass/fail decision in the crate goes through a
//! single base tolerance (default `1e-10`). The individual thresholds are
//! fixed multiples of the base so that overriding the base rescales the whole
//! policy coherently.

/// Bundle of numerical thresholds derived from one base tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// The base relative tolerance. Rank decisions keep singular values
    /// `> base * sigma_max`; subspace membership residuals must stay below
    /// `base` relative to the vector norm.
    pub base: f64,
    /// Jacobi identity residual bound (`base / 100`).
    pub jacobi: f64,
    /// Root-space eigen-residual bound `|[h,x] - a(h) x| <= eigen * |x|`
    /// (`base * 10`).
    pub eigen: f64,
    /// Eigenvalue clustering radius for the simultaneous diagonalization
    /// (`base * 100`).
    pub cluster: f64,
    /// Residual bound for the common phase `lambda` in the sampled
    /// transversality test (`base * 100`).
    pub lambda: f64,
    /// Tight bound for exact-by-construction identities such as the Iwasawa
    /// reconstruction or sphere-point normalization (`base / 100`).
    pub tight: f64,
    /// Decision quantities within a factor of `near_factor` of the base
    /// tolerance are flagged near-degenerate.
    pub near_factor: f64,
}

pub const DEFAULT_BASE_TOLERANCE: f64 = 1e-10;

impl Tolerances {
    pub fn from_base(base: f64) -> Self {
        Tolerances {
            base,
            jacobi: base / 100.0,
            eigen: base * 10.0,
            cluster: base * 100.0,
            lambda: base * 100.0,
            tight: base / 100.0,
            near_factor: 10.0,
        }
    }

    /// True when a relative decision quantity sits close enough to the base
    /// threshold that the verdict should be treated as fragile.
    pub fn is_near_degenerate(&self, quantity: f64) -> bool {
        quantity > self.base / self.near_factor && quantity < self.base * self.near_factor
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::from_base(DEFAULT_BASE_TOLERANCE)
    }
}
