//! Exact Gaussian-rational arithmetic.
//!
//! Built-in algebras keep their structure constants as complex numbers with
//! `BigRational` components so that algebraic identities (antisymmetry,
//! Jacobi) evaluate to exactly zero. User-supplied algebras stay in floating
//! point and never touch this module.

use num::complex::Complex;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use num_complex::Complex64;

pub type Rat = BigRational;
pub type GaussRat = Complex<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussRat {
    Complex::new(rat(re_n, re_d), rat(im_n, im_d))
}

pub fn gauss_int(re: i64, im: i64) -> GaussRat {
    gauss(re, 1, im, 1)
}

pub fn gzero() -> GaussRat {
    Complex::new(Rat::zero(), Rat::zero())
}

pub fn to_c64(x: &GaussRat) -> Complex64 {
    Complex64::new(
        x.re.to_f64().expect("rational out of f64 range"),
        x.im.to_f64().expect("rational out of f64 range"),
    )
}

/// Dense exact matrix, row major.
pub type ExactMat = Vec<Vec<GaussRat>>;

pub fn exact_zeros(rows: usize, cols: usize) -> ExactMat {
    vec![vec![gzero(); cols]; rows]
}

pub fn exact_mul(a: &ExactMat, b: &ExactMat) -> ExactMat {
    let (m, k) = (a.len(), b.len());
    let n = b[0].len();
    let mut out = exact_zeros(m, n);
    for i in 0..m {
        for p in 0..k {
            if a[i][p].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[p][j].is_zero() {
                    out[i][j] = out[i][j].clone() + a[i][p].clone() * b[p][j].clone();
                }
            }
        }
    }
    out
}

pub fn exact_commutator(a: &ExactMat, b: &ExactMat) -> ExactMat {
    let ab = exact_mul(a, b);
    let ba = exact_mul(b, a);
    ab.into_iter()
        .zip(ba)
        .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// Solve the (possibly overdetermined, exactly consistent) linear system
/// `A x = b` over the Gaussian rationals. Returns `None` when the system is
/// inconsistent or the solution is not unique.
pub fn solve_exact(a: &ExactMat, b: &[GaussRat]) -> Option<Vec<GaussRat>> {
    let m = a.len();
    if m == 0 || m != b.len() {
        return None;
    }
    let n = a[0].len();
    // augmented matrix
    let mut aug: ExactMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_row_of_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let pivot = (row..m).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(row, pivot);
        let p = aug[row][col].clone();
        for j in col..=n {
            aug[row][j] = aug[row][j].clone() / p.clone();
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in col..=n {
                    aug[r][j] = aug[r][j].clone() - f.clone() * aug[row][j].clone();
                }
            }
        }
        pivot_row_of_col[col] = row;
        row += 1;
        if row == m {
            break;
        }
    }
    if pivot_row_of_col.iter().any(|&r| r == usize::MAX) {
        return None; // rank deficient: no unique solution
    }
    // remaining rows must be identically zero for consistency
    for r in row..m {
        if !aug[r][n].is_zero() {
            return None;
        }
    }
    Some((0..n).map(|c| aug[pivot_row_of_col[c]][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        // (1+i) x + y = 3+i ; x - y = i  =>  with x = 1, y = 2 - ... solve directly
        let a = vec![
            vec![gauss_int(1, 1), gauss_int(1, 0)],
            vec![gauss_int(1, 0), gauss_int(-1, 0)],
        ];
        let x = vec![gauss_int(1, 0), gauss_int(2, 0)];
        let b: Vec<GaussRat> = (0..2)
            .map(|i| a[i][0].clone() * x[0].clone() + a[i][1].clone() * x[1].clone())
            .collect();
        let sol = solve_exact(&a, &b).unwrap();
        assert_eq!(sol, x);
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![gauss_int(1, 0)], vec![gauss_int(1, 0)]];
        let b = vec![gauss_int(1, 0), gauss_int(2, 0)];
        assert!(solve_exact(&a, &b).is_none());
    }

    #[test]
    fn overdetermined_consistent() {
        let a = vec![
            vec![gauss_int(1, 0)],
            vec![gauss_int(0, 2)],
            vec![gauss_int(3, 0)],
        ];
        let x = gauss(1, 2, 0, 1);
        let b: Vec<GaussRat> = a.iter().map(|r| r[0].clone() * x.clone()).collect();
        let sol = solve_exact(&a, &b).unwrap();
        assert_eq!(sol[0], x);
    }

    #[test]
    fn commutator_of_pauli_like_matrices() {
        // [E12, E21] = E11 - E22
        let e12 = vec![
            vec![gzero(), gauss_int(1, 0)],
            vec![gzero(), gzero()],
        ];
        let e21 = vec![
            vec![gzero(), gzero()],
            vec![gauss_int(1, 0), gzero()],
        ];
        let c = exact_commutator(&e12, &e21);
        assert_eq!(c[0][0], gauss_int(1, 0));
        assert_eq!(c[1][1], gauss_int(-1, 0));
        assert!(c[0][1].is_zero() && c[1][0].is_zero());
    }
}
