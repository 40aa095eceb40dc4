//! Built-in compact algebras with exact structure constants.
//!
//! `su2` uses the basis `(e1, e2, e3)` with `[e1,e2] = 2 e3`,
//! `[e2,e3] = 2 e1`, `[e3,e1] = 2 e2`. Higher `su(n)` bases are derived from
//! exact commutators of anti-Hermitian matrices: the diagonal generators
//! `i(E_mm - E_{m+1,m+1})` come first (they span the standard torus),
//! followed by `E_jk - E_kj` and `i(E_jk + E_kj)` for `j < k`.

use std::sync::Arc;

use crate::algebra::{Field, LieAlgebra};
use crate::error::{Error, Result};
use crate::exact::{exact_commutator, exact_zeros, gauss_int, gzero, solve_exact, ExactMat, GaussRat};

use num::Zero;

/// Look up a built-in algebra: `su2`, `su3`, `su4`, `so3`, `u1`.
pub fn by_name(name: &str) -> Result<Arc<LieAlgebra>> {
    match name {
        "su2" => Ok(su2()),
        "su3" => Ok(su_n(3)),
        "su4" => Ok(su_n(4)),
        "so3" => Ok(so3()),
        "u1" => Ok(u1()),
        other => Err(Error::unsupported(format!(
            "unknown built-in algebra '{other}' (available: su2, su3, su4, so3, u1)"
        ))),
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["su2", "su3", "su4", "so3", "u1"];

/// Indices of the designated maximal Abelian subalgebra, when the algebra is
/// a built-in compact one.
pub fn torus_indices(alg: &LieAlgebra) -> Option<Vec<usize>> {
    match alg.name() {
        "su2" | "so3" => Some(vec![0]),
        "su3" => Some(vec![0, 1]),
        "su4" => Some(vec![0, 1, 2]),
        _ => None,
    }
}

pub fn su2() -> Arc<LieAlgebra> {
    LieAlgebra::from_exact_table(
        "su2",
        Field::Real,
        vec!["e1".into(), "e2".into(), "e3".into()],
        vec![
            (0, 1, vec![(2, gauss_int(2, 0))]),
            (1, 2, vec![(0, gauss_int(2, 0))]),
            (0, 2, vec![(1, gauss_int(-2, 0))]),
        ],
    )
}

pub fn so3() -> Arc<LieAlgebra> {
    LieAlgebra::from_exact_table(
        "so3",
        Field::Real,
        vec!["e1".into(), "e2".into(), "e3".into()],
        vec![
            (0, 1, vec![(2, gauss_int(1, 0))]),
            (1, 2, vec![(0, gauss_int(1, 0))]),
            (0, 2, vec![(1, gauss_int(-1, 0))]),
        ],
    )
}

/// The Abelian line; its generator models a circle factor `d/dt`.
pub fn u1() -> Arc<LieAlgebra> {
    LieAlgebra::from_exact_table("u1", Field::Real, vec!["dt".into()], vec![])
}

fn su_n(n: usize) -> Arc<LieAlgebra> {
    let (names, matrices) = su_n_basis(n);
    let dim = matrices.len();
    debug_assert_eq!(dim, n * n - 1);

    // Flatten basis matrices into the columns of an exact (n^2 x dim) system.
    let mut system = exact_zeros(n * n, dim);
    for (b, mat) in matrices.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                system[r * n + c][b] = mat[r][c].clone();
            }
        }
    }

    let mut entries = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let comm = exact_commutator(&matrices[i], &matrices[j]);
            let rhs: Vec<GaussRat> = (0..n * n)
                .map(|f| comm[f / n][f % n].clone())
                .collect();
            let coords = solve_exact(&system, &rhs)
                .expect("su(n) commutators expand exactly in the basis");
            let row: Vec<(usize, GaussRat)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .inspect(|(_, v)| {
                    debug_assert!(v.im.is_zero(), "real algebra with real constants")
                })
                .collect();
            if !row.is_empty() {
                entries.push((i, j, row));
            }
        }
    }
    LieAlgebra::from_exact_table(format!("su{n}"), Field::Real, names, entries)
}

fn su_n_basis(n: usize) -> (Vec<String>, Vec<ExactMat>) {
    let mut names = Vec::new();
    let mut mats = Vec::new();
    let unit = |r: usize, c: usize, v: GaussRat| -> ExactMat {
        let mut m = exact_zeros(n, n);
        m[r][c] = v;
        m
    };
    let add = |a: &ExactMat, b: &ExactMat| -> ExactMat {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| x.clone() + y.clone())
                    .collect()
            })
            .collect()
    };
    // torus: i(E_mm - E_{m+1,m+1})
    for m in 0..n - 1 {
        names.push(format!("t{}", m + 1));
        mats.push(add(
            &unit(m, m, gauss_int(0, 1)),
            &unit(m + 1, m + 1, gauss_int(0, -1)),
        ));
    }
    // off-diagonal pairs
    for j in 0..n {
        for k in (j + 1)..n {
            names.push(format!("a{}{}", j + 1, k + 1));
            mats.push(add(&unit(j, k, gauss_int(1, 0)), &unit(k, j, gauss_int(-1, 0))));
            names.push(format!("s{}{}", j + 1, k + 1));
            mats.push(add(&unit(j, k, gauss_int(0, 1)), &unit(k, j, gauss_int(0, 1))));
        }
    }
    let _ = gzero();
    (names, mats)
}
