//! Local (one-factor) actions on bipartite operators without forming Kronecker products.

use nalgebra::DMatrix;

use super::C64;

/// `(A ⊗ B) X` for `X` with `dim(A)·dim(B)` rows.
pub fn kron_left_mul(a: &DMatrix<C64>, b: &DMatrix<C64>, x: &DMatrix<C64>) -> DMatrix<C64> {
    let (da, db) = (a.nrows(), b.nrows());
    assert_eq!(da * db, x.nrows(), "kron_left_mul shape mismatch");
    let cols = x.ncols();
    let mut t = DMatrix::<C64>::zeros(da * db, cols);
    for i in 0..da {
        let block = b * x.rows(i * db, db);
        t.rows_mut(i * db, db).copy_from(&block);
    }
    let mut y = DMatrix::<C64>::zeros(da * db, cols);
    for i in 0..da {
        for k in 0..da {
            let s = a[(i, k)];
            if s == C64::from(0.0) {
                continue;
            }
            let src = t.rows(k * db, db);
            let mut dst = y.rows_mut(i * db, db);
            dst.zip_apply(&src, |d, v| *d += s * v);
        }
    }
    y
}

/// `(A ⊗ B) X (A ⊗ B)†`.
pub fn conjugate_local(x: &DMatrix<C64>, a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let y = kron_left_mul(a, b, x);
    kron_left_mul(a, b, &y.adjoint()).adjoint()
}

/// Applies a linear map to the first factor of an operator on `ℂ^{da} ⊗ ℂ^{db}`.
pub fn map_left_factor(
    x: &DMatrix<C64>,
    da: usize,
    db: usize,
    mut f: impl FnMut(&DMatrix<C64>) -> DMatrix<C64>,
) -> DMatrix<C64> {
    assert_eq!(x.nrows(), da * db, "map_left_factor shape mismatch");
    let mut out = DMatrix::<C64>::zeros(da * db, da * db);
    for b in 0..db {
        for bp in 0..db {
            let block = DMatrix::from_fn(da, da, |i, j| x[(i * db + b, j * db + bp)]);
            let mapped = f(&block);
            for i in 0..da {
                for j in 0..da {
                    out[(i * db + b, j * db + bp)] = mapped[(i, j)];
                }
            }
        }
    }
    out
}

/// Applies a linear map to the second factor of an operator on `ℂ^{da} ⊗ ℂ^{db}`.
pub fn map_right_factor(
    x: &DMatrix<C64>,
    da: usize,
    db: usize,
    mut f: impl FnMut(&DMatrix<C64>) -> DMatrix<C64>,
) -> DMatrix<C64> {
    assert_eq!(x.nrows(), da * db, "map_right_factor shape mismatch");
    let mut out = DMatrix::<C64>::zeros(da * db, da * db);
    for a in 0..da {
        for ap in 0..da {
            let block = x.view((a * db, ap * db), (db, db)).into_owned();
            out.view_mut((a * db, ap * db), (db, db)).copy_from(&f(&block));
        }
    }
    out
}
