use nalgebra::DMatrix;

use super::{tol, DensityOperator, Ket, Operator, C64};
use crate::error::{Error, Result};

/// Hermitian eigendecomposition, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Operator,
}

impl Eigh {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Operator {
        let v = self.vectors.matrix();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| C64::from(x)),
        ));
        Operator::from_matrix_unchecked(v * lambda * v.adjoint())
    }

    /// The eigenvector in column `k` as a ket.
    pub fn vector(&self, k: usize) -> Ket {
        Ket::from_vector_unchecked(self.vectors.matrix().column(k).into_owned())
    }
}

pub fn eigh(h: &Operator) -> Result<Eigh> {
    eigh_with_tol(h, tol::VALIDATION)
}

pub fn eigh_with_tol(h: &Operator, herm_tol: f64) -> Result<Eigh> {
    let residual = h.hermiticity_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian { residual });
    }
    let eig = h.hermitian_part().into_matrix().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh {
        values,
        vectors: Operator::from_matrix_unchecked(vectors),
    })
}

/// Eigenvalues of the Hermitian part, descending. No hermiticity check.
pub fn eigvalsh(h: &Operator) -> Vec<f64> {
    let mut values: Vec<f64> = h
        .hermitian_part()
        .into_matrix()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Shannon entropy in bits of a spectrum, with clamping to `[0, 1]`.
pub(crate) fn spectrum_entropy(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&v| v.min(1.0))
        .filter(|&v| v > tol::ENTROPY_CLAMP)
        .map(|v| -v * v.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy `−Tr ρ log₂ ρ` in bits.
pub fn vn_entropy(rho: &DensityOperator) -> f64 {
    spectrum_entropy(&eigvalsh(rho.as_operator()))
}

/// Entropy of entanglement of a bipartite pure state, in ebits.
pub fn entanglement_entropy(psi: &Ket, shape: [usize; 2]) -> Result<f64> {
    let [da, db] = shape;
    if da == 0 || db == 0 || da * db != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: da * db,
        });
    }
    // Reduced state on the smaller factor; the nonzero spectra agree.
    let m = DMatrix::from_row_slice(da, db, psi.amplitudes().as_slice());
    let reduced = if da <= db { &m * m.adjoint() } else { m.adjoint() * &m };
    Ok(spectrum_entropy(&eigvalsh(&Operator::from_matrix_unchecked(reduced))))
}
