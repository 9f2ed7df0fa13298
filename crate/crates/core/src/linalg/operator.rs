use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::DMatrix;

use super::{eigvalsh, max_abs_diff, tol, Ket, Tensor, C64};
use crate::error::{Error, Result};

/// A square complex matrix on a finite-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::Empty("operator"));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    /// Row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            mat: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { C64::from(values[i]) } else { C64::from(0.0) })
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        Self {
            mat: a.amplitudes() * b.amplitudes().adjoint(),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C64::from(0.0), C64::from(1.0));
        Self::from_row_slice(2, &[o, l, l, o]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let o = C64::from(0.0);
        let i = C64::new(0.0, 1.0);
        Self::from_row_slice(2, &[o, -i, i, o]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.mat[(i, j)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { mat: &self.mat * s }
    }

    /// `(X + X†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            mat: (&self.mat + self.mat.adjoint()) * C64::from(0.5),
        }
    }

    /// `max |X − X†|` entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `max |U†U − I|` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        max_abs_diff(&(self.mat.adjoint() * &self.mat), &DMatrix::identity(n, n))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Operator {
        Self {
            mat: &u.mat * &self.mat * u.mat.adjoint(),
        }
    }

    /// Entrywise max-abs difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        max_abs_diff(&self.mat, &other.mat)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |[A, B]|` entrywise.
    pub fn commutator_residual(&self, other: &Operator) -> f64 {
        let ab = &self.mat * &other.mat;
        let ba = &other.mat * &self.mat;
        max_abs_diff(&ab, &ba)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(Operator);

impl DensityOperator {
    /// Validates with the default tolerances.
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerances(op, tol::HERMITIAN, tol::TRACE, tol::PSD)
    }

    pub fn with_tolerances(op: Operator, herm_tol: f64, trace_tol: f64, psd_tol: f64) -> Result<Self> {
        validate(&op, herm_tol, trace_tol, psd_tol)?;
        Ok(Self(op))
    }

    /// Skips validation but symmetrizes away any rounding asymmetry.
    /// Callers must guarantee the input is a density operator up to rounding.
    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        Self(op.hermitian_part())
    }

    pub fn pure(ket: &Ket) -> Self {
        ket.projector()
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Operator::identity(dim).scale(C64::from(1.0 / dim as f64)))
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    /// Re-runs validation at the given tolerances.
    pub fn validate(&self, herm_tol: f64, trace_tol: f64, psd_tol: f64) -> Result<()> {
        validate(&self.0, herm_tol, trace_tol, psd_tol)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.0.matrix().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Deref for DensityOperator {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Self {
        Self(self.0.tensor(&other.0))
    }
}

fn validate(op: &Operator, herm_tol: f64, trace_tol: f64, psd_tol: f64) -> Result<()> {
    let residual = op.hermiticity_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian { residual });
    }
    let tr = op.trace();
    if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
        return Err(Error::BadTrace { trace: tr.re });
    }
    let values = eigvalsh(&op.hermitian_part());
    let min_eigenvalue = values.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -psd_tol {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(())
}
