//! Dense complex linear algebra with quantum-information semantics.
//!
//! Index convention throughout: in a tensor product the left factor is the
//! slower-varying index, so `|a⟩ ⊗ |b⟩` lives at index `a * dim_b + b`.

mod eigen;
mod ket;
mod local;
mod operator;
mod shape;

pub use eigen::{eigh, eigh_with_tol, eigvalsh, entanglement_entropy, vn_entropy, Eigh};
pub use ket::Ket;
pub use local::{conjugate_local, kron_left_mul, map_left_factor, map_right_factor};
pub use operator::{DensityOperator, Operator};
pub use shape::{partial_trace, partial_trace_operator, SubsystemPermute, SubsystemShape};

pub use num_complex::Complex64 as C64;

/// Default tolerances.
pub mod tol {
    /// Squared-norm tolerance for kets.
    pub const KET_NORM: f64 = 1e-12;
    /// Hermiticity tolerance for density operators.
    pub const HERMITIAN: f64 = 1e-12;
    /// Unit-trace tolerance for density operators.
    pub const TRACE: f64 = 1e-12;
    /// Smallest admissible eigenvalue of a density operator is `-PSD`.
    pub const PSD: f64 = 1e-10;
    /// Generic validation tolerance (unitarity, trace preservation, eigh input).
    pub const VALIDATION: f64 = 1e-10;
    /// Generic comparison tolerance between two computed results.
    pub const COMPARISON: f64 = 1e-9;
    /// Eigenvalues at or below this are treated as zero in entropies.
    pub const ENTROPY_CLAMP: f64 = 1e-10;
}

/// Kronecker product, left operand slower-varying.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

/// `a ⊗ b`.
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// `x^{⊗n}` for `n ≥ 1`.
pub fn tensor_power<T: Tensor + Clone>(x: &T, n: usize) -> T {
    assert!(n >= 1, "tensor_power requires n >= 1");
    let mut out = x.clone();
    for _ in 1..n {
        out = out.tensor(x);
    }
    out
}

/// Entrywise max-abs difference of two equally shaped matrices.
pub(crate) fn max_abs_diff(a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
