//! Entanglement constrained by generalized superselection rules.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: kets, operators, density operators, partial traces, entropies.
//! * [`groups`]: finite group representations, the twirl superoperator,
//!   channel covariance, state invariance and U(1) charge dephasing.
//! * [`schur`]: the Schur-Weyl decomposition of `n` qubits into sectors
//!   `ℍ_{jR} ⊗ ℍ_{jP}`, and sector-wise S_n / collective SU(2) twirls.
//! * [`entanglement`]: constrained entanglement of Bell-pair ensembles in
//!   closed form and by brute force.
//! * [`random`]: seeded random states, unitaries and channels.

pub mod entanglement;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod random;
pub mod schur;

pub use error::{Error, Result};
