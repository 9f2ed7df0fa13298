//! Schur-Weyl decomposition of `n` qubits.
//!
//! `(ℂ²)^{⊗n} = ⊕_j ℍ_{jR} ⊗ ℍ_{jP}` where collective SU(2) acts irreducibly on
//! the `2j+1`-dimensional rotation factor and S_n on the `c_j`-dimensional
//! permutation factor. The multiplicity index is realized as a coupling path
//! (the sequence of intermediate total spins when qubits are added one at a
//! time), and coupled states are built with Condon-Shortley Clebsch-Gordan
//! coefficients.
//!
//! Schur coordinates: sectors ascending in `j`; inside a sector the index is
//! `r * (2j+1) + (m + j)` with `r` the lexicographic rank of the path.

mod basis;
mod multiplicity;
mod paths;
pub(crate) mod sectors;
mod spin;
pub(crate) mod twirl;

pub use basis::{schur_transform, SchurBasis, Sector, MAX_DENSE_QUBITS};
pub use multiplicity::{
    dimension_identity, log2_multiplicity, log2_weight, multiplicity, multiplicity_ballot, valid_spins,
};
pub use paths::{coupling_paths, CouplingPath};
pub use sectors::{bipartite_sector_decompose, SectorBlock, SectorDecomposition};
pub use spin::{collective_rotation, collective_spin, SpinLabel};
pub use twirl::{
    bipartite_sn_twirl_brute, bipartite_twirl_fast, sn_twirl_fast, su2_collective_twirl_fast, Ssr,
};
