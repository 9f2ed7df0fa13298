//! Group representations, the twirl superoperator, channel covariance and
//! U(1) charge dephasing.
//!
//! A twirl maps `ρ ↦ |G|⁻¹ Σ_g T(g) ρ T(g)†`. A channel `𝒪` is covariant when
//! `𝒪[T ρ T†] = T 𝒪[ρ] T†` for every group element; composing any channel
//! between two twirls yields a covariant one.

mod channel;
mod charge;
mod rep;
mod twirl;

pub use channel::{is_g_covariant, probe_states, sandwich, QuantumChannel};
pub use charge::{u1_twirl, ChargeObservable};
pub use rep::{permutations_lex, sn_permutation_rep, FiniteGroupRep, MAX_DENSE_DIM, MAX_GROUP_ORDER};
pub use twirl::{invariance_residual, is_g_invariant_state, twirl_finite, twirl_finite_operator};
