//! Entanglement constrained by a superselection rule.
//!
//! The constrained entanglement of `ρ` equals a standard measure evaluated on
//! the locally twirled state `𝒢ᵃ⊗𝒢ᵇ[ρ]`. Here the measure is the entropy of
//! entanglement after a local total-`J²` measurement, which is well defined
//! whenever every sector's relevant factor is pure.

mod bell;
mod closed;
mod numeric;

pub use bell::{bell_ensemble, chi_state, max_ns_state, phi_state, BellEnsembleState};
pub use closed::{
    asymptotics_table, constrained_entanglement_bell_closed, constrained_entanglement_bell_su2_closed,
    sector_weights, weighted_sector_sum, AsymptoticsRow, EntanglementReport, Method, SectorWeight,
};
pub use numeric::{constrained_entanglement_numeric, TwirlPath, PURITY_TOL};
