//! Register-level circuit plans and their synthesis.

mod builder;
mod counts;
mod json;
mod plan;
mod synth;
mod two_level;

pub use counts::{clifford_t_estimate, gate_counts, qubit_count_modified, qubit_count_original, GateCounts, StepCount};
pub use json::PLAN_FORMAT_VERSION;
pub use plan::{ceil_log2, complete_unitary, CircuitPlan, MultiRegisterUnitary, RegId, Register, SparseUnitary, Step};
pub use synth::{
    pqc_assignment, synth_pqc, synth_pqc_coupling, synth_pqc_premap, synth_schur, synth_schur_coupling,
    synth_schur_log_ancilla, synth_schur_premap, synth_state_prep,
};
pub use two_level::{diagonal_bound, reconstruct, two_level_decompose, TwoLevel, UNITARY_TOL};
