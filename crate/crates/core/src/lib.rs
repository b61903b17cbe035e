//! Repeated generalized Bell-state-measurement teleportation over a
//! non-maximally entangled resource `cos(chi)|00> + sin(chi)|11>`.
//!
//! The three-qubit state is kept linear in the unknown amplitudes `(a, b)`,
//! so every measurement basis, branch probability and residual is exact and
//! computed without knowing the state being sent.
//!
//! - [`state`]: kets, the linear family, Pauli corrections.
//! - [`basis`]: matched bases and outcome classification.
//! - [`engine`]: outcome-tree enumeration and Monte Carlo sampling.
//! - [`formulas`]: closed-form success probabilities.
//! - [`maf`]: Haar-averaged fidelity and the security identity.
//! - [`verify`]: cross-checks against the printed tables and formulas.

pub mod basis;
pub mod engine;
pub mod error;
pub mod exec;
pub mod formulas;
pub mod maf;
pub mod state;
pub mod tables;
pub mod verify;

pub use basis::{classify, matched_basis, me_bell_basis, Outcome, PairBasis};
pub use engine::{
    enumerate_tree, monte_carlo, sample_run, success_sweep, AttemptPlan, BranchRecord, BranchStatus, Estimate,
    OutcomeTree, Strategy,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use formulas::{chi_from_concurrence, closed_form_success, concurrence, ClosedFormVariant};
pub use maf::{average_fidelity, bob_pauli_mixture, eavesdropper_overlap, maf_sweep, DensityMatrix2, MafPlan};
pub use state::{initial_family, InfoState, LinearFamilyState, PauliCorrection, Qubit, QubitPair, ResourceSpec};
pub use verify::{run_verification, VerifyReport};
