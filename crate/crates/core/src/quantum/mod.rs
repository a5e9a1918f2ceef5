//! Exact pure-state simulation of up to four qubits.
//!
//! Everything here is a value type: operations return new states and only
//! consume randomness from the stream passed in.

mod measure;
mod ops;
mod povm;
mod purity;
mod state;

pub use measure::{
    bell_measure, measure_and_remove, measure_projective, outcome_probabilities, tau_basis,
    MeasRecord, ProjBasis,
};
pub use ops::{apply_unitary, rotation_u, UnitaryOp};
pub use povm::{measure_povm, usd_povm, Operator, Povm};
pub use purity::is_product;
pub use state::{
    prepare_named, states_equal_up_to_phase, Amp, Basis, BellState, Bb84State, StateLabel,
    StateVector, MAX_QUBITS, TOL,
};
