//! Dense statevector simulation of rotation/CZ circuits.
//!
//! Basis-state indexing: qubit 0 is the most significant bit of the
//! amplitude index, so on two qubits index 1 is `|01⟩` (qubit 1 set).

mod circuit;
mod observable;
mod state;

pub use circuit::{run_circuit, AngleSource, Circuit, GateOp, Gradients};
pub use observable::ZObservable;
pub use state::{Axis, StateVector, MAX_QUBITS};
