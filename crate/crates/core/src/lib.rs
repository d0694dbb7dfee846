//! Fault-injection harness for five-qubit-code syndrome extraction.
//!
//! The crate simulates the extraction network exactly on a dense state vector
//! (5 data qubits plus four 4-qubit syndrome registers), injects one fault at a
//! time at every location of the network, and checks what each correction
//! protocol leaves behind.

pub mod ancilla;
pub mod cli;
pub mod code5;
pub mod error;
pub mod faults;
pub mod network;
pub mod pauli;
pub mod protocol;
pub mod report;
pub mod statevector;
pub mod unitary;
pub mod verify;

pub use error::{Error, Result};
pub use pauli::{PauliKind, QubitError};
pub use statevector::StateVector;
