//! Adiabatic quantum training of small neural networks on a classically
//! simulated gate-model register.
//!
//! The crate is organised bottom-up:
//!
//! - [`pauli`]: weighted sums of Pauli strings, the universal Hamiltonian
//!   representation, with dense rendering and decomposition for small registers.
//! - [`encoding`]: rules mapping real variables onto qubits (fractional binary,
//!   ±1 spin, 0/1 projector) and decoding measured basis states.
//! - [`varpoly`]: polynomials over named real variables, used for potentials
//!   and neural-network losses before they are encoded on qubits.
//! - [`schrodinger`]: the momentum-basis ("matrix method") Hamiltonian for a
//!   particle on a ring, Gaussian packets and position densities.
//! - [`engine`]: state-vector evolution (Trotterized split operator or exact
//!   dense exponential), instantaneous spectra and measurement statistics.
//! - [`nn`]: network declarations, symbolic forward passes, loss compilation
//!   and analysis of trained weights.
//! - [`datasets`]: seeded circle, band and 2×2 pixel datasets.
//! - [`classical`]: the sigmoid-relaxed binary network trained with Adam.
//! - [`experiments`]: config-driven runs that write CSV/JSON data files.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`
//! directory.

pub mod classical;
pub mod datasets;
pub mod encoding;
pub mod engine;
mod error;
pub mod experiments;
mod linalg;
pub mod nn;
pub mod pauli;
pub mod rng;
pub mod schrodinger;
pub mod state;
pub mod varpoly;

pub use encoding::{EncodingTable, VariableEncoding};
pub use engine::{AnnealSpec, Hamiltonian, Schedule};
pub use error::{Error, Result};
pub use pauli::{PauliAxis, PauliPolynomial, PauliString};
pub use state::StateVector;
pub use varpoly::VarPolynomial;

pub use num_complex::Complex64;
