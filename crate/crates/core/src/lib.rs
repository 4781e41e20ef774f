//! Entanglability of N-qubit thermal spin states under Bell-basis unitaries.
//!
//! Dense matrices are an oracle for small N; the `spectral`, `durcirac` and
//! `bounds` modules work in closed form and scale to very large N.

pub mod bounds;
pub mod constants;
pub mod dense;
pub mod durcirac;
mod error;
pub mod logmath;
pub mod majorization;
pub mod spectral;
pub mod states;

pub use dense::{BellCircuit, BipartiteSplit, CircuitKind, DenseHermitian, Permutation};
pub use durcirac::{BellDiagonalState, DurCiracState, MixingOperation, PptVerdict};
pub use error::{Error, Result};
pub use states::{EpsilonMode, PhysicalParams, ThermalSpec};
