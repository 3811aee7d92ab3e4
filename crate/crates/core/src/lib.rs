//! Quantum mutual information, classical correlation, quantum discord and
//! weak-measurement super quantum discord for two-qubit states.
//!
//! Measurements always act on the second qubit (`B`); the correlation
//! measures are reported in bits.

pub mod analytic;
pub mod corr;
pub mod error;
pub mod measure;
pub mod qmat;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
