//! Dynamical Lamb effect for three qubits in a cavity whose frequency is
//! switched suddenly from `omega1` to `omega2`: transition amplitudes,
//! excitation probabilities and conditional entanglement measures in closed
//! form, with an exact-diagonalization oracle that checks them.

pub mod amplitudes;
pub mod entangle;
pub mod error;
pub mod hilbert;
pub mod oracle;
pub mod params;
pub mod perturb;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use params::SystemParams;
