//! Gaussian channel algebra and the hybrid analog teleportation / direct
//! transmission (HTDT) protocol.
//!
//! - [`gaussian`]: states, maps, physicality, symplectic spectra,
//!   logarithmic negativity.
//! - [`protocol`]: the encode / transmit / decode pipeline, closed-form
//!   noise of the protocol and its baselines, optimization over the encoding
//!   gain, and a Monte-Carlo moment oracle.
//! - [`fidelity`]: coherent-state codebook fidelities.
//! - [`distribution`]: entanglement distribution geometry and sweeps.
//! - [`report`]: CSV tables; [`cli`]: the `htdt` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distribution;
pub mod error;
pub mod fidelity;
pub mod gaussian;
pub mod protocol;
pub mod report;

pub use error::{Error, Result};
