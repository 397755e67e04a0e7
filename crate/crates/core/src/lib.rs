//! Exact amplitude-level simulation of entanglement swapping with a
//! linear-optics Bell-state analyzer that identifies Ψ⁻ and Ψ⁺.
//!
//! The crate is layered bottom-up:
//!
//! - [`fock`]: sparse bosonic Fock states and linear mode maps.
//! - [`optics`]: beam splitters, PBSs, rotators, wave plates, delay and loss.
//! - [`experiment`]: the two-pair source, the full setup, the eight-detector
//!   coincidence logic, exact class probabilities and seeded sampling.
//! - [`analysis`]: correlation coefficients, CHSH values with errors, delay
//!   scans and overlap calibration.
//! - [`cli`]: the `swapsim` batch front end (config parsing and CSV output).
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod optics;

pub use error::{Error, Result};
