//! Pulse-level simulation of non-adiabatic holonomic quantum gates on
//! nitrogen-vacancy electron spins.
//!
//! The crate is layered bottom-up:
//!
//! * [`space`], [`operator`], [`expm`], [`eigen`]: dense complex linear
//!   algebra over small labeled Hilbert spaces.
//! * [`dynamics`]: Schrödinger and Lindblad time evolution under piecewise
//!   time-dependent Hamiltonians, plus a Liouvillian-exponential oracle.
//! * [`metrics`]: state fidelity, phase-insensitive gate distance and
//!   populations.
//! * [`models`]: the one-qubit V-system and the two-qubit cavity-mediated
//!   gate models, holonomy-condition checks and calibration sweeps.
//!
//! Units: angular frequencies in rad/µs, times in µs.

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod expm;
pub mod metrics;
pub mod models;
pub mod operator;
pub mod space;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operator::{DensityMatrix, Operator, StateVector};
pub use space::HilbertSpace;

/// Angular frequency of `f` MHz in rad/µs.
pub fn two_pi_mhz(f: f64) -> f64 {
    2.0 * std::f64::consts::PI * f
}
