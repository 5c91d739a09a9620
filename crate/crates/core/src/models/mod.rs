//! Gate models: the driven V-system of one NV spin and the
//! cavity-mediated single-excitation model of two NV spins.

pub mod calibration;
mod holonomy;
mod one_qubit;
mod pulse;
mod scenario;
mod two_qubit;

pub use holonomy::{
    verify_holonomy, verify_holonomy_one_qubit, verify_holonomy_two_qubit, HolonomyReport,
};
pub use one_qubit::{
    bright_dark, bright_state_hamiltonian, default_nv_channels, dressed_eigenstates,
    holonomic_one_qubit_gate, nv_space, one_qubit_hamiltonian, v_system_hamiltonian, DressedStates,
    NvRates, OneQubitModel,
};
pub use pulse::{EnvelopeShape, PulseEnvelope};
pub use scenario::{run_gate_scenario, GateModel, GateSpec, TwoQubitTarget};
pub use two_qubit::{
    cavity_decay_channel, holonomic_two_qubit_gate, two_qubit_computational_labels,
    two_qubit_hamiltonian, two_qubit_space, RatioConvention, TwoQubitModel,
};

/// Default integration step as a fraction of the gate duration.
pub const DEFAULT_STEPS_PER_GATE: usize = 2000;
