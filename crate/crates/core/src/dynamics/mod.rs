//! Closed- and open-system time evolution.
//!
//! Both propagators discretize the schedule identically: each segment is
//! cut into `ceil(duration / dt)` equal steps and the Hamiltonian is frozen
//! at the step midpoint. Density matrices are vectorized by stacking
//! columns wherever a superoperator appears.

mod lindblad;
mod schedule;
mod superop;
mod unitary;

pub use lindblad::{
    evolve_lindblad, lindblad_rhs, CollapseChannel, Trajectory, TrajectoryResult,
    INVARIANT_ABORT_TOL,
};
pub use schedule::{Generator, HamiltonianSchedule, Segment, Step, TimeGenerator};
pub use superop::{schedule_superoperator, superoperator_exp, unvec, vec, Superoperator};
pub use unitary::{propagate_unitary, unitary_path, UnitaryPath};
