use num_complex::Complex64 as C64;

use super::one_qubit::{holonomic_one_qubit_gate, one_qubit_hamiltonian, OneQubitModel};
use super::scenario::two_qubit_ideal_block;
use super::two_qubit::{two_qubit_hamiltonian, TwoQubitModel};
use crate::dynamics::{unitary_path, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::metrics::phase_overlap_defect;
use crate::operator::Operator;
use crate::space::HilbertSpace;

/// Minimum number of sample times for the parallel-transport check.
const MIN_SAMPLES: usize = 100;

/// Closed-system checks of the two holonomy conditions and the resulting gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyReport {
    /// Frobenius norm of `P(τ) − P(0)` for the computational projector.
    pub cyclicity_error: f64,
    /// `max |⟨φ_k(t)|H(t)|φ_l(t)⟩|` over the sampled times.
    pub parallel_transport_max: f64,
    /// Phase-insensitive distance of the projected propagator to the ideal gate.
    pub gate_error: f64,
}

impl HolonomyReport {
    pub fn worst(&self) -> f64 {
        self.cyclicity_error
            .max(self.parallel_transport_max)
            .max(self.gate_error)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() < tol
    }
}

/// Checks cyclicity and parallel transport of `span{|k⟩ : k ∈ subspace}`
/// and scores the projected propagator against `ideal`, whose basis is
/// `subspace` in the given order.
pub fn verify_holonomy(
    sched: &HamiltonianSchedule,
    subspace: &[usize],
    ideal: &Operator,
    dt: f64,
) -> Result<HolonomyReport> {
    if ideal.dim() != subspace.len() {
        return Err(Error::DimensionMismatch {
            expected: subspace.len(),
            found: ideal.dim(),
        });
    }
    let n_steps = sched.steps(dt)?.len();
    let stride = (n_steps / MIN_SAMPLES).max(1);
    let path = unitary_path(sched, dt, stride)?;

    let projector = |u: &Operator| {
        let d = u.dim();
        let mut p = nalgebra::DMatrix::<C64>::zeros(d, d);
        for &k in subspace {
            let col = u.matrix().column(k);
            p += col * col.adjoint();
        }
        p
    };
    let first = path.propagators.first().expect("path starts at identity");
    let last = path
        .propagators
        .last()
        .expect("path ends at the final time");
    let cyclicity_error = (projector(last) - projector(first)).norm();

    let mut parallel_transport_max = 0.0_f64;
    for (t, u) in path.times.iter().zip(&path.propagators) {
        let h = sched.hamiltonian_at(*t);
        let rotated = u.matrix().adjoint() * h.matrix() * u.matrix();
        for &k in subspace {
            for &l in subspace {
                parallel_transport_max = parallel_transport_max.max(rotated[(k, l)].norm());
            }
        }
    }

    let block_space = HilbertSpace::numbered(subspace.len());
    let block = last.restrict(subspace, &block_space)?;
    let ideal = Operator::new(block_space, ideal.matrix().clone())?;
    let gate_error = phase_overlap_defect(&block, &ideal);

    Ok(HolonomyReport {
        cyclicity_error,
        parallel_transport_max,
        gate_error,
    })
}

pub fn verify_holonomy_one_qubit(m: &OneQubitModel, dt: f64) -> Result<HolonomyReport> {
    verify_holonomy(
        &one_qubit_hamiltonian(m),
        &[0, 1],
        &holonomic_one_qubit_gate(m.theta()),
        dt,
    )
}

/// Checks the `{Psi2, Psi1}` subspace hosting |10⟩ and |11⟩.
pub fn verify_holonomy_two_qubit(m: &TwoQubitModel, dt: f64) -> Result<HolonomyReport> {
    verify_holonomy(
        &two_qubit_hamiltonian(m),
        &[2, 1],
        &two_qubit_ideal_block(m.vartheta()),
        dt,
    )
}
