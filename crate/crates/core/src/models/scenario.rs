use num_complex::Complex64 as C64;

use super::holonomy::{verify_holonomy_one_qubit, verify_holonomy_two_qubit, HolonomyReport};
use super::one_qubit::{holonomic_one_qubit_gate, nv_space, one_qubit_hamiltonian, OneQubitModel};
use super::two_qubit::{
    holonomic_two_qubit_gate, two_qubit_computational_labels, two_qubit_hamiltonian,
    two_qubit_space, TwoQubitModel,
};
use super::DEFAULT_STEPS_PER_GATE;
use crate::dynamics::{evolve_lindblad, CollapseChannel, HamiltonianSchedule, TrajectoryResult};
use crate::error::{Error, Result};
use crate::operator::{Operator, StateVector};
use crate::space::HilbertSpace;

#[derive(Clone, Debug)]
pub enum GateModel {
    OneQubit(OneQubitModel),
    TwoQubit(TwoQubitModel),
}

impl GateModel {
    pub fn space(&self) -> HilbertSpace {
        match self {
            GateModel::OneQubit(_) => nv_space(),
            GateModel::TwoQubit(_) => two_qubit_space(),
        }
    }

    pub fn schedule(&self) -> HamiltonianSchedule {
        match self {
            GateModel::OneQubit(m) => one_qubit_hamiltonian(m),
            GateModel::TwoQubit(m) => two_qubit_hamiltonian(m),
        }
    }

    pub fn channels(&self) -> Vec<CollapseChannel> {
        match self {
            GateModel::OneQubit(m) => m.channels().to_vec(),
            GateModel::TwoQubit(m) => m.channels(),
        }
    }

    pub fn duration(&self) -> f64 {
        match self {
            GateModel::OneQubit(m) => m.duration(),
            GateModel::TwoQubit(m) => m.duration(),
        }
    }

    /// Closed-system holonomy checks for this model.
    pub fn holonomy(&self, dt: f64) -> Result<HolonomyReport> {
        match self {
            GateModel::OneQubit(m) => verify_holonomy_one_qubit(m, dt),
            GateModel::TwoQubit(m) => verify_holonomy_two_qubit(m, dt),
        }
    }
}

/// Which state the two-qubit fidelity is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TwoQubitTarget {
    /// The ideal gate applied to the initial state.
    #[default]
    Gate,
    /// Complete transfer into `Psi1`.
    FullTransfer,
}

/// Lower block of the two-qubit gate, basis (|10⟩, |11⟩).
pub(crate) fn two_qubit_ideal_block(vartheta: f64) -> Operator {
    let full = holonomic_two_qubit_gate(vartheta);
    let space = HilbertSpace::new(["10", "11"]).expect("static labels");
    full.restrict(&[2, 3], &space).expect("2x2 block")
}

/// A gate model together with its initial computational state and the
/// ideal gate it should realize.
#[derive(Clone, Debug)]
pub struct GateSpec {
    model: GateModel,
    initial_state: StateVector,
    ideal_gate: Operator,
    computational_basis: Vec<String>,
    target: StateVector,
}

impl GateSpec {
    /// `initial` holds amplitudes over (|0⟩, |1⟩).
    pub fn one_qubit(model: OneQubitModel, initial: &[C64]) -> Result<Self> {
        let comp = HilbertSpace::qubit();
        let initial_state = StateVector::from_slice(&comp, initial)?;
        let ideal_gate = holonomic_one_qubit_gate(model.theta());
        let basis = vec!["0".to_string(), "1".to_string()];
        let ideal_final = ideal_gate.apply(&initial_state)?;
        let target = embed(&nv_space(), &basis, &ideal_final)?;
        Ok(Self {
            model: GateModel::OneQubit(model),
            initial_state,
            ideal_gate,
            computational_basis: basis,
            target,
        })
    }

    /// `initial` holds amplitudes over (|00⟩, |01⟩, |10⟩, |11⟩). Only the
    /// |10⟩, |11⟩ sector is represented in the single-excitation model, so
    /// the first two amplitudes must vanish.
    pub fn two_qubit(
        model: TwoQubitModel,
        initial: &[C64],
        target: TwoQubitTarget,
    ) -> Result<Self> {
        if initial.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: initial.len(),
            });
        }
        if initial[0].norm() > 1e-12 || initial[1].norm() > 1e-12 {
            return Err(Error::InvalidModel(
                "two-qubit initial state must lie in span{|10>, |11>}".into(),
            ));
        }
        let comp = HilbertSpace::new(["10", "11"]).expect("static labels");
        let initial_state = StateVector::from_slice(&comp, &initial[2..])?;
        let ideal_gate = two_qubit_ideal_block(model.vartheta());
        let basis: Vec<String> = two_qubit_computational_labels()
            .iter()
            .map(|s| s.to_string())
            .collect();
        let space = two_qubit_space();
        let target = match target {
            TwoQubitTarget::Gate => embed(&space, &basis, &ideal_gate.apply(&initial_state)?)?,
            TwoQubitTarget::FullTransfer => StateVector::basis(&space, "Psi1")?,
        };
        Ok(Self {
            model: GateModel::TwoQubit(model),
            initial_state,
            ideal_gate,
            computational_basis: basis,
            target,
        })
    }

    pub fn model(&self) -> &GateModel {
        &self.model
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial_state
    }

    pub fn ideal_gate(&self) -> &Operator {
        &self.ideal_gate
    }

    /// Model labels hosting the computational basis, in gate order.
    pub fn computational_basis(&self) -> &[String] {
        &self.computational_basis
    }

    /// Ideal final state embedded in the model space.
    pub fn target(&self) -> &StateVector {
        &self.target
    }

    pub fn embedded_initial(&self) -> StateVector {
        embed(
            &self.model.space(),
            &self.computational_basis,
            &self.initial_state,
        )
        .expect("basis labels belong to the model space")
    }

    /// Gate time divided by [`DEFAULT_STEPS_PER_GATE`].
    pub fn default_dt(&self) -> f64 {
        self.model.duration() / DEFAULT_STEPS_PER_GATE as f64
    }
}

fn embed(space: &HilbertSpace, basis: &[String], comp: &StateVector) -> Result<StateVector> {
    if basis.len() != comp.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: comp.dim(),
        });
    }
    let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
    for (label, a) in basis.iter().zip(comp.amplitudes().iter()) {
        amps[space.index_of(label)?] = *a;
    }
    StateVector::from_slice(space, &amps)
}

/// Evolves the embedded initial state under the model's schedule and
/// channels and scores every recorded state against the ideal final state.
pub fn run_gate_scenario(
    spec: &GateSpec,
    dt: f64,
    record_stride: usize,
) -> Result<TrajectoryResult> {
    let rho0 = spec.embedded_initial().to_density();
    let traj = evolve_lindblad(
        &spec.model.schedule(),
        &rho0,
        &spec.model.channels(),
        dt,
        record_stride,
    )?;
    traj.score(&spec.target)
}
