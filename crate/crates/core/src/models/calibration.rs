//! Calibration sweeps for the under-determined parts of the models.
//!
//! The jump operators of the three NV channels are chosen from a small
//! candidate grid by comparing simulated maximum fidelities against
//! reference values. The two-qubit coupling strength is fitted to a
//! reference fidelity by bisection.

use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::one_qubit::{nv_space, NvRates, OneQubitModel};
use super::pulse::{EnvelopeShape, PulseEnvelope};
use super::scenario::{run_gate_scenario, GateSpec, TwoQubitTarget};
use super::two_qubit::{RatioConvention, TwoQubitModel};
use crate::dynamics::CollapseChannel;
use crate::error::{Error, Result};
use crate::operator::Operator;

/// Candidate lowering operators for the A⁻ and S⁻ channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JumpOp {
    /// `|0⟩⟨1|`
    QubitLowering,
    /// `|0⟩⟨e|`
    AncillaToZero,
    /// `|1⟩⟨e|`
    AncillaToOne,
    /// `(|0⟩ + |1⟩)⟨e| / √2`
    AncillaToPlus,
}

/// Candidate dephasing operators for the S^z channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DephasingOp {
    /// `|0⟩⟨0| − |1⟩⟨1|`
    QubitZ,
    /// `|e⟩⟨e|`
    AncillaProjector,
    /// `|0⟩⟨0| − |e⟩⟨e|`
    ZeroMinusAncilla,
    /// `|1⟩⟨1| − |e⟩⟨e|`
    OneMinusAncilla,
}

/// A ket-bra term `coefficient · |ket⟩⟨bra|`.
pub type Term = (&'static str, &'static str, f64);

impl JumpOp {
    pub const ALL: [JumpOp; 4] = [
        JumpOp::QubitLowering,
        JumpOp::AncillaToZero,
        JumpOp::AncillaToOne,
        JumpOp::AncillaToPlus,
    ];

    pub fn terms(self) -> Vec<Term> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            JumpOp::QubitLowering => vec![("0", "1", 1.0)],
            JumpOp::AncillaToZero => vec![("0", "e", 1.0)],
            JumpOp::AncillaToOne => vec![("1", "e", 1.0)],
            JumpOp::AncillaToPlus => vec![("0", "e", r), ("1", "e", r)],
        }
    }

    fn short(self) -> &'static str {
        match self {
            JumpOp::QubitLowering => "|0><1|",
            JumpOp::AncillaToZero => "|0><e|",
            JumpOp::AncillaToOne => "|1><e|",
            JumpOp::AncillaToPlus => "|+><e|",
        }
    }
}

impl DephasingOp {
    pub const ALL: [DephasingOp; 4] = [
        DephasingOp::QubitZ,
        DephasingOp::AncillaProjector,
        DephasingOp::ZeroMinusAncilla,
        DephasingOp::OneMinusAncilla,
    ];

    pub fn terms(self) -> Vec<Term> {
        match self {
            DephasingOp::QubitZ => vec![("0", "0", 1.0), ("1", "1", -1.0)],
            DephasingOp::AncillaProjector => vec![("e", "e", 1.0)],
            DephasingOp::ZeroMinusAncilla => vec![("0", "0", 1.0), ("e", "e", -1.0)],
            DephasingOp::OneMinusAncilla => vec![("1", "1", 1.0), ("e", "e", -1.0)],
        }
    }

    fn short(self) -> &'static str {
        match self {
            DephasingOp::QubitZ => "|0><0|-|1><1|",
            DephasingOp::AncillaProjector => "|e><e|",
            DephasingOp::ZeroMinusAncilla => "|0><0|-|e><e|",
            DephasingOp::OneMinusAncilla => "|1><1|-|e><e|",
        }
    }
}

/// Sum of ket-bra terms on the NV space.
pub fn operator_from_terms(terms: &[Term]) -> Result<Operator> {
    let s = nv_space();
    let mut op = Operator::zeros(&s);
    for (ket, bra, coef) in terms {
        op = &op + &Operator::ket_bra(&s, ket, bra)?.scale(C64::new(*coef, 0.0));
    }
    Ok(op)
}

/// Operator choice for the (γ_y, A⁻), (γ_x, S⁻), (γ_z, S^z) channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelAssignment {
    pub relaxation: JumpOp,
    pub ancilla: JumpOp,
    pub dephasing: DephasingOp,
}

impl Default for ChannelAssignment {
    fn default() -> Self {
        Self {
            relaxation: JumpOp::QubitLowering,
            ancilla: JumpOp::AncillaToZero,
            dephasing: DephasingOp::QubitZ,
        }
    }
}

impl ChannelAssignment {
    /// Channels labelled `gamma_y`, `gamma_x`, `gamma_z`.
    pub fn channels(&self, rates: &NvRates) -> Result<Vec<CollapseChannel>> {
        Ok(vec![
            CollapseChannel::new(
                "gamma_y",
                operator_from_terms(&self.relaxation.terms())?,
                rates.gamma_y,
            )?,
            CollapseChannel::new(
                "gamma_x",
                operator_from_terms(&self.ancilla.terms())?,
                rates.gamma_x,
            )?,
            CollapseChannel::new(
                "gamma_z",
                operator_from_terms(&self.dephasing.terms())?,
                rates.gamma_z,
            )?,
        ])
    }
}

impl fmt::Display for ChannelAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A-={} S-={} Sz={}",
            self.relaxation.short(),
            self.ancilla.short(),
            self.dephasing.short()
        )
    }
}

/// Every combination of the candidate operators, 64 in total.
pub fn candidate_grid() -> Vec<ChannelAssignment> {
    let mut grid = Vec::with_capacity(64);
    for relaxation in JumpOp::ALL {
        for ancilla in JumpOp::ALL {
            for dephasing in DephasingOp::ALL {
                grid.push(ChannelAssignment {
                    relaxation,
                    ancilla,
                    dephasing,
                });
            }
        }
    }
    grid
}

/// A one-qubit scenario with its reference maximum fidelity.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePoint {
    pub name: String,
    pub theta: f64,
    pub initial: [C64; 2],
    pub reference: f64,
}

#[derive(Clone, Debug)]
pub struct CandidateScore {
    pub assignment: ChannelAssignment,
    pub fidelities: Vec<f64>,
    /// `max |F − F_ref|` over the reference points.
    pub max_deviation: f64,
    /// Points with `F < F_ref − band` or `F > 1`.
    pub band_violations: usize,
}

#[derive(Clone, Debug)]
pub struct CalibrationReport {
    /// Scores in grid order.
    pub scores: Vec<CandidateScore>,
    pub selected: usize,
}

impl CalibrationReport {
    pub fn best(&self) -> &CandidateScore {
        &self.scores[self.selected]
    }
}

/// Simulation settings shared by every calibration run.
#[derive(Clone, Copy, Debug)]
pub struct OneQubitSetup {
    pub rates: NvRates,
    pub shape: EnvelopeShape,
    pub peak: f64,
    pub steps_per_gate: usize,
}

/// Maximum fidelities of `points` under one operator assignment.
pub fn score_assignment(
    assignment: ChannelAssignment,
    points: &[ReferencePoint],
    setup: &OneQubitSetup,
    band: f64,
) -> Result<CandidateScore> {
    let channels = assignment.channels(&setup.rates)?;
    let envelope = PulseEnvelope::pi_pulse(setup.shape, setup.peak)?;
    let mut fidelities = Vec::with_capacity(points.len());
    for p in points {
        let model = OneQubitModel::new(p.theta, envelope, channels.clone())?;
        let spec = GateSpec::one_qubit(model, &p.initial)?;
        let dt = envelope.duration() / setup.steps_per_gate as f64;
        fidelities.push(run_gate_scenario(&spec, dt, 1)?.max_fidelity);
    }
    let max_deviation = fidelities
        .iter()
        .zip(points)
        .map(|(f, p)| (f - p.reference).abs())
        .fold(0.0, f64::max);
    let band_violations = fidelities
        .iter()
        .zip(points)
        .filter(|(f, p)| **f < p.reference - band || **f > 1.0 + 1e-9)
        .count();
    Ok(CandidateScore {
        assignment,
        fidelities,
        max_deviation,
        band_violations,
    })
}

/// Scores the full grid and selects the assignment with the fewest band
/// violations, breaking ties by the smallest maximum deviation and then by
/// grid order.
pub fn calibrate_nv_channels(
    points: &[ReferencePoint],
    setup: &OneQubitSetup,
    band: f64,
) -> Result<CalibrationReport> {
    if points.is_empty() {
        return Err(Error::InvalidModel(
            "calibration needs at least one reference point".into(),
        ));
    }
    let scores = candidate_grid()
        .into_par_iter()
        .map(|a| score_assignment(a, points, setup, band))
        .collect::<Result<Vec<_>>>()?;
    let selected = scores
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.band_violations
                .cmp(&b.band_violations)
                .then(a.max_deviation.total_cmp(&b.max_deviation))
        })
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    Ok(CalibrationReport { scores, selected })
}

/// Two-qubit scenario used when fitting the coupling strength.
#[derive(Clone, Copy, Debug)]
pub struct CouplingSetup {
    pub vartheta: f64,
    pub kappa: f64,
    pub convention: RatioConvention,
    pub initial: [C64; 4],
    pub target: TwoQubitTarget,
    pub steps_per_gate: usize,
}

pub fn two_qubit_max_fidelity(setup: &CouplingSetup, lambda: f64) -> Result<f64> {
    let model = TwoQubitModel::new(setup.vartheta, lambda, setup.kappa, setup.convention)?;
    let spec = GateSpec::two_qubit(model, &setup.initial, setup.target)?;
    let dt = spec.model().duration() / setup.steps_per_gate as f64;
    Ok(run_gate_scenario(&spec, dt, 1)?.max_fidelity)
}

/// λ in `[lo, hi]` at which the maximum fidelity equals `reference`,
/// found by bisection on log λ.
pub fn calibrate_coupling(setup: &CouplingSetup, reference: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidModel(format!(
            "invalid coupling bracket [{lo}, {hi}]"
        )));
    }
    let f = |lambda: f64| two_qubit_max_fidelity(setup, lambda).map(|v| v - reference);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (fa, fb) = (f(lo)?, f(hi)?);
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidModel(format!(
            "reference fidelity {reference} is not bracketed by lambda in [{lo}, {hi}]"
        )));
    }
    let rising = fb > fa;
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid.exp())?;
        if (fm < 0.0) == rising {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let grid = candidate_grid();
        assert_eq!(grid.len(), 64);
        assert!(grid.contains(&ChannelAssignment::default()));
        let unique: std::collections::HashSet<_> = grid.iter().collect();
        assert_eq!(unique.len(), 64);
    }

    #[test]
    fn default_assignment_matches_default_channels() {
        let rates = NvRates::default();
        let a = ChannelAssignment::default().channels(&rates).unwrap();
        let b = crate::models::default_nv_channels(&rates).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coupling_fit_hits_reference() {
        let setup = CouplingSetup {
            vartheta: std::f64::consts::PI / 4.0,
            kappa: crate::two_pi_mhz(0.056),
            convention: RatioConvention::Amplitude,
            initial: [
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            target: TwoQubitTarget::Gate,
            steps_per_gate: 400,
        };
        let lambda = calibrate_coupling(&setup, 0.999, 1.0, 1e4).unwrap();
        let f = two_qubit_max_fidelity(&setup, lambda).unwrap();
        assert!((f - 0.999).abs() < 1e-8, "{f}");
        assert!(calibrate_coupling(&setup, 0.2, 1.0, 1e4).is_err());
    }
}
