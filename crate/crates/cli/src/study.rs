//! Parameter sweeps and calibration fits over configured scenarios.

use std::fmt::Write as _;

use holosim_core::models::calibration::{
    calibrate_coupling, calibrate_nv_channels, two_qubit_max_fidelity, CalibrationReport,
    CouplingSetup, OneQubitSetup, ReferencePoint,
};
use holosim_core::models::{GateModel, NvRates, TwoQubitTarget};
use holosim_core::C64;
use rayon::prelude::*;

use crate::config::{with_parameter, Scenario, TargetKind};
use crate::run::{simulate, Outcome};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub scenario: String,
    pub value: f64,
    pub outcome: Outcome,
}

/// Runs every scenario at every grid value; rows are ordered by scenario,
/// then by grid position.
pub fn sweep(
    scenarios: &[Scenario],
    parameter: &str,
    grid: &[f64],
    dt_override: Option<f64>,
) -> Result<Vec<SweepRow>, CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    let jobs = scenarios
        .iter()
        .flat_map(|s| grid.iter().map(move |&v| (s, v)))
        .map(|(s, v)| with_parameter(&s.raw, parameter, v).map(|p| (s.name.clone(), v, p)))
        .collect::<Result<Vec<_>, _>>()?;
    jobs.into_par_iter()
        .map(|(scenario, value, s)| {
            let outcome = simulate(&s, dt_override)?;
            Ok(SweepRow {
                scenario,
                value,
                outcome,
            })
        })
        .collect()
}

pub fn sweep_csv(parameter: &str, rows: &[SweepRow]) -> String {
    let mut out =
        format!("scenario,{parameter},max_fidelity,argmax_time_us,final_fidelity,gate_error\n");
    for r in rows {
        let o = &r.outcome;
        writeln!(
            out,
            "{},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}",
            r.scenario,
            r.value,
            o.report.max_fidelity,
            o.report.argmax_time,
            o.report.final_fidelity,
            o.holonomy.gate_error
        )
        .unwrap();
    }
    out
}

fn rate(s: &Scenario, key: &str) -> Result<f64, CliError> {
    match s.raw.rates.get(key) {
        Some(v) => v.eval().map_err(CliError::Usage),
        None => Ok(0.0),
    }
}

/// Reference points and shared settings of the one-qubit scenarios that
/// carry a `reference_fidelity`.
pub fn channel_calibration_inputs(
    scenarios: &[Scenario],
) -> Result<Option<(Vec<ReferencePoint>, OneQubitSetup)>, CliError> {
    let mut points = Vec::new();
    let mut setup: Option<OneQubitSetup> = None;
    for s in scenarios {
        let (GateModel::OneQubit(m), Some(reference)) = (s.spec.model(), s.reference_fidelity)
        else {
            continue;
        };
        let env = m.envelope();
        let this = OneQubitSetup {
            rates: NvRates {
                gamma_y: rate(s, "gamma_y")?,
                gamma_x: rate(s, "gamma_x")?,
                gamma_z: rate(s, "gamma_z")?,
            },
            shape: env.shape(),
            peak: env.peak(),
            steps_per_gate: (env.duration() / s.step()).round().max(1.0) as usize,
        };
        match &setup {
            None => setup = Some(this),
            Some(first) if first.rates == this.rates
                && first.shape == this.shape
                && first.peak == this.peak
                && first.steps_per_gate == this.steps_per_gate => {}
            Some(_) => {
                return Err(CliError::Usage(format!(
                    "scenario `{}` uses different rates, pulse or step than the first calibration scenario",
                    s.name
                )))
            }
        }
        let a = s.spec.initial_state().amplitudes();
        points.push(ReferencePoint {
            name: s.name.clone(),
            theta: m.theta(),
            initial: [a[0], a[1]],
            reference,
        });
    }
    Ok(setup.map(|st| (points, st)))
}

pub fn calibrate_channels(
    scenarios: &[Scenario],
    band: f64,
) -> Result<Option<(Vec<ReferencePoint>, CalibrationReport)>, CliError> {
    let Some((points, setup)) = channel_calibration_inputs(scenarios)? else {
        return Ok(None);
    };
    let report = calibrate_nv_channels(&points, &setup, band)
        .map_err(|e| CliError::simulation("calibration", e))?;
    Ok(Some((points, report)))
}

pub fn calibration_csv(points: &[ReferencePoint], report: &CalibrationReport) -> String {
    let mut out = String::from("relaxation,ancilla,dephasing");
    for p in points {
        write!(out, ",F_{}", p.name).unwrap();
    }
    out.push_str(",max_deviation,band_violations,selected\n");
    for (i, s) in report.scores.iter().enumerate() {
        let a = s.assignment;
        write!(out, "{:?},{:?},{:?}", a.relaxation, a.ancilla, a.dephasing).unwrap();
        for f in &s.fidelities {
            write!(out, ",{f:.14e}").unwrap();
        }
        writeln!(
            out,
            ",{:.14e},{},{}",
            s.max_deviation,
            s.band_violations,
            i == report.selected
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Debug)]
pub struct CouplingFit {
    pub scenario: String,
    pub reference: f64,
    pub lambda: f64,
    pub max_fidelity: f64,
}

/// Fits λ for each two-qubit scenario carrying a `reference_fidelity`.
pub fn calibrate_couplings(
    scenarios: &[Scenario],
    lo: f64,
    hi: f64,
) -> Result<Vec<CouplingFit>, CliError> {
    scenarios
        .iter()
        .filter_map(|s| match (s.spec.model(), s.reference_fidelity) {
            (GateModel::TwoQubit(m), Some(r)) => Some((s, m, r)),
            _ => None,
        })
        .map(|(s, m, reference)| {
            let a = s.spec.initial_state().amplitudes();
            let zero = C64::new(0.0, 0.0);
            let setup = CouplingSetup {
                vartheta: m.vartheta(),
                kappa: m.kappa(),
                convention: m.convention(),
                initial: [zero, zero, a[0], a[1]],
                target: match s.raw.target.unwrap_or_default() {
                    TargetKind::Gate => TwoQubitTarget::Gate,
                    TargetKind::FullTransfer => TwoQubitTarget::FullTransfer,
                },
                steps_per_gate: (m.duration() / s.step()).round().max(1.0) as usize,
            };
            let wrap = |e| CliError::simulation(&s.name, e);
            let lambda = calibrate_coupling(&setup, reference, lo, hi).map_err(wrap)?;
            let max_fidelity = two_qubit_max_fidelity(&setup, lambda).map_err(wrap)?;
            Ok(CouplingFit {
                scenario: s.name.clone(),
                reference,
                lambda,
                max_fidelity,
            })
        })
        .collect()
}

pub fn coupling_csv(fits: &[CouplingFit]) -> String {
    let mut out = String::from("scenario,reference_fidelity,lambda,lambda_over_2pi,max_fidelity\n");
    for f in fits {
        writeln!(
            out,
            "{},{:.14e},{:.14e},{:.14e},{:.14e}",
            f.scenario,
            f.reference,
            f.lambda,
            f.lambda / (2.0 * std::f64::consts::PI),
            f.max_fidelity
        )
        .unwrap();
    }
    out
}
