//! Running scenarios and writing their artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use holosim_core::dynamics::TrajectoryResult;
use holosim_core::metrics::FidelityReport;
use holosim_core::models::{run_gate_scenario, HolonomyReport};
use serde::Serialize;

use crate::config::Scenario;
use crate::CliError;

/// A finished simulation of one scenario.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub gate: String,
    pub dt: f64,
    pub result: TrajectoryResult,
    pub report: FidelityReport,
    pub holonomy: HolonomyReport,
}

impl Outcome {
    pub fn steps(&self) -> usize {
        self.result.trajectory.steps
    }
}

/// Integrates the scenario and runs the closed-system holonomy checks.
/// `dt_override` takes precedence over the configured step.
pub fn simulate(s: &Scenario, dt_override: Option<f64>) -> Result<Outcome, CliError> {
    let dt = dt_override.unwrap_or_else(|| s.step());
    let wrap = |e| CliError::simulation(&s.name, e);
    let result = run_gate_scenario(&s.spec, dt, s.record_stride).map_err(wrap)?;
    let holonomy = s.spec.model().holonomy(dt).map_err(wrap)?;
    let report = FidelityReport::from_result(&result);
    Ok(Outcome {
        name: s.name.clone(),
        gate: s.gate.to_string(),
        dt,
        result,
        report,
        holonomy,
    })
}

/// `time_us,fidelity,pop_<label>...`, one row per recorded state.
pub fn trace_csv(o: &Outcome) -> String {
    let traj = &o.result.trajectory;
    let labels = traj.final_state.space().labels();
    let mut out = String::from("time_us,fidelity");
    for l in labels {
        write!(out, ",pop_{l}").unwrap();
    }
    out.push('\n');
    for ((t, f), rho) in traj.times.iter().zip(&o.result.fidelity).zip(&traj.states) {
        write!(out, "{t:.14e},{f:.14e}").unwrap();
        for p in rho.diagonal() {
            write!(out, ",{p:.14e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct HolonomyJson {
    cyclicity_error: f64,
    parallel_transport_max: f64,
    gate_error: f64,
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    name: &'a str,
    gate: &'a str,
    dt_us: f64,
    steps: usize,
    recorded_states: usize,
    max_fidelity: f64,
    max_fidelity_percent: String,
    argmax_time_us: f64,
    final_fidelity: f64,
    gate_error: f64,
    holonomy: HolonomyJson,
    populations_at_max: BTreeMap<&'a str, f64>,
}

pub fn summary_json(o: &Outcome) -> String {
    let s = SummaryJson {
        name: &o.name,
        gate: &o.gate,
        dt_us: o.dt,
        steps: o.steps(),
        recorded_states: o.result.trajectory.states.len(),
        max_fidelity: o.report.max_fidelity,
        max_fidelity_percent: o.report.max_percent(),
        argmax_time_us: o.report.argmax_time,
        final_fidelity: o.report.final_fidelity,
        gate_error: o.holonomy.gate_error,
        holonomy: HolonomyJson {
            cyclicity_error: o.holonomy.cyclicity_error,
            parallel_transport_max: o.holonomy.parallel_transport_max,
            gate_error: o.holonomy.gate_error,
        },
        populations_at_max: o
            .report
            .populations_at_max
            .iter()
            .map(|(l, p)| (l.as_str(), *p))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&s).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn summary_line(o: &Outcome) -> String {
    format!(
        "{}: max fidelity {:.6} ({}%) at t = {:.6e} us, final {:.6}, gate error {:.2e}",
        o.name,
        o.report.max_fidelity,
        o.report.max_percent(),
        o.report.argmax_time,
        o.report.final_fidelity,
        o.holonomy.gate_error
    )
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<name>_trace.csv` and `<name>_summary.json` under `dir`.
pub fn write_outputs(o: &Outcome, dir: &Path) -> Result<[PathBuf; 2], CliError> {
    let trace = dir.join(format!("{}_trace.csv", o.name));
    let summary = dir.join(format!("{}_summary.json", o.name));
    write_file(&trace, &trace_csv(o))?;
    write_file(&summary, &summary_json(o))?;
    Ok([trace, summary])
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}
