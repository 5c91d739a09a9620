//! Scenario configuration files.
//!
//! A config file is TOML holding any number of `[[scenario]]` tables.
//! Real-valued fields take either a number or a string expression (see
//! [`crate::expr`]). Unknown keys are rejected.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use holosim_core::dynamics::CollapseChannel;
use holosim_core::models::{
    default_nv_channels, nv_space, EnvelopeShape, GateSpec, NvRates, OneQubitModel, PulseEnvelope,
    RatioConvention, TwoQubitModel, TwoQubitTarget,
};
use holosim_core::{Operator, C64};
use serde::Deserialize;

use crate::expr::parse_scalar;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("scenario `{scenario}`, field `{field}`: {message}")]
    Invalid {
        scenario: String,
        field: String,
        message: String,
    },
}

impl ConfigError {
    fn invalid(scenario: &str, field: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            scenario: scenario.into(),
            field: field.into(),
            message: message.into(),
        }
    }
}

/// A number or an expression string.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    pub fn eval(&self) -> Result<f64, String> {
        match self {
            Scalar::Number(v) if v.is_finite() => Ok(*v),
            Scalar::Number(v) => Err(format!("{v} is not finite")),
            Scalar::Expr(s) => parse_scalar(s),
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Number(v)
    }
}

/// A real amplitude or a `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(Scalar),
    Complex([Scalar; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    OneQubit,
    TwoQubit,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::OneQubit => "one_qubit",
            GateKind::TwoQubit => "two_qubit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    #[default]
    Gate,
    FullTransfer,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub ket: String,
    pub bra: String,
    #[serde(default = "one")]
    pub re: Scalar,
    #[serde(default = "zero")]
    pub im: Scalar,
}

fn one() -> Scalar {
    Scalar::Number(1.0)
}

fn zero() -> Scalar {
    Scalar::Number(0.0)
}

/// Replaces (same name) or adds a collapse channel.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub name: String,
    pub terms: Vec<TermConfig>,
    /// Defaults to the rate of the same name in `rates`.
    pub rate: Option<Scalar>,
}

/// One `[[scenario]]` table as written.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub name: String,
    pub gate: GateKind,
    /// θ for one-qubit gates, ϑ for two-qubit gates.
    pub theta: Scalar,
    pub initial_state: Vec<Amplitude>,
    pub rabi_peak: Option<Scalar>,
    pub envelope: Option<String>,
    #[serde(default)]
    pub rates: BTreeMap<String, Scalar>,
    pub lambda: Option<Scalar>,
    pub ratio: Option<String>,
    pub target: Option<TargetKind>,
    #[serde(default, rename = "channel")]
    pub channels: Vec<ChannelConfig>,
    pub dt: Option<Scalar>,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    /// Reserved; runs are deterministic.
    #[serde(default)]
    pub seed: u64,
    pub reference_fidelity: Option<Scalar>,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    scenario: Vec<RawScenario>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub gate: GateKind,
    pub spec: GateSpec,
    /// Explicit step, if configured.
    pub dt: Option<f64>,
    pub record_stride: usize,
    pub seed: u64,
    pub reference_fidelity: Option<f64>,
    pub raw: RawScenario,
}

impl Scenario {
    /// Configured step, or the model default.
    pub fn step(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.spec.default_dt())
    }
}

const NORM_TOL: f64 = 1e-9;
const ONE_QUBIT_RATES: [&str; 3] = ["gamma_y", "gamma_x", "gamma_z"];
const TWO_QUBIT_RATES: [&str; 1] = ["kappa"];

pub fn parse_config(text: &str, path: &str) -> Result<Vec<Scenario>, ConfigError> {
    let file: RawFile = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.into(),
        message: e.to_string(),
    })?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(file.scenario.len());
    for raw in file.scenario {
        if !seen.insert(raw.name.clone()) {
            return Err(ConfigError::invalid(
                &raw.name,
                "name",
                "duplicate scenario name",
            ));
        }
        out.push(validate(raw)?);
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<Scenario>, ConfigError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: display.clone(),
        message: e.to_string(),
    })?;
    parse_config(&text, &display)
}

fn scalar(name: &str, field: &str, s: &Scalar) -> Result<f64, ConfigError> {
    s.eval().map_err(|m| ConfigError::invalid(name, field, m))
}

fn non_negative(name: &str, field: &str, s: &Scalar) -> Result<f64, ConfigError> {
    let v = scalar(name, field, s)?;
    if v < 0.0 {
        return Err(ConfigError::invalid(
            name,
            field,
            format!("must be >= 0, got {v}"),
        ));
    }
    Ok(v)
}

fn positive(name: &str, field: &str, s: &Scalar) -> Result<f64, ConfigError> {
    let v = scalar(name, field, s)?;
    if v <= 0.0 {
        return Err(ConfigError::invalid(
            name,
            field,
            format!("must be > 0, got {v}"),
        ));
    }
    Ok(v)
}

fn not_applicable(name: &str, field: &str, gate: GateKind) -> ConfigError {
    ConfigError::invalid(name, field, format!("not applicable to {gate} scenarios"))
}

/// Validates one raw table into a runnable scenario.
pub fn validate(raw: RawScenario) -> Result<Scenario, ConfigError> {
    let name = raw.name.as_str();
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
    {
        return Err(ConfigError::invalid(
            name,
            "name",
            "use ASCII letters, digits, '_', '-' or '.'",
        ));
    }
    let theta = scalar(name, "theta", &raw.theta)?;
    let initial = initial_state(&raw)?;
    let allowed: &[&str] = match raw.gate {
        GateKind::OneQubit => &ONE_QUBIT_RATES,
        GateKind::TwoQubit => &TWO_QUBIT_RATES,
    };
    let mut rates = BTreeMap::new();
    for (key, value) in &raw.rates {
        let field = format!("rates.{key}");
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError::invalid(
                name,
                &field,
                format!("unknown rate; expected one of {allowed:?}"),
            ));
        }
        rates.insert(key.clone(), non_negative(name, &field, value)?);
    }
    if raw.record_stride == 0 {
        return Err(ConfigError::invalid(
            name,
            "record_stride",
            "must be at least 1",
        ));
    }
    let dt = raw
        .dt
        .as_ref()
        .map(|d| positive(name, "dt", d))
        .transpose()?;
    let reference_fidelity = match &raw.reference_fidelity {
        Some(r) => {
            let v = scalar(name, "reference_fidelity", r)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::invalid(
                    name,
                    "reference_fidelity",
                    "must lie in [0, 1]",
                ));
            }
            Some(v)
        }
        None => None,
    };

    let spec = match raw.gate {
        GateKind::OneQubit => one_qubit_spec(&raw, theta, &initial, &rates)?,
        GateKind::TwoQubit => two_qubit_spec(&raw, theta, &initial, &rates)?,
    };
    Ok(Scenario {
        name: raw.name.clone(),
        gate: raw.gate,
        spec,
        dt,
        record_stride: raw.record_stride,
        seed: raw.seed,
        reference_fidelity,
        raw,
    })
}

fn initial_state(raw: &RawScenario) -> Result<Vec<C64>, ConfigError> {
    let name = raw.name.as_str();
    let expected = match raw.gate {
        GateKind::OneQubit => 2,
        GateKind::TwoQubit => 4,
    };
    if raw.initial_state.len() != expected {
        return Err(ConfigError::invalid(
            name,
            "initial_state",
            format!(
                "expected {expected} amplitudes, got {}",
                raw.initial_state.len()
            ),
        ));
    }
    let amps = raw
        .initial_state
        .iter()
        .map(|a| match a {
            Amplitude::Real(r) => Ok(C64::new(scalar(name, "initial_state", r)?, 0.0)),
            Amplitude::Complex([re, im]) => Ok(C64::new(
                scalar(name, "initial_state", re)?,
                scalar(name, "initial_state", im)?,
            )),
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(ConfigError::invalid(
            name,
            "initial_state",
            format!("norm {norm} differs from 1"),
        ));
    }
    Ok(amps)
}

fn one_qubit_spec(
    raw: &RawScenario,
    theta: f64,
    initial: &[C64],
    rates: &BTreeMap<String, f64>,
) -> Result<GateSpec, ConfigError> {
    let name = raw.name.as_str();
    for (field, present) in [
        ("lambda", raw.lambda.is_some()),
        ("ratio", raw.ratio.is_some()),
        ("target", raw.target.is_some()),
    ] {
        if present {
            return Err(not_applicable(name, field, raw.gate));
        }
    }
    let peak = match &raw.rabi_peak {
        Some(p) => positive(name, "rabi_peak", p)?,
        None => {
            return Err(ConfigError::invalid(
                name,
                "rabi_peak",
                "required for one_qubit scenarios",
            ))
        }
    };
    let shape: EnvelopeShape = match &raw.envelope {
        Some(s) => s.parse().map_err(|e: holosim_core::Error| {
            ConfigError::invalid(name, "envelope", e.to_string())
        })?,
        None => EnvelopeShape::Square,
    };
    let rate = |k: &str| rates.get(k).copied().unwrap_or(0.0);
    let nv = NvRates {
        gamma_y: rate("gamma_y"),
        gamma_x: rate("gamma_x"),
        gamma_z: rate("gamma_z"),
    };
    let mut channels =
        default_nv_channels(&nv).map_err(|e| ConfigError::invalid(name, "rates", e.to_string()))?;
    for (i, ch) in raw.channels.iter().enumerate() {
        let field = format!("channel[{i}]");
        let built = channel_override(name, &field, ch, rates)?;
        match channels.iter().position(|c| c.label() == ch.name) {
            Some(j) => channels[j] = built,
            None => channels.push(built),
        }
    }
    let env = PulseEnvelope::pi_pulse(shape, peak)
        .map_err(|e| ConfigError::invalid(name, "rabi_peak", e.to_string()))?;
    let model = OneQubitModel::new(theta, env, channels)
        .map_err(|e| ConfigError::invalid(name, "theta", e.to_string()))?;
    GateSpec::one_qubit(model, initial)
        .map_err(|e| ConfigError::invalid(name, "initial_state", e.to_string()))
}

fn channel_override(
    name: &str,
    field: &str,
    ch: &ChannelConfig,
    rates: &BTreeMap<String, f64>,
) -> Result<CollapseChannel, ConfigError> {
    if ch.terms.is_empty() {
        return Err(ConfigError::invalid(
            name,
            &format!("{field}.terms"),
            "at least one term is required",
        ));
    }
    let space = nv_space();
    let mut op = Operator::zeros(&space);
    for (k, t) in ch.terms.iter().enumerate() {
        let tf = format!("{field}.terms[{k}]");
        let re = scalar(name, &format!("{tf}.re"), &t.re)?;
        let im = scalar(name, &format!("{tf}.im"), &t.im)?;
        let kb = Operator::ket_bra(&space, &t.ket, &t.bra)
            .map_err(|e| ConfigError::invalid(name, &tf, e.to_string()))?;
        op = &op + &kb.scale(C64::new(re, im));
    }
    let rate = match (&ch.rate, rates.get(&ch.name)) {
        (Some(r), _) => non_negative(name, &format!("{field}.rate"), r)?,
        (None, Some(r)) => *r,
        (None, None) => {
            return Err(ConfigError::invalid(
                name,
                &format!("{field}.rate"),
                format!("no rate given and no entry `rates.{}`", ch.name),
            ))
        }
    };
    CollapseChannel::new(ch.name.clone(), op, rate)
        .map_err(|e| ConfigError::invalid(name, field, e.to_string()))
}

fn two_qubit_spec(
    raw: &RawScenario,
    vartheta: f64,
    initial: &[C64],
    rates: &BTreeMap<String, f64>,
) -> Result<GateSpec, ConfigError> {
    let name = raw.name.as_str();
    for (field, present) in [
        ("rabi_peak", raw.rabi_peak.is_some()),
        ("envelope", raw.envelope.is_some()),
        ("channel", !raw.channels.is_empty()),
    ] {
        if present {
            return Err(not_applicable(name, field, raw.gate));
        }
    }
    let lambda = match &raw.lambda {
        Some(l) => positive(name, "lambda", l)?,
        None => {
            return Err(ConfigError::invalid(
                name,
                "lambda",
                "required for two_qubit scenarios",
            ))
        }
    };
    let convention: RatioConvention = match &raw.ratio {
        Some(r) => r
            .parse()
            .map_err(|e: holosim_core::Error| ConfigError::invalid(name, "ratio", e.to_string()))?,
        None => RatioConvention::default(),
    };
    let kappa = rates.get("kappa").copied().unwrap_or(0.0);
    let model = TwoQubitModel::new(vartheta, lambda, kappa, convention)
        .map_err(|e| ConfigError::invalid(name, "lambda", e.to_string()))?;
    let target = match raw.target.unwrap_or_default() {
        TargetKind::Gate => TwoQubitTarget::Gate,
        TargetKind::FullTransfer => TwoQubitTarget::FullTransfer,
    };
    GateSpec::two_qubit(model, initial, target)
        .map_err(|e| ConfigError::invalid(name, "initial_state", e.to_string()))
}

/// Names accepted by [`with_parameter`].
pub const SWEEP_PARAMETERS: [&str; 8] = [
    "theta",
    "rabi_peak",
    "lambda",
    "dt",
    "gamma_y",
    "gamma_x",
    "gamma_z",
    "kappa",
];

/// Copy of `raw` with one parameter replaced, revalidated.
pub fn with_parameter(
    raw: &RawScenario,
    parameter: &str,
    value: f64,
) -> Result<Scenario, ConfigError> {
    let mut r = raw.clone();
    let v = Scalar::Number(value);
    match parameter {
        "theta" => r.theta = v,
        "rabi_peak" => r.rabi_peak = Some(v),
        "lambda" => r.lambda = Some(v),
        "dt" => r.dt = Some(v),
        "gamma_y" | "gamma_x" | "gamma_z" | "kappa" => {
            r.rates.insert(parameter.to_string(), v);
        }
        _ => {
            return Err(ConfigError::invalid(
                &raw.name,
                parameter,
                format!("unknown sweep parameter; expected one of {SWEEP_PARAMETERS:?}"),
            ))
        }
    }
    validate(r)
}
