use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvelopeShape {
    /// Constant amplitude.
    Square,
    /// `peak · sin²(π t / duration)`.
    SineSquared,
}

impl EnvelopeShape {
    pub const ALL: [EnvelopeShape; 2] = [EnvelopeShape::Square, EnvelopeShape::SineSquared];

    /// Area of a unit-peak, unit-duration pulse.
    fn area_factor(self) -> f64 {
        match self {
            EnvelopeShape::Square => 1.0,
            EnvelopeShape::SineSquared => 0.5,
        }
    }
}

impl fmt::Display for EnvelopeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvelopeShape::Square => "square",
            EnvelopeShape::SineSquared => "sine_squared",
        })
    }
}

impl FromStr for EnvelopeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(EnvelopeShape::Square),
            "sine_squared" => Ok(EnvelopeShape::SineSquared),
            other => Err(Error::InvalidModel(format!(
                "unknown envelope shape {other:?} (expected square or sine_squared)"
            ))),
        }
    }
}

/// Real Rabi envelope Ω(t) on `[0, duration]`, in rad/µs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseEnvelope {
    shape: EnvelopeShape,
    peak: f64,
    duration: f64,
}

impl PulseEnvelope {
    pub fn new(shape: EnvelopeShape, peak: f64, duration: f64) -> Result<Self> {
        if !(peak > 0.0 && peak.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "pulse peak must be positive, got {peak}"
            )));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "pulse duration must be positive, got {duration}"
            )));
        }
        Ok(Self {
            shape,
            peak,
            duration,
        })
    }

    /// Pulse of the given shape and peak whose area is `area`.
    pub fn with_area(shape: EnvelopeShape, peak: f64, area: f64) -> Result<Self> {
        Self::new(shape, peak, area / (peak * shape.area_factor()))
    }

    /// Pulse of area π.
    pub fn pi_pulse(shape: EnvelopeShape, peak: f64) -> Result<Self> {
        Self::with_area(shape, peak, PI)
    }

    pub fn shape(&self) -> EnvelopeShape {
        self.shape
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Closed-form ∫₀^duration Ω(t) dt.
    pub fn area(&self) -> f64 {
        self.peak * self.duration * self.shape.area_factor()
    }

    /// Ω(t); zero outside the pulse window.
    pub fn value(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        match self.shape {
            EnvelopeShape::Square => self.peak,
            EnvelopeShape::SineSquared => self.peak * (PI * t / self.duration).sin().powi(2),
        }
    }
}
