use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{Operator, HERMITIAN_TOL};
use crate::space::HilbertSpace;

/// Time-dependent Hamiltonian; the argument is the time since the start
/// of its segment in µs.
pub type TimeGenerator = Arc<dyn Fn(f64) -> Operator + Send + Sync>;

#[derive(Clone)]
pub enum Generator {
    Constant(Operator),
    TimeDependent(TimeGenerator),
}

#[derive(Clone)]
pub struct Segment {
    duration: f64,
    generator: Generator,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.generator, Generator::Constant(_))
    }

    /// Hamiltonian at local time `t` (µs since segment start).
    pub fn hamiltonian_at(&self, t: f64) -> Operator {
        match &self.generator {
            Generator::Constant(h) => h.clone(),
            Generator::TimeDependent(f) => f(t),
        }
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Segment")
            .field("duration", &self.duration)
            .field("constant", &self.is_constant())
            .finish()
    }
}

/// One integration step of a discretized schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub segment: usize,
    /// Global start time of the step.
    pub start: f64,
    pub width: f64,
    /// Midpoint relative to the segment start.
    pub local_mid: f64,
}

/// Ordered list of Hamiltonian segments on one space.
#[derive(Clone, Debug)]
pub struct HamiltonianSchedule {
    space: HilbertSpace,
    segments: Vec<Segment>,
}

impl HamiltonianSchedule {
    pub fn new(space: HilbertSpace) -> Self {
        Self {
            space,
            segments: Vec::new(),
        }
    }

    pub fn constant(h: Operator, duration: f64) -> Result<Self> {
        Self::new(h.space().clone()).with_constant(h, duration)
    }

    pub fn with_constant(mut self, h: Operator, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        self.space.ensure_same(h.space())?;
        h.ensure_hermitian(HERMITIAN_TOL)?;
        self.segments.push(Segment {
            duration,
            generator: Generator::Constant(h),
        });
        Ok(self)
    }

    /// Appends a time-dependent segment. The generator is probed at both
    /// ends and the midpoint; every sample taken during propagation is
    /// checked again.
    pub fn with_time_dependent(mut self, generator: TimeGenerator, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        for t in [0.0, 0.5 * duration, duration] {
            let h = generator(t);
            self.space.ensure_same(h.space())?;
            h.ensure_hermitian(HERMITIAN_TOL)?;
        }
        self.segments.push(Segment {
            duration,
            generator: Generator::TimeDependent(generator),
        });
        Ok(self)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.segments.iter().all(Segment::is_constant)
    }

    /// Hamiltonian at global time `t`; segments are half-open except the last.
    pub fn hamiltonian_at(&self, t: f64) -> Operator {
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let end = start + seg.duration;
            if t < end || i + 1 == self.segments.len() {
                return seg.hamiltonian_at((t - start).clamp(0.0, seg.duration));
            }
            start = end;
        }
        Operator::zeros(&self.space)
    }

    /// Equal-width midpoint steps no wider than `dt`.
    pub fn steps(&self, dt: f64) -> Result<Vec<Step>> {
        let total = self.total_duration();
        if self.segments.is_empty() {
            return Err(Error::InvalidStep("schedule has no segments".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidStep(format!("dt must be positive, got {dt}")));
        }
        if dt > total * (1.0 + 1e-12) {
            return Err(Error::InvalidStep(format!(
                "dt = {dt:e} exceeds the schedule duration {total:e}"
            )));
        }
        let mut steps = Vec::new();
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let n = ((seg.duration / dt) - 1e-9).ceil().max(1.0) as usize;
            let width = seg.duration / n as f64;
            for k in 0..n {
                steps.push(Step {
                    segment: i,
                    start: start + k as f64 * width,
                    width,
                    local_mid: (k as f64 + 0.5) * width,
                });
            }
            start += seg.duration;
        }
        Ok(steps)
    }

    /// Midpoint Hamiltonian of `step`, checked for Hermiticity.
    pub(crate) fn step_hamiltonian(&self, step: &Step) -> Result<Operator> {
        let seg = &self.segments[step.segment];
        let h = seg.hamiltonian_at(step.local_mid);
        if !seg.is_constant() {
            h.ensure_hermitian(HERMITIAN_TOL)?;
        }
        Ok(h)
    }
}

fn check_duration(duration: f64) -> Result<()> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidStep(format!(
            "segment duration must be positive, got {duration}"
        )));
    }
    Ok(())
}
