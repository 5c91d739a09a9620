//! Fidelity and distance measures.

use num_complex::Complex64 as C64;

use crate::dynamics::TrajectoryResult;
use crate::error::{Error, Result};
use crate::operator::{expectation, DensityMatrix, Operator, StateVector};

/// Unitarity tolerance for [`gate_distance_up_to_phase`].
pub const UNITARY_TOL: f64 = 1e-8;

/// `Re⟨ψ|ρ|ψ⟩`, unclamped.
pub fn state_fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    Ok(expectation(&rho.as_operator(), psi)?.re)
}

/// Clamp to [0, 1] for reporting.
pub fn clamp_fidelity(f: f64) -> f64 {
    f.clamp(0.0, 1.0)
}

/// `1 − |tr(U†V)| / d`; zero iff `U = e^{iφ} V`.
pub fn gate_distance_up_to_phase(u: &Operator, v: &Operator) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    for op in [u, v] {
        let defect = op.unitarity_defect();
        if defect.is_nan() || defect > UNITARY_TOL {
            return Err(Error::NonUnitary { defect });
        }
    }
    Ok(phase_overlap_defect(u, v))
}

/// Same formula as [`gate_distance_up_to_phase`] without the unitarity
/// check, for scoring blocks of propagators that may have leaked.
pub fn phase_overlap_defect(u: &Operator, v: &Operator) -> f64 {
    let overlap: C64 = (u.matrix().adjoint() * v.matrix()).trace();
    (1.0 - overlap.norm() / u.dim() as f64).max(0.0)
}

/// `⟨b_k|ρ|b_k⟩` over an orthonormal list.
pub fn populations(rho: &DensityMatrix, basis: &[StateVector]) -> Result<Vec<f64>> {
    let mut defect = 0.0_f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let ip = a.inner(b)?;
            let want = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((ip - C64::new(want, 0.0)).norm());
        }
    }
    if defect > 1e-10 {
        return Err(Error::NonOrthonormalBasis { defect });
    }
    basis.iter().map(|b| state_fidelity(rho, b)).collect()
}

/// Percentage rounded half-up to two decimals, e.g. `0.99947 → "99.95"`.
pub fn percent_2dp(f: f64) -> String {
    let hundredths = (f * 10_000.0 + 0.5 + 1e-9).floor() as i64;
    let sign = if hundredths < 0 { "-" } else { "" };
    let h = hundredths.abs();
    format!("{sign}{}.{:02}", h / 100, h % 100)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub max_fidelity: f64,
    pub argmax_time: f64,
    pub final_fidelity: f64,
    /// Basis-label populations at the time of maximum fidelity.
    pub populations_at_max: Vec<(String, f64)>,
}

impl FidelityReport {
    pub fn from_result(result: &TrajectoryResult) -> Self {
        let rho = result.state_at_max();
        let populations_at_max = rho
            .space()
            .labels()
            .iter()
            .cloned()
            .zip(rho.diagonal())
            .collect();
        Self {
            max_fidelity: clamp_fidelity(result.max_fidelity),
            argmax_time: result.argmax_time,
            final_fidelity: clamp_fidelity(result.final_fidelity),
            populations_at_max,
        }
    }

    pub fn max_percent(&self) -> String {
        percent_2dp(self.max_fidelity)
    }
}
