use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::schedule::HamiltonianSchedule;
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::operator::{hermiticity_defect, DensityMatrix, Operator, StateVector};

/// Trace, Hermiticity or positivity defects beyond this abort an evolution.
pub const INVARIANT_ABORT_TOL: f64 = 1e-6;

/// Largest admissible `dt · (‖H‖ + max rate)`.
const STEP_BOUND: f64 = 0.1;

/// Dissipation channel entering the master equation with net rate `rate`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseChannel {
    label: String,
    operator: Operator,
    rate: f64,
}

impl CollapseChannel {
    pub fn new(label: impl Into<String>, operator: Operator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "collapse rate must be >= 0, got {rate}"
            )));
        }
        if !operator.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            label: label.into(),
            operator,
            rate,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn with_rate(&self, rate: f64) -> Result<Self> {
        Self::new(self.label.clone(), self.operator.clone(), rate)
    }
}

/// `−i[H, ρ] + Σ (γ/2)(2AρA† − A†Aρ − ρA†A)`.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    h: &Operator,
    channels: &[CollapseChannel],
) -> Result<Operator> {
    rho.space().ensure_same(h.space())?;
    for ch in channels {
        rho.space().ensure_same(ch.operator.space())?;
    }
    let gen = Generator::new(h.matrix(), channels);
    Operator::new(rho.space().clone(), gen.apply(rho.matrix()))
}

/// Master-equation generator in the form
/// `ρ ↦ −i(K ρ − ρ K†) + Σ γ AρA†` with `K = H − (i/2) Σ γ A†A`.
struct Generator {
    k: DMatrix<C64>,
    k_adj: DMatrix<C64>,
    jumps: Vec<(f64, DMatrix<C64>, DMatrix<C64>)>,
}

impl Generator {
    fn new(h: &DMatrix<C64>, channels: &[CollapseChannel]) -> Self {
        let mut k = h.clone();
        let mut jumps = Vec::new();
        for ch in channels.iter().filter(|c| c.rate > 0.0) {
            let a = ch.operator.matrix();
            let ad = a.adjoint();
            k -= (&ad * a) * C64::new(0.0, 0.5 * ch.rate);
            jumps.push((ch.rate, a.clone(), ad));
        }
        let k_adj = k.adjoint();
        Self { k, k_adj, jumps }
    }

    fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let minus_i = C64::new(0.0, -1.0);
        let mut out = (&self.k * rho - rho * &self.k_adj) * minus_i;
        for (rate, a, ad) in &self.jumps {
            out += (a * rho * ad) * C64::new(*rate, 0.0);
        }
        out
    }

    fn rk4(&self, rho: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
        let half = C64::new(0.5 * h, 0.0);
        let full = C64::new(h, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * half));
        let k3 = self.apply(&(rho + &k2 * half));
        let k4 = self.apply(&(rho + &k3 * full));
        rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
    }
}

/// Density matrices recorded along an evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Number of integration steps taken.
    pub steps: usize,
    pub final_state: DensityMatrix,
    pub final_time: f64,
}

impl Trajectory {
    /// Basis-state populations, one row per recorded state.
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(DensityMatrix::diagonal).collect()
    }

    /// Fidelity series against a pure target.
    pub fn score(self, target: &StateVector) -> Result<TrajectoryResult> {
        let fidelity = self
            .states
            .iter()
            .map(|rho| crate::metrics::state_fidelity(rho, target))
            .collect::<Result<Vec<f64>>>()?;
        let final_fidelity = crate::metrics::state_fidelity(&self.final_state, target)?;
        // first maximum wins on ties; the final state counts even when the
        // stride skips it
        let (best, mut max_fidelity) =
            fidelity
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, f)| if f > acc.1 { (i, f) } else { acc },
                );
        let mut argmax_time = self.times[best];
        if final_fidelity > max_fidelity {
            max_fidelity = final_fidelity;
            argmax_time = self.final_time;
        }
        Ok(TrajectoryResult {
            trajectory: self,
            fidelity,
            max_fidelity,
            argmax_time,
            final_fidelity,
        })
    }
}

/// A trajectory scored against its ideal final state.
#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub trajectory: Trajectory,
    pub fidelity: Vec<f64>,
    pub max_fidelity: f64,
    pub argmax_time: f64,
    pub final_fidelity: f64,
}

impl TrajectoryResult {
    /// State at the time of maximum fidelity.
    pub fn state_at_max(&self) -> &DensityMatrix {
        let traj = &self.trajectory;
        match traj.times.iter().position(|&t| t == self.argmax_time) {
            Some(i) => &traj.states[i],
            None => &traj.final_state,
        }
    }
}

/// Fixed-step RK4 integration of the master equation.
///
/// States are recorded at t = 0 and after every `record_stride` steps.
/// Trace and Hermiticity are checked after every step and positivity at
/// every recorded state; any defect beyond [`INVARIANT_ABORT_TOL`] aborts.
pub fn evolve_lindblad(
    sched: &HamiltonianSchedule,
    rho0: &DensityMatrix,
    channels: &[CollapseChannel],
    dt: f64,
    record_stride: usize,
) -> Result<Trajectory> {
    let space = sched.space().clone();
    space.ensure_same(rho0.space())?;
    for ch in channels {
        space.ensure_same(ch.operator.space())?;
    }
    if record_stride == 0 {
        return Err(Error::InvalidStep(
            "record_stride must be at least 1".into(),
        ));
    }
    let steps = sched.steps(dt)?;
    let max_rate = channels.iter().map(|c| c.rate).fold(0.0, f64::max);

    let mut rho = rho0.matrix().clone();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut current: Option<(usize, Generator)> = None;

    for (k, step) in steps.iter().enumerate() {
        let constant = sched.segments()[step.segment].is_constant();
        let stale = !matches!(&current, Some((seg, _)) if constant && *seg == step.segment);
        if stale {
            let h = sched.step_hamiltonian(step)?;
            check_step_size(&h, max_rate, step.width)?;
            current = Some((step.segment, Generator::new(h.matrix(), channels)));
        }
        let gen = &current.as_ref().expect("generator prepared").1;
        rho = gen.rk4(&rho, step.width);

        let t = step.start + step.width;
        check_trace_and_hermiticity(&rho, t)?;
        let n = k + 1;
        if n % record_stride == 0 {
            check_positivity(&space, &rho, t)?;
            times.push(t);
            states.push(DensityMatrix::from_matrix_unchecked(
                space.clone(),
                rho.clone(),
            ));
        }
    }

    let final_time = sched.total_duration();
    check_positivity(&space, &rho, final_time)?;
    Ok(Trajectory {
        times,
        states,
        steps: steps.len(),
        final_state: DensityMatrix::from_matrix_unchecked(space, rho),
        final_time,
    })
}

fn check_step_size(h: &Operator, max_rate: f64, width: f64) -> Result<()> {
    // Frobenius norm bounds the spectral norm; only diagonalize when it matters.
    let mut norm = h.norm();
    if width * (norm + max_rate) >= STEP_BOUND {
        norm = eig_hermitian(h)?
            .values
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    let product = width * (norm + max_rate);
    if product >= STEP_BOUND {
        return Err(Error::InvalidStep(format!(
            "dt * (|H| + max rate) = {product:.3e} must stay below {STEP_BOUND}"
        )));
    }
    Ok(())
}

fn check_trace_and_hermiticity(rho: &DMatrix<C64>, t: f64) -> Result<()> {
    let trace = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if trace.is_nan() || trace > INVARIANT_ABORT_TOL {
        return Err(Error::InvariantBreach {
            time: t,
            what: "trace defect",
            value: trace,
        });
    }
    let herm = hermiticity_defect(rho);
    if herm.is_nan() || herm > INVARIANT_ABORT_TOL {
        return Err(Error::InvariantBreach {
            time: t,
            what: "Hermiticity defect",
            value: herm,
        });
    }
    Ok(())
}

fn check_positivity(space: &crate::space::HilbertSpace, rho: &DMatrix<C64>, t: f64) -> Result<()> {
    // A Cholesky factorization of ρ + tol·I exists iff every eigenvalue is above −tol.
    let n = rho.nrows();
    let shifted = (rho + rho.adjoint()) * C64::new(0.5, 0.0)
        + DMatrix::<C64>::identity(n, n) * C64::new(INVARIANT_ABORT_TOL, 0.0);
    if nalgebra::Cholesky::new(shifted).is_some() {
        return Ok(());
    }
    let min = DensityMatrix::from_matrix_unchecked(space.clone(), rho.clone()).min_eigenvalue();
    if min.is_nan() || min < -INVARIANT_ABORT_TOL {
        return Err(Error::InvariantBreach {
            time: t,
            what: "minimum eigenvalue",
            value: min,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::HilbertSpace;

    fn plus(q: &HilbertSpace) -> DensityMatrix {
        StateVector::from_real(q, &[1.0, 1.0]).unwrap().to_density()
    }

    #[test]
    fn pure_commutator_without_channels() {
        let q = HilbertSpace::qubit();
        let z = Operator::from_real_rows(&q, &[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let d = lindblad_rhs(&plus(&q), &z, &[]).unwrap();
        // −i[σz, |+⟩⟨+|]: off-diagonals ∓i
        assert!((d.get(0, 1) - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((d.get(1, 0) - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(d.get(0, 0).norm() < 1e-15);
    }

    #[test]
    fn amplitude_damping_rate_equation() {
        let q = HilbertSpace::qubit();
        let gamma = 0.7;
        let ch =
            CollapseChannel::new("relax", Operator::ket_bra(&q, "0", "1").unwrap(), gamma).unwrap();
        let one = StateVector::basis(&q, "1").unwrap().to_density();
        let d = lindblad_rhs(&one, &Operator::zeros(&q), &[ch]).unwrap();
        assert!((d.get(0, 0) - C64::new(gamma, 0.0)).norm() < 1e-15);
        assert!((d.get(1, 1) - C64::new(-gamma, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn negative_rate_rejected() {
        let q = HilbertSpace::qubit();
        assert!(CollapseChannel::new("x", Operator::identity(&q), -1.0).is_err());
    }

    #[test]
    fn oversized_step_rejected() {
        let q = HilbertSpace::qubit();
        let h = Operator::from_real_rows(&q, &[&[0.0, 100.0], &[100.0, 0.0]]).unwrap();
        let sched = HamiltonianSchedule::constant(h, 1.0).unwrap();
        let rho = plus(&q);
        assert!(matches!(
            evolve_lindblad(&sched, &rho, &[], 0.01, 1),
            Err(Error::InvalidStep(_))
        ));
        assert!(evolve_lindblad(&sched, &rho, &[], 1e-4, 1).is_ok());
    }

    #[test]
    fn record_count_and_scoring() {
        let q = HilbertSpace::qubit();
        let h = Operator::from_real_rows(&q, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let sched = HamiltonianSchedule::constant(h, 1.0).unwrap();
        let traj = evolve_lindblad(&sched, &plus(&q), &[], 0.001, 7).unwrap();
        assert_eq!(traj.steps, 1000);
        assert_eq!(traj.states.len(), 1000 / 7 + 1);
        let target = StateVector::from_real(&q, &[1.0, 1.0]).unwrap();
        let scored = traj.score(&target).unwrap();
        // |+⟩ is an eigenstate of σx
        assert!(scored.fidelity.iter().all(|f| (f - 1.0).abs() < 1e-12));
        assert_eq!(scored.argmax_time, 0.0);
    }

    #[test]
    fn unrecorded_final_state_still_scores() {
        let q = HilbertSpace::qubit();
        let x = Operator::from_real_rows(&q, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        // π/2 rotation about x takes |0⟩ to |1⟩ exactly at the end
        let sched = HamiltonianSchedule::constant(x, std::f64::consts::FRAC_PI_2).unwrap();
        let zero = StateVector::basis(&q, "0").unwrap().to_density();
        let traj = evolve_lindblad(&sched, &zero, &[], sched.total_duration() / 1000.0, 7).unwrap();
        let scored = traj.score(&StateVector::basis(&q, "1").unwrap()).unwrap();
        assert!((scored.max_fidelity - 1.0).abs() < 1e-10);
        assert_eq!(scored.argmax_time, sched.total_duration());
        assert_eq!(scored.state_at_max(), &scored.trajectory.final_state);
    }
}
