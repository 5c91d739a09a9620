use num_complex::Complex64 as C64;

use super::schedule::{Generator, HamiltonianSchedule};
use crate::error::Result;
use crate::expm::expm;
use crate::operator::Operator;

/// `U(τ, 0)` by midpoint-sampled products `U ← exp(−i H(t_mid) h) U`.
pub fn propagate_unitary(sched: &HamiltonianSchedule, dt: f64) -> Result<Operator> {
    let path = unitary_path(sched, dt, usize::MAX)?;
    Ok(path
        .propagators
        .into_iter()
        .last()
        .expect("path always holds the final propagator"))
}

/// Propagators recorded along a schedule.
#[derive(Clone, Debug)]
pub struct UnitaryPath {
    pub times: Vec<f64>,
    pub propagators: Vec<Operator>,
}

/// `U(t, 0)` at t = 0, every `stride` steps, and at the final time.
pub fn unitary_path(sched: &HamiltonianSchedule, dt: f64, stride: usize) -> Result<UnitaryPath> {
    let steps = sched.steps(dt)?;
    let stride = stride.max(1);
    let space = sched.space();
    let minus_i = C64::new(0.0, -1.0);

    let mut u = Operator::identity(space).into_matrix();
    let mut times = vec![0.0];
    let mut propagators = vec![Operator::identity(space)];

    // Constant segments reuse one step exponential.
    let mut cached: Option<(usize, f64, nalgebra::DMatrix<C64>)> = None;
    for (k, step) in steps.iter().enumerate() {
        let reuse =
            matches!(&cached, Some((seg, w, _)) if *seg == step.segment && *w == step.width);
        if !reuse {
            let h = sched.step_hamiltonian(step)?;
            let e = expm(&(h.matrix() * (minus_i * step.width)))?;
            cached = Some((step.segment, step.width, e));
        }
        let e = &cached.as_ref().expect("step exponential cached").2;
        u = e * &u;
        if !matches!(
            sched.segments()[step.segment].generator(),
            Generator::Constant(_)
        ) {
            cached = None;
        }
        let n = k + 1;
        if n % stride == 0 || n == steps.len() {
            times.push(step.start + step.width);
            propagators.push(Operator::new(space.clone(), u.clone())?);
        }
    }
    Ok(UnitaryPath { times, propagators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expm::matrix_exp;
    use crate::space::HilbertSpace;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn sigma_x(q: &HilbertSpace) -> Operator {
        Operator::from_real_rows(q, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    #[test]
    fn constant_sigma_x_half_turn() {
        let q = HilbertSpace::qubit();
        let tau = 0.37;
        let h = sigma_x(&q).scale(C64::new(PI / 2.0 / tau, 0.0));
        let sched = HamiltonianSchedule::constant(h.clone(), tau).unwrap();
        let u = propagate_unitary(&sched, tau / 1000.0).unwrap();
        let oracle = matrix_exp(&h.scale(C64::new(0.0, -tau))).unwrap();
        let target = sigma_x(&q).scale(C64::new(0.0, -1.0));
        assert!(oracle.max_abs_diff(&target).unwrap() < 1e-12);
        assert!(u.max_abs_diff(&oracle).unwrap() < 1e-8);
        assert!(u.unitarity_defect() < 1e-8);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let q = HilbertSpace::numbered(3);
        let sched = HamiltonianSchedule::constant(Operator::zeros(&q), 1.0).unwrap();
        let u = propagate_unitary(&sched, 0.01).unwrap();
        assert_eq!(u, Operator::identity(&q));
    }

    #[test]
    fn time_dependent_path_stays_unitary() {
        let q = HilbertSpace::qubit();
        let qq = q.clone();
        let gen: super::super::TimeGenerator = Arc::new(move |t| {
            let x = Operator::from_real_rows(&qq, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
            let z = Operator::from_real_rows(&qq, &[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
            &x.scale(C64::new((3.0 * t).sin(), 0.0)) + &z.scale(C64::new(0.5, 0.0))
        });
        let sched = HamiltonianSchedule::new(q)
            .with_time_dependent(gen, 2.0)
            .unwrap();
        let path = unitary_path(&sched, 1e-3, 100).unwrap();
        assert_eq!(path.times.len(), 21);
        assert!((path.times[20] - 2.0).abs() < 1e-12);
        for u in &path.propagators {
            assert!(u.unitarity_defect() < 1e-10);
        }
    }
}
