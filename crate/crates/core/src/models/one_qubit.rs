use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::pulse::{EnvelopeShape, PulseEnvelope};
use crate::dynamics::{CollapseChannel, HamiltonianSchedule, TimeGenerator};
use crate::error::{Error, Result};
use crate::operator::{outer, Operator, StateVector};
use crate::space::HilbertSpace;

/// `{|0⟩, |1⟩, |e⟩}`: the two Zeeman qubit levels and the ancilla.
pub fn nv_space() -> HilbertSpace {
    HilbertSpace::new(["0", "1", "e"]).expect("static labels")
}

/// Driven V-system implementing one holonomic single-qubit gate.
#[derive(Clone, Debug)]
pub struct OneQubitModel {
    theta: f64,
    envelope: PulseEnvelope,
    channels: Vec<CollapseChannel>,
}

impl OneQubitModel {
    /// Requires a cyclic (area π) envelope.
    pub fn new(
        theta: f64,
        envelope: PulseEnvelope,
        channels: Vec<CollapseChannel>,
    ) -> Result<Self> {
        if (envelope.area() - PI).abs() > 1e-10 {
            return Err(Error::InvalidModel(format!(
                "envelope area {} differs from pi; the evolution would not be cyclic",
                envelope.area()
            )));
        }
        Self::new_unchecked(theta, envelope, channels)
    }

    /// Accepts any envelope area. Used for negative controls.
    pub fn new_unchecked(
        theta: f64,
        envelope: PulseEnvelope,
        channels: Vec<CollapseChannel>,
    ) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidModel(format!(
                "theta must be finite, got {theta}"
            )));
        }
        let space = nv_space();
        for ch in &channels {
            space.ensure_same(ch.operator().space())?;
        }
        Ok(Self {
            theta,
            envelope,
            channels,
        })
    }

    /// Closed-system model with a π-pulse of the given shape and peak.
    pub fn closed(theta: f64, shape: EnvelopeShape, peak: f64) -> Result<Self> {
        Self::new(theta, PulseEnvelope::pi_pulse(shape, peak)?, Vec::new())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn envelope(&self) -> &PulseEnvelope {
        &self.envelope
    }

    pub fn channels(&self) -> &[CollapseChannel] {
        &self.channels
    }

    pub fn space(&self) -> HilbertSpace {
        nv_space()
    }

    pub fn duration(&self) -> f64 {
        self.envelope.duration()
    }
}

/// `Ω (|b_θ⟩⟨e| + |e⟩⟨b_θ|)`.
pub fn bright_state_hamiltonian(theta: f64, omega: f64) -> Operator {
    let space = nv_space();
    let (bright, _) = bright_dark(theta);
    let e = StateVector::basis(&space, "e").expect("label e");
    let coupling = outer(&bright, &e).expect("same space");
    (&coupling + &coupling.adjoint()).scale(C64::new(omega, 0.0))
}

/// `Ω₀|0⟩⟨e| + Ω₁|1⟩⟨e| + h.c.` with `Ω₀ = Ω cos(θ/2)`, `Ω₁ = Ω sin(θ/2)`.
pub fn v_system_hamiltonian(theta: f64, omega: f64) -> Operator {
    let space = nv_space();
    let (o0, o1) = (omega * (theta / 2.0).cos(), omega * (theta / 2.0).sin());
    let drive0 = Operator::ket_bra(&space, "0", "e")
        .expect("labels")
        .scale(C64::new(o0, 0.0));
    let drive1 = Operator::ket_bra(&space, "1", "e")
        .expect("labels")
        .scale(C64::new(o1, 0.0));
    let half = &drive0 + &drive1;
    &half + &half.adjoint()
}

pub fn one_qubit_hamiltonian(m: &OneQubitModel) -> HamiltonianSchedule {
    let env = m.envelope;
    let theta = m.theta;
    let sched = match env.shape() {
        EnvelopeShape::Square => HamiltonianSchedule::constant(
            bright_state_hamiltonian(theta, env.peak()),
            env.duration(),
        ),
        EnvelopeShape::SineSquared => {
            let unit = bright_state_hamiltonian(theta, 1.0);
            let gen: TimeGenerator = Arc::new(move |t| unit.scale(C64::new(env.value(t), 0.0)));
            HamiltonianSchedule::new(nv_space()).with_time_dependent(gen, env.duration())
        }
    };
    sched.expect("bright-state Hamiltonian is Hermitian and the duration positive")
}

/// `(|b_θ⟩, |d_θ⟩)` embedded in the three-level space.
pub fn bright_dark(theta: f64) -> (StateVector, StateVector) {
    let space = nv_space();
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let bright = StateVector::from_real(&space, &[c, s, 0.0]).expect("unit vector");
    let dark = StateVector::from_real(&space, &[s, -c, 0.0]).expect("unit vector");
    (bright, dark)
}

/// Eigenbasis of the bright-state Hamiltonian, eigenvalues 0, −Ω, +Ω.
#[derive(Clone, Debug)]
pub struct DressedStates {
    pub d0: StateVector,
    pub minus: StateVector,
    pub plus: StateVector,
}

pub fn dressed_eigenstates(theta: f64) -> DressedStates {
    let space = nv_space();
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DressedStates {
        d0: StateVector::from_real(&space, &[s, -c, 0.0]).expect("unit vector"),
        minus: StateVector::from_real(&space, &[c * r, s * r, -r]).expect("unit vector"),
        plus: StateVector::from_real(&space, &[c * r, s * r, r]).expect("unit vector"),
    }
}

/// `[[cos θ, sin θ], [sin θ, −cos θ]]` on the qubit space.
pub fn holonomic_one_qubit_gate(theta: f64) -> Operator {
    let (c, s) = (theta.cos(), theta.sin());
    Operator::from_real_rows(&HilbertSpace::qubit(), &[&[c, s], &[s, -c]]).expect("2x2")
}

/// Relaxation and dephasing rates of the NV spin, rad/µs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NvRates {
    pub gamma_y: f64,
    pub gamma_x: f64,
    pub gamma_z: f64,
}

impl Default for NvRates {
    /// 2π × 5 kHz qubit relaxation, 2π × 1.5 MHz for the other two channels.
    fn default() -> Self {
        Self {
            gamma_y: crate::two_pi_mhz(0.005),
            gamma_x: crate::two_pi_mhz(1.5),
            gamma_z: crate::two_pi_mhz(1.5),
        }
    }
}

impl NvRates {
    pub fn zero() -> Self {
        Self {
            gamma_y: 0.0,
            gamma_x: 0.0,
            gamma_z: 0.0,
        }
    }
}

/// Documented default channel set: `(γ_y, |0⟩⟨1|)`, `(γ_x, |0⟩⟨e|)`,
/// `(γ_z, |0⟩⟨0| − |1⟩⟨1|)`.
pub fn default_nv_channels(rates: &NvRates) -> Result<Vec<CollapseChannel>> {
    let s = nv_space();
    let sz = &Operator::projector(&s, "0")? - &Operator::projector(&s, "1")?;
    Ok(vec![
        CollapseChannel::new("gamma_y", Operator::ket_bra(&s, "0", "1")?, rates.gamma_y)?,
        CollapseChannel::new("gamma_x", Operator::ket_bra(&s, "0", "e")?, rates.gamma_x)?,
        CollapseChannel::new("gamma_z", sz, rates.gamma_z)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eig_hermitian;
    use crate::operator::expectation;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn overlap_mod(a: &StateVector, b: &StateVector) -> f64 {
        a.inner(b).unwrap().norm()
    }

    #[test]
    fn both_hamiltonian_forms_agree() {
        for theta in [0.0, 0.3, PI / 4.0, PI / 2.0, 2.0, PI] {
            let a = bright_state_hamiltonian(theta, 1.7);
            let b = v_system_hamiltonian(theta, 1.7);
            assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        }
    }

    #[test]
    fn extreme_theta_couplings() {
        let h0 = v_system_hamiltonian(0.0, 1.0);
        assert_eq!(h0.get(0, 2), C64::new(1.0, 0.0));
        assert!(h0.get(1, 2).norm() < 1e-16);
        let hpi = v_system_hamiltonian(PI, 1.0);
        assert!(hpi.get(0, 2).norm() < 1e-16);
        assert!((hpi.get(1, 2) - C64::new(1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn dark_state_decouples() {
        let m = OneQubitModel::closed(1.1, EnvelopeShape::SineSquared, 5.0).unwrap();
        let sched = one_qubit_hamiltonian(&m);
        let (_, dark) = bright_dark(m.theta());
        let s = nv_space();
        for k in 0..=10 {
            let h = sched.hamiltonian_at(m.duration() * k as f64 / 10.0);
            let hd = h.apply(&dark).unwrap();
            for label in ["0", "1", "e"] {
                let psi = StateVector::basis(&s, label).unwrap();
                assert!(psi.inner(&hd).unwrap().norm() < 1e-14);
            }
        }
    }

    #[test]
    fn bright_dark_examples() {
        let (b, d) = bright_dark(0.0);
        assert_eq!(
            b.amplitudes().as_slice()[..2],
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        );
        assert!((d.amplitude(1) - C64::new(-1.0, 0.0)).norm() < 1e-16);
        let (b, _) = bright_dark(PI / 2.0);
        assert!((b.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((b.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
        for k in 0..100 {
            let theta = -7.0 + 0.14 * k as f64;
            let (b, d) = bright_dark(theta);
            assert!(b.inner(&d).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn dressed_states_are_eigenvectors() {
        let d = dressed_eigenstates(0.0);
        assert!((d.d0.amplitude(1) - C64::new(-1.0, 0.0)).norm() < 1e-16);

        let theta = PI / 3.0;
        let h = bright_state_hamiltonian(theta, 1.0);
        let d = dressed_eigenstates(theta);
        let hp = h.apply(&d.plus).unwrap();
        assert!((hp.amplitudes() - d.plus.amplitudes()).norm() < 1e-12);
        let hm = h.apply(&d.minus).unwrap();
        assert!((hm.amplitudes() + d.minus.amplitudes()).norm() < 1e-12);
        assert!(h.apply(&d.d0).unwrap().norm() < 1e-12);

        let e = eig_hermitian(&h).unwrap();
        for (want, got) in [-1.0, 0.0, 1.0].iter().zip(&e.values) {
            assert!((want - got).abs() < 1e-12);
        }
        assert!((overlap_mod(&e.vectors[0], &d.minus) - 1.0).abs() < 1e-9);
        assert!((overlap_mod(&e.vectors[1], &d.d0) - 1.0).abs() < 1e-9);
        assert!((overlap_mod(&e.vectors[2], &d.plus) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dressed_triple_orthonormal() {
        for k in 0..25 {
            let d = dressed_eigenstates(0.27 * k as f64);
            let v = [&d.d0, &d.minus, &d.plus];
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v[i].inner(v[j]).unwrap().norm() - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn named_gates() {
        let r = FRAC_1_SQRT_2;
        let h = holonomic_one_qubit_gate(PI / 4.0);
        let hadamard =
            Operator::from_real_rows(&HilbertSpace::qubit(), &[&[r, r], &[r, -r]]).unwrap();
        assert!(h.max_abs_diff(&hadamard).unwrap() < 1e-15);
        let x = holonomic_one_qubit_gate(PI / 2.0);
        let sx =
            Operator::from_real_rows(&HilbertSpace::qubit(), &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(x.max_abs_diff(&sx).unwrap() < 1e-16);
        let z = holonomic_one_qubit_gate(0.0);
        assert_eq!(z.get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(z.get(1, 1), C64::new(-1.0, 0.0));
    }

    #[test]
    fn gate_is_reflection() {
        for k in 0..50 {
            let u = holonomic_one_qubit_gate(-4.0 + 0.17 * k as f64);
            let sq = &u * &u;
            assert!(sq.max_abs_diff(&Operator::identity(u.space())).unwrap() < 1e-15);
            let m = u.matrix();
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            assert!((det + C64::new(1.0, 0.0)).norm() < 1e-15);
            assert!(u.hermiticity_defect() == 0.0);
        }
    }

    #[test]
    fn default_channels() {
        let ch = default_nv_channels(&NvRates::default()).unwrap();
        assert_eq!(ch.len(), 3);
        assert!((ch[0].rate() - 2.0 * PI * 0.005).abs() < 1e-15);
        assert!((ch[1].rate() - 2.0 * PI * 1.5).abs() < 1e-15);
        assert!((ch[2].rate() - 2.0 * PI * 1.5).abs() < 1e-15);
        let s = nv_space();
        let one = StateVector::basis(&s, "1").unwrap();
        assert_eq!(
            expectation(ch[2].operator(), &one).unwrap(),
            C64::new(-1.0, 0.0)
        );
        let closed = default_nv_channels(&NvRates::zero()).unwrap();
        assert!(closed.iter().all(|c| c.rate() == 0.0));
    }

    #[test]
    fn model_requires_pi_area() {
        let env = PulseEnvelope::with_area(EnvelopeShape::Square, 2.0, 0.9 * PI).unwrap();
        assert!(OneQubitModel::new(0.3, env, vec![]).is_err());
        assert!(OneQubitModel::new_unchecked(0.3, env, vec![]).is_ok());
    }
}
