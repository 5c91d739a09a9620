use std::f64::consts::PI;

use holosim_core::dynamics::propagate_unitary;
use holosim_core::metrics::gate_distance_up_to_phase;
use holosim_core::models::default_nv_channels;
use holosim_core::models::{
    holonomic_one_qubit_gate, run_gate_scenario, verify_holonomy_one_qubit, EnvelopeShape,
    GateSpec, NvRates, OneQubitModel, PulseEnvelope, RatioConvention, TwoQubitModel,
    TwoQubitTarget,
};
use holosim_core::{two_pi_mhz, HilbertSpace, C64};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn projected_gate_is_independent_of_envelope_shape() {
    let peak = two_pi_mhz(300.0);
    let q = HilbertSpace::qubit();
    for theta in [0.0, PI / 4.0, PI / 2.0, 2.0 * PI / 3.0, 1.1] {
        let mut blocks = Vec::new();
        for shape in EnvelopeShape::ALL {
            let m = OneQubitModel::closed(theta, shape, peak).unwrap();
            let u = propagate_unitary(
                &holosim_core::models::one_qubit_hamiltonian(&m),
                m.duration() / 2000.0,
            )
            .unwrap();
            let block = u.restrict(&[0, 1], &q).unwrap();
            let d = gate_distance_up_to_phase(&block, &holonomic_one_qubit_gate(theta)).unwrap();
            assert!(d < 1e-6, "theta {theta} {shape}: {d}");
            blocks.push(block);
        }
        assert!(blocks[0].max_abs_diff(&blocks[1]).unwrap() < 1e-6);
    }
}

#[test]
fn gate_time_scales_inversely_with_peak() {
    for shape in EnvelopeShape::ALL {
        let a = PulseEnvelope::pi_pulse(shape, 10.0).unwrap();
        let b = PulseEnvelope::pi_pulse(shape, 20.0).unwrap();
        assert!((a.duration() - 2.0 * b.duration()).abs() < 1e-15);
    }
}

#[test]
fn dissipation_lowers_one_qubit_fidelity() {
    let env = PulseEnvelope::pi_pulse(EnvelopeShape::Square, two_pi_mhz(300.0)).unwrap();
    let ch = default_nv_channels(&NvRates::default()).unwrap();
    let m = OneQubitModel::new(PI / 4.0, env, ch).unwrap();
    let spec = GateSpec::one_qubit(m, &[c(1.0), c(0.0)]).unwrap();
    let r = run_gate_scenario(&spec, spec.default_dt(), 1).unwrap();
    assert!(
        r.max_fidelity < 0.999 && r.max_fidelity > 0.95,
        "{}",
        r.max_fidelity
    );
    assert!(r.final_fidelity <= r.max_fidelity);
}

#[test]
fn off_cyclic_pulse_breaks_holonomy() {
    let peak = two_pi_mhz(300.0);
    let env = PulseEnvelope::with_area(EnvelopeShape::Square, peak, 0.9 * PI).unwrap();
    assert!(OneQubitModel::new(0.5, env, Vec::new()).is_err());
    let m = OneQubitModel::new_unchecked(0.5, env, Vec::new()).unwrap();
    let report = verify_holonomy_one_qubit(&m, m.duration() / 2000.0).unwrap();
    assert!((report.cyclicity_error - 2f64.sqrt() * (0.9 * PI).sin()).abs() < 1e-6);
}

#[test]
fn lossless_two_qubit_gate_is_exact() {
    for vartheta in [PI / 8.0, PI / 4.0, PI / 3.0] {
        let m = TwoQubitModel::new(vartheta, two_pi_mhz(20.0), 0.0, RatioConvention::Amplitude)
            .unwrap();
        for init in [
            [c(0.0), c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(0.0), c(0.6), C64::new(0.0, 0.8)],
        ] {
            let spec = GateSpec::two_qubit(m.clone(), &init, TwoQubitTarget::Gate).unwrap();
            let r = run_gate_scenario(&spec, spec.default_dt(), 1).unwrap();
            assert!((r.max_fidelity - 1.0).abs() < 1e-7);
        }
    }
}
