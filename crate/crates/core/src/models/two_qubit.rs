use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::dynamics::{CollapseChannel, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::HilbertSpace;

/// Single-excitation space of cavity ⊗ NV₁ ⊗ NV₂:
/// `G = |0,0,0⟩`, `Psi1 = |0,0,1⟩`, `Psi2 = |0,1,0⟩`, `Psi3 = |1,0,0⟩`.
pub fn two_qubit_space() -> HilbertSpace {
    HilbertSpace::new(["G", "Psi1", "Psi2", "Psi3"]).expect("static labels")
}

/// Model states hosting the computational states |10⟩ and |11⟩, in that
/// order. On this pair the π-pulse realizes the lower block of the
/// two-qubit gate.
pub fn two_qubit_computational_labels() -> [&'static str; 2] {
    ["Psi2", "Psi1"]
}

/// How the coupling ratio encodes ϑ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RatioConvention {
    /// `η₁/η₂ = tan(ϑ/2)`.
    #[default]
    Amplitude,
    /// `η₁²/η₂² = tan(ϑ/2)`.
    Squared,
}

impl fmt::Display for RatioConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioConvention::Amplitude => "amplitude",
            RatioConvention::Squared => "squared",
        })
    }
}

impl FromStr for RatioConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(RatioConvention::Amplitude),
            "squared" => Ok(RatioConvention::Squared),
            other => Err(Error::InvalidModel(format!(
                "unknown ratio convention {other:?} (expected amplitude or squared)"
            ))),
        }
    }
}

/// Two NV spins coupled through a lossy cavity mode, with constant
/// effective couplings η₁, η₂ applied for `π/λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitModel {
    vartheta: f64,
    eta1: f64,
    eta2: f64,
    kappa: f64,
    convention: RatioConvention,
}

impl TwoQubitModel {
    /// Couplings of total strength `lambda = sqrt(η₁² + η₂²)` split by `vartheta`.
    pub fn new(
        vartheta: f64,
        lambda: f64,
        kappa: f64,
        convention: RatioConvention,
    ) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let (eta1, eta2) = match convention {
            RatioConvention::Amplitude => (
                lambda * (vartheta / 2.0).sin(),
                lambda * (vartheta / 2.0).cos(),
            ),
            RatioConvention::Squared => {
                let t = (vartheta / 2.0).tan();
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::InvalidModel(format!(
                        "squared ratio convention needs tan(vartheta/2) >= 0, got {t}"
                    )));
                }
                (
                    lambda * (t / (1.0 + t)).sqrt(),
                    lambda * (1.0 / (1.0 + t)).sqrt(),
                )
            }
        };
        Self::build(vartheta, eta1, eta2, kappa, convention)
    }

    /// Explicit couplings; their ratio must encode `vartheta` under `convention`.
    pub fn from_couplings(
        vartheta: f64,
        eta1: f64,
        eta2: f64,
        kappa: f64,
        convention: RatioConvention,
    ) -> Result<Self> {
        let model = Self::build(vartheta, eta1, eta2, kappa, convention)?;
        let lambda = model.lambda();
        let mismatch = match convention {
            RatioConvention::Amplitude => {
                (eta1 * (vartheta / 2.0).cos() - eta2 * (vartheta / 2.0).sin()).abs() / lambda
            }
            RatioConvention::Squared => {
                (eta1 * eta1 - (vartheta / 2.0).tan() * eta2 * eta2).abs() / (lambda * lambda)
            }
        };
        if mismatch > 1e-9 {
            return Err(Error::InvalidModel(format!(
                "couplings ({eta1}, {eta2}) do not encode vartheta = {vartheta} under the {convention} ratio"
            )));
        }
        Ok(model)
    }

    fn build(
        vartheta: f64,
        eta1: f64,
        eta2: f64,
        kappa: f64,
        convention: RatioConvention,
    ) -> Result<Self> {
        if !(vartheta.is_finite() && eta1.is_finite() && eta2.is_finite()) {
            return Err(Error::InvalidModel(
                "non-finite two-qubit parameters".into(),
            ));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "kappa must be >= 0, got {kappa}"
            )));
        }
        if eta1.hypot(eta2) == 0.0 {
            return Err(Error::InvalidModel("couplings must not both vanish".into()));
        }
        Ok(Self {
            vartheta,
            eta1,
            eta2,
            kappa,
            convention,
        })
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn convention(&self) -> RatioConvention {
        self.convention
    }

    /// Effective Rabi frequency `sqrt(η₁² + η₂²)`.
    pub fn lambda(&self) -> f64 {
        self.eta1.hypot(self.eta2)
    }

    /// Gate time τ₂ with `λ τ₂ = π`.
    pub fn duration(&self) -> f64 {
        PI / self.lambda()
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::build(self.vartheta, self.eta1, self.eta2, kappa, self.convention)
    }

    pub fn channels(&self) -> Vec<CollapseChannel> {
        vec![cavity_decay_channel(self.kappa).expect("kappa validated at construction")]
    }
}

/// Single-excitation Hamiltonian: `⟨Psi2|H|Psi3⟩ = η₁`, `⟨Psi1|H|Psi3⟩ = η₂`.
pub fn two_qubit_hamiltonian(m: &TwoQubitModel) -> HamiltonianSchedule {
    let s = two_qubit_space();
    let h = Operator::from_fn(&s, |i, j| match (i, j) {
        (2, 3) | (3, 2) => C64::new(m.eta1, 0.0),
        (1, 3) | (3, 1) => C64::new(m.eta2, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    HamiltonianSchedule::constant(h, m.duration()).expect("real symmetric Hamiltonian")
}

/// Block-diagonal two-qubit gate on `{|00⟩, |01⟩, |10⟩, |11⟩}`.
pub fn holonomic_two_qubit_gate(vartheta: f64) -> Operator {
    let (c, s) = (vartheta.cos(), vartheta.sin());
    let space = HilbertSpace::new(["00", "01", "10", "11"]).expect("static labels");
    Operator::from_real_rows(
        &space,
        &[
            &[c, s, 0.0, 0.0],
            &[s, -c, 0.0, 0.0],
            &[0.0, 0.0, -c, s],
            &[0.0, 0.0, s, c],
        ],
    )
    .expect("4x4")
}

/// Cavity photon loss `|G⟩⟨Psi3|` at rate κ.
pub fn cavity_decay_channel(kappa: f64) -> Result<CollapseChannel> {
    let s = two_qubit_space();
    CollapseChannel::new("kappa", Operator::ket_bra(&s, "G", "Psi3")?, kappa)
}
