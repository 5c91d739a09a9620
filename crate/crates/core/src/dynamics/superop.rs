//! Liouvillian superoperators on column-stacked density matrices.
//!
//! With `vec` stacking columns, `vec(AXB) = (Bᵀ ⊗ A) vec(X)`, so
//!
//! ```text
//! L = −i(I⊗H − Hᵀ⊗I) + Σ (γ/2)(2 conj(A)⊗A − I⊗A†A − (A†A)ᵀ⊗I).
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::lindblad::CollapseChannel;
use super::schedule::{Generator, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::operator::{DensityMatrix, Operator, HERMITIAN_TOL};
use crate::space::HilbertSpace;

/// Column-stacking vectorization.
pub fn vec(rho: &DensityMatrix) -> DVector<C64> {
    // nalgebra storage is column-major
    DVector::from_column_slice(rho.matrix().as_slice())
}

/// Inverse of [`vec`]. The result is not validated.
pub fn unvec(space: &HilbertSpace, v: &DVector<C64>) -> Result<DensityMatrix> {
    let d = space.dim();
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        space.clone(),
        DMatrix::from_column_slice(d, d, v.as_slice()),
    ))
}

/// Linear map on vectorized density matrices of one space.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
}

impl Superoperator {
    pub fn identity(space: &HilbertSpace) -> Self {
        let n = space.dim() * space.dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Generator of the master equation for a constant Hamiltonian.
    pub fn liouvillian(h: &Operator, channels: &[CollapseChannel]) -> Result<Self> {
        h.ensure_hermitian(HERMITIAN_TOL)?;
        let space = h.space().clone();
        let d = space.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let hm = h.matrix();
        let mut l = (id.kronecker(hm) - hm.transpose().kronecker(&id)) * C64::new(0.0, -1.0);
        for ch in channels {
            space.ensure_same(ch.operator().space())?;
            let a = ch.operator().matrix();
            let ada = a.adjoint() * a;
            let term = a.conjugate().kronecker(a) * C64::new(2.0, 0.0)
                - id.kronecker(&ada)
                - ada.transpose().kronecker(&id);
            l += term * C64::new(0.5 * ch.rate(), 0.0);
        }
        Ok(Self { space, matrix: l })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `exp(self · t)`.
    pub fn exp(&self, t: f64) -> Result<Self> {
        Ok(Self {
            space: self.space.clone(),
            matrix: expm(&(&self.matrix * C64::new(t, 0.0)))?,
        })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.space.ensure_same(rho.space())?;
        unvec(&self.space, &(&self.matrix * vec(rho)))
    }

    /// `self ∘ earlier`: apply `earlier` first.
    pub fn after(&self, earlier: &Superoperator) -> Result<Self> {
        self.space.ensure_same(&earlier.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &earlier.matrix,
        })
    }
}

/// `exp(L t)` for a constant Hamiltonian and channel set.
pub fn superoperator_exp(
    h: &Operator,
    channels: &[CollapseChannel],
    t: f64,
) -> Result<Superoperator> {
    Superoperator::liouvillian(h, channels)?.exp(t)
}

/// Product of segment maps over a piecewise-constant schedule.
pub fn schedule_superoperator(
    sched: &HamiltonianSchedule,
    channels: &[CollapseChannel],
) -> Result<Superoperator> {
    let mut total = Superoperator::identity(sched.space());
    for (index, seg) in sched.segments().iter().enumerate() {
        let Generator::Constant(h) = seg.generator() else {
            return Err(Error::NonConstantSegment { index });
        };
        total = superoperator_exp(h, channels, seg.duration())?.after(&total)?;
    }
    Ok(total)
}
