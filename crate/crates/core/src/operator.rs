//! Operators, state vectors and density matrices over a [`HilbertSpace`].

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::space::HilbertSpace;

/// Hermiticity tolerance for operators handed to spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;
/// Lowest admissible eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Dense square complex matrix acting on a labeled space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn from_fn(space: &HilbertSpace, f: impl FnMut(usize, usize) -> C64) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::from_fn(d, d, f),
        }
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(space: &HilbertSpace, rows: &[&[f64]]) -> Result<Self> {
        let d = space.dim();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rows.len(),
            });
        }
        Ok(Self::from_fn(space, |i, j| C64::new(rows[i][j], 0.0)))
    }

    /// `|ket⟩⟨bra|` by basis label.
    pub fn ket_bra(space: &HilbertSpace, ket: &str, bra: &str) -> Result<Self> {
        let (i, j) = (space.index_of(ket)?, space.index_of(bra)?);
        let mut op = Self::zeros(space);
        op.matrix[(i, j)] = C64::new(1.0, 0.0);
        Ok(op)
    }

    /// Projector `|label⟩⟨label|`.
    pub fn projector(space: &HilbertSpace, label: &str) -> Result<Self> {
        Self::ket_bra(space, label, label)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, ket: usize, bra: usize) -> C64 {
        self.matrix[(ket, bra)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * factor,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.space.ensure_same(psi.space())?;
        Ok(StateVector::unnormalized(
            self.space.clone(),
            &self.matrix * psi.amplitudes(),
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.matrix
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// `max |(A†A − I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs_diff(
            &(self.matrix.adjoint() * &self.matrix),
            &DMatrix::identity(d, d),
        )
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > tol || !defect.is_finite() {
            return Err(Error::NonHermitian { defect });
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Block of `self` on the basis states at `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize], space: &HilbertSpace) -> Result<Operator> {
        if indices.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: indices.len(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: bad + 1,
            });
        }
        Ok(Operator::from_fn(space, |i, j| {
            self.matrix[(indices[i], indices[j])]
        }))
    }
}

impl Add for &Operator {
    type Output = Operator;

    /// Panics if the operands live on spaces of different dimension.
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    /// Panics if the operands live on spaces of different dimension.
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Panics if the operands live on spaces of different dimension.
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator dimension mismatch")
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(C64::new(self, 0.0))
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(C64::new(-1.0, 0.0))
    }
}

pub fn adjoint(a: &Operator) -> Operator {
    a.adjoint()
}

/// Kronecker product on `a.space() ⊗ b.space()`.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    Operator {
        space: a.space.tensor(&b.space),
        matrix: a.matrix.kronecker(&b.matrix),
    }
}

pub fn trace(a: &Operator) -> C64 {
    a.trace()
}

/// `|u⟩⟨v|`.
pub fn outer(u: &StateVector, v: &StateVector) -> Result<Operator> {
    u.space.ensure_same(&v.space)?;
    Ok(Operator {
        space: u.space.clone(),
        matrix: &u.amplitudes * v.amplitudes.adjoint(),
    })
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation(a: &Operator, psi: &StateVector) -> Result<C64> {
    a.space.ensure_same(&psi.space)?;
    Ok(psi.amplitudes.dotc(&(&a.matrix * &psi.amplitudes)))
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.space.ensure_same(&b.space)?;
    Ok(Operator {
        space: a.space.clone(),
        matrix: &a.matrix * &b.matrix - &b.matrix * &a.matrix,
    })
}

pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Ket over a labeled space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Normalized state from raw amplitudes.
    pub fn new(space: HilbertSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amplitudes.len(),
            });
        }
        Self::unnormalized(space, amplitudes).normalize()
    }

    pub fn from_slice(space: &HilbertSpace, amplitudes: &[C64]) -> Result<Self> {
        Self::new(space.clone(), DVector::from_column_slice(amplitudes))
    }

    pub fn from_real(space: &HilbertSpace, amplitudes: &[f64]) -> Result<Self> {
        let amps: Vec<C64> = amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect();
        Self::from_slice(space, &amps)
    }

    /// Basis state `|label⟩`.
    pub fn basis(space: &HilbertSpace, label: &str) -> Result<Self> {
        let i = space.index_of(label)?;
        let mut amps = DVector::zeros(space.dim());
        amps[i] = C64::new(1.0, 0.0);
        Ok(Self {
            space: space.clone(),
            amplitudes: amps,
        })
    }

    pub(crate) fn unnormalized(space: HilbertSpace, amplitudes: DVector<C64>) -> Self {
        Self { space, amplitudes }
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.amplitudes.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            space: self.space,
            amplitudes: self.amplitudes / C64::new(n, 0.0),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> C64 {
        self.amplitudes[i]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.space.ensure_same(&other.space)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Same amplitudes, carried over to another space of equal dimension.
    pub fn relabel(&self, space: &HilbertSpace) -> Result<StateVector> {
        self.space.ensure_same(space)?;
        Ok(Self {
            space: space.clone(),
            amplitudes: self.amplitudes.clone(),
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the default tolerances.
    pub fn new(space: HilbertSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let op = Operator::new(space, matrix)?;
        let rho = Self {
            space: op.space,
            matrix: op.matrix,
        };
        rho.check(HERMITIAN_TOL, TRACE_TOL, POSITIVITY_TOL)?;
        Ok(rho)
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0),
        }
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`; weights must be non-negative and sum to one.
    pub fn mixture(components: &[(f64, StateVector)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidDensityMatrix("empty mixture".into()));
        };
        let space = first.space.clone();
        let d = space.dim();
        let mut m = DMatrix::zeros(d, d);
        for (w, psi) in components {
            space.ensure_same(&psi.space)?;
            if *w < 0.0 {
                return Err(Error::InvalidDensityMatrix(format!("negative weight {w}")));
            }
            m += psi.to_density().matrix * C64::new(*w, 0.0);
        }
        Self::new(space, m)
    }

    pub(crate) fn from_matrix_unchecked(space: HilbertSpace, matrix: DMatrix<C64>) -> Self {
        Self { space, matrix }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    pub fn as_operator(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let op = Operator {
            space: self.space.clone(),
            matrix: herm,
        };
        eig_hermitian(&op).map(|e| e.values[0]).unwrap_or(f64::NAN)
    }

    /// Diagonal entries (basis-state populations).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Result<DensityMatrix> {
        self.space.ensure_same(u.space())?;
        Ok(Self {
            space: self.space.clone(),
            matrix: u.matrix() * &self.matrix * u.matrix().adjoint(),
        })
    }

    pub(crate) fn check(&self, herm_tol: f64, trace_tol: f64, pos_tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h.is_nan() || h > herm_tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity defect {h:.3e}"
            )));
        }
        let t = (self.trace() - C64::new(1.0, 0.0)).norm();
        if t.is_nan() || t > trace_tol {
            return Err(Error::InvalidDensityMatrix(format!("trace defect {t:.3e}")));
        }
        let m = self.min_eigenvalue();
        if m.is_nan() || m < -pos_tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {m:.3e}"
            )));
        }
        Ok(())
    }
}
