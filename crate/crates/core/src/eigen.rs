use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::operator::{Operator, StateVector, HERMITIAN_TOL};

/// Spectrum of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

/// Eigen-decomposition of a Hermitian operator.
///
/// Each eigenvector is rotated so that its first component with modulus
/// above 1e-12 is real and positive.
pub fn eig_hermitian(a: &Operator) -> Result<HermitianEigen> {
    a.ensure_hermitian(HERMITIAN_TOL)?;
    let herm: DMatrix<C64> = (a.matrix() + a.matrix().adjoint()) * C64::new(0.5, 0.0);
    let decomposition = SymmetricEigen::new(herm);

    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| decomposition.eigenvalues[i].total_cmp(&decomposition.eigenvalues[j]));

    let values = order
        .iter()
        .map(|&i| decomposition.eigenvalues[i])
        .collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let v: DVector<C64> = fix_phase(decomposition.eigenvectors.column(i).into_owned());
            StateVector::unnormalized(a.space().clone(), v)
        })
        .collect();
    Ok(HermitianEigen { values, vectors })
}

fn fix_phase(mut v: DVector<C64>) -> DVector<C64> {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        v *= lead.conj() / lead.norm();
    }
    let n = v.norm();
    v / C64::new(n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::operator::outer;
    use crate::space::HilbertSpace;

    #[test]
    fn sigma_z_spectrum() {
        let q = HilbertSpace::qubit();
        let z = Operator::from_real_rows(&q, &[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let e = eig_hermitian(&z).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert!((e.vectors[0].amplitude(1) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let s = HilbertSpace::numbered(1);
        let a = Operator::from_fn(&s, |_, _| C64::new(2.5, 0.0));
        let e = eig_hermitian(&a).unwrap();
        assert_eq!(e.values, vec![2.5]);
        assert_eq!(e.vectors[0].amplitude(0), C64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let q = HilbertSpace::qubit();
        let a = Operator::ket_bra(&q, "0", "1").unwrap();
        assert!(matches!(eig_hermitian(&a), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn complex_hermitian_reconstruction_and_phase() {
        let s = HilbertSpace::numbered(4);
        let a = Operator::from_fn(&s, |i, j| {
            let (i, j) = (i as f64, j as f64);
            if i == j {
                C64::new(i - 1.5, 0.0)
            } else if i < j {
                C64::new(0.3 * (i + j), 0.2 * (j - i))
            } else {
                C64::new(0.3 * (i + j), -0.2 * (i - j))
            }
        });
        let e = eig_hermitian(&a).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let mut rebuilt = Operator::zeros(&s);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            rebuilt = &rebuilt + &outer(v, v).unwrap().scale(C64::new(*lam, 0.0));
            let lead = v.amplitudes().iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
            let av = a.apply(v).unwrap();
            let lv = v.amplitudes() * C64::new(*lam, 0.0);
            assert!((av.amplitudes() - lv).norm() < 1e-9);
        }
        assert!(rebuilt.max_abs_diff(&a).unwrap() < 1e-9);
        for i in 0..4 {
            for j in 0..4 {
                let ip = e.vectors[i].inner(&e.vectors[j]).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(want, 0.0)).norm() < 1e-9);
            }
        }
    }
}
