use holosim_core::eigen::eig_hermitian;
use holosim_core::expm::matrix_exp;
use holosim_core::operator::{adjoint, outer};
use holosim_core::{HilbertSpace, Operator, C64};
use proptest::prelude::*;

fn complex_matrix(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        let s = HilbertSpace::numbered(dim);
        Operator::from_fn(&s, |i, j| {
            let (re, im) = v[i * dim + j];
            C64::new(re, im)
        })
    })
}

fn hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    complex_matrix(dim).prop_map(|a| (&a + &a.adjoint()).scale(C64::new(0.5, 0.0)))
}

proptest! {
    #[test]
    fn adjoint_is_involution(a in complex_matrix(4)) {
        prop_assert_eq!(adjoint(&adjoint(&a)), a);
    }

    #[test]
    fn trace_is_cyclic(a in complex_matrix(4), b in complex_matrix(4)) {
        let ab = (&a * &b).trace();
        let ba = (&b * &a).trace();
        prop_assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn exp_of_anti_hermitian_inverts(h in hermitian(4), scale in 0.0f64..1.0) {
        // anti-Hermitian with Frobenius norm at most 10
        let norm = h.norm().max(1e-12);
        let a = h.scale(C64::new(0.0, 10.0 * scale / norm));
        let e = matrix_exp(&a).unwrap();
        let inv = matrix_exp(&(-&a)).unwrap();
        let prod = &e * &inv;
        prop_assert!(prod.max_abs_diff(&Operator::identity(a.space())).unwrap() < 1e-10);
    }

    #[test]
    fn schrodinger_propagator_is_unitary(h in hermitian(5), t in 0.0f64..5.0) {
        let u = matrix_exp(&h.scale(C64::new(0.0, -t))).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-10);
    }

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian(6)) {
        let e = eig_hermitian(&h).unwrap();
        let mut rebuilt = Operator::zeros(h.space());
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            rebuilt = &rebuilt + &outer(v, v).unwrap().scale(C64::new(*lam, 0.0));
        }
        prop_assert!(rebuilt.max_abs_diff(&h).unwrap() < 1e-9);
    }
}
