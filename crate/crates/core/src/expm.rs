//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Largest 1-norm for which each approximant meets unit roundoff.
const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539_398_330_063_23e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068;
const THETA13: f64 = 5.371920351148152;

/// `exp(A)` for an operator.
pub fn matrix_exp(a: &Operator) -> Result<Operator> {
    let m = expm(a.matrix())?;
    Operator::new(a.space().clone(), m)
}

/// `exp(A)` for a raw square matrix. Rejects non-finite input.
pub fn expm(a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if n == 1 {
        return Ok(DMatrix::from_element(1, 1, a[(0, 0)].exp()));
    }

    let norm = one_norm(a);
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = a * a;

    let low_order = [
        (THETA3, &B3[..]),
        (THETA5, &B5[..]),
        (THETA7, &B7[..]),
        (THETA9, &B9[..]),
    ];
    for (theta, b) in low_order {
        if norm <= theta {
            return pade_low(a, &a2, &ident, b);
        }
    }

    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let factor = C64::new(2f64.powi(-s), 0.0);
    let scaled = a * factor;
    let scaled2 = &a2 * (factor * factor);
    let mut r = pade13(&scaled, &scaled2, &ident)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn pade_low(
    a: &DMatrix<C64>,
    a2: &DMatrix<C64>,
    ident: &DMatrix<C64>,
    b: &[f64],
) -> Result<DMatrix<C64>> {
    // Even and odd parts in powers of A².
    let mut u = ident * C64::new(b[1], 0.0);
    let mut v = ident * C64::new(b[0], 0.0);
    let mut power = ident.clone();
    for k in 1..b.len() / 2 {
        power = &power * a2;
        u += &power * C64::new(b[2 * k + 1], 0.0);
        v += &power * C64::new(b[2 * k], 0.0);
    }
    let u = a * u;
    solve_pade(&u, &v)
}

fn pade13(a: &DMatrix<C64>, a2: &DMatrix<C64>, ident: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let c = |x: f64| C64::new(x, 0.0);
    let a4 = a2 * a2;
    let a6 = &a4 * a2;
    let u_inner = &a6 * c(B13[13]) + &a4 * c(B13[11]) + a2 * c(B13[9]);
    let u = a
        * (&a6 * u_inner + &a6 * c(B13[7]) + &a4 * c(B13[5]) + a2 * c(B13[3]) + ident * c(B13[1]));
    let v_inner = &a6 * c(B13[12]) + &a4 * c(B13[10]) + a2 * c(B13[8]);
    let v = &a6 * v_inner + &a6 * c(B13[6]) + &a4 * c(B13[4]) + a2 * c(B13[2]) + ident * c(B13[0]);
    solve_pade(&u, &v)
}

/// `(V − U)⁻¹ (V + U)`.
fn solve_pade(u: &DMatrix<C64>, v: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).ok_or(Error::NonFinite)
}

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
