use ndarray::Array2;

use super::{norm1, Lu, Scalar};
use crate::error::Result;

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
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

fn combine<T: Scalar>(terms: &[(f64, &Array2<T>)], identity_coeff: f64, n: usize) -> Array2<T> {
    let mut out = Array2::<T>::zeros((n, n));
    for &(c, m) in terms {
        out.scaled_add(T::from_real(c), m);
    }
    for i in 0..n {
        out[[i, i]] = out[[i, i]] + T::from_real(identity_coeff);
    }
    out
}

/// Matrix exponential by degree-13 Padé approximation with scaling and squaring.
pub fn expm<T: Scalar>(a: &Array2<T>) -> Result<Array2<T>> {
    let n = a.nrows();
    let nrm = norm1(a);
    let squarings = if nrm > THETA_13 {
        (nrm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scale = T::from_real(0.5f64.powi(squarings));
    let a = a.mapv(|x| x * scale);
    let b = &PADE_13;

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let inner_u = combine(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], 0.0, n);
    let mut u_poly = a6.dot(&inner_u);
    u_poly.scaled_add(T::from_real(b[7]), &a6);
    u_poly.scaled_add(T::from_real(b[5]), &a4);
    u_poly.scaled_add(T::from_real(b[3]), &a2);
    for i in 0..n {
        u_poly[[i, i]] = u_poly[[i, i]] + T::from_real(b[1]);
    }
    let u = a.dot(&u_poly);

    let inner_v = combine(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], 0.0, n);
    let mut v = a6.dot(&inner_v);
    v.scaled_add(T::from_real(b[6]), &a6);
    v.scaled_add(T::from_real(b[4]), &a4);
    v.scaled_add(T::from_real(b[2]), &a2);
    for i in 0..n {
        v[[i, i]] = v[[i, i]] + T::from_real(b[0]);
    }

    let p = &v + &u;
    let q = &v - &u;
    let mut r = Lu::factor(&q)?.solve_mat(&p)?;
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    Ok(r)
}
