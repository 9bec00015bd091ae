use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors.
pub fn jacobi_eigh(m: &Array2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    let n = m.nrows();
    let mut a = m.as_standard_layout().into_owned();
    let mut v = Array2::<Complex64>::eye(n);
    let scale = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tol = scale * f64::EPSILON;

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            converged = true;
            break;
        }
        let ad = a.as_slice_mut().expect("standard layout");
        let vd = v.as_slice_mut().expect("standard layout");
        for p in 0..n {
            for q in p + 1..n {
                let apq = ad[p * n + q];
                let mag = apq.norm();
                if mag <= tol * 1e-3 / n as f64 {
                    continue;
                }
                let app = ad[p * n + p].re;
                let aqq = ad[q * n + q].re;
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = [[c, s], [-s conj(phase), c conj(phase)]] on (p, q)
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                for k in 0..n {
                    let akp = ad[k * n + p];
                    let akq = ad[k * n + q];
                    ad[k * n + p] = akp * upp + akq * uqp;
                    ad[k * n + q] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = ad[p * n + k];
                    let aqk = ad[q * n + k];
                    ad[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                    ad[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                ad[p * n + q] = Complex64::new(0.0, 0.0);
                ad[q * n + p] = Complex64::new(0.0, 0.0);
                ad[p * n + p] = Complex64::new(ad[p * n + p].re, 0.0);
                ad[q * n + q] = Complex64::new(ad[q * n + q].re, 0.0);
                for k in 0..n {
                    let vkp = vd[k * n + p];
                    let vkq = vd[k * n + q];
                    vd[k * n + p] = vkp * upp + vkq * uqp;
                    vd[k * n + q] = vkp * upq + vkq * uqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Contract(format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let values = order.iter().map(|&i| a[[i, i]].re).collect();
    let mut vectors = Array2::<Complex64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok((values, vectors))
}
