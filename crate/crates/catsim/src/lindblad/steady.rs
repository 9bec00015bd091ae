use ndarray::{Array1, Array2};

use super::density::DensityMatrix;
use super::liouvillian::RealLiouvillian;
use super::Dissipator;
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::operators::OperatorMatrix;

/// Required separation between the null vector and the rest of the spectrum.
pub const STEADY_STATE_GAP_FACTOR: f64 = 1e3;
/// Bound on `‖L x‖ / (‖L‖ ‖x‖)` for an accepted steady state.
pub const STEADY_STATE_RESIDUAL_TOL: f64 = 1e-9;
const POWER_ITERATIONS: usize = 60;

fn unit(v: Array1<f64>) -> Array1<f64> {
    let n = v.dot(&v).sqrt();
    v / n
}

fn seed(n: usize) -> Array1<f64> {
    unit(Array1::from_shape_fn(n, |i| 1.0 + ((i * 7919) % 113) as f64 / 113.0))
}

/// Largest singular value by power iteration on `AᵀA`.
pub(crate) fn sigma_max(a: &Array2<f64>) -> f64 {
    let mut x = seed(a.ncols());
    let mut s = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let y = a.t().dot(&a.dot(&x));
        let n = y.dot(&y).sqrt();
        if n == 0.0 {
            return 0.0;
        }
        s = n.sqrt();
        x = y / n;
    }
    s
}

/// Smallest singular value by inverse iteration with LU factors of `A` and `Aᵀ`.
fn sigma_min(lu: &Lu<f64>, lut: &Lu<f64>, n: usize) -> Result<f64> {
    let mut x = seed(n);
    let mut s = f64::INFINITY;
    for _ in 0..POWER_ITERATIONS {
        let y = lu.solve_vec(&lut.solve_vec(&x)?)?;
        let norm = y.dot(&y).sqrt();
        if !norm.is_finite() {
            return Ok(0.0);
        }
        s = 1.0 / norm.sqrt();
        x = y / norm;
    }
    Ok(s)
}

/// Unique stationary state of the Lindblad generator.
///
/// One stationarity equation is replaced by the trace condition. The
/// resulting system must be well separated from singular, measured against
/// both the residual of the null vector and machine precision.
pub fn steady_state(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Result<DensityMatrix> {
    let gen = RealLiouvillian::new(h, dissipators)?;
    let r = gen.matrix();
    let nn = r.nrows();
    let coords = gen.coords();
    let mut aug = r.clone();
    aug.row_mut(0).assign(&coords.trace_functional());
    let lu = Lu::factor(&aug)
        .map_err(|e| Error::NonUniqueSteadyState(format!("trace-augmented generator is singular: {e}")))?;
    let lut = Lu::factor(&aug.t().to_owned())
        .map_err(|e| Error::NonUniqueSteadyState(format!("trace-augmented generator is singular: {e}")))?;
    let mut rhs = Array1::<f64>::zeros(nn);
    rhs[0] = 1.0;
    let x = lu.solve_vec(&rhs)?;
    let r_norm = sigma_max(r);
    let xnorm = x.dot(&x).sqrt();
    let residual = r.dot(&x);
    let residual = residual.dot(&residual).sqrt();
    let smallest = (residual / xnorm).max(f64::EPSILON * r_norm);
    let gap = sigma_min(&lu, &lut, nn)?;
    if !(gap > STEADY_STATE_GAP_FACTOR * smallest) {
        return Err(Error::NonUniqueSteadyState(format!(
            "spectral gap {gap:e} is not separated from the null value {smallest:e}"
        )));
    }
    if residual > STEADY_STATE_RESIDUAL_TOL * r_norm * xnorm {
        return Err(Error::NonUniqueSteadyState(format!(
            "stationarity residual {residual:e} exceeds tolerance"
        )));
    }
    let rho = coords.from_coords(&x);
    let tr = rho.trace().re;
    DensityMatrix::new(&rho * (1.0 / tr))
}
