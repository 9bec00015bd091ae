use ndarray::{Array1, Array2};

use super::{hermitian_eigensystem, OperatorMatrix, StateVector, C64};
use crate::error::{Error, Result};

/// Fock truncation used when none is given: `max(60, ⌈8α² + 10⌉)`.
pub fn default_fock_dim(alpha2: f64) -> usize {
    ((8.0 * alpha2 + 10.0).ceil() as usize).max(60)
}

/// Rejects truncations with `|α|² > dim/4`.
pub fn truncation_guard(alpha2: f64, dim: usize) -> Result<()> {
    if !alpha2.is_finite() || alpha2 * 4.0 > dim as f64 {
        return Err(Error::Truncation {
            alpha2,
            dim,
            suggested: default_fock_dim(alpha2),
        });
    }
    Ok(())
}

/// Truncated lowering operator with `(n−1, n)` entry `√n`.
pub fn annihilation_op(dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "annihilation operator needs dim >= 2, got {dim}"
        )));
    }
    let mut m = Array2::<C64>::zeros((dim, dim));
    for n in 1..dim {
        m[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix::from_array(m)
}

pub fn number_op(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_diag(&(0..dim).map(|n| n as f64).collect::<Vec<_>>())
}

/// Photon-number parity `(−1)^n`.
pub fn parity_op(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_diag(
        &(0..dim)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
            .collect::<Vec<_>>(),
    )
}

pub fn fock_state(dim: usize, n: usize) -> Result<StateVector> {
    StateVector::basis(dim, n)
}

/// Coherent state `|α⟩` for real α, renormalized on the truncated space.
pub fn coherent_state(alpha: f64, dim: usize) -> Result<StateVector> {
    truncation_guard(alpha * alpha, dim)?;
    let mut amps = Array1::<C64>::zeros(dim);
    let mut c = (-alpha * alpha / 2.0).exp();
    for n in 0..dim {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        amps[n] = C64::new(c, 0.0);
    }
    StateVector::normalized(amps)
}

/// `exp(α a† − α a)` on the truncated space, through the eigendecomposition
/// of the Hermitian generator `iα(a† − a)`.
pub fn displacement_op(alpha: f64, dim: usize) -> Result<OperatorMatrix> {
    truncation_guard(alpha * alpha, dim)?;
    if alpha == 0.0 {
        return Ok(OperatorMatrix::identity(dim));
    }
    let mut gen = Array2::<C64>::zeros((dim, dim));
    for n in 0..dim - 1 {
        let s = alpha * ((n + 1) as f64).sqrt();
        gen[[n + 1, n]] = C64::new(0.0, s);
        gen[[n, n + 1]] = C64::new(0.0, -s);
    }
    let eig = hermitian_eigensystem(&OperatorMatrix::hermitian(gen)?)?;
    let v = &eig.vectors;
    let mut scaled = v.clone();
    for (j, &lam) in eig.values.iter().enumerate() {
        let phase = C64::new(0.0, -lam).exp();
        scaled.column_mut(j).mapv_inplace(|x| x * phase);
    }
    let vh = v.t().mapv(|x| x.conj());
    OperatorMatrix::from_array(scaled.dot(&vh))
}
