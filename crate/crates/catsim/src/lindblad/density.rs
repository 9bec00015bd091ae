use crate::error::{Error, Result};
use crate::operators::{hermitian_eigensystem, OperatorMatrix, StateVector};

pub const TRACE_TOL: f64 = 1e-8;
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated as roundoff.
pub const POSITIVITY_SLACK: f64 = -1e-7;

/// A validated density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: OperatorMatrix,
}

impl DensityMatrix {
    /// Validates trace, hermiticity and positivity.
    pub fn new(op: OperatorMatrix) -> Result<Self> {
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("density matrix trace {tr} differs from 1")));
        }
        let herm = op.max_diff(&op.adjoint());
        if herm > HERMITICITY_TOL {
            return Err(Error::Contract(format!("density matrix hermiticity defect {herm:e}")));
        }
        let rho = Self {
            op: op.hermitian_part(),
        };
        let lowest = rho.min_eigenvalue()?;
        if lowest < POSITIVITY_SLACK {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {lowest:e}"
            )));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` for a normalized state.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Contract(format!("pure state has norm {n}")));
        }
        Ok(Self {
            op: OperatorMatrix::projector(psi),
        })
    }

    /// Wraps an operator without validation.
    pub(crate) fn unchecked(op: OperatorMatrix) -> Self {
        Self { op }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.op
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.op.dot(&self.op).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = hermitian_eigensystem(&self.op.hermitian_part())?;
        Ok(eig.values[0])
    }

    /// `Re tr(O ρ)`
    pub fn expectation(&self, o: &OperatorMatrix) -> Result<f64> {
        if o.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: o.dim(),
            });
        }
        let a = o.entries();
        let r = self.op.entries();
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (a[[i, j]] * r[[j, i]]).re;
            }
        }
        Ok(acc)
    }

    /// Convex combination `wρ₁ + (1 − w)ρ₂`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            op: &(&self.op * w) + &(&other.op * (1.0 - w)),
        })
    }
}
