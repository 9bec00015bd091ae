//! Lindblad master-equation machinery: Liouvillians, propagation, steady
//! states and logical observables.

mod density;
mod evolve;
mod liouvillian;
mod observables;
mod steady;

pub use density::{DensityMatrix, HERMITICITY_TOL, POSITIVITY_SLACK, TRACE_TOL};
pub use evolve::{
    evolve, evolve_time_dependent, evolve_with, EvolveOptions, Integrator, Observable, Trajectory,
    EXPONENTIAL_MAX_SUPERDIM, POSITIVITY_CHECKPOINTS, RK_ATOL, RK_RTOL, TRAJECTORY_TRACE_TOL,
};
pub use liouvillian::{build_liouvillian, lindblad_rhs, unvec, vec_col, HermitianCoords, Liouvillian, RealLiouvillian};
pub use observables::{logical_observable_set, logical_observables, LogicalRecord};
pub use steady::{steady_state, STEADY_STATE_GAP_FACTOR, STEADY_STATE_RESIDUAL_TOL};

use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;

/// Jump operator `L` with rate `γ`, contributing `γ D[L]`.
#[derive(Clone, Debug)]
pub struct Dissipator {
    pub jump: OperatorMatrix,
    pub rate: f64,
}

impl Dissipator {
    pub fn new(jump: OperatorMatrix, rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dissipator rate must be >= 0, got {rate}"
            )));
        }
        Ok(Self { jump, rate })
    }

    pub fn dim(&self) -> usize {
        self.jump.dim()
    }
}
