//! Simulation and rate analytics for Kerr cat qubits stabilized against
//! leakage by frequency-selective engineered dissipation.

pub mod bases;
pub mod error;
pub mod experiment;
pub mod filter;
pub mod fit;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod operators;
pub mod params;
pub mod rates;

pub use error::{Error, Result};
pub use operators::{
    annihilation_op, displacement_op, hermitian_eigensystem, tensor_product, EigenSystem, OperatorMatrix, StateVector,
};
