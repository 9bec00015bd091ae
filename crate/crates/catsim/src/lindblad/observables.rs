use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::evolve::Observable;
use crate::bases::{gauge_level_projector, logical_z, CatBasis};
use crate::error::{Error, Result};
use crate::operators::{tensor_product, OperatorMatrix};

/// Qubit, gauge and filter observables of a joint state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalRecord {
    pub z_l: f64,
    pub parity: f64,
    /// Population of each gauge level, summed over both wells.
    pub populations: Vec<f64>,
    pub leakage: f64,
    pub filter_occupation: f64,
}

fn filter_number(filter_dim: usize) -> OperatorMatrix {
    let diag: Vec<f64> = (0..filter_dim).map(|j| if j == 0 { 0.0 } else { 1.0 }).collect();
    OperatorMatrix::from_diag(&diag)
}

/// Observables named `z_l`, `parity`, `p0..p{d-1}`, `leakage` and
/// `filter_occupation` on the space `qubit ⊗ gauge ⊗ filter`.
pub fn logical_observable_set(basis: &dyn CatBasis, filter_dim: usize) -> Result<Vec<Observable>> {
    if filter_dim == 0 {
        return Err(Error::InvalidDimension("filter dimension must be at least 1".into()));
    }
    let d = basis.d_gauge();
    let id_f = OperatorMatrix::identity(filter_dim);
    let lift = |op: &OperatorMatrix| tensor_product(op, &id_f);
    let mut out = vec![
        Observable::new("z_l", lift(&logical_z(d))),
        Observable::new("parity", lift(&basis.parity()?.hermitian_part())),
    ];
    let mut leak = OperatorMatrix::zeros(2 * d);
    for n in 0..d {
        let p = gauge_level_projector(d, n);
        if n >= 1 {
            leak = &leak + &p;
        }
        out.push(Observable::new(format!("p{n}"), lift(&p)));
    }
    out.push(Observable::new("leakage", lift(&leak)));
    out.push(Observable::new(
        "filter_occupation",
        tensor_product(&OperatorMatrix::identity(2 * d), &filter_number(filter_dim)),
    ));
    Ok(out)
}

/// Evaluates [`logical_observable_set`] on a single state.
pub fn logical_observables(rho: &DensityMatrix, basis: &dyn CatBasis, filter_dim: usize) -> Result<LogicalRecord> {
    let expected = basis.dim() * filter_dim;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    let obs = logical_observable_set(basis, filter_dim)?;
    let values = obs
        .iter()
        .map(|o| rho.expectation(&o.op))
        .collect::<Result<Vec<f64>>>()?;
    let d = basis.d_gauge();
    Ok(LogicalRecord {
        z_l: values[0],
        parity: values[1],
        populations: values[2..2 + d].to_vec(),
        leakage: values[2 + d],
        filter_occupation: values[3 + d],
    })
}
