use ndarray::{Array1, Array2};

use super::{kerr_hamiltonian, CatBasis};
use crate::error::{Error, Result};
use crate::linalg::jacobi_eigh;
use crate::operators::{annihilation_op, parity_op, truncation_guard, OperatorMatrix, StateVector, C64};

pub const DEFAULT_D_GAUGE: usize = 5;
pub const MAX_D_GAUGE: usize = 8;
/// Minimum `|⟨P⟩|` for a retained eigenstate to count as parity-definite.
pub const PARITY_CLASSIFICATION_MIN: f64 = 0.99;
/// Largest population allowed on the top quarter of the Fock ladder.
pub const EDGE_POPULATION_MAX: f64 = 1e-8;

/// Eigenbasis of the Kerr cat Hamiltonian, arranged as qubit ⊗ gauge.
#[derive(Clone, Debug)]
pub struct KerrBasis {
    pub kerr: f64,
    pub alpha2: f64,
    pub d_gauge: usize,
    pub fock_dim: usize,
    pub even_states: Vec<StateVector>,
    pub odd_states: Vec<StateVector>,
    /// Energies closest to zero first.
    pub energies_even: Vec<f64>,
    pub energies_odd: Vec<f64>,
    /// `|0⟩⊗|n″⟩` for `n < d` followed by `|1⟩⊗|n″⟩`.
    pub well_states: Vec<StateVector>,
    /// Half the even/odd splitting per level.
    pub chi_prime: Vec<f64>,
    /// `|⟨0⊗n″|a†|0⊗0″⟩|`
    pub lambda_0n: Vec<f64>,
    isometry: Array2<C64>,
}

/// Diagonalizes one parity block of `h`, returning the `d` eigenpairs
/// closest to zero energy embedded back into the full Fock space.
fn parity_branch(h: &OperatorMatrix, start: usize, d: usize) -> Result<(Vec<f64>, Vec<Array1<C64>>)> {
    let n = h.dim();
    let idx: Vec<usize> = (start..n).step_by(2).collect();
    if idx.len() < d {
        return Err(Error::BasisConstruction(format!(
            "parity block of size {} cannot hold {d} levels",
            idx.len()
        )));
    }
    let block = Array2::from_shape_fn((idx.len(), idx.len()), |(i, j)| h.get(idx[i], idx[j]));
    let (vals, vecs) = jacobi_eigh(&block)?;
    let mut energies = Vec::with_capacity(d);
    let mut states = Vec::with_capacity(d);
    for k in (vals.len() - d..vals.len()).rev() {
        let mut full = Array1::<C64>::zeros(n);
        for (i, &f) in idx.iter().enumerate() {
            full[f] = vecs[[i, k]];
        }
        let (peak, _) = full.iter().enumerate().fold(
            (0, 0.0),
            |(bi, bv), (i, v)| if v.norm() > bv { (i, v.norm()) } else { (bi, bv) },
        );
        let phase = full[peak].conj() / full[peak].norm();
        full.mapv_inplace(|x| x * phase);
        energies.push(vals[k]);
        states.push(full);
    }
    Ok((energies, states))
}

fn matrix_element(bra: &Array1<C64>, op: &OperatorMatrix, ket: &Array1<C64>) -> C64 {
    let v = op.entries().dot(ket);
    bra.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Builds the Kerr eigenbasis keeping `d_gauge` levels per well.
pub fn build_kerr_basis(kerr: f64, alpha2: f64, dim_fock: usize, d_gauge: usize) -> Result<KerrBasis> {
    if !(alpha2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha^2 must be positive, got {alpha2}"
        )));
    }
    if !(kerr > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Kerr rate must be positive, got {kerr}"
        )));
    }
    if d_gauge == 0 || d_gauge > MAX_D_GAUGE {
        return Err(Error::InvalidParameter(format!(
            "d_gauge must lie in 1..={MAX_D_GAUGE}, got {d_gauge}"
        )));
    }
    truncation_guard(alpha2, dim_fock)?;
    let alpha = alpha2.sqrt();
    let h = kerr_hamiltonian(kerr, alpha, dim_fock)?;
    let (energies_even, mut even) = parity_branch(&h, 0, d_gauge)?;
    let (energies_odd, mut odd) = parity_branch(&h, 1, d_gauge)?;

    let parity = parity_op(dim_fock);
    let edge_start = dim_fock - dim_fock / 4;
    for (label, states) in [("even", &even), ("odd", &odd)] {
        for (k, s) in states.iter().enumerate() {
            let p = matrix_element(s, &parity, s).re;
            if p.abs() < PARITY_CLASSIFICATION_MIN {
                return Err(Error::BasisConstruction(format!(
                    "{label} level {k} has ambiguous parity {p:.4}; increase dim_fock"
                )));
            }
            let edge: f64 = s.iter().skip(edge_start).map(|x| x.norm_sqr()).sum();
            if edge > EDGE_POPULATION_MAX {
                return Err(Error::BasisConstruction(format!(
                    "{label} level {k} has population {edge:e} at the truncation edge; increase dim_fock"
                )));
            }
        }
    }

    let a = annihilation_op(dim_fock)?;
    let x = &a + &a.adjoint();
    for k in 0..d_gauge {
        if matrix_element(&even[k], &x, &odd[k]).re < 0.0 {
            odd[k].mapv_inplace(|v| -v);
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let well = |e: &Array1<C64>, o: &Array1<C64>, sign: f64| -> Array1<C64> {
        e.iter().zip(o.iter()).map(|(a, b)| (a + b * sign) * s).collect()
    };
    for k in 1..d_gauge {
        let w_prev = well(&even[k - 1], &odd[k - 1], 1.0);
        let w_cur = well(&even[k], &odd[k], 1.0);
        if matrix_element(&w_prev, &a, &w_cur).re < 0.0 {
            even[k].mapv_inplace(|v| -v);
            odd[k].mapv_inplace(|v| -v);
        }
    }

    let mut isometry = Array2::<C64>::zeros((dim_fock, 2 * d_gauge));
    for k in 0..d_gauge {
        isometry.column_mut(k).assign(&well(&even[k], &odd[k], 1.0));
        isometry.column_mut(d_gauge + k).assign(&well(&even[k], &odd[k], -1.0));
    }
    let well_states = (0..2 * d_gauge)
        .map(|c| StateVector::from_array(isometry.column(c).to_owned()))
        .collect::<Result<Vec<_>>>()?;

    let chi_prime = energies_even
        .iter()
        .zip(&energies_odd)
        .map(|(e, o)| (e - o).abs() / 2.0)
        .collect();
    let adag = a.adjoint();
    let ground = isometry.column(0).to_owned();
    let lambda_0n = (0..d_gauge)
        .map(|n| matrix_element(&isometry.column(n).to_owned(), &adag, &ground).norm())
        .collect();

    let to_states =
        |v: Vec<Array1<C64>>| -> Result<Vec<StateVector>> { v.into_iter().map(StateVector::from_array).collect() };
    Ok(KerrBasis {
        kerr,
        alpha2,
        d_gauge,
        fock_dim: dim_fock,
        even_states: to_states(even)?,
        odd_states: to_states(odd)?,
        energies_even,
        energies_odd,
        well_states,
        chi_prime,
        lambda_0n,
        isometry,
    })
}

impl KerrBasis {
    /// The Kerr Hamiltonian restricted to the basis.
    pub fn hamiltonian(&self) -> Result<OperatorMatrix> {
        let h = kerr_hamiltonian(self.kerr, self.alpha2.sqrt(), self.fock_dim)?;
        self.project(&h)?.hermitian_part().with_hermitian_hint()
    }

    /// Energies of the retained states, both branches, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.energies_even.iter().chain(&self.energies_odd).copied().collect();
        all.sort_by(f64::total_cmp);
        all
    }
}

impl CatBasis for KerrBasis {
    fn d_gauge(&self) -> usize {
        self.d_gauge
    }

    fn alpha2(&self) -> f64 {
        self.alpha2
    }

    fn isometry(&self) -> &Array2<C64> {
        &self.isometry
    }
}
