//! Qubit ⊗ gauge bases for the Kerr cat: the orthonormalized shifted-Fock
//! basis and the Kerr eigenbasis.

mod kerr;
mod overlap;
mod shifted_fock;

pub use kerr::{build_kerr_basis, KerrBasis, DEFAULT_D_GAUGE, MAX_D_GAUGE};
pub use overlap::{displaced_fock_element, laguerre};
pub use shifted_fock::{
    build_shifted_fock, build_shifted_fock_with_dim, lowering_in_shifted_fock, PauliBlocks, ShiftedFockBasis,
};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::operators::{
    annihilation_op, parity_op, tensor_product, truncation_guard, OperatorMatrix, StateVector, C64,
};

/// Coefficient of the empirical tunneling law `χ′_n ≈ K e^{−c(α² − 4n)}`.
pub const TUNNELING_EXPONENT: f64 = 1.6;

/// A qubit ⊗ gauge basis embedded in a truncated Fock space.
///
/// Basis index is `q·d + n` for qubit label `q ∈ {0, 1}` and gauge level `n`.
pub trait CatBasis {
    fn d_gauge(&self) -> usize;
    fn alpha2(&self) -> f64;
    /// Columns are the basis states in Fock space.
    fn isometry(&self) -> &Array2<C64>;

    fn dim(&self) -> usize {
        2 * self.d_gauge()
    }

    fn fock_dim(&self) -> usize {
        self.isometry().nrows()
    }

    fn alpha(&self) -> f64 {
        self.alpha2().sqrt()
    }

    /// `V† O V` for a Fock-space operator.
    fn project(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        op.congruence(self.isometry())
    }

    /// Coordinates of a Fock-space state, renormalized after projection.
    fn project_state(&self, psi: &StateVector) -> Result<StateVector> {
        let v = self.isometry();
        if psi.dim() != v.nrows() {
            return Err(Error::DimensionMismatch {
                expected: v.nrows(),
                found: psi.dim(),
            });
        }
        let coords = v.t().mapv(|x| x.conj()).dot(psi.amplitudes());
        StateVector::normalized(coords)
    }

    /// The lowering operator restricted to the basis.
    fn lowering(&self) -> Result<OperatorMatrix> {
        self.project(&annihilation_op(self.fock_dim())?)
    }

    /// Photon-number parity restricted to the basis.
    fn parity(&self) -> Result<OperatorMatrix> {
        self.project(&parity_op(self.fock_dim()))
    }
}

/// `Z ⊗ I_d`, the logical Z on the qubit sector.
pub fn logical_z(d: usize) -> OperatorMatrix {
    let mut diag = vec![1.0; d];
    diag.extend(std::iter::repeat_n(-1.0, d));
    OperatorMatrix::from_diag(&diag)
}

/// Single-qubit Pauli matrices in the order I, X, Y, Z.
pub fn pauli(label: char) -> OperatorMatrix {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let m = match label {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => panic!("unknown Pauli label {label}"),
    };
    OperatorMatrix::from_array(Array2::from_shape_fn((2, 2), |(r, c)| m[r][c])).expect("2x2")
}

/// Truncated gauge ladder `√n` on the superdiagonal, as a `d×d` operator.
pub fn gauge_lowering(d: usize) -> OperatorMatrix {
    let mut m = Array2::<C64>::zeros((d, d));
    for n in 1..d {
        m[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix::from_array(m).expect("square")
}

/// `I₂ ⊗ a′`, the gauge ladder acting on both wells.
pub fn gauge_ladder(d: usize) -> OperatorMatrix {
    tensor_product(&OperatorMatrix::identity(2), &gauge_lowering(d))
}

/// `Z ⊗ a′`, the lowering of gauge excitations with the qubit phase.
pub fn signed_gauge_ladder(d: usize) -> OperatorMatrix {
    tensor_product(&pauli('Z'), &gauge_lowering(d))
}

/// Projector onto gauge level `n` in both wells.
pub fn gauge_level_projector(d: usize, n: usize) -> OperatorMatrix {
    let mut diag = vec![0.0; 2 * d];
    diag[n] = 1.0;
    diag[d + n] = 1.0;
    OperatorMatrix::from_diag(&diag)
}

/// `χ₁ ≃ 16 K α⁴ e^{−2α²}`, the leading-order tunneling splitting of the first excited pair.
pub fn chi1_perturbative(kerr: f64, alpha2: f64) -> f64 {
    16.0 * kerr * alpha2 * alpha2 * (-2.0 * alpha2).exp()
}

/// Empirical tunneling law `K e^{−1.6(α² − 4n)}`.
pub fn chi_empirical(kerr: f64, alpha2: f64, n: usize) -> f64 {
    kerr * (-TUNNELING_EXPONENT * (alpha2 - 4.0 * n as f64)).exp()
}

/// `−K(a†² − α²)(a² − α²)` on a truncated Fock space of dimension `dim`.
pub fn kerr_hamiltonian(kerr: f64, alpha: f64, dim: usize) -> Result<OperatorMatrix> {
    truncation_guard(alpha * alpha, dim)?;
    let a = annihilation_op(dim)?;
    let shift = OperatorMatrix::identity(dim) * (alpha * alpha);
    let b = &a.dot(&a) - &shift;
    let h = b.adjoint().dot(&b) * (-kerr);
    h.hermitian_part().with_hermitian_hint()
}

/// Leading-order gauge-sector amplitudes `(c_{n−1}, c_n, c_{n+1})` of the
/// n-th Kerr excitation on the shifted-Fock ladder.
pub fn perturbative_kerr_state(alpha: f64, n: usize) -> Result<(f64, f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidParameter("perturbative state needs n >= 1".into()));
    }
    let a2 = alpha * alpha;
    let nf = n as f64;
    let lower = alpha * (nf - 1.0) * nf.sqrt() / (2.0 * a2 + nf - 1.0);
    let upper = -alpha * nf * (nf + 1.0).sqrt() / (2.0 * a2 + nf);
    Ok((lower, 1.0, upper))
}

/// Heating matrix element predicted by perturbation theory, `√(n!) (1/2α)^{n−1}`.
pub fn lambda_perturbative(alpha: f64, n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    fact.sqrt() * (1.0 / (2.0 * alpha)).powi(n as i32 - 1)
}

/// First-excited even/odd splitting of the Kerr cat Hamiltonian, evaluated on
/// the shifted-Fock pair `ψ_{1,±}`.
pub fn chi1_numeric(kerr: f64, alpha2: f64) -> Result<f64> {
    let dim = crate::operators::default_fock_dim(alpha2);
    let alpha = alpha2.sqrt();
    let basis = build_shifted_fock_with_dim(alpha, 2, dim)?;
    basis.parity_splitting(&kerr_hamiltonian(kerr, alpha, dim)?, 1)
}
