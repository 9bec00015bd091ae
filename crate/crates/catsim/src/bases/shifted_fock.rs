use ndarray::{Array1, Array2};

use super::overlap::displaced_fock_element;
use super::{pauli, CatBasis};
use crate::error::{Error, Result};
use crate::linalg::jacobi_eigh;
use crate::operators::{
    default_fock_dim, displacement_op, parity_op, tensor_product, truncation_guard, OperatorMatrix, C64,
};

/// Largest Gram-matrix condition number accepted before declaring the basis degenerate.
pub const MAX_GRAM_CONDITION: f64 = 1e12;
/// Tolerated mismatch between closed-form and numerically integrated overlaps.
pub const OVERLAP_CROSSCHECK_TOL: f64 = 1e-8;

/// Gauge-sector coefficients of an operator on qubit ⊗ gauge, `O = Σ_P P ⊗ B_P`.
#[derive(Clone, Debug)]
pub struct PauliBlocks {
    pub i: Array2<C64>,
    pub x: Array2<C64>,
    pub y: Array2<C64>,
    pub z: Array2<C64>,
}

impl PauliBlocks {
    /// Splits a `2d×2d` operator with index `q·d + n` into its Pauli blocks.
    pub fn decompose(op: &OperatorMatrix, d: usize) -> Result<Self> {
        if op.dim() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: op.dim(),
            });
        }
        let e = op.entries();
        let block = |q: usize, r: usize| e.slice(ndarray::s![q * d..(q + 1) * d, r * d..(r + 1) * d]).to_owned();
        let (b00, b01, b10, b11) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
        let half = C64::new(0.5, 0.0);
        let minus_i_half = C64::new(0.0, -0.5);
        Ok(Self {
            i: (&b00 + &b11).mapv(|v| v * half),
            x: (&b01 + &b10).mapv(|v| v * half),
            y: (&b10 - &b01).mapv(|v| v * minus_i_half),
            z: (&b00 - &b11).mapv(|v| v * half),
        })
    }

    /// Reassembles `Σ_P P ⊗ B_P`.
    pub fn assemble(&self) -> Result<OperatorMatrix> {
        let parts = [('I', &self.i), ('X', &self.x), ('Y', &self.y), ('Z', &self.z)];
        let d = self.i.nrows();
        let mut acc = OperatorMatrix::zeros(2 * d);
        for (label, block) in parts {
            let b = OperatorMatrix::from_array(block.clone())?;
            acc = &acc + &tensor_product(&pauli(label), &b);
        }
        Ok(acc)
    }
}

/// Orthonormalized displaced-Fock basis.
#[derive(Clone, Debug)]
pub struct ShiftedFockBasis {
    pub alpha: f64,
    pub d_max: usize,
    /// Φ± with entries `⟨φ_{m,±}|φ_{n,±}⟩`.
    pub overlap_plus: Array2<f64>,
    pub overlap_minus: Array2<f64>,
    /// Upper-triangular c± with `c±ᵀ Φ± c± = I`.
    pub coeffs_plus: Array2<f64>,
    pub coeffs_minus: Array2<f64>,
    /// Pauli blocks of the lowering operator in this basis.
    pub lowering_qubit_blocks: PauliBlocks,
    /// Largest difference between the closed-form and numerically integrated overlaps.
    pub overlap_crosscheck: f64,
    /// Fock-space columns `|ψ_{n,+}⟩`.
    pub psi_plus: Array2<C64>,
    /// Fock-space columns `|ψ_{n,−}⟩`.
    pub psi_minus: Array2<C64>,
    isometry: Array2<C64>,
}

/// Closed-form Φ± from `Φ±_{mn} = δ_{mn} ± (−1)^m ⟨m|D(2α)|n⟩`.
fn overlap_matrix(alpha: f64, d: usize, sign: f64) -> Array2<f64> {
    Array2::from_shape_fn((d, d), |(m, n)| {
        let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
        let delta = if m == n { 1.0 } else { 0.0 };
        delta + sign * parity * displaced_fock_element(m, n, 2.0 * alpha)
    })
}

/// Upper Cholesky factor `R` with `Φ = RᵀR`.
fn cholesky_upper(phi: &Array2<f64>) -> Result<Array2<f64>> {
    let d = phi.nrows();
    let mut r = Array2::<f64>::zeros((d, d));
    for j in 0..d {
        for i in 0..=j {
            let mut s = phi[[i, j]];
            for k in 0..i {
                s -= r[[k, i]] * r[[k, j]];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::DegenerateBasis("overlap matrix is not positive definite".into()));
                }
                r[[i, i]] = s.sqrt();
            } else {
                r[[i, j]] = s / r[[i, i]];
            }
        }
    }
    Ok(r)
}

fn upper_inverse(r: &Array2<f64>) -> Array2<f64> {
    let d = r.nrows();
    let mut c = Array2::<f64>::zeros((d, d));
    for j in 0..d {
        c[[j, j]] = 1.0 / r[[j, j]];
        for i in (0..j).rev() {
            let mut s = 0.0;
            for k in i + 1..=j {
                s += r[[i, k]] * c[[k, j]];
            }
            c[[i, j]] = -s / r[[i, i]];
        }
    }
    c
}

fn condition_number(phi: &Array2<f64>) -> Result<f64> {
    let (vals, _) = jacobi_eigh(&phi.mapv(|x| C64::new(x, 0.0)))?;
    let lo = vals.first().copied().unwrap_or(0.0);
    let hi = vals.last().copied().unwrap_or(0.0);
    Ok(if lo <= 0.0 { f64::INFINITY } else { hi / lo })
}

fn to_complex(m: &Array2<f64>) -> Array2<C64> {
    m.mapv(|x| C64::new(x, 0.0))
}

/// Builds the orthonormalized shifted-Fock basis with `d_max` levels per parity.
pub fn build_shifted_fock(alpha: f64, d_max: usize) -> Result<ShiftedFockBasis> {
    build_shifted_fock_with_dim(alpha, d_max, default_fock_dim(alpha * alpha))
}

/// As [`build_shifted_fock`] with an explicit Fock truncation.
pub fn build_shifted_fock_with_dim(alpha: f64, d_max: usize, fock_dim: usize) -> Result<ShiftedFockBasis> {
    let alpha2 = alpha * alpha;
    if !(alpha > 0.0) || alpha2 < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "shifted-Fock basis needs alpha^2 >= 1, got {alpha2}"
        )));
    }
    if d_max < 2 {
        return Err(Error::InvalidParameter(format!("d_max must be >= 2, got {d_max}")));
    }
    truncation_guard(alpha2, fock_dim)?;
    if fock_dim < 2 * d_max {
        return Err(Error::InvalidDimension(format!(
            "Fock dimension {fock_dim} too small for d_max = {d_max}"
        )));
    }

    let overlap_plus = overlap_matrix(alpha, d_max, 1.0);
    let overlap_minus = overlap_matrix(alpha, d_max, -1.0);
    for (name, phi) in [("plus", &overlap_plus), ("minus", &overlap_minus)] {
        let cond = condition_number(phi)?;
        if cond > MAX_GRAM_CONDITION {
            return Err(Error::DegenerateBasis(format!(
                "Gram matrix ({name}) condition number {cond:e}"
            )));
        }
    }
    let r_plus = cholesky_upper(&overlap_plus)?;
    let r_minus = cholesky_upper(&overlap_minus)?;
    let coeffs_plus = upper_inverse(&r_plus);
    let coeffs_minus = upper_inverse(&r_minus);

    // Fock-space φ_{n,±} = (1 ± P) D(α)|n⟩ / √2.
    let disp = displacement_op(alpha, fock_dim)?;
    let par = parity_op(fock_dim);
    let shifted = disp.entries().slice(ndarray::s![.., ..d_max]).to_owned();
    let reflected = par.entries().dot(&shifted);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = (&shifted + &reflected).mapv(|x| x * s);
    let phi_minus = (&shifted - &reflected).mapv(|x| x * s);

    let gram = |v: &Array2<C64>| v.t().mapv(|x| x.conj()).dot(v);
    let crosscheck = |num: &Array2<C64>, ana: &Array2<f64>| {
        num.iter()
            .zip(ana.iter())
            .map(|(a, &b)| (a - C64::new(b, 0.0)).norm())
            .fold(0.0, f64::max)
    };
    let overlap_crosscheck =
        crosscheck(&gram(&phi_plus), &overlap_plus).max(crosscheck(&gram(&phi_minus), &overlap_minus));
    if overlap_crosscheck > OVERLAP_CROSSCHECK_TOL {
        return Err(Error::Truncation {
            alpha2,
            dim: fock_dim,
            suggested: default_fock_dim(alpha2).max(2 * fock_dim),
        });
    }

    let psi_plus = phi_plus.dot(&to_complex(&coeffs_plus));
    let psi_minus = phi_minus.dot(&to_complex(&coeffs_minus));
    let mut isometry = Array2::<C64>::zeros((fock_dim, 2 * d_max));
    for n in 0..d_max {
        let p = psi_plus.column(n);
        let m = psi_minus.column(n);
        let zero: Array1<C64> = (&p + &m).mapv(|x| x * s);
        let one: Array1<C64> = (&p - &m).mapv(|x| x * s);
        isometry.column_mut(n).assign(&zero);
        isometry.column_mut(d_max + n).assign(&one);
    }

    let lowering_qubit_blocks = analytic_lowering_blocks(alpha, &r_plus, &r_minus, &coeffs_plus, &coeffs_minus);

    Ok(ShiftedFockBasis {
        alpha,
        d_max,
        overlap_plus,
        overlap_minus,
        coeffs_plus,
        coeffs_minus,
        lowering_qubit_blocks,
        overlap_crosscheck,
        psi_plus,
        psi_minus,
        isometry,
    })
}

/// `a φ_{n,±} = √n φ_{n−1,∓} + α φ_{n,∓}` makes the span invariant, so the
/// parity-changing blocks are `⟨ψ_∓|a|ψ_±⟩ = R_∓ (a′ + α) c_±`.
fn analytic_lowering_blocks(
    alpha: f64,
    r_plus: &Array2<f64>,
    r_minus: &Array2<f64>,
    c_plus: &Array2<f64>,
    c_minus: &Array2<f64>,
) -> PauliBlocks {
    let d = c_plus.nrows();
    let mut shifted_ladder = Array2::<f64>::eye(d) * alpha;
    for n in 1..d {
        shifted_ladder[[n - 1, n]] = (n as f64).sqrt();
    }
    let minus_plus = r_minus.dot(&shifted_ladder).dot(c_plus);
    let plus_minus = r_plus.dot(&shifted_ladder).dot(c_minus);
    let z = (&minus_plus + &plus_minus).mapv(|x| 0.5 * x);
    let y_real = (&plus_minus - &minus_plus).mapv(|x| 0.5 * x);
    PauliBlocks {
        i: Array2::zeros((d, d)),
        x: Array2::zeros((d, d)),
        y: y_real.mapv(|x| C64::new(0.0, -x)),
        z: to_complex(&z),
    }
}

/// The lowering operator on qubit ⊗ gauge, assembled from the analytic blocks.
pub fn lowering_in_shifted_fock(basis: &ShiftedFockBasis) -> Result<OperatorMatrix> {
    basis.lowering_qubit_blocks.assemble()
}

impl ShiftedFockBasis {
    /// Real gauge matrix multiplying `−iY` in the lowering operator.
    pub fn y_correction(&self) -> Array2<f64> {
        self.lowering_qubit_blocks.y.mapv(|v| -v.im)
    }

    /// Real gauge matrix multiplying `Z` in the lowering operator.
    pub fn z_block(&self) -> Array2<f64> {
        self.lowering_qubit_blocks.z.mapv(|v| v.re)
    }

    /// Half the energy difference `⟨ψ_{n,+}|H|ψ_{n,+}⟩ − ⟨ψ_{n,−}|H|ψ_{n,−}⟩`.
    pub fn parity_splitting(&self, hamiltonian: &OperatorMatrix, n: usize) -> Result<f64> {
        if hamiltonian.dim() != self.fock_dim() || n >= self.d_max {
            return Err(Error::DimensionMismatch {
                expected: self.fock_dim(),
                found: hamiltonian.dim(),
            });
        }
        let energy = |col: ndarray::ArrayView1<C64>| -> f64 {
            let hv = hamiltonian.entries().dot(&col);
            col.iter().zip(hv.iter()).map(|(a, b)| (a.conj() * b).re).sum()
        };
        Ok((energy(self.psi_plus.column(n)) - energy(self.psi_minus.column(n))).abs() / 2.0)
    }
}

impl CatBasis for ShiftedFockBasis {
    fn d_gauge(&self) -> usize {
        self.d_max
    }

    fn alpha2(&self) -> f64 {
        self.alpha * self.alpha
    }

    fn isometry(&self) -> &Array2<C64> {
        &self.isometry
    }

    fn lowering(&self) -> Result<OperatorMatrix> {
        lowering_in_shifted_fock(self)
    }
}
