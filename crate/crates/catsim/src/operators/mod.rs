//! Dense complex operators, states and bosonic constructors on truncated Fock spaces.

mod bosonic;

pub use bosonic::{
    annihilation_op, coherent_state, default_fock_dim, displacement_op, fock_state, number_op, parity_op,
    truncation_guard,
};

use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, max_abs};

pub type C64 = Complex64;

/// Relative tolerance applied to hermiticity checks of flagged operators.
pub const HERMITIAN_HINT_TOL: f64 = 1e-12;
/// Relative tolerance accepted by the eigensolver.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Square complex matrix with an advisory hermiticity flag.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    pub fn from_array(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::InvalidDimension(format!(
                "operator must be square and nonempty, got {r}x{c}"
            )));
        }
        Ok(Self {
            entries: entries.as_standard_layout().into_owned(),
            hermitian_hint: false,
        })
    }

    pub fn from_real(entries: &Array2<f64>) -> Result<Self> {
        Self::from_array(entries.mapv(|x| C64::new(x, 0.0)))
    }

    /// Builds an operator flagged Hermitian, checking the flag.
    pub fn hermitian(entries: Array2<C64>) -> Result<Self> {
        Self::from_array(entries)?.with_hermitian_hint()
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: Array2::zeros((dim, dim)),
            hermitian_hint: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
            hermitian_hint: true,
        }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut entries = Array2::zeros((n, n));
        for (i, &d) in diag.iter().enumerate() {
            entries[[i, i]] = C64::new(d, 0.0);
        }
        Self {
            entries,
            hermitian_hint: true,
        }
    }

    /// `|ket⟩⟨bra|`
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Result<Self> {
        if ket.dim() != bra.dim() {
            return Err(Error::DimensionMismatch {
                expected: ket.dim(),
                found: bra.dim(),
            });
        }
        let n = ket.dim();
        let k = ket.amplitudes();
        let b = bra.amplitudes();
        let entries = Array2::from_shape_fn((n, n), |(i, j)| k[i] * b[j].conj());
        Ok(Self {
            entries,
            hermitian_hint: false,
        })
    }

    pub fn projector(state: &StateVector) -> Self {
        let mut p = Self::outer(state, state).expect("same state");
        p.hermitian_hint = true;
        p
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_array(self) -> Array2<C64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[[i, j]]
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    /// Flags the operator Hermitian after checking it within [`HERMITIAN_HINT_TOL`].
    pub fn with_hermitian_hint(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_HINT_TOL {
            return Err(Error::Contract(format!(
                "operator flagged Hermitian has relative defect {defect:e}"
            )));
        }
        self.hermitian_hint = true;
        Ok(self)
    }

    /// `max|M − M†| / max|M|`, zero for the zero matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst / scale
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// Largest entrywise difference to another operator.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|x| x.conj()),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            entries: self.entries.t().to_owned(),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.mapv(|x| x.conj()),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn dot(&self, other: &Self) -> Self {
        Self {
            entries: self.entries.dot(&other.entries),
            hermitian_hint: false,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.dot(other) - &other.dot(self)
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector {
            amplitudes: self.entries.dot(&psi.amplitudes),
        })
    }

    /// `⟨ψ|M|ψ⟩`
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        let m_psi = self.apply(psi)?;
        Ok(psi.inner(&m_psi))
    }

    /// `V† M V` for an isometry `V` given by its columns.
    pub fn congruence(&self, v: &Array2<C64>) -> Result<Self> {
        if v.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.nrows(),
            });
        }
        let vh = v.t().mapv(|x| x.conj());
        Ok(Self {
            entries: vh.dot(&self.entries).dot(v),
            hermitian_hint: self.hermitian_hint,
        })
    }

    /// Principal submatrix on the leading `k` indices.
    pub fn leading_block(&self, k: usize) -> Self {
        let k = k.min(self.dim());
        Self {
            entries: self.entries.slice(ndarray::s![..k, ..k]).to_owned(),
            hermitian_hint: self.hermitian_hint,
        }
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let entries = (&self.entries + &self.entries.t().mapv(|x| x.conj())).mapv(|x| x * 0.5);
        Self {
            entries,
            hermitian_hint: true,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            entries: self.entries.mapv(|x| x * s),
            hermitian_hint: self.hermitian_hint && s.im == 0.0,
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            hermitian_hint: self.hermitian_hint && rhs.hermitian_hint,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
            hermitian_hint: self.hermitian_hint && rhs.hermitian_hint,
        }
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.mapv(|x| -x),
            hermitian_hint: self.hermitian_hint,
        }
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.mapv(|x| x * rhs),
            hermitian_hint: self.hermitian_hint,
        }
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(mut self, rhs: f64) -> OperatorMatrix {
        self.entries.mapv_inplace(|x| x * rhs);
        self
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        &self + &rhs
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        &self - &rhs
    }
}

/// Kronecker product with index convention `iA·dimB + iB`.
pub fn tensor_product(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = Array2::<C64>::zeros((na * nb, na * nb));
    for i in 0..na {
        for j in 0..na {
            let aij = a.entries[[i, j]];
            if aij == ZERO {
                continue;
            }
            let mut block = out.slice_mut(ndarray::s![i * nb..(i + 1) * nb, j * nb..(j + 1) * nb]);
            block.zip_mut_with(&b.entries, |o, &bv| *o = aij * bv);
        }
    }
    OperatorMatrix {
        entries: out,
        hermitian_hint: a.hermitian_hint && b.hermitian_hint,
    }
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_chain(factors: &[&OperatorMatrix]) -> OperatorMatrix {
    let mut iter = factors.iter();
    let first = (*iter.next().expect("at least one factor")).clone();
    iter.fold(first, |acc, f| tensor_product(&acc, f))
}

/// Normalizable complex state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<C64>,
}

impl StateVector {
    pub fn from_array(amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("empty state vector".into()));
        }
        Ok(Self { amplitudes })
    }

    /// Normalized copy of the given amplitudes.
    pub fn normalized(amplitudes: Array1<C64>) -> Result<Self> {
        let s = Self::from_array(amplitudes)?;
        let n = s.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Contract("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: s.amplitudes.mapv(|x| x / n),
        })
    }

    /// Computational basis vector `|n⟩`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidDimension(format!(
                "basis index {n} outside dimension {dim}"
            )));
        }
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[n] = ONE;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.mapv(|x| x * s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            amplitudes: &self.amplitudes + &other.amplitudes,
        })
    }

    /// `|self⟩ ⊗ |other⟩`
    pub fn tensor(&self, other: &Self) -> Self {
        let nb = other.dim();
        let amplitudes = Array1::from_shape_fn(self.dim() * nb, |k| self.amplitudes[k / nb] * other.amplitudes[k % nb]);
        Self { amplitudes }
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Array2<C64>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> StateVector {
        StateVector {
            amplitudes: self.vectors.column(i).to_owned(),
        }
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> OperatorMatrix {
        let lam = Array2::from_diag(&Array1::from_iter(self.values.iter().map(|&x| C64::new(x, 0.0))));
        let vh = self.vectors.t().mapv(|x| x.conj());
        OperatorMatrix {
            entries: self.vectors.dot(&lam).dot(&vh),
            hermitian_hint: true,
        }
    }
}

/// Full eigendecomposition of a Hermitian operator.
pub fn hermitian_eigensystem(m: &OperatorMatrix) -> Result<EigenSystem> {
    let defect = m.hermiticity_defect();
    if defect > EIGEN_HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "eigensolver input is not Hermitian (relative defect {defect:e})"
        )));
    }
    let (values, vectors) = jacobi_eigh(&m.hermitian_part().entries)?;
    Ok(EigenSystem { values, vectors })
}

/// Partial trace over the trailing factor of a bipartite operator.
pub fn partial_trace_right(m: &OperatorMatrix, dim_left: usize, dim_right: usize) -> Result<OperatorMatrix> {
    if dim_left * dim_right != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: dim_left * dim_right,
            found: m.dim(),
        });
    }
    let mut out = Array2::<C64>::zeros((dim_left, dim_left));
    for i in 0..dim_left {
        for j in 0..dim_left {
            let mut acc = ZERO;
            for k in 0..dim_right {
                acc += m.entries[[i * dim_right + k, j * dim_right + k]];
            }
            out[[i, j]] = acc;
        }
    }
    Ok(OperatorMatrix {
        entries: out,
        hermitian_hint: m.hermitian_hint,
    })
}
