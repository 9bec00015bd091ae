use std::f64::consts::SQRT_2;

use ndarray::{Array1, Array2};

use super::Dissipator;
use crate::error::{Error, Result};
use crate::operators::{OperatorMatrix, C64};

/// Column-stacking vectorization, `vec(ρ)[j·n + i] = ρ_ij`.
pub fn vec_col(rho: &OperatorMatrix) -> Array1<C64> {
    let n = rho.dim();
    let e = rho.entries();
    Array1::from_shape_fn(n * n, |k| e[[k % n, k / n]])
}

/// Inverse of [`vec_col`].
pub fn unvec(v: &Array1<C64>, n: usize) -> Result<OperatorMatrix> {
    if v.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: v.len(),
        });
    }
    OperatorMatrix::from_array(Array2::from_shape_fn((n, n), |(i, j)| v[j * n + i]))
}

/// `−i[H, ρ] + Σ γ (L ρ L† − ½{L†L, ρ})` evaluated directly.
pub fn lindblad_rhs(h: &OperatorMatrix, dissipators: &[Dissipator], rho: &OperatorMatrix) -> OperatorMatrix {
    let mut out = h.commutator(rho).scale(C64::new(0.0, -1.0));
    for d in dissipators {
        let l = &d.jump;
        let ld = l.adjoint();
        let ldl = ld.dot(l);
        let sandwich = l.dot(rho).dot(&ld);
        let anti = &ldl.dot(rho) + &rho.dot(&ldl);
        out = &out + &(&(&sandwich - &(&anti * 0.5)) * d.rate);
    }
    out
}

/// Superoperator acting on column-stacked density matrices:
/// `L = −i(I⊗H − Hᵀ⊗I) + Σ γ [L̄⊗L − ½ I⊗(L†L) − ½ (L†L)ᵀ⊗I]`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    dim: usize,
    matrix: Array2<C64>,
}

/// Assembles the column-stacked Liouvillian.
pub fn build_liouvillian(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Result<Liouvillian> {
    let n = h.dim();
    for d in dissipators {
        if d.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.dim(),
            });
        }
    }
    let i = C64::new(0.0, 1.0);
    let mut g = h.entries().mapv(|x| -i * x);
    let mut f = h.entries().mapv(|x| i * x);
    for d in dissipators {
        let l = d.jump.entries();
        let ldl = l.t().mapv(|x| x.conj()).dot(l);
        g.scaled_add(C64::new(-0.5 * d.rate, 0.0), &ldl);
        f.scaled_add(C64::new(-0.5 * d.rate, 0.0), &ldl);
    }
    let nn = n * n;
    let mut m = Array2::<C64>::zeros((nn, nn));
    for a in 0..n {
        for ib in 0..n {
            for jb in 0..n {
                m[[a * n + ib, a * n + jb]] += g[[ib, jb]];
            }
        }
    }
    for ia in 0..n {
        for ja in 0..n {
            let fv = f[[ja, ia]];
            if fv == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                m[[ia * n + b, ja * n + b]] += fv;
            }
        }
    }
    for d in dissipators {
        let l = d.jump.entries();
        for ia in 0..n {
            for ja in 0..n {
                let lbar = l[[ia, ja]].conj() * d.rate;
                if lbar == C64::new(0.0, 0.0) {
                    continue;
                }
                for ib in 0..n {
                    for jb in 0..n {
                        m[[ia * n + ib, ja * n + jb]] += lbar * l[[ib, jb]];
                    }
                }
            }
        }
    }
    Ok(Liouvillian { dim: n, matrix: m })
}

impl Liouvillian {
    /// Hilbert-space dimension `n` (the superoperator is `n² × n²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn apply(&self, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        unvec(&self.matrix.dot(&vec_col(rho)), self.dim)
    }
}

/// Orthonormal real coordinates on Hermitian matrices.
///
/// Index `i·n + j` holds `ρ_ii` on the diagonal, `√2 Re ρ_ij` for `i < j`
/// and `√2 Im ρ_ji` for `i > j`.
#[derive(Clone, Copy, Debug)]
pub struct HermitianCoords {
    pub n: usize,
}

impl HermitianCoords {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// Coordinates of the Hermitian part of `op`.
    pub fn to_coords(&self, op: &OperatorMatrix) -> Array1<f64> {
        let n = self.n;
        let e = op.entries();
        Array1::from_shape_fn(n * n, |k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                e[[i, i]].re
            } else if i < j {
                (e[[i, j]].re + e[[j, i]].re) / SQRT_2
            } else {
                (e[[j, i]].im - e[[i, j]].im) / SQRT_2
            }
        })
    }

    pub fn from_coords(&self, x: &Array1<f64>) -> OperatorMatrix {
        let n = self.n;
        let mut m = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            m[[i, i]] = C64::new(x[i * n + i], 0.0);
            for j in i + 1..n {
                let re = x[i * n + j] / SQRT_2;
                let im = x[j * n + i] / SQRT_2;
                m[[i, j]] = C64::new(re, im);
                m[[j, i]] = C64::new(re, -im);
            }
        }
        OperatorMatrix::from_array(m).expect("square")
    }

    /// Coordinates `t` with `t·x = tr ρ`.
    pub fn trace_functional(&self) -> Array1<f64> {
        let n = self.n;
        Array1::from_shape_fn(n * n, |k| if k / n == k % n { 1.0 } else { 0.0 })
    }
}

/// The Liouvillian in [`HermitianCoords`]: a real `n² × n²` generator.
#[derive(Clone, Debug)]
pub struct RealLiouvillian {
    coords: HermitianCoords,
    matrix: Array2<f64>,
}

impl RealLiouvillian {
    pub fn from_liouvillian(l: &Liouvillian) -> Self {
        let n = l.dim;
        let nn = n * n;
        let lm = &l.matrix;
        let mut r = Array2::<f64>::zeros((nn, nn));
        let i_unit = C64::new(0.0, 1.0);
        // column-stacked action on basis element b, read through row w
        let column_of = |w: ndarray::ArrayView1<C64>, p: usize, q: usize| -> C64 {
            if p == q {
                w[p * n + p]
            } else if p < q {
                (w[q * n + p] + w[p * n + q]) / SQRT_2
            } else {
                i_unit * (w[p * n + q] - w[q * n + p]) / SQRT_2
            }
        };
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                let mut out = r.row_mut(k);
                if i == j {
                    let w = lm.row(i * n + i);
                    for p in 0..n {
                        for q in 0..n {
                            out[p * n + q] = column_of(w, p, q).re;
                        }
                    }
                } else if i < j {
                    let w = lm.row(j * n + i);
                    for p in 0..n {
                        for q in 0..n {
                            out[p * n + q] = SQRT_2 * column_of(w, p, q).re;
                        }
                    }
                } else {
                    let w = lm.row(i * n + j);
                    for p in 0..n {
                        for q in 0..n {
                            out[p * n + q] = SQRT_2 * column_of(w, p, q).im;
                        }
                    }
                }
            }
        }
        Self {
            coords: HermitianCoords::new(n),
            matrix: r,
        }
    }

    pub fn new(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Result<Self> {
        Ok(Self::from_liouvillian(&build_liouvillian(h, dissipators)?))
    }

    pub fn dim(&self) -> usize {
        self.coords.n
    }

    pub fn coords(&self) -> HermitianCoords {
        self.coords
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
}
