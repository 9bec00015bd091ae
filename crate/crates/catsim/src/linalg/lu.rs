use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, Axis};

use super::Scalar;
use crate::error::{Error, Result};

const BLOCK: usize = 64;

/// Blocked LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Array2<T>,
    perm: Vec<usize>,
    min_pivot: f64,
    max_pivot: f64,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(a: &Array2<T>) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() || n == 0 {
            return Err(Error::InvalidDimension(format!(
                "LU needs a nonempty square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let mut lu = a.as_standard_layout().into_owned();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;

        let mut kb = 0;
        while kb < n {
            let kend = (kb + BLOCK).min(n);
            {
                let data = lu.as_slice_mut().expect("standard layout");
                for k in kb..kend {
                    let mut p = k;
                    let mut best = data[k * n + k].modulus();
                    for i in k + 1..n {
                        let v = data[i * n + k].modulus();
                        if v > best {
                            best = v;
                            p = i;
                        }
                    }
                    if best == 0.0 || !best.is_finite() {
                        return Err(Error::Singular("LU factorization".into()));
                    }
                    min_pivot = min_pivot.min(best);
                    max_pivot = max_pivot.max(best);
                    if p != k {
                        for j in 0..n {
                            data.swap(k * n + j, p * n + j);
                        }
                        perm.swap(k, p);
                    }
                    let pivot = data[k * n + k];
                    for i in k + 1..n {
                        let l = data[i * n + k] / pivot;
                        data[i * n + k] = l;
                        if l.modulus() != 0.0 {
                            for j in k + 1..kend {
                                let u = data[k * n + j];
                                data[i * n + j] = data[i * n + j] - l * u;
                            }
                        }
                    }
                }
                for k in kb..kend {
                    let (head, tail) = data.split_at_mut((k + 1) * n);
                    let row_k = &head[k * n + kend..k * n + n];
                    for i in k + 1..kend {
                        let l = tail[(i - k - 1) * n + k];
                        if l.modulus() != 0.0 {
                            let row_i = &mut tail[(i - k - 1) * n + kend..(i - k - 1) * n + n];
                            for (x, &u) in row_i.iter_mut().zip(row_k) {
                                *x = *x - l * u;
                            }
                        }
                    }
                }
            }
            if kend < n {
                let (top, mut bottom) = lu.view_mut().split_at(Axis(0), kend);
                let u12 = top.slice(s![kb..kend, kend..]);
                let (l21, mut a22) = bottom.multi_slice_mut((s![.., kb..kend], s![.., kend..]));
                general_mat_mul(-T::one(), &l21.view(), &u12, T::one(), &mut a22);
            }
            kb = kend;
        }
        Ok(Self {
            lu,
            perm,
            min_pivot,
            max_pivot,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Ratio of the smallest to the largest pivot magnitude.
    pub fn pivot_ratio(&self) -> f64 {
        self.min_pivot / self.max_pivot
    }

    /// Solve `A X = B` for a matrix right-hand side.
    pub fn solve_mat(&self, b: &Array2<T>) -> Result<Array2<T>> {
        let n = self.dim();
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.nrows(),
            });
        }
        let r = b.ncols();
        let mut x = Array2::<T>::zeros((n, r));
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).assign(&b.row(p));
        }
        let lu = self.lu.as_slice().expect("standard layout");

        let mut kb = 0;
        while kb < n {
            let kend = (kb + BLOCK).min(n);
            {
                let data = x.as_slice_mut().expect("standard layout");
                for i in kb..kend {
                    let (head, tail) = data.split_at_mut(i * r);
                    let row_i = &mut tail[..r];
                    for j in kb..i {
                        let l = lu[i * n + j];
                        if l.modulus() != 0.0 {
                            for (xv, &yv) in row_i.iter_mut().zip(&head[j * r..(j + 1) * r]) {
                                *xv = *xv - l * yv;
                            }
                        }
                    }
                }
            }
            if kend < n {
                let (top, mut bottom) = x.view_mut().split_at(Axis(0), kend);
                let l = self.lu.slice(s![kend.., kb..kend]);
                general_mat_mul(-T::one(), &l, &top.slice(s![kb..kend, ..]), T::one(), &mut bottom);
            }
            kb = kend;
        }

        let nblocks = n.div_ceil(BLOCK);
        for blk in (0..nblocks).rev() {
            let kb = blk * BLOCK;
            let kend = (kb + BLOCK).min(n);
            {
                let data = x.as_slice_mut().expect("standard layout");
                for i in (kb..kend).rev() {
                    let (head, tail) = data.split_at_mut((i + 1) * r);
                    let row_i = &mut head[i * r..];
                    for j in i + 1..kend {
                        let u = lu[i * n + j];
                        if u.modulus() != 0.0 {
                            let row_j = &tail[(j - i - 1) * r..(j - i) * r];
                            for (xv, &yv) in row_i.iter_mut().zip(row_j) {
                                *xv = *xv - u * yv;
                            }
                        }
                    }
                    let d = lu[i * n + i];
                    for xv in row_i.iter_mut() {
                        *xv = *xv / d;
                    }
                }
            }
            if kb > 0 {
                let (mut top, bottom) = x.view_mut().split_at(Axis(0), kb);
                let u = self.lu.slice(s![..kb, kb..kend]);
                general_mat_mul(-T::one(), &u, &bottom.slice(s![..kend - kb, ..]), T::one(), &mut top);
            }
        }
        Ok(x)
    }

    /// Solve `A x = b` for a vector right-hand side.
    pub fn solve_vec(&self, b: &Array1<T>) -> Result<Array1<T>> {
        let n = self.dim();
        let col = b
            .view()
            .into_shape_with_order((n, 1))
            .map_err(|_| Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            })?;
        let x = self.solve_mat(&col.to_owned())?;
        Ok(x.column(0).to_owned())
    }
}
