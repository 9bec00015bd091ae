//! Dense kernels shared by the operator, basis and propagation code.

mod eigen;
mod expm;
mod lu;

pub use eigen::{jacobi_eigh, JACOBI_MAX_SWEEPS};
pub use expm::expm;
pub use lu::Lu;

use ndarray::{Array2, LinalgScalar};
use num_complex::Complex64;

/// Field operations needed by the generic kernels.
pub trait Scalar: LinalgScalar + Send + Sync + std::fmt::Debug + std::ops::Neg<Output = Self> {
    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_real(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Maximum absolute column sum.
pub fn norm1<T: Scalar>(a: &Array2<T>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry magnitude.
pub fn max_abs<T: Scalar>(a: &Array2<T>) -> f64 {
    a.iter().map(|x| x.modulus()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn pseudo_random(n: usize, seed: f64) -> Array2<f64> {
        Array2::from_shape_fn((n, n), |(i, j)| {
            ((i as f64 * 12.9898 + j as f64 * 78.233 + seed).sin() * 43758.5453).fract() - 0.5
        })
    }

    fn pseudo_random_c(n: usize, seed: f64) -> Array2<Complex64> {
        let re = pseudo_random(n, seed);
        let im = pseudo_random(n, seed + 1.7);
        Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(re[[i, j]], im[[i, j]]))
    }

    #[test]
    fn lu_solves_across_block_boundaries() {
        for &n in &[1usize, 5, 64, 65, 150] {
            let a = pseudo_random(n, 0.3) + Array2::<f64>::eye(n) * 2.0;
            let x_true = Array2::from_shape_fn((n, 3), |(i, j)| ((i * 3 + j) as f64 * 0.37).sin());
            let b = a.dot(&x_true);
            let x = Lu::factor(&a).unwrap().solve_mat(&b).unwrap();
            let err = (&x - &x_true).iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n={n} err={err}");
        }
    }

    #[test]
    fn lu_complex_vector_solve() {
        let n = 90;
        let a = pseudo_random_c(n, 2.0);
        let x_true = ndarray::Array1::from_shape_fn(n, |i| Complex64::new(i as f64, -(i as f64) / 3.0));
        let b = a.dot(&x_true);
        let x = Lu::factor(&a).unwrap().solve_vec(&b).unwrap();
        let err = (&x - &x_true).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "err={err}");
    }

    #[test]
    fn lu_rejects_singular() {
        let a = Array2::<f64>::zeros((3, 3));
        assert!(Lu::factor(&a).is_err());
    }

    #[test]
    fn expm_rotation_generator() {
        let t = 37.25;
        let a = ndarray::array![[0.0, t], [-t, 0.0]];
        let e = expm(&a).unwrap();
        let expected = ndarray::array![[t.cos(), t.sin()], [-t.sin(), t.cos()]];
        let err = (&e - &expected).iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "err={err}");
    }

    #[test]
    fn expm_matches_taylor_for_small_norm() {
        let n = 6;
        let a = pseudo_random_c(n, 0.9).mapv(|x| x * 0.2);
        let mut term = Array2::<Complex64>::eye(n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = term.dot(&a).mapv(|x| x / k as f64);
            sum += &term;
        }
        let e = expm(&a).unwrap();
        let err = (&e - &sum).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-14, "err={err}");
    }

    #[test]
    fn expm_inverse_pair() {
        let n = 80;
        let r = pseudo_random(n, 5.5);
        let a = (&r - &r.t()).mapv(|x| x * 3.0) + r.mapv(|x| x * 0.05);
        let e = expm(&a).unwrap();
        let einv = expm(&a.mapv(|x| -x)).unwrap();
        let prod = e.dot(&einv);
        let err = (&prod - &Array2::<f64>::eye(n))
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "err={err}");
    }

    #[test]
    fn jacobi_reconstructs_hermitian() {
        let n = 12;
        let r = pseudo_random_c(n, 3.3);
        let h = &r + &r.t().mapv(|x| x.conj());
        let (vals, vecs) = jacobi_eigh(&h).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let lam = Array2::from_diag(&ndarray::Array1::from_iter(
            vals.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let back = vecs.dot(&lam).dot(&vecs.t().mapv(|x| x.conj()));
        let err = (&back - &h).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "err={err}");
        let gram = vecs.t().mapv(|x| x.conj()).dot(&vecs);
        let gerr = (&gram - &Array2::<Complex64>::eye(n))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(gerr < 1e-13, "gram err={gerr}");
    }
}
