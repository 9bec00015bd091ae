#![allow(dead_code)]

use catsim::operators::{OperatorMatrix, C64};
use ndarray::Array2;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Deterministic pseudo-random complex matrix with entries in the unit box.
pub fn scrambled_matrix(n: usize, seed: u64) -> Array2<C64> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    Array2::from_shape_fn((n, n), |_| C64::new(next(), next()))
}

pub fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
    let m = scrambled_matrix(n, seed);
    let h = &m + &m.t().mapv(|x| x.conj());
    OperatorMatrix::hermitian(h.mapv(|x| x * 0.5)).unwrap()
}

/// Random density matrix `AA†/tr(AA†)`.
pub fn random_density(n: usize, seed: u64) -> OperatorMatrix {
    let m = scrambled_matrix(n, seed);
    let rho = m.dot(&m.t().mapv(|x| x.conj()));
    let tr = rho.diag().sum();
    OperatorMatrix::hermitian(rho.mapv(|x| x / tr)).unwrap()
}
