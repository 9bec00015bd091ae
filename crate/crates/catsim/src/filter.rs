//! Tight-binding filter chain in its single-excitation manifold and its
//! coupling to a bosonic system.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::lindblad::Dissipator;
use crate::operators::{tensor_product, OperatorMatrix, C64};

pub const MAX_FILTER_MODES: usize = 4;
/// Default cap on the joint system ⊗ filter dimension.
pub const JOINT_DIM_CAP: usize = 128;
/// Detuning `|Δ| / Kα²` used for simulations.
pub const NUMERIC_DETUNING_FACTOR: f64 = 3.6;
/// Detuning `|Δ| / Kα²` matching the bare gap `4Kα²`.
pub const ANALYTIC_DETUNING_FACTOR: f64 = 4.0;

/// `M` filter modes with hopping `J`, loss `κ_f` on the last mode and
/// detuning `Δ = ω_f − ω_a` from the system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterChain {
    pub modes: usize,
    pub hopping: f64,
    pub kappa_f: f64,
    pub delta: f64,
}

impl FilterChain {
    pub fn new(modes: usize, hopping: f64, kappa_f: f64, delta: f64) -> Result<Self> {
        if modes > MAX_FILTER_MODES {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_FILTER_MODES} filter modes are supported, got {modes}"
            )));
        }
        for (name, v) in [("hopping", hopping), ("kappa_f", kappa_f)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("detuning must be finite, got {delta}")));
        }
        Ok(Self {
            modes,
            hopping,
            kappa_f,
            delta,
        })
    }

    /// Band-pass chain `κ_f = 2J = |Δ|/5` with `Δ = −factor·Kα²`.
    pub fn band_pass(modes: usize, kerr: f64, alpha2: f64, detuning_factor: f64) -> Result<Self> {
        let delta = -detuning_factor * kerr * alpha2;
        let kappa_f = delta.abs() / 5.0;
        Self::new(modes, kappa_f / 2.0, kappa_f, delta)
    }

    /// Coupling `g = κ_f / 5` paired with [`FilterChain::band_pass`].
    pub fn band_pass_coupling(&self) -> f64 {
        self.kappa_f / 5.0
    }

    /// Single-excitation dimension `M + 1`.
    pub fn dim(&self) -> usize {
        self.modes + 1
    }
}

/// Chain operators on the basis `|0⟩` (empty), `|j⟩` (one excitation in mode `j`).
#[derive(Clone, Debug)]
pub struct FilterOps {
    /// `J Σ (|j⟩⟨j+1| + h.c.) + Δ Σ |j⟩⟨j|`
    pub hamiltonian: OperatorMatrix,
    /// `f_j = |0⟩⟨j|` for `j = 1..M`.
    pub lowering: Vec<OperatorMatrix>,
    /// `f_M`, or the 1×1 zero operator when `M = 0`.
    pub terminal: OperatorMatrix,
    /// `Σ |j⟩⟨j|`
    pub number: OperatorMatrix,
}

pub fn single_excitation_ops(chain: &FilterChain) -> FilterOps {
    let m = chain.modes;
    let n = m + 1;
    let mut h = Array2::<C64>::zeros((n, n));
    for j in 1..n {
        h[[j, j]] = C64::new(chain.delta, 0.0);
        if j + 1 < n {
            h[[j, j + 1]] = C64::new(chain.hopping, 0.0);
            h[[j + 1, j]] = C64::new(chain.hopping, 0.0);
        }
    }
    let lower = |j: usize| {
        let mut f = Array2::<C64>::zeros((n, n));
        f[[0, j]] = C64::new(1.0, 0.0);
        OperatorMatrix::from_array(f).expect("square")
    };
    let lowering: Vec<OperatorMatrix> = (1..n).map(lower).collect();
    let terminal = lowering.last().cloned().unwrap_or_else(|| OperatorMatrix::zeros(1));
    let number = OperatorMatrix::from_diag(&(0..n).map(|j| if j == 0 { 0.0 } else { 1.0 }).collect::<Vec<_>>());
    FilterOps {
        hamiltonian: OperatorMatrix::hermitian(h).expect("hermitian"),
        lowering,
        terminal,
        number,
    }
}

/// Filter Hamiltonian, coupling and terminal loss on `system ⊗ filter`.
#[derive(Clone, Debug)]
pub struct CoupledSystem {
    /// Filter and coupling terms only; the system Hamiltonian is added by the caller.
    pub hamiltonian: OperatorMatrix,
    pub dissipators: Vec<Dissipator>,
    pub system_dim: usize,
    pub filter_dim: usize,
}

impl CoupledSystem {
    pub fn dim(&self) -> usize {
        self.system_dim * self.filter_dim
    }

    /// Lifts a system operator to the joint space.
    pub fn lift(&self, op: &OperatorMatrix) -> OperatorMatrix {
        tensor_product(op, &OperatorMatrix::identity(self.filter_dim))
    }
}

/// Couples `system_lowering` to mode 1 with `g (A ⊗ |1⟩⟨0| + h.c.)` in the
/// static frame where the detuning sits on the filter modes.
pub fn couple_system(system_lowering: &OperatorMatrix, chain: &FilterChain, g: f64) -> Result<CoupledSystem> {
    couple_system_with_cap(system_lowering, chain, g, JOINT_DIM_CAP)
}

pub fn couple_system_with_cap(
    system_lowering: &OperatorMatrix,
    chain: &FilterChain,
    g: f64,
    cap: usize,
) -> Result<CoupledSystem> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "coupling g must be finite and >= 0, got {g}"
        )));
    }
    let ns = system_lowering.dim();
    let nf = chain.dim();
    if ns * nf > cap {
        return Err(Error::DimensionCap { dim: ns * nf, cap });
    }
    let ops = single_excitation_ops(chain);
    let id_s = OperatorMatrix::identity(ns);
    let mut h = tensor_product(&id_s, &ops.hamiltonian);
    let mut dissipators = Vec::new();
    if chain.modes > 0 {
        let raise1 = ops.lowering[0].adjoint();
        let hop = tensor_product(system_lowering, &raise1);
        let coupling = &hop + &hop.adjoint();
        h = &h + &(&coupling * g);
        dissipators.push(Dissipator::new(tensor_product(&id_s, &ops.terminal), chain.kappa_f)?);
    }
    Ok(CoupledSystem {
        hamiltonian: h.hermitian_part(),
        dissipators,
        system_dim: ns,
        filter_dim: nf,
    })
}

/// `(κ_f/2)² |G_{M1}(ω)|²` with `G = (ω − H_chain)⁻¹`, the non-Hermitian chain
/// carrying `−iκ_f/2` on mode `M`; `ω` is measured from the filter frequency.
pub fn chain_response(chain: &FilterChain, omega: f64) -> Result<f64> {
    let m = chain.modes;
    if m == 0 {
        return Err(Error::InvalidParameter("chain response needs at least one mode".into()));
    }
    let mut a = Array2::<C64>::zeros((m, m));
    for j in 0..m {
        a[[j, j]] = C64::new(omega, 0.0);
        if j + 1 < m {
            a[[j, j + 1]] = C64::new(-chain.hopping, 0.0);
            a[[j + 1, j]] = C64::new(-chain.hopping, 0.0);
        }
    }
    a[[m - 1, m - 1]] += C64::new(0.0, chain.kappa_f / 2.0);
    let mut e1 = Array1::<C64>::zeros(m);
    e1[0] = C64::new(1.0, 0.0);
    let col = Lu::factor(&a)?.solve_vec(&e1)?;
    Ok((chain.kappa_f / 2.0).powi(2) * col[m - 1].norm_sqr())
}
