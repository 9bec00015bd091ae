//! Closed-form rate predictions. All rates are angular frequencies.

use std::f64::consts::FRAC_PI_4;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::bases::TUNNELING_EXPONENT;
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::operators::C64;
use crate::params::SystemParams;

/// Exponent of the residual tunneling suppression in the simplified bit-flip form.
pub const SIMPLIFIED_ALPHA_EXPONENT: f64 = 0.94;
/// Power of `2κ/K` in the simplified bit-flip form.
pub const SIMPLIFIED_KAPPA_POWER: f64 = -0.6;
const FIXED_POINT_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub name: String,
    pub value: f64,
    pub validity: String,
    pub formula_ref: String,
}

impl RatePrediction {
    fn new(name: &str, value: f64, validity: &str, formula_ref: &str) -> Self {
        Self {
            name: name.into(),
            value,
            validity: validity.into(),
            formula_ref: formula_ref.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineeredRates {
    /// `4g²/κ_f`
    pub kappa1_eng: f64,
    pub kappa_ind_m1: f64,
    pub kappa_ind_m2: f64,
    /// `(4g²α²/κ_f)(J/Δ)^{2M}` at the configured `M`.
    pub kappa_ind_asymptotic: f64,
}

fn nonzero_detuning(p: &SystemParams) -> Result<f64> {
    if p.delta == 0.0 {
        Err(Error::SingularDetuning)
    } else {
        Ok(p.delta)
    }
}

fn cooling(p: &SystemParams) -> Result<f64> {
    if p.g == 0.0 {
        return Ok(0.0);
    }
    if p.kappa_f == 0.0 {
        return Err(Error::InvalidParameter("engineered cooling needs kappa_f > 0".into()));
    }
    Ok(4.0 * p.g * p.g / p.kappa_f)
}

pub fn engineered_rates(p: &SystemParams) -> Result<EngineeredRates> {
    let d = nonzero_detuning(p)?;
    let (g, j, kf, a2) = (p.g, p.hopping, p.kappa_f, p.alpha2);
    let g2 = g * g;
    let m1 = kf * g2 * a2 / ((d - g2 / d).powi(2) + kf * kf / 4.0);
    let m2 = kf * g2 * j * j * a2 / ((j * j - d * d + g2).powi(2) + (g2 * kf / d - kf * d).powi(2) / 4.0);
    let kappa1_eng = cooling(p)?;
    let asym = if g == 0.0 {
        0.0
    } else {
        kappa1_eng * a2 * (j / d).powi(2 * p.modes as i32)
    };
    Ok(EngineeredRates {
        kappa1_eng,
        kappa_ind_m1: m1,
        kappa_ind_m2: m2,
        kappa_ind_asymptotic: asym,
    })
}

/// Inverse of the `(M+1)`-dimensional non-Hermitian matrix over
/// `[system, f₁ … f_M]` with diagonal `Δ`, coupling `g`, hopping `J` and
/// `−iκ_f/2` on the last mode.
fn chain_resolvent(p: &SystemParams, modes: usize) -> Result<Array2<C64>> {
    let d = nonzero_detuning(p)?;
    if modes == 0 {
        return Err(Error::InvalidParameter("filter chain needs at least one mode".into()));
    }
    let n = modes + 1;
    let mut h = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        h[[i, i]] = C64::new(d, 0.0);
    }
    h[[0, 1]] = C64::new(p.g, 0.0);
    h[[1, 0]] = C64::new(p.g, 0.0);
    for j in 1..modes {
        h[[j, j + 1]] = C64::new(p.hopping, 0.0);
        h[[j + 1, j]] = C64::new(p.hopping, 0.0);
    }
    h[[modes, modes]] -= C64::new(0.0, p.kappa_f / 2.0);
    let lu = Lu::factor(&h)?;
    let mut inv = Array2::<C64>::zeros((n, n));
    for c in 0..n {
        let mut e = Array1::<C64>::zeros(n);
        e[c] = C64::new(1.0, 0.0);
        inv.column_mut(c).assign(&lu.solve_vec(&e)?);
    }
    Ok(inv)
}

/// Induced phase-flip rate through an `M`-mode chain, `κ_f g²α² |G_{M,1}|²`.
/// Reproduces the `M = 1, 2` closed forms of [`engineered_rates`].
pub fn induced_rate_chain(p: &SystemParams, modes: usize) -> Result<f64> {
    let gi = chain_resolvent(p, modes)?;
    Ok(p.kappa_f * p.g * p.g * p.alpha2 * gi[[modes, 1]].norm_sqr())
}

/// Drive leakage through an `M`-mode chain, `κ_f ε² |G_{M,0}|²`.
pub fn drive_rate_chain(p: &SystemParams, modes: usize) -> Result<f64> {
    let gi = chain_resolvent(p, modes)?;
    Ok(p.kappa_f * p.epsilon * p.epsilon * gi[[modes, 0]].norm_sqr())
}

/// Drive-induced non-adiabatic rate: exact amplitudes for `M ∈ {1, 2}`,
/// `κ_f g² ε² J^{2(M−1)} / Δ^{2(M+1)}` otherwise.
pub fn nonadiabatic_rate(p: &SystemParams) -> Result<f64> {
    let d = nonzero_detuning(p)?;
    let (g, j, kf, eps) = (p.g, p.hopping, p.kappa_f, p.epsilon);
    let g2 = g * g;
    match p.modes {
        0 => Err(Error::InvalidParameter(
            "non-adiabatic rate needs at least one filter mode".into(),
        )),
        1 => {
            let den = C64::new(g2 - d * d, kf * d / 2.0);
            Ok(kf * g2 * eps * eps / den.norm_sqr())
        }
        2 => {
            let den = C64::new(d * (g2 + j * j - d * d), -(g2 - d * d) * kf / 2.0);
            Ok(kf * g2 * j * j * eps * eps / den.norm_sqr())
        }
        m => Ok(nonadiabatic_scaling(p, m, d)),
    }
}

fn nonadiabatic_scaling(p: &SystemParams, m: usize, d: f64) -> f64 {
    let m = m as i32;
    p.kappa_f * p.g * p.g * p.epsilon * p.epsilon * p.hopping.powi(2 * (m - 1)) / d.powi(2 * (m + 1))
}

/// Asymptotic non-adiabatic rate at any `M ≥ 1`.
pub fn nonadiabatic_rate_asymptotic(p: &SystemParams) -> Result<f64> {
    let d = nonzero_detuning(p)?;
    if p.modes == 0 {
        return Err(Error::InvalidParameter(
            "non-adiabatic rate needs at least one filter mode".into(),
        ));
    }
    Ok(nonadiabatic_scaling(p, p.modes, d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitflipAnalytics {
    /// Sum of the per-level contributions.
    pub gamma_x: f64,
    /// `γ_X^(n)`, indexed by excitation level; entry 0 is unused and zero.
    pub per_level: Vec<f64>,
    /// Critical level, at least 1.
    pub n_c: usize,
    /// Critical-level estimate `κ₁ n_th n_c! (4α²)^{1−n_c} / 2`.
    pub critical_level_rate: f64,
    /// `κ₁ n_th/2 × min{1, exp(−0.94α² + ln 4α²)(2κ/K)^{−0.6}}`
    pub simplified: f64,
    /// Largest positive solution of `K e^{−1.6(α²−4n)} = nκ`, if any.
    pub fixed_point_level: Option<f64>,
}

/// Heating-limited bit-flip rate from tunneling splittings `χ′_n` and
/// heating matrix elements `λ_{0,n}`, both indexed by level `n` (entry 0 ignored).
pub fn bitflip_analytics(p: &SystemParams, chi_prime: &[f64], lambda_0n: &[f64]) -> Result<BitflipAnalytics> {
    let levels = chi_prime.len().min(lambda_0n.len());
    if levels < 2 {
        return Err(Error::InvalidParameter(
            "bit-flip analytics need chi_prime and lambda_0n for at least level 1".into(),
        ));
    }
    let kappa = p.kappa1 + p.resolved_kappa1_eng();
    let mut per_level = vec![0.0; levels];
    for n in 1..levels {
        per_level[n] = level_rate(p.kappa1 * p.n_th * lambda_0n[n].powi(2), chi_prime[n], n as f64 * kappa);
    }
    let n_c = critical_level(p.alpha2, kappa, p.kerr);
    Ok(BitflipAnalytics {
        gamma_x: per_level.iter().sum(),
        per_level,
        n_c,
        critical_level_rate: critical_level_rate(p, n_c),
        simplified: simplified_bitflip_rate(p),
        fixed_point_level: critical_level_fixed_point(p.alpha2, kappa, p.kerr),
    })
}

/// `κ_↑/2` above the branch point `χ′/κ_↓ = π/4`, `κ_↑ sin²(χ′/κ_↓)` below.
pub fn level_rate(kappa_up: f64, chi: f64, kappa_down: f64) -> f64 {
    let x = chi / kappa_down;
    if x > FRAC_PI_4 {
        kappa_up / 2.0
    } else {
        kappa_up * x.sin().powi(2)
    }
}

/// `⌈α²/4 + ln(2κ/K)/6.4⌉`, at least 1.
pub fn critical_level(alpha2: f64, kappa: f64, kerr: f64) -> usize {
    let x = alpha2 / 4.0 + (2.0 * kappa / kerr).ln() / (4.0 * TUNNELING_EXPONENT);
    let c = x.ceil();
    if c.is_finite() && c >= 1.0 {
        c as usize
    } else {
        1
    }
}

fn critical_level_rate(p: &SystemParams, n_c: usize) -> f64 {
    let fact: f64 = (1..=n_c).map(|k| k as f64).product();
    p.kappa1 * p.n_th * fact * (4.0 * p.alpha2).powi(1 - n_c as i32) / 2.0
}

pub fn simplified_bitflip_rate(p: &SystemParams) -> f64 {
    let kappa = p.kappa1 + p.resolved_kappa1_eng();
    let suppression = (-SIMPLIFIED_ALPHA_EXPONENT * p.alpha2 + (4.0 * p.alpha2).ln()).exp()
        * (2.0 * kappa / p.kerr).powf(SIMPLIFIED_KAPPA_POWER);
    p.kappa1 * p.n_th / 2.0 * suppression.min(1.0)
}

/// Iterates `n ← α²/4 + ln(nκ/K)/6.4`, which contracts onto the larger root.
pub fn critical_level_fixed_point(alpha2: f64, kappa: f64, kerr: f64) -> Option<f64> {
    let mut n = (alpha2 / 4.0).max(1.0);
    for _ in 0..FIXED_POINT_ITERATIONS {
        let next = alpha2 / 4.0 + (n * kappa / kerr).ln() / (4.0 * TUNNELING_EXPONENT);
        if !next.is_finite() || next <= 0.0 {
            return None;
        }
        if (next - n).abs() < 1e-12 {
            return Some(next);
        }
        n = next;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingRates {
    /// `α² κ_φ,01`
    pub white: f64,
    /// `α² S_ff(−Δ_gap)` with `Δ_gap = −4Kα²`.
    pub colored: f64,
}

pub fn dephasing_rates(p: &SystemParams, s_ff: &dyn Fn(f64) -> f64) -> DephasingRates {
    let gap = -4.0 * p.kerr * p.alpha2;
    DephasingRates {
        white: p.alpha2 * p.kappa_phi01,
        colored: if p.alpha2 == 0.0 { 0.0 } else { p.alpha2 * s_ff(-gap) },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryEffects {
    /// `|Ω_X| = 2g²α² e^{−2α²} / |Δ|`
    pub low_alpha_x_rate: f64,
    /// `κ₁ α / (2|Δ|)`
    pub intrinsic_leakage_amplitude: f64,
    /// `(χ_n/γ)²` with `γ = √(ε² + χ_n²)`, per entry of `chi`.
    pub dd_continuous_bound: Vec<f64>,
    /// `sin²(χ_n / pulse_rate)`, per entry of `chi`.
    pub dd_pulse_bound: Vec<f64>,
}

pub fn auxiliary_effects(p: &SystemParams, chi: &[f64], pulse_rate: f64) -> Result<AuxiliaryEffects> {
    let d = nonzero_detuning(p)?.abs();
    let xi = p.alpha() * (-2.0 * p.alpha2).exp();
    Ok(AuxiliaryEffects {
        low_alpha_x_rate: 2.0 * p.g * p.g * xi * p.alpha() / d,
        intrinsic_leakage_amplitude: p.kappa1 * p.alpha() / (2.0 * d),
        dd_continuous_bound: chi
            .iter()
            .map(|&c| {
                let gamma2 = p.epsilon * p.epsilon + c * c;
                if gamma2 == 0.0 {
                    0.0
                } else {
                    c * c / gamma2
                }
            })
            .collect(),
        dd_pulse_bound: chi.iter().map(|&c| (c / pulse_rate).sin().powi(2)).collect(),
    })
}

/// Baseline parity decay `2κ₁(1 + n_th)α²`.
pub fn parity_baseline(p: &SystemParams) -> f64 {
    2.0 * p.kappa1 * (1.0 + p.n_th) * p.alpha2
}

/// Plateau bit-flip rate `κ₁ n_th / 2`.
pub fn heating_plateau(p: &SystemParams) -> f64 {
    p.kappa1 * p.n_th / 2.0
}

/// Summary of the closed forms applicable to `p`.
pub fn predictions(p: &SystemParams) -> Vec<RatePrediction> {
    let mut out = vec![
        RatePrediction::new(
            "gamma_x_plateau",
            heating_plateau(p),
            "heating-limited, chi'_1 >> kappa",
            "bitflip.plateau",
        ),
        RatePrediction::new(
            "gamma_x_simplified",
            simplified_bitflip_rate(p),
            "alpha^2/4 >> |ln(2 kappa/K)|/6.4",
            "bitflip.simplified",
        ),
        RatePrediction::new(
            "parity_baseline",
            parity_baseline(p),
            "intrinsic loss and gain only",
            "parity.baseline",
        ),
        RatePrediction::new(
            "kappa1_eng",
            p.resolved_kappa1_eng(),
            "g << kappa_f",
            "cooling.engineered",
        ),
        RatePrediction::new(
            "heating_white_dephasing",
            p.alpha2 * p.kappa_phi01,
            "white dephasing spectrum",
            "dephasing.white",
        ),
    ];
    if p.delta != 0.0 && p.modes > 0 {
        if let Ok(e) = engineered_rates(p) {
            out.push(RatePrediction::new(
                "kappa_ind_m1",
                e.kappa_ind_m1,
                "single filter mode",
                "induced.m1",
            ));
            out.push(RatePrediction::new(
                "kappa_ind_m2",
                e.kappa_ind_m2,
                "two filter modes",
                "induced.m2",
            ));
            out.push(RatePrediction::new(
                "kappa_ind_asymptotic",
                e.kappa_ind_asymptotic,
                "g << J << |Delta|",
                "induced.asymptotic",
            ));
        }
        if let Ok(k) = induced_rate_chain(p, p.modes) {
            out.push(RatePrediction::new(
                "kappa_ind_chain",
                k,
                "configured M, exact linear response",
                "induced.chain",
            ));
        }
        if let Ok(k) = nonadiabatic_rate(p) {
            out.push(RatePrediction::new(
                "nonadiabatic",
                k,
                "g << J << |Delta|",
                "nonadiabatic.drive",
            ));
        }
    }
    out
}
