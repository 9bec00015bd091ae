//! Physical parameters shared by the model builder, the analytic rates and
//! the experiment runner. Rates are angular frequencies (rad/s).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{FilterChain, NUMERIC_DETUNING_FACTOR};

/// Kerr rate used by the reference configurations, `2π × 10 MHz`.
pub const REFERENCE_KERR: f64 = 2.0 * PI * 10e6;
/// Intrinsic loss rate used by the reference configurations, `2π × 1 kHz`.
pub const REFERENCE_KAPPA1: f64 = 2.0 * PI * 1e3;
pub const REFERENCE_N_TH: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Kerr nonlinearity `K`.
    pub kerr: f64,
    /// Cat size `α²`.
    pub alpha2: f64,
    /// Intrinsic single-photon loss `κ₁`.
    pub kappa1: f64,
    /// Thermal occupation of the intrinsic bath.
    pub n_th: f64,
    /// White dephasing rate `κ_φ,01`.
    pub kappa_phi01: f64,
    /// System to filter coupling `g`.
    pub g: f64,
    /// Filter hopping `J`.
    pub hopping: f64,
    /// Terminal filter loss `κ_f`.
    pub kappa_f: f64,
    /// Detuning `Δ = ω_f − ω_a`.
    pub delta: f64,
    /// Number of filter modes `M`.
    pub modes: usize,
    /// Drive amplitude `ε`.
    pub epsilon: f64,
    /// Ideal engineered cooling rate; derived from the filter when absent.
    pub kappa1_eng: Option<f64>,
}

impl SystemParams {
    /// Bare Kerr cat with the reference `K`, `κ₁` and `n_th`.
    pub fn bare_kerr(alpha2: f64) -> Self {
        Self {
            kerr: REFERENCE_KERR,
            alpha2,
            kappa1: REFERENCE_KAPPA1,
            n_th: REFERENCE_N_TH,
            kappa_phi01: 0.0,
            g: 0.0,
            hopping: 0.0,
            kappa_f: 0.0,
            delta: 0.0,
            modes: 0,
            epsilon: 0.0,
            kappa1_eng: None,
        }
    }

    /// Reference Kerr cat behind an `M`-mode band-pass chain with
    /// `κ_f = 2J = |Δ|/5`, `g = κ_f/5` and `Δ = −3.6 Kα²`.
    pub fn colored(alpha2: f64, modes: usize) -> Self {
        Self::colored_with_detuning(alpha2, modes, NUMERIC_DETUNING_FACTOR)
    }

    /// As [`SystemParams::colored`] with `Δ = −factor · Kα²`.
    pub fn colored_with_detuning(alpha2: f64, modes: usize, detuning_factor: f64) -> Self {
        let mut p = Self::bare_kerr(alpha2);
        p.delta = -detuning_factor * p.kerr * alpha2;
        p.kappa_f = p.delta.abs() / 5.0;
        p.hopping = p.kappa_f / 2.0;
        p.g = p.kappa_f / 5.0;
        p.modes = modes;
        p
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("kerr", self.kerr),
            ("kappa1", self.kappa1),
            ("n_th", self.n_th),
            ("kappa_phi01", self.kappa_phi01),
            ("g", self.g),
            ("hopping", self.hopping),
            ("kappa_f", self.kappa_f),
            ("epsilon", self.epsilon),
            ("kappa1_eng", self.kappa1_eng.unwrap_or(0.0)),
        ];
        for (name, v) in rates {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !(self.alpha2 > 0.0 && self.alpha2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha2 must be > 0, got {}",
                self.alpha2
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite, got {}",
                self.delta
            )));
        }
        self.chain().map(|_| ())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha2.sqrt()
    }

    pub fn chain(&self) -> Result<FilterChain> {
        FilterChain::new(self.modes, self.hopping, self.kappa_f, self.delta)
    }

    /// Supplied `κ₁,eng`, or `4g²/κ_f` when a filter is present.
    pub fn resolved_kappa1_eng(&self) -> f64 {
        match self.kappa1_eng {
            Some(k) => k,
            None if self.modes > 0 && self.kappa_f > 0.0 => 4.0 * self.g * self.g / self.kappa_f,
            None => 0.0,
        }
    }

    /// Copy with every rate multiplied by `s`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            kerr: self.kerr * s,
            kappa1: self.kappa1 * s,
            kappa_phi01: self.kappa_phi01 * s,
            g: self.g * s,
            hopping: self.hopping * s,
            kappa_f: self.kappa_f * s,
            delta: self.delta * s,
            epsilon: self.epsilon * s,
            kappa1_eng: self.kappa1_eng.map(|k| k * s),
            ..self.clone()
        }
    }
}
