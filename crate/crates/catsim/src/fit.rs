//! Least-squares decay fits with deterministic initialization.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Lu;

pub const MIN_FIT_POINTS: usize = 8;
pub const MAX_FIT_ITERATIONS: usize = 500;
const SPECTRAL_OVERSAMPLING: usize = 8;
const DECAY_SEED_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `A e^{−γt}`
    Exponential,
    /// `A e^{−γt} cos(Ωt + φ) + c`
    DampedSinusoid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub rate: f64,
    pub amplitude: f64,
    pub model: FitModel,
    pub residual_rms: f64,
    pub window: (f64, f64),
    pub frequency: Option<f64>,
    pub phase: Option<f64>,
    pub offset: Option<f64>,
    pub iterations: usize,
}

impl FitResult {
    /// Residual RMS relative to the RMS of the fitted data.
    pub fn relative_residual(&self, values_rms: f64) -> f64 {
        if values_rms == 0.0 {
            self.residual_rms
        } else {
            self.residual_rms / values_rms
        }
    }
}

/// Fits `model` to the samples with `window.0 <= t <= window.1`.
pub fn fit_decay(times: &[f64], values: &[f64], model: FitModel, window: (f64, f64)) -> Result<FitResult> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: values.len(),
        });
    }
    let (t, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, y)| (*t, *y))
        .unzip();
    if t.len() < MIN_FIT_POINTS {
        return Err(Error::FitFailure(format!(
            "{} points in window [{:e}, {:e}], need {MIN_FIT_POINTS}",
            t.len(),
            window.0,
            window.1
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::FitFailure("non-finite samples in window".into()));
    }
    // work in scaled time s = (t − t0)/T
    let t0 = t[0];
    let span = (t[t.len() - 1] - t0).max(f64::MIN_POSITIVE);
    let s: Vec<f64> = t.iter().map(|v| (v - t0) / span).collect();
    match model {
        FitModel::Exponential => fit_exponential(&s, &y, t0, span, window),
        FitModel::DampedSinusoid => fit_sinusoid(&s, &y, t0, span, window),
    }
}

/// Levenberg-Marquardt on `f(p, s_i) ≈ y_i` with analytic Jacobian rows.
fn levenberg_marquardt(
    s: &[f64],
    y: &[f64],
    mut p: Vec<f64>,
    eval: &dyn Fn(&[f64], f64) -> (f64, Vec<f64>),
) -> Result<(Vec<f64>, f64, usize)> {
    let np = p.len();
    let residuals = |p: &[f64]| -> Vec<f64> { s.iter().zip(y).map(|(&si, &yi)| eval(p, si).0 - yi).collect() };
    let mut r = residuals(&p);
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    for it in 0..MAX_FIT_ITERATIONS {
        let mut jtj = Array2::<f64>::zeros((np, np));
        let mut jtr = Array1::<f64>::zeros(np);
        for (k, &si) in s.iter().enumerate() {
            let (_, grad) = eval(&p, si);
            for a in 0..np {
                jtr[a] += grad[a] * r[k];
                for b in 0..np {
                    jtj[[a, b]] += grad[a] * grad[b];
                }
            }
        }
        let grad_norm = jtr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if grad_norm <= 1e-15 * (1.0 + cost) || cost == 0.0 {
            return Ok((p, cost, it));
        }
        let mut improved = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for d in 0..np {
                a[[d, d]] += lambda * jtj[[d, d]].max(1e-300);
            }
            let step = match Lu::factor(&a).and_then(|lu| lu.solve_vec(&jtr.mapv(|v| -v))) {
                Ok(v) => v,
                Err(_) => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residuals(&trial);
            let ct: f64 = rt.iter().map(|v| v * v).sum();
            if ct.is_finite() && ct <= cost {
                let small = step.iter().zip(&p).all(|(d, v)| d.abs() <= 1e-14 * (v.abs() + 1e-14));
                let rel_drop = (cost - ct) / cost.max(f64::MIN_POSITIVE);
                p = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-15);
                improved = true;
                if small || rel_drop < 1e-15 {
                    return Ok((p, cost, it + 1));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            return Ok((p, cost, it + 1));
        }
    }
    Err(Error::FitFailure(format!(
        "no convergence after {MAX_FIT_ITERATIONS} iterations, cost {cost:e}"
    )))
}

fn check_rate(rate_scaled: f64, span: f64) -> Result<f64> {
    if rate_scaled >= 0.0 {
        Ok(rate_scaled / span)
    } else if rate_scaled > -1e-9 {
        Ok(0.0)
    } else {
        Err(Error::FitFailure(format!(
            "fitted rate {:e} is negative (growth)",
            rate_scaled / span
        )))
    }
}

fn fit_exponential(s: &[f64], y: &[f64], t0: f64, span: f64, window: (f64, f64)) -> Result<FitResult> {
    let sign = if y.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    // log-linear seed on the points of the dominant sign
    let pts: Vec<(f64, f64)> = s
        .iter()
        .zip(y)
        .filter(|(_, v)| sign * **v > 0.0)
        .map(|(s, v)| (*s, (sign * v).ln()))
        .collect();
    let (a0, g0) = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let ms = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - ms).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - ms) * (p.1 - ml)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        (sign * (ml - slope * ms).exp(), -slope)
    } else {
        (y[0], 0.0)
    };
    let eval = |p: &[f64], s: f64| {
        let e = (-p[1] * s).exp();
        (p[0] * e, vec![e, -s * p[0] * e])
    };
    let (p, cost, iterations) = levenberg_marquardt(s, y, vec![a0, g0], &eval)?;
    let rate = check_rate(p[1], span)?;
    Ok(FitResult {
        rate,
        amplitude: p[0] * (rate * t0).exp(),
        model: FitModel::Exponential,
        residual_rms: (cost / s.len() as f64).sqrt(),
        window,
        frequency: None,
        phase: None,
        offset: None,
        iterations,
    })
}

/// Linear least squares for `e^{−γs}(p cos ωs + q sin ωs) + c`; returns `(p, q, c, cost)`.
fn linear_sinusoid(s: &[f64], y: &[f64], gamma: f64, omega: f64) -> Option<(f64, f64, f64, f64)> {
    let mut ata = Array2::<f64>::zeros((3, 3));
    let mut aty = Array1::<f64>::zeros(3);
    let row = |si: f64| {
        let e = (-gamma * si).exp();
        [e * (omega * si).cos(), e * (omega * si).sin(), 1.0]
    };
    for (&si, &yi) in s.iter().zip(y) {
        let r = row(si);
        for a in 0..3 {
            aty[a] += r[a] * yi;
            for b in 0..3 {
                ata[[a, b]] += r[a] * r[b];
            }
        }
    }
    let x = Lu::factor(&ata).ok()?.solve_vec(&aty).ok()?;
    let cost = s
        .iter()
        .zip(y)
        .map(|(&si, &yi)| {
            let r = row(si);
            (r[0] * x[0] + r[1] * x[1] + r[2] * x[2] - yi).powi(2)
        })
        .sum();
    Some((x[0], x[1], x[2], cost))
}

fn spectral_peak(s: &[f64], y: &[f64]) -> f64 {
    let n = s.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let nyquist = PI * (n - 1) as f64;
    let bins = SPECTRAL_OVERSAMPLING * n;
    let mut best = (0.0, -1.0);
    for k in 1..=bins {
        let w = nyquist * k as f64 / bins as f64;
        let (mut c, mut sn) = (0.0, 0.0);
        for (&si, &yi) in s.iter().zip(y) {
            c += (yi - mean) * (w * si).cos();
            sn += (yi - mean) * (w * si).sin();
        }
        let power = c * c + sn * sn;
        if power > best.1 {
            best = (w, power);
        }
    }
    best.0
}

fn fit_sinusoid(s: &[f64], y: &[f64], t0: f64, span: f64, window: (f64, f64)) -> Result<FitResult> {
    let omega0 = spectral_peak(s, y);
    let mut seed = None;
    for k in 0..DECAY_SEED_GRID {
        let gamma = 20.0 * k as f64 / DECAY_SEED_GRID as f64;
        if let Some((p, q, c, cost)) = linear_sinusoid(s, y, gamma, omega0) {
            if seed.as_ref().is_none_or(|b: &(f64, [f64; 5])| cost < b.0) {
                seed = Some((cost, [p, q, gamma, omega0, c]));
            }
        }
    }
    let (_, p0) = seed.ok_or_else(|| Error::FitFailure("sinusoid seed is singular".into()))?;
    let eval = |p: &[f64], s: f64| {
        let e = (-p[2] * s).exp();
        let (cw, sw) = ((p[3] * s).cos(), (p[3] * s).sin());
        let base = p[0] * cw + p[1] * sw;
        let v = e * base + p[4];
        let grad = vec![e * cw, e * sw, -s * e * base, e * s * (-p[0] * sw + p[1] * cw), 1.0];
        (v, grad)
    };
    let (p, cost, iterations) = levenberg_marquardt(s, y, p0.to_vec(), &eval)?;
    let rate = check_rate(p[2], span)?;
    let omega = p[3].abs() / span;
    let q = if p[3] < 0.0 { -p[1] } else { p[1] };
    let amp_shifted = p[0].hypot(q);
    // shift the phase reference from t0 back to t = 0
    let phase = ((-q).atan2(p[0]) - omega * t0).rem_euclid(2.0 * PI);
    Ok(FitResult {
        rate,
        amplitude: amp_shifted * (rate * t0).exp(),
        model: FitModel::DampedSinusoid,
        residual_rms: (cost / s.len() as f64).sqrt(),
        window,
        frequency: Some(omega),
        phase: Some(phase),
        offset: Some(p[4]),
        iterations,
    })
}
