mod common;

use catsim::fit::{fit_decay, FitModel};
use catsim::Error;
use common::rel_err;
use proptest::prelude::*;

fn grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn exact_exponential() {
    let gamma = 628.3;
    let t = grid(0.0, 500e-6, 501);
    let y: Vec<f64> = t.iter().map(|t| 0.8 * (-gamma * t).exp()).collect();
    let f = fit_decay(&t, &y, FitModel::Exponential, (400e-6, 500e-6)).unwrap();
    assert!(rel_err(f.rate, gamma) < 1e-9);
    assert!(rel_err(f.amplitude, 0.8) < 1e-9);
    assert_eq!(f.window, (400e-6, 500e-6));
    assert_eq!(f.model, FitModel::Exponential);
    assert!(f.residual_rms < 1e-12);
}

#[test]
fn negative_amplitude_exponential() {
    let t = grid(0.0, 2.0, 41);
    let y: Vec<f64> = t.iter().map(|t| -3.0 * (-1.7 * t).exp()).collect();
    let f = fit_decay(&t, &y, FitModel::Exponential, (0.0, 2.0)).unwrap();
    assert!(rel_err(f.rate, 1.7) < 1e-9);
    assert!(rel_err(f.amplitude, -3.0) < 1e-9);
}

#[test]
fn exact_damped_cosine() {
    let (gamma, omega) = (2.0e5, 3.0e7);
    let t = grid(0.0, 5e-6, 400);
    let y: Vec<f64> = t.iter().map(|t| (-gamma * t).exp() * (omega * t).cos()).collect();
    let f = fit_decay(&t, &y, FitModel::DampedSinusoid, (0.0, 5e-6)).unwrap();
    assert!(rel_err(f.rate, gamma) < 1e-6, "{}", f.rate);
    assert!(rel_err(f.frequency.unwrap(), omega) < 1e-6);
    assert!(rel_err(f.amplitude, 1.0) < 1e-6);
    assert!(f.offset.unwrap().abs() < 1e-8);
    let phase = f.phase.unwrap();
    assert!(phase.min(2.0 * std::f64::consts::PI - phase) < 1e-6);
}

#[test]
fn damped_sinusoid_with_offset_in_later_window() {
    let t = grid(0.0, 10.0, 1001);
    let y: Vec<f64> = t
        .iter()
        .map(|t| 0.5 * (-0.3 * t).exp() * (4.0 * t + 0.7).cos() + 0.1)
        .collect();
    let f = fit_decay(&t, &y, FitModel::DampedSinusoid, (2.0, 10.0)).unwrap();
    assert!(rel_err(f.rate, 0.3) < 1e-6);
    assert!(rel_err(f.frequency.unwrap(), 4.0) < 1e-6);
    assert!(rel_err(f.amplitude, 0.5) < 1e-6);
    assert!(rel_err(f.phase.unwrap(), 0.7) < 1e-6);
    assert!(rel_err(f.offset.unwrap(), 0.1) < 1e-6);
}

#[test]
fn constant_series_has_zero_rate() {
    let t = grid(0.0, 1e-3, 101);
    let y = vec![0.1; 101];
    let f = fit_decay(&t, &y, FitModel::Exponential, (0.0, 1e-3)).unwrap();
    assert!(f.rate.abs() < 1e-12);
    assert!(rel_err(f.amplitude, 0.1) < 1e-12);
}

#[test]
fn rejects_small_windows_and_growth() {
    let t = grid(0.0, 1.0, 100);
    let y: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
    assert!(matches!(
        fit_decay(&t, &y, FitModel::Exponential, (0.0, 0.05)),
        Err(Error::FitFailure(_))
    ));
    assert!(fit_decay(&t, &y[..50], FitModel::Exponential, (0.0, 1.0)).is_err());
    let grow: Vec<f64> = t.iter().map(|t| (2.0 * t).exp()).collect();
    assert!(matches!(
        fit_decay(&t, &grow, FitModel::Exponential, (0.0, 1.0)),
        Err(Error::FitFailure(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recovers_random_exponentials(gamma in 1e-2f64..50.0, amp in 0.01f64..10.0, t_end in 0.1f64..5.0) {
        let t = grid(0.0, t_end, 64);
        let y: Vec<f64> = t.iter().map(|t| amp * (-gamma * t).exp()).collect();
        let f = fit_decay(&t, &y, FitModel::Exponential, (0.0, t_end)).unwrap();
        prop_assert!(rel_err(f.rate, gamma) < 1e-8);
    }

    #[test]
    fn window_changes_only_fit(w0 in 0.0f64..0.5) {
        let t = grid(0.0, 1.0, 200);
        let y: Vec<f64> = t.iter().map(|t| (-2.0 * t).exp()).collect();
        let before = y.clone();
        let f = fit_decay(&t, &y, FitModel::Exponential, (w0, 1.0)).unwrap();
        prop_assert_eq!(&y, &before);
        prop_assert_eq!(f.window, (w0, 1.0));
        prop_assert!(rel_err(f.rate, 2.0) < 1e-9);
    }
}
