mod common;

use catsim::experiment::{
    basis_dump, rate_table, rate_table_row, run_scenario, InitialState, Scenario, ScenarioConfig, Sweep,
    MAX_SWEEP_POINTS,
};
use catsim::model::{CouplingKind, ModelOptions};
use catsim::params::SystemParams;
use catsim::rates::{heating_plateau, induced_rate_chain, parity_baseline};
use catsim::Error;
use proptest::prelude::*;

fn idle(alpha2: f64) -> ScenarioConfig {
    ScenarioConfig::new(Scenario::IdleBitflip, SystemParams::bare_kerr(alpha2), 500e-6, 501).with_window(400e-6, 500e-6)
}

#[test]
fn config_contract() {
    let ok = idle(4.0);
    assert!(ok.validate().is_ok());
    let mut c = ok.clone();
    c.grid_points = 15;
    assert!(matches!(c.validate(), Err(Error::InvalidParameter(_))));
    let c = ok.clone().with_window(400e-6, 600e-6);
    assert!(matches!(c.validate(), Err(Error::InvalidParameter(_))));
    let c = ok.clone().with_window(300e-6, 200e-6);
    assert!(c.validate().is_err());
    let mut c = ok.clone();
    c.horizon = 0.0;
    assert!(c.validate().is_err());
    let c = ok.with_initial_state(InitialState::PlusCat);
    assert!(run_scenario(&c).is_err());
}

#[test]
fn idle_bitflip_plateau_at_four() {
    let cfg = idle(4.0);
    let out = run_scenario(&cfg).unwrap();
    let g = out.summary.simulated["gamma_x"];
    let target = heating_plateau(&cfg.params);
    assert!((0.5..2.0).contains(&(g / target)), "{g} vs {target}");
    assert_eq!(out.summary.analytic["gamma_x_plateau"], target);
    let fit = out.summary.fit.as_ref().unwrap();
    assert_eq!(fit.window, (400e-6, 500e-6));
    assert!(fit.residual_rms.is_finite());
    assert_eq!(out.table.rows.len(), 501);
    assert_eq!(
        out.table.columns,
        ["time", "z_plus_alpha", "z_minus_alpha", "z_avg", "leakage"]
    );
    let z = out.table.column("z_avg").unwrap();
    assert!((z[0] - 1.0).abs() < 1e-12);
}

#[test]
fn identical_configs_give_identical_tables() {
    let mut cfg = idle(3.0);
    cfg.horizon = 50e-6;
    cfg.grid_points = 51;
    cfg.fit_window = (10e-6, 50e-6);
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fit_window_changes_only_fit_fields() {
    let mut cfg = idle(3.0);
    cfg.horizon = 100e-6;
    cfg.grid_points = 101;
    let a = run_scenario(&cfg.clone().with_window(20e-6, 100e-6)).unwrap();
    let b = run_scenario(&cfg.with_window(50e-6, 100e-6)).unwrap();
    assert_eq!(a.table, b.table);
    assert_ne!(a.summary.fit, b.summary.fit);
    assert_eq!(a.summary.analytic, b.summary.analytic);
}

#[test]
fn residual_threshold_reports_fit_failure() {
    let mut cfg = idle(3.0);
    cfg.horizon = 100e-6;
    cfg.grid_points = 101;
    cfg.fit_window = (0.0, 100e-6);
    cfg.residual_tolerance = 1e-15;
    let out = run_scenario(&cfg).unwrap();
    assert!(out.summary.fit_failed());
    assert!(out.summary.fit.is_none());
    assert!(!out.summary.simulated.contains_key("gamma_x"));
    assert_eq!(out.table.rows.len(), 101);
}

#[test]
fn parity_decay_colored_m3_near_baseline() {
    let p = SystemParams::colored(6.0, 3);
    let cfg = ScenarioConfig::new(Scenario::ParityDecay, p.clone(), 20e-6, 201).with_window(2e-6, 20e-6);
    let out = run_scenario(&cfg).unwrap();
    let rate = out.summary.simulated["parity_rate"];
    let base = parity_baseline(&p);
    assert!((0.5..2.0).contains(&(rate / base)), "{rate} vs {base}");
    assert_eq!(out.summary.analytic["parity_baseline"], base);
    assert!(out.summary.analytic.contains_key("kappa_ind"));
}

#[test]
fn parity_decay_colored_m1_dominated_by_induced_rate() {
    let p = SystemParams::colored(6.0, 1);
    let cfg = ScenarioConfig::new(Scenario::ParityDecay, p.clone(), 400e-9, 201).with_window(40e-9, 400e-9);
    let out = run_scenario(&cfg).unwrap();
    let excess = out.summary.simulated["excess_phase_flip_rate"];
    let k_ind = induced_rate_chain(&p, 1).unwrap();
    assert!((0.5..2.0).contains(&(excess / k_ind)), "{excess} vs {k_ind}");
    assert!(out.summary.simulated["parity_rate"] > 10.0 * parity_baseline(&p));
}

#[test]
fn zgate_forces_gauge_coupling_without_intrinsic_loss() {
    let mut p = SystemParams::colored(6.0, 1);
    p.epsilon = common::TWO_PI * 30e6;
    let cfg = ScenarioConfig::new(Scenario::ZgateNonadiabatic, p, 20e-6, 101).with_window(4e-6, 20e-6);
    let out = run_scenario(&cfg).unwrap();
    assert_eq!(out.summary.config.model.coupling, CouplingKind::SignedGauge);
    assert!(!out.summary.config.model.intrinsic_loss);
    assert_eq!(out.summary.analytic["parity_baseline"], 0.0);
    assert!(out.summary.simulated["phase_flip_rate"] > 0.0);
    assert!(out.summary.analytic["drive_rate"] > 0.0);
}

#[test]
fn leakage_accumulation_reports_final_leakage() {
    let cfg = ScenarioConfig::new(Scenario::LeakageAccumulation, SystemParams::bare_kerr(6.0), 100e-6, 21);
    let out = run_scenario(&cfg).unwrap();
    let leak = out.table.column("leakage").unwrap();
    assert_eq!(out.summary.simulated["final_leakage"], *leak.last().unwrap());
    assert!(leak.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(out.summary.fit.is_none() && out.summary.fit_error.is_none());
}

#[test]
fn equilibrated_start_is_accepted() {
    let mut cfg = idle(3.0);
    cfg.horizon = 50e-6;
    cfg.grid_points = 51;
    cfg.fit_window = (10e-6, 50e-6);
    cfg.equilibration_time = 50e-6;
    let cfg = cfg.with_initial_state(InitialState::EquilibratedZero);
    let out = run_scenario(&cfg).unwrap();
    assert!(out.table.column("leakage").unwrap()[0] > 1e-3);
}

#[test]
fn dd_drive_reports_bounds() {
    let mut p = SystemParams::bare_kerr(4.0);
    p.epsilon = common::TWO_PI * 1e6;
    let cfg = ScenarioConfig::new(Scenario::DdDrive, p, 100e-6, 101).with_window(20e-6, 100e-6);
    let out = run_scenario(&cfg).unwrap();
    let b = out.summary.analytic["dd_continuous_bound_1"];
    assert!(b > 0.0 && b <= 1.0);
}

#[test]
fn rate_table_rows_carry_all_columns() {
    let row = rate_table_row(&idle(4.0)).unwrap();
    assert_eq!(row.alpha2, 4.0);
    assert!((row.chi1_numeric / row.chi1_formula - 0.875).abs() < 1e-3);
    assert!(row.gamma_x_sim > 0.0 && row.gamma_x_analytic > 0.0);
    let table = rate_table(&[row.clone(), row]);
    assert_eq!(table.rows.len(), 2);
    assert_eq!(table.columns.len(), table.rows[0].len());
}

#[test]
fn heating_free_rows_flip_less() {
    for a2 in [3.0, 4.0] {
        let mut cold = idle(a2);
        cold.params.n_th = 0.0;
        let mut warm = idle(a2);
        warm.params.n_th = 0.01;
        let c = rate_table_row(&cold).unwrap();
        let w = rate_table_row(&warm).unwrap();
        assert!(
            c.gamma_x_sim < w.gamma_x_sim,
            "a2={a2}: {} vs {}",
            c.gamma_x_sim,
            w.gamma_x_sim
        );
    }
}

#[test]
fn sweep_expansion() {
    let base = ScenarioConfig::new(Scenario::RateTable, SystemParams::colored(6.0, 1), 1e-6, 16);
    let sweep = Sweep {
        alpha2: vec![4.0, 6.0],
        modes: vec![0, 2],
        n_th: vec![0.0, 0.1],
        detuning_factor: Some(3.6),
        ..Default::default()
    };
    let points = sweep.expand(&base).unwrap();
    assert_eq!(points.len(), 8);
    assert_eq!(points[0].params.alpha2, 4.0);
    assert_eq!(points[0].params.modes, 0);
    assert_eq!(points[0].params.g, 0.0);
    let p = &points[3].params;
    assert_eq!((p.alpha2, p.modes, p.n_th), (4.0, 2, 0.1));
    assert!((p.delta + 3.6 * p.kerr * 4.0).abs() < 1e-6 * p.delta.abs());
    assert!((p.g - p.kappa_f / 5.0).abs() < 1e-9 * p.g);

    let big = Sweep {
        alpha2: (0..9).map(|i| 3.0 + i as f64 * 0.5).collect(),
        n_th: (0..8).map(|i| i as f64 * 0.01).collect(),
        ..Default::default()
    };
    assert!(big.len() > MAX_SWEEP_POINTS);
    assert!(matches!(big.expand(&base), Err(Error::InvalidParameter(_))));
}

#[test]
fn dimension_cap_surfaces() {
    let mut cfg = ScenarioConfig::new(Scenario::ParityDecay, SystemParams::colored(6.0, 3), 1e-6, 16);
    cfg.model = ModelOptions {
        joint_dim_cap: 20,
        ..Default::default()
    };
    assert!(matches!(
        run_scenario(&cfg),
        Err(Error::DimensionCap { dim: 40, cap: 20 })
    ));
}

#[test]
fn basis_dump_levels() {
    let t = basis_dump(&SystemParams::bare_kerr(6.0), &ModelOptions::default()).unwrap();
    assert_eq!(t.rows.len(), 5);
    let chi = t.column("chi_prime").unwrap();
    assert!(chi[1] > chi[0]);
    let lam = t.column("lambda_0n").unwrap();
    assert!((lam[1] - 0.9425).abs() < 1e-3);
}

#[test]
fn summary_round_trips_through_json() {
    let mut cfg = idle(3.0);
    cfg.horizon = 50e-6;
    cfg.grid_points = 51;
    cfg.fit_window = (10e-6, 50e-6);
    let out = run_scenario(&cfg).unwrap();
    let json = serde_json::to_string(&out.summary).unwrap();
    assert!(json.contains("\"scenario\":\"idle_bitflip\""));
    assert!(json.contains("\"version\""));
    let back: catsim::experiment::Summary = serde_json::from_str(&json).unwrap();
    assert_eq!(back.config, cfg);
    assert_eq!(back.simulated, out.summary.simulated);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn window_must_lie_in_horizon(h in 1e-6f64..1e-3, a in -0.5f64..1.5, b in -0.5f64..1.5) {
        let cfg = idle(4.0);
        let cfg = ScenarioConfig { horizon: h, fit_window: (a * h, b * h), ..cfg };
        let inside = a >= 0.0 && a < b && b <= 1.0;
        prop_assert_eq!(cfg.validate().is_ok(), inside);
    }

    #[test]
    fn time_grid_spans_horizon(h in 1e-9f64..1e-2, n in 16usize..400) {
        let cfg = ScenarioConfig::new(Scenario::IdleBitflip, SystemParams::bare_kerr(4.0), h, n);
        let g = cfg.time_grid();
        prop_assert_eq!(g.len(), n);
        prop_assert_eq!(g[0], 0.0);
        prop_assert!((g[n - 1] - h).abs() <= 1e-15 * h);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
