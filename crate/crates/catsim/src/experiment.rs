//! Scenario runner: builds a model from a [`ScenarioConfig`], evolves it,
//! fits the relevant decay and pairs the result with the closed-form rates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bases::{
    build_kerr_basis, chi1_numeric, chi1_perturbative, chi_empirical, pauli, KerrBasis, DEFAULT_D_GAUGE,
};
use crate::error::{Error, Result};
use crate::fit::{fit_decay, FitModel, FitResult};
use crate::lindblad::{evolve_with, DensityMatrix, EvolveOptions, Trajectory, RK_ATOL, RK_RTOL};
use crate::model::{build_model, equilibrate_model, CatModel, CouplingKind, ModelBasis, ModelOptions};
use crate::operators::{default_fock_dim, tensor_chain, OperatorMatrix};
use crate::params::SystemParams;
use crate::rates::{
    auxiliary_effects, bitflip_analytics, drive_rate_chain, engineered_rates, heating_plateau, induced_rate_chain,
    nonadiabatic_rate, parity_baseline, simplified_bitflip_rate,
};

pub const MIN_GRID_POINTS: usize = 16;
pub const MAX_SWEEP_POINTS: usize = 64;
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 0.05;
pub const DEFAULT_EQUILIBRATION_TIME: f64 = 300e-6;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    IdleBitflip,
    LeakageAccumulation,
    ParityDecay,
    DdDrive,
    ZgateNonadiabatic,
    RateTable,
    BasisDump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// `(|0_L⟩ + |1_L⟩)/√2`, the even cat.
    PlusCat,
    /// `|0_L⟩ = |α⟩` in the gauge ground level.
    ZeroCat,
    /// `|0_L⟩` after evolving for the equilibration time.
    EquilibratedZero,
}

/// One simulation; rates in rad/s, times in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub params: SystemParams,
    pub model: ModelOptions,
    pub horizon: f64,
    pub grid_points: usize,
    pub fit_window: (f64, f64),
    pub fit_model: FitModel,
    pub initial_state: InitialState,
    pub equilibration_time: f64,
    /// Largest accepted fit residual RMS relative to the RMS of the fitted data.
    pub residual_tolerance: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, params: SystemParams, horizon: f64, grid_points: usize) -> Self {
        Self {
            scenario,
            params,
            model: ModelOptions::default(),
            horizon,
            grid_points,
            fit_window: (0.0, horizon),
            fit_model: FitModel::Exponential,
            initial_state: InitialState::ZeroCat,
            equilibration_time: DEFAULT_EQUILIBRATION_TIME,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
            rtol: RK_RTOL,
            atol: RK_ATOL,
        }
    }

    pub fn with_window(mut self, t0: f64, t1: f64) -> Self {
        self.fit_window = (t0, t1);
        self
    }

    pub fn with_initial_state(mut self, s: InitialState) -> Self {
        self.initial_state = s;
        self
    }

    pub fn with_model(mut self, m: ModelOptions) -> Self {
        self.model = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.scenario == Scenario::BasisDump {
            return Ok(());
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be >= {MIN_GRID_POINTS}, got {}",
                self.grid_points
            )));
        }
        let (t0, t1) = self.fit_window;
        if !(0.0 <= t0 && t0 < t1 && t1 <= self.horizon) {
            return Err(Error::InvalidParameter(format!(
                "fit window ({t0}, {t1}) must lie inside [0, {}]",
                self.horizon
            )));
        }
        if !(self.residual_tolerance > 0.0) {
            return Err(Error::InvalidParameter("residual_tolerance must be > 0".into()));
        }
        if !(self.equilibration_time >= 0.0 && self.equilibration_time.is_finite()) {
            return Err(Error::InvalidParameter("equilibration_time must be >= 0".into()));
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..n).map(|i| self.horizon * i as f64 / (n - 1) as f64).collect()
    }

    fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            rtol: self.rtol,
            atol: self.atol,
            ..EvolveOptions::default()
        }
    }
}

/// Row-major result table of numbers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Everything needed to rerun and judge a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub config: ScenarioConfig,
    pub fit: Option<FitResult>,
    pub fit_error: Option<String>,
    pub simulated: BTreeMap<String, f64>,
    pub analytic: BTreeMap<String, f64>,
}

impl Summary {
    fn new(config: &ScenarioConfig) -> Self {
        Self {
            version: VERSION.to_string(),
            config: config.clone(),
            fit: None,
            fit_error: None,
            simulated: BTreeMap::new(),
            analytic: BTreeMap::new(),
        }
    }

    pub fn fit_failed(&self) -> bool {
        self.fit_error.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOutput {
    pub table: Table,
    pub summary: Summary,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    cfg.validate()?;
    match cfg.scenario {
        Scenario::IdleBitflip | Scenario::DdDrive => run_bitflip(cfg),
        Scenario::LeakageAccumulation => run_leakage(cfg),
        Scenario::ParityDecay => run_parity(cfg, cfg),
        Scenario::ZgateNonadiabatic => {
            let mut forced = cfg.clone();
            forced.model.coupling = CouplingKind::SignedGauge;
            forced.model.intrinsic_loss = false;
            run_parity(&forced, cfg)
        }
        Scenario::RateTable => {
            let row = rate_table_row(cfg)?;
            let mut table = Table::new(RATE_TABLE_COLUMNS.iter().map(|s| s.to_string()).collect());
            table.push(row.values())?;
            let mut summary = Summary::new(cfg);
            summary.simulated.insert("gamma_x".into(), row.gamma_x_sim);
            summary.analytic.insert("gamma_x".into(), row.gamma_x_analytic);
            Ok(ScenarioOutput { table, summary })
        }
        Scenario::BasisDump => {
            let table = basis_dump(&cfg.params, &cfg.model)?;
            Ok(ScenarioOutput {
                table,
                summary: Summary::new(cfg),
            })
        }
    }
}

fn initial_density(model: &CatModel, cfg: &ScenarioConfig) -> Result<DensityMatrix> {
    match cfg.initial_state {
        InitialState::PlusCat => DensityMatrix::pure(&model.plus_cat()?),
        InitialState::ZeroCat => DensityMatrix::pure(&model.logical_state(0, 0)?),
        InitialState::EquilibratedZero => equilibrate_model(model, cfg.equilibration_time),
    }
}

/// Logical `X ⊗ I_gauge ⊗ I_filter`.
fn logical_flip(model: &CatModel) -> OperatorMatrix {
    tensor_chain(&[
        &pauli('X'),
        &OperatorMatrix::identity(model.d_gauge()),
        &OperatorMatrix::identity(model.filter_dim),
    ])
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut columns = vec!["time".to_string()];
    columns.extend(traj.names.iter().cloned());
    let rows = traj
        .times
        .iter()
        .zip(&traj.records)
        .map(|(t, r)| std::iter::once(*t).chain(r.iter().copied()).collect())
        .collect();
    Table { columns, rows }
}

fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Fits the series and applies the residual threshold.
fn checked_fit(cfg: &ScenarioConfig, times: &[f64], values: &[f64]) -> std::result::Result<FitResult, String> {
    let fit = fit_decay(times, values, cfg.fit_model, cfg.fit_window).map_err(|e| e.to_string())?;
    let (t0, t1) = cfg.fit_window;
    let in_window: Vec<f64> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= t0 && **t <= t1)
        .map(|(_, v)| *v)
        .collect();
    let rel = fit.relative_residual(rms(&in_window));
    if rel > cfg.residual_tolerance {
        return Err(format!(
            "relative residual {rel:.3e} above tolerance {:.3e} (rate {:.6e})",
            cfg.residual_tolerance, fit.rate
        ));
    }
    Ok(fit)
}

fn record_fit(summary: &mut Summary, fit: std::result::Result<FitResult, String>) -> Option<f64> {
    match fit {
        Ok(f) => {
            let rate = f.rate;
            summary.fit = Some(f);
            Some(rate)
        }
        Err(e) => {
            summary.fit_error = Some(e);
            None
        }
    }
}

fn analysis_basis(model: &CatModel) -> Result<KerrBasis> {
    match &model.basis {
        ModelBasis::Kerr(b) => Ok(b.clone()),
        ModelBasis::ShiftedFock(_) => {
            let p = &model.params;
            let dim = model.options.fock_dim.unwrap_or_else(|| default_fock_dim(p.alpha2));
            build_kerr_basis(p.kerr, p.alpha2, dim, model.d_gauge())
        }
    }
}

/// Logical `⟨Z⟩` from `|α⟩` and `|−α⟩` (or their equilibrated versions).
pub struct BitflipTrace {
    pub times: Vec<f64>,
    pub z_plus: Vec<f64>,
    pub z_minus: Vec<f64>,
    pub leakage: Vec<f64>,
}

impl BitflipTrace {
    /// `(⟨Z⟩₊ − ⟨Z⟩₋)/2`
    pub fn z_average(&self) -> Vec<f64> {
        self.z_plus
            .iter()
            .zip(&self.z_minus)
            .map(|(a, b)| 0.5 * (a - b))
            .collect()
    }
}

pub fn bitflip_trace(model: &CatModel, cfg: &ScenarioConfig) -> Result<BitflipTrace> {
    if cfg.initial_state == InitialState::PlusCat {
        return Err(Error::InvalidParameter(
            "bit-flip scenarios start from the logical eigenstates, not the plus cat".into(),
        ));
    }
    let rho0 = initial_density(model, cfg)?;
    let x = logical_flip(model);
    let rho1 = DensityMatrix::new(x.dot(rho0.as_operator()).dot(&x).hermitian_part())?;
    let grid = cfg.time_grid();
    let obs = model.observables()?;
    let opts = cfg.evolve_options();
    let t0 = evolve_with(&rho0, &model.hamiltonian, &model.dissipators, &grid, &obs, &opts)?;
    let t1 = evolve_with(&rho1, &model.hamiltonian, &model.dissipators, &grid, &obs, &opts)?;
    let col = |t: &Trajectory, n: &str| t.series(n).expect("logical observable present");
    let leak0 = col(&t0, "leakage");
    let leak1 = col(&t1, "leakage");
    Ok(BitflipTrace {
        times: grid,
        z_plus: col(&t0, "z_l"),
        z_minus: col(&t1, "z_l"),
        leakage: leak0.iter().zip(&leak1).map(|(a, b)| 0.5 * (a + b)).collect(),
    })
}

fn run_bitflip(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let model = build_model(&cfg.params, &cfg.model)?;
    let trace = bitflip_trace(&model, cfg)?;
    let z = trace.z_average();
    let mut table = Table::new(
        ["time", "z_plus_alpha", "z_minus_alpha", "z_avg", "leakage"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    for (i, &t) in trace.times.iter().enumerate() {
        table.push(vec![t, trace.z_plus[i], trace.z_minus[i], z[i], trace.leakage[i]])?;
    }

    let mut summary = Summary::new(cfg);
    let fit = checked_fit(cfg, &trace.times, &z);
    if let Some(rate) = record_fit(&mut summary, fit) {
        summary.simulated.insert("z_decay_rate".into(), rate);
        summary.simulated.insert("gamma_x".into(), rate / 2.0);
    }
    summary
        .simulated
        .insert("final_leakage".into(), *trace.leakage.last().unwrap_or(&0.0));

    let p = &cfg.params;
    let kerr = analysis_basis(&model)?;
    let bf = bitflip_analytics(p, &kerr.chi_prime, &kerr.lambda_0n)?;
    summary.analytic.insert("gamma_x_plateau".into(), heating_plateau(p));
    summary.analytic.insert("gamma_x_sum".into(), bf.gamma_x);
    summary.analytic.insert("gamma_x_simplified".into(), bf.simplified);
    summary
        .analytic
        .insert("gamma_x_critical_level".into(), bf.critical_level_rate);
    summary.analytic.insert("critical_level".into(), bf.n_c as f64);
    summary.analytic.insert("kappa1_eng".into(), p.resolved_kappa1_eng());
    if cfg.scenario == Scenario::DdDrive {
        let chi: Vec<f64> = kerr.chi_prime.iter().skip(1).copied().collect();
        let gamma = p.epsilon;
        for (n, c) in chi.iter().enumerate() {
            let g2 = gamma * gamma + c * c;
            let bound = if g2 == 0.0 { 0.0 } else { c * c / g2 };
            summary.analytic.insert(format!("dd_continuous_bound_{}", n + 1), bound);
        }
        if p.delta != 0.0 {
            let aux = auxiliary_effects(p, &chi, p.kerr)?;
            summary
                .analytic
                .insert("intrinsic_leakage_amplitude".into(), aux.intrinsic_leakage_amplitude);
        }
    }
    Ok(ScenarioOutput { table, summary })
}

fn run_leakage(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let model = build_model(&cfg.params, &cfg.model)?;
    let rho0 = initial_density(&model, cfg)?;
    let traj = evolve_with(
        &rho0,
        &model.hamiltonian,
        &model.dissipators,
        &cfg.time_grid(),
        &model.observables()?,
        &cfg.evolve_options(),
    )?;
    let table = trajectory_table(&traj);
    let leak = traj.series("leakage").expect("leakage observable");
    let (t0, t1) = cfg.fit_window;
    let window: Vec<f64> = traj
        .times
        .iter()
        .zip(&leak)
        .filter(|(t, _)| **t >= t0 && **t <= t1)
        .map(|(_, v)| *v)
        .collect();
    let mut summary = Summary::new(cfg);
    summary
        .simulated
        .insert("final_leakage".into(), *leak.last().unwrap_or(&0.0));
    summary
        .simulated
        .insert("max_leakage".into(), leak.iter().copied().fold(0.0, f64::max));
    if !window.is_empty() {
        summary.simulated.insert(
            "window_mean_leakage".into(),
            window.iter().sum::<f64>() / window.len() as f64,
        );
    }
    summary
        .simulated
        .insert("max_trace_error".into(), traj.max_trace_error());
    let p = &cfg.params;
    summary.analytic.insert("kappa1_eng".into(), p.resolved_kappa1_eng());
    summary.analytic.insert("heating_rate".into(), p.kappa1 * p.n_th);
    Ok(ScenarioOutput { table, summary })
}

/// Parity decay of the even cat; `echo` is the configuration written to the summary.
fn run_parity(cfg: &ScenarioConfig, echo: &ScenarioConfig) -> Result<ScenarioOutput> {
    let model = build_model(&cfg.params, &cfg.model)?;
    let rho0 = DensityMatrix::pure(&model.plus_cat()?)?;
    let traj = evolve_with(
        &rho0,
        &model.hamiltonian,
        &model.dissipators,
        &cfg.time_grid(),
        &model.observables()?,
        &cfg.evolve_options(),
    )?;
    let table = trajectory_table(&traj);
    let parity = traj.series("parity").expect("parity observable");

    let mut summary = Summary::new(echo);
    summary.config.model = cfg.model.clone();
    let p = &cfg.params;
    let baseline = if cfg.model.intrinsic_loss {
        parity_baseline(p)
    } else {
        0.0
    };
    summary.analytic.insert("parity_baseline".into(), baseline);
    if let Some(rate) = record_fit(&mut summary, checked_fit(cfg, &traj.times, &parity)) {
        summary.simulated.insert("parity_rate".into(), rate);
        summary.simulated.insert("phase_flip_rate".into(), rate / 2.0);
        summary.simulated.insert("excess_rate".into(), rate - baseline);
        summary
            .simulated
            .insert("excess_phase_flip_rate".into(), (rate - baseline) / 2.0);
    }
    summary.simulated.insert(
        "final_leakage".into(),
        *traj.series("leakage").expect("leakage").last().unwrap_or(&0.0),
    );
    if p.modes > 0 {
        summary
            .analytic
            .insert("kappa_ind".into(), induced_rate_chain(p, p.modes)?);
        let e = engineered_rates(p)?;
        summary.analytic.insert("kappa1_eng".into(), e.kappa1_eng);
        summary.analytic.insert("kappa_ind_m1".into(), e.kappa_ind_m1);
        summary.analytic.insert("kappa_ind_m2".into(), e.kappa_ind_m2);
        summary
            .analytic
            .insert("kappa_ind_asymptotic".into(), e.kappa_ind_asymptotic);
        if p.epsilon > 0.0 {
            summary
                .analytic
                .insert("drive_rate".into(), drive_rate_chain(p, p.modes)?);
            summary
                .analytic
                .insert("nonadiabatic_rate".into(), nonadiabatic_rate(p)?);
        }
    }
    Ok(ScenarioOutput { table, summary })
}

pub const RATE_TABLE_COLUMNS: [&str; 11] = [
    "alpha2",
    "modes",
    "kappa1_eng",
    "n_th",
    "gamma_x_sim",
    "gamma_x_analytic",
    "gamma_x_simplified",
    "chi1_numeric",
    "chi1_formula",
    "kappa1_eng_resolved",
    "kappa_ind",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub alpha2: f64,
    pub modes: usize,
    pub kappa1_eng: f64,
    pub n_th: f64,
    pub gamma_x_sim: f64,
    pub gamma_x_analytic: f64,
    pub gamma_x_simplified: f64,
    pub chi1_numeric: f64,
    pub chi1_formula: f64,
    pub kappa1_eng_resolved: f64,
    pub kappa_ind: f64,
}

impl RateRow {
    pub fn values(&self) -> Vec<f64> {
        vec![
            self.alpha2,
            self.modes as f64,
            self.kappa1_eng,
            self.n_th,
            self.gamma_x_sim,
            self.gamma_x_analytic,
            self.gamma_x_simplified,
            self.chi1_numeric,
            self.chi1_formula,
            self.kappa1_eng_resolved,
            self.kappa_ind,
        ]
    }
}

/// Simulated and analytic bit-flip rates for one parameter point.
pub fn rate_table_row(cfg: &ScenarioConfig) -> Result<RateRow> {
    let mut idle = cfg.clone();
    idle.scenario = Scenario::IdleBitflip;
    idle.validate()?;
    let model = build_model(&idle.params, &idle.model)?;
    let trace = bitflip_trace(&model, &idle)?;
    let fit = checked_fit(&idle, &trace.times, &trace.z_average()).map_err(Error::FitFailure)?;
    let p = &idle.params;
    let kerr = analysis_basis(&model)?;
    let bf = bitflip_analytics(p, &kerr.chi_prime, &kerr.lambda_0n)?;
    Ok(RateRow {
        alpha2: p.alpha2,
        modes: p.modes,
        kappa1_eng: p.kappa1_eng.unwrap_or(0.0),
        n_th: p.n_th,
        gamma_x_sim: fit.rate / 2.0,
        gamma_x_analytic: bf.gamma_x,
        gamma_x_simplified: simplified_bitflip_rate(p),
        chi1_numeric: chi1_numeric(p.kerr, p.alpha2)?,
        chi1_formula: chi1_perturbative(p.kerr, p.alpha2),
        kappa1_eng_resolved: p.resolved_kappa1_eng(),
        kappa_ind: if p.modes > 0 {
            induced_rate_chain(p, p.modes)?
        } else {
            0.0
        },
    })
}

pub fn rate_table(rows: &[RateRow]) -> Table {
    Table {
        columns: RATE_TABLE_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows: rows.iter().map(RateRow::values).collect(),
    }
}

/// Cartesian sweep over `α²`, filter length, ideal `κ₁,eng` and `n_th`.
/// Empty axes keep the base value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sweep {
    pub alpha2: Vec<f64>,
    pub modes: Vec<usize>,
    pub kappa1_eng: Vec<f64>,
    pub n_th: Vec<f64>,
    /// Detuning factor used to rebuild the band-pass preset at each `α²`;
    /// filter parameters are kept as given when absent.
    pub detuning_factor: Option<f64>,
}

impl Sweep {
    pub fn len(&self) -> usize {
        [
            self.alpha2.len(),
            self.modes.len(),
            self.kappa1_eng.len(),
            self.n_th.len(),
        ]
        .iter()
        .map(|&n| n.max(1))
        .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Expands into per-point configurations in row-major axis order.
    pub fn expand(&self, base: &ScenarioConfig) -> Result<Vec<ScenarioConfig>> {
        if self.len() > MAX_SWEEP_POINTS {
            return Err(Error::InvalidParameter(format!(
                "sweep has {} points, at most {MAX_SWEEP_POINTS} allowed",
                self.len()
            )));
        }
        let axis = |v: &[f64], b: f64| if v.is_empty() { vec![b] } else { v.to_vec() };
        let alphas = axis(&self.alpha2, base.params.alpha2);
        let modes = if self.modes.is_empty() {
            vec![base.params.modes]
        } else {
            self.modes.clone()
        };
        let engs: Vec<Option<f64>> = if self.kappa1_eng.is_empty() {
            vec![base.params.kappa1_eng]
        } else {
            self.kappa1_eng.iter().map(|&k| Some(k)).collect()
        };
        let nths = axis(&self.n_th, base.params.n_th);
        let mut out = Vec::with_capacity(self.len());
        for &a in &alphas {
            for &m in &modes {
                for &k in &engs {
                    for &n in &nths {
                        let mut cfg = base.clone();
                        let p = &mut cfg.params;
                        if let Some(f) = self.detuning_factor {
                            p.delta = -f * p.kerr * a;
                            p.kappa_f = p.delta.abs() / 5.0;
                            p.hopping = p.kappa_f / 2.0;
                            p.g = if m > 0 { p.kappa_f / 5.0 } else { 0.0 };
                        }
                        p.alpha2 = a;
                        p.modes = m;
                        p.kappa1_eng = k;
                        p.n_th = n;
                        cfg.validate()?;
                        out.push(cfg);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Per-level Kerr-basis data: energies, `χ′_n`, `λ_{0,n}` and the empirical tunneling law.
pub fn basis_dump(params: &SystemParams, options: &ModelOptions) -> Result<Table> {
    params.validate()?;
    let d = if options.d_gauge == 0 {
        DEFAULT_D_GAUGE
    } else {
        options.d_gauge
    };
    let dim = options.fock_dim.unwrap_or_else(|| default_fock_dim(params.alpha2));
    let b = build_kerr_basis(params.kerr, params.alpha2, dim, d)?;
    let mut table = Table::new(
        [
            "level",
            "energy_even",
            "energy_odd",
            "chi_prime",
            "lambda_0n",
            "chi_empirical",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    );
    for n in 0..d {
        table.push(vec![
            n as f64,
            b.energies_even[n],
            b.energies_odd[n],
            b.chi_prime[n],
            b.lambda_0n[n],
            chi_empirical(params.kerr, params.alpha2, n),
        ])?;
    }
    Ok(table)
}
