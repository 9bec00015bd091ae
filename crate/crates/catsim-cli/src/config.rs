//! TOML run files. Frequencies are given in Hz and times in seconds; they are
//! converted to angular frequency once, here.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use catsim::experiment::{
    InitialState, Scenario, ScenarioConfig, Sweep, DEFAULT_EQUILIBRATION_TIME, DEFAULT_RESIDUAL_TOLERANCE,
};
use catsim::filter::NUMERIC_DETUNING_FACTOR;
use catsim::fit::FitModel;
use catsim::lindblad::{RK_ATOL, RK_RTOL};
use catsim::model::ModelOptions;
use catsim::params::SystemParams;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    #[default]
    BareKerr,
    #[serde(rename = "paper_colored_preset")]
    PaperColored,
    Custom,
}

/// `[params]`: a preset plus optional overrides, frequencies in Hz.
/// `custom` starts from zero loss and requires `kerr`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default)]
    pub preset: Preset,
    pub alpha2: f64,
    #[serde(default)]
    pub modes: usize,
    pub detuning_factor: Option<f64>,
    pub kerr: Option<f64>,
    pub kappa1: Option<f64>,
    pub n_th: Option<f64>,
    pub kappa_phi01: Option<f64>,
    pub g: Option<f64>,
    pub hopping: Option<f64>,
    pub kappa_f: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub kappa1_eng: Option<f64>,
}

/// `[sweep]`, frequencies in Hz.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepFile {
    pub alpha2: Vec<f64>,
    pub modes: Vec<usize>,
    pub kappa1_eng: Vec<f64>,
    pub n_th: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub scenario: Scenario,
    #[serde(default)]
    pub horizon: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    pub fit_window: Option<(f64, f64)>,
    #[serde(default = "default_fit_model")]
    pub fit_model: FitModel,
    #[serde(default = "default_initial_state")]
    pub initial_state: InitialState,
    #[serde(default = "default_equilibration_time")]
    pub equilibration_time: f64,
    #[serde(default = "default_residual_tolerance")]
    pub residual_tolerance: f64,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    /// Stem of the output files; the scenario name when absent.
    pub output: Option<String>,
    pub params: ParamsFile,
    #[serde(default)]
    pub model: ModelOptions,
    pub sweep: Option<SweepFile>,
}

fn default_grid_points() -> usize {
    201
}
fn default_fit_model() -> FitModel {
    FitModel::Exponential
}
fn default_initial_state() -> InitialState {
    InitialState::ZeroCat
}
fn default_equilibration_time() -> f64 {
    DEFAULT_EQUILIBRATION_TIME
}
fn default_residual_tolerance() -> f64 {
    DEFAULT_RESIDUAL_TOLERANCE
}
fn default_rtol() -> f64 {
    RK_RTOL
}
fn default_atol() -> f64 {
    RK_ATOL
}

/// A parsed run file in internal units.
#[derive(Clone, Debug)]
pub struct Run {
    pub base: ScenarioConfig,
    pub sweep: Option<Sweep>,
    pub output: String,
}

impl ParamsFile {
    pub fn resolve(&self) -> Result<SystemParams, ConfigError> {
        if self.preset == Preset::Custom && self.kerr.is_none() {
            return Err(ConfigError("preset \"custom\" requires params.kerr".into()));
        }
        let hz = |v: Option<f64>| v.map(|x| x * TWO_PI);
        let mut p = match self.preset {
            Preset::BareKerr => SystemParams::bare_kerr(self.alpha2),
            Preset::PaperColored => SystemParams::colored_with_detuning(
                self.alpha2,
                self.modes,
                self.detuning_factor.unwrap_or(NUMERIC_DETUNING_FACTOR),
            ),
            Preset::Custom => {
                let mut p = SystemParams::bare_kerr(self.alpha2);
                p.kappa1 = 0.0;
                p.n_th = 0.0;
                p
            }
        };
        p.modes = self.modes;
        if let Some(k) = hz(self.kerr) {
            p.kerr = k;
            if self.preset == Preset::PaperColored {
                let f = self.detuning_factor.unwrap_or(NUMERIC_DETUNING_FACTOR);
                p.delta = -f * k * self.alpha2;
                p.kappa_f = p.delta.abs() / 5.0;
                p.hopping = p.kappa_f / 2.0;
                p.g = p.kappa_f / 5.0;
            }
        }
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(x) = v {
                *dst = x;
            }
        };
        set(&mut p.kappa1, hz(self.kappa1));
        set(&mut p.n_th, self.n_th);
        set(&mut p.kappa_phi01, hz(self.kappa_phi01));
        set(&mut p.g, hz(self.g));
        set(&mut p.hopping, hz(self.hopping));
        set(&mut p.kappa_f, hz(self.kappa_f));
        set(&mut p.delta, hz(self.delta));
        set(&mut p.epsilon, hz(self.epsilon));
        if let Some(k) = hz(self.kappa1_eng) {
            p.kappa1_eng = Some(k);
        }
        Ok(p)
    }
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn resolve(&self, tolerance_scale: f64) -> Result<Run, ConfigError> {
        if !(tolerance_scale > 0.0 && tolerance_scale.is_finite()) {
            return Err(ConfigError(format!(
                "tolerance scale must be > 0, got {tolerance_scale}"
            )));
        }
        let params = self.params.resolve()?;
        let mut base = ScenarioConfig::new(self.scenario, params, self.horizon, self.grid_points);
        base.fit_window = self.fit_window.unwrap_or((0.0, self.horizon));
        base.fit_model = self.fit_model;
        base.initial_state = self.initial_state;
        base.equilibration_time = self.equilibration_time;
        base.residual_tolerance = self.residual_tolerance * tolerance_scale;
        base.rtol = self.rtol;
        base.atol = self.atol;
        base.model = self.model.clone();
        base.validate().map_err(|e| ConfigError(e.to_string()))?;
        let sweep = self.sweep.as_ref().map(|s| Sweep {
            alpha2: s.alpha2.clone(),
            modes: s.modes.clone(),
            kappa1_eng: s.kappa1_eng.iter().map(|k| k * TWO_PI).collect(),
            n_th: s.n_th.clone(),
            detuning_factor: (self.params.preset == Preset::PaperColored)
                .then(|| self.params.detuning_factor.unwrap_or(NUMERIC_DETUNING_FACTOR)),
        });
        let output = self
            .output
            .clone()
            .unwrap_or_else(|| scenario_name(self.scenario).to_string());
        Ok(Run { base, sweep, output })
    }
}

pub fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::IdleBitflip => "idle_bitflip",
        Scenario::LeakageAccumulation => "leakage_accumulation",
        Scenario::ParityDecay => "parity_decay",
        Scenario::DdDrive => "dd_drive",
        Scenario::ZgateNonadiabatic => "zgate_nonadiabatic",
        Scenario::RateTable => "rate_table",
        Scenario::BasisDump => "basis_dump",
    }
}
