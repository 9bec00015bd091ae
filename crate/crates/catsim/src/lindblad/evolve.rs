use std::collections::HashMap;

use ndarray::{Array1, Array2};

use super::density::{DensityMatrix, POSITIVITY_SLACK};
use super::liouvillian::{HermitianCoords, RealLiouvillian};
use super::Dissipator;
use crate::error::{Error, Result};
use crate::linalg::expm;
use crate::operators::{OperatorMatrix, C64};

/// Largest superoperator dimension propagated by exact exponentiation.
pub const EXPONENTIAL_MAX_SUPERDIM: usize = 4096;
pub const RK_RTOL: f64 = 1e-8;
pub const RK_ATOL: f64 = 1e-10;
/// Maximum tolerated `|tr ρ − 1|` along a trajectory.
pub const TRAJECTORY_TRACE_TOL: f64 = 1e-6;
/// Number of evenly spaced grid points checked for positivity.
pub const POSITIVITY_CHECKPOINTS: usize = 64;
const RK_MAX_STEPS: usize = 50_000_000;

/// A named expectation value `Re tr(O ρ)` recorded along a trajectory.
#[derive(Clone, Debug)]
pub struct Observable {
    pub name: String,
    pub op: OperatorMatrix,
}

impl Observable {
    pub fn new(name: impl Into<String>, op: OperatorMatrix) -> Self {
        Self { name: name.into(), op }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    /// Exponential when the superoperator is small enough, otherwise Runge-Kutta.
    Auto,
    Exponential,
    RungeKutta,
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub integrator: Integrator,
    pub rtol: f64,
    pub atol: f64,
    pub store_states: bool,
    pub check_positivity: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            integrator: Integrator::Auto,
            rtol: RK_RTOL,
            atol: RK_ATOL,
            store_states: false,
            check_positivity: true,
        }
    }
}

/// Recorded observables on a time grid. The `"trace"` column is always present.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    pub records: Vec<Vec<f64>>,
    pub states: Option<Vec<OperatorMatrix>>,
    pub final_state: DensityMatrix,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Time series of one observable.
    pub fn series(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        Some(self.records.iter().map(|r| r[c]).collect())
    }

    /// Observables at grid index `i` keyed by name.
    pub fn record(&self, i: usize) -> HashMap<String, f64> {
        self.names
            .iter()
            .cloned()
            .zip(self.records[i].iter().copied())
            .collect()
    }

    pub fn max_trace_error(&self) -> f64 {
        self.series("trace")
            .map(|s| s.iter().fold(0.0f64, |m, t| m.max((t - 1.0).abs())))
            .unwrap_or(0.0)
    }
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    if t_grid[0].abs() > 1e-15 * t_grid.last().unwrap().abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "time grid must start at 0, got {}",
            t_grid[0]
        )));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
    }
    Ok(())
}

fn check_dims(rho0: &DensityMatrix, h: &OperatorMatrix, dissipators: &[Dissipator], obs: &[Observable]) -> Result<()> {
    let n = rho0.dim();
    let dims = std::iter::once(h.dim())
        .chain(dissipators.iter().map(Dissipator::dim))
        .chain(obs.iter().map(|o| o.op.dim()));
    for d in dims {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, found: d });
        }
    }
    Ok(())
}

fn checkpoints(len: usize) -> Vec<bool> {
    let mut marks = vec![false; len];
    let stride = (len / POSITIVITY_CHECKPOINTS).max(1);
    for i in (0..len).step_by(stride) {
        marks[i] = true;
    }
    marks[len - 1] = true;
    marks
}

struct Recorder {
    names: Vec<String>,
    records: Vec<Vec<f64>>,
    states: Option<Vec<OperatorMatrix>>,
    marks: Vec<bool>,
    check_positivity: bool,
}

impl Recorder {
    fn new(obs: &[Observable], len: usize, opts: &EvolveOptions) -> Self {
        let mut names = vec!["trace".to_string()];
        names.extend(obs.iter().map(|o| o.name.clone()));
        Self {
            names,
            records: Vec::with_capacity(len),
            states: opts.store_states.then(|| Vec::with_capacity(len)),
            marks: checkpoints(len),
            check_positivity: opts.check_positivity,
        }
    }

    fn push(
        &mut self,
        idx: usize,
        t: f64,
        trace: f64,
        values: Vec<f64>,
        state: impl FnOnce() -> OperatorMatrix,
    ) -> Result<Option<OperatorMatrix>> {
        if !((trace - 1.0).abs() <= TRAJECTORY_TRACE_TOL) {
            return Err(Error::IntegrationAccuracy(format!(
                "trace {trace} drifted beyond {TRAJECTORY_TRACE_TOL:e} at t = {t:e}; reduce the step size or tolerances"
            )));
        }
        let mut row = Vec::with_capacity(values.len() + 1);
        row.push(trace);
        row.extend(values);
        self.records.push(row);
        let need_state =
            self.states.is_some() || (self.check_positivity && self.marks[idx]) || idx + 1 == self.marks.len();
        if !need_state {
            return Ok(None);
        }
        let rho = state();
        if self.check_positivity && self.marks[idx] {
            let lowest = DensityMatrix::unchecked(rho.hermitian_part()).min_eigenvalue()?;
            if lowest < POSITIVITY_SLACK {
                return Err(Error::IntegrationAccuracy(format!(
                    "negative eigenvalue {lowest:e} at t = {t:e}; reduce the step size or tolerances"
                )));
            }
        }
        if let Some(s) = self.states.as_mut() {
            s.push(rho.clone());
        }
        Ok(Some(rho))
    }

    fn finish(self, times: &[f64], last: OperatorMatrix) -> Trajectory {
        Trajectory {
            times: times.to_vec(),
            names: self.names,
            records: self.records,
            states: self.states,
            final_state: DensityMatrix::unchecked(last.hermitian_part()),
        }
    }
}

/// Evolves `rho0` under a time-independent Lindblad generator with default options.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &OperatorMatrix,
    dissipators: &[Dissipator],
    t_grid: &[f64],
    observables: &[Observable],
) -> Result<Trajectory> {
    evolve_with(rho0, h, dissipators, t_grid, observables, &EvolveOptions::default())
}

pub fn evolve_with(
    rho0: &DensityMatrix,
    h: &OperatorMatrix,
    dissipators: &[Dissipator],
    t_grid: &[f64],
    observables: &[Observable],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    validate_grid(t_grid)?;
    check_dims(rho0, h, dissipators, observables)?;
    let superdim = rho0.dim() * rho0.dim();
    let exponential = match opts.integrator {
        Integrator::Auto => superdim <= EXPONENTIAL_MAX_SUPERDIM,
        Integrator::Exponential => true,
        Integrator::RungeKutta => false,
    };
    if exponential {
        evolve_exponential(rho0, h, dissipators, t_grid, observables, opts)
    } else {
        let heff = effective_hamiltonian(h, dissipators);
        integrate_rk(rho0, &|_| heff.clone(), dissipators, t_grid, observables, opts)
    }
}

/// Evolves under `H(t)` with the adaptive Runge-Kutta integrator.
pub fn evolve_time_dependent(
    rho0: &DensityMatrix,
    h: &dyn Fn(f64) -> OperatorMatrix,
    dissipators: &[Dissipator],
    t_grid: &[f64],
    observables: &[Observable],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    validate_grid(t_grid)?;
    check_dims(rho0, &h(0.0), dissipators, observables)?;
    let decay = decay_operator(rho0.dim(), dissipators);
    let heff = |t: f64| -> Array2<C64> { h(t).entries() + &decay };
    integrate_rk(rho0, &heff, dissipators, t_grid, observables, opts)
}

fn evolve_exponential(
    rho0: &DensityMatrix,
    h: &OperatorMatrix,
    dissipators: &[Dissipator],
    t_grid: &[f64],
    observables: &[Observable],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let n = rho0.dim();
    let gen = RealLiouvillian::new(h, dissipators)?;
    let coords = HermitianCoords::new(n);
    let trace_fn = coords.trace_functional();
    let obs_coords: Vec<Array1<f64>> = observables.iter().map(|o| coords.to_coords(&o.op)).collect();
    let mut cache: Vec<(f64, Array2<f64>)> = Vec::new();
    let mut x = coords.to_coords(rho0.as_operator());
    let mut rec = Recorder::new(observables, t_grid.len(), opts);
    let mut last = None;
    for (idx, &t) in t_grid.iter().enumerate() {
        if idx > 0 {
            let dt = t - t_grid[idx - 1];
            let tol = 1e-12 * dt.abs();
            let pos = cache.iter().position(|(s, _)| (s - dt).abs() <= tol);
            let prop = match pos {
                Some(p) => &cache[p].1,
                None => {
                    let scaled = gen.matrix() * dt;
                    cache.push((dt, expm(&scaled)?));
                    &cache.last().unwrap().1
                }
            };
            x = prop.dot(&x);
        }
        let values = obs_coords.iter().map(|o| o.dot(&x)).collect();
        let xs = &x;
        if let Some(rho) = rec.push(idx, t, trace_fn.dot(&x), values, || coords.from_coords(xs))? {
            last = Some(rho);
        }
    }
    let last = last.expect("final state recorded");
    Ok(rec.finish(t_grid, last))
}

fn decay_operator(n: usize, dissipators: &[Dissipator]) -> Array2<C64> {
    let mut acc = Array2::<C64>::zeros((n, n));
    for d in dissipators {
        let l = d.jump.entries();
        let ldl = l.t().mapv(|x| x.conj()).dot(l);
        acc.scaled_add(C64::new(0.0, -0.5 * d.rate), &ldl);
    }
    acc
}

/// `H − (i/2) Σ γ L†L`
fn effective_hamiltonian(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Array2<C64> {
    h.entries() + &decay_operator(h.dim(), dissipators)
}

struct Jumps {
    ops: Vec<(Array2<C64>, Array2<C64>, f64)>,
}

impl Jumps {
    fn new(dissipators: &[Dissipator]) -> Self {
        Self {
            ops: dissipators
                .iter()
                .filter(|d| d.rate > 0.0)
                .map(|d| {
                    (
                        d.jump.entries().clone(),
                        d.jump.entries().t().mapv(|x| x.conj()),
                        d.rate,
                    )
                })
                .collect(),
        }
    }

    /// `−i(H_eff ρ − ρ H_eff†) + Σ γ L ρ L†`
    fn rhs(&self, heff: &Array2<C64>, rho: &Array2<C64>) -> Array2<C64> {
        let minus_i = C64::new(0.0, -1.0);
        let hr = heff.dot(rho);
        let rh = rho.dot(&heff.t().mapv(|x| x.conj()));
        let mut out = (&hr - &rh).mapv(|x| x * minus_i);
        for (l, ld, rate) in &self.ops {
            let s = l.dot(rho).dot(ld);
            out.scaled_add(C64::new(*rate, 0.0), &s);
        }
        out
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn integrate_rk(
    rho0: &DensityMatrix,
    heff: &dyn Fn(f64) -> Array2<C64>,
    dissipators: &[Dissipator],
    t_grid: &[f64],
    observables: &[Observable],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let jumps = Jumps::new(dissipators);
    let f = |t: f64, y: &Array2<C64>| jumps.rhs(&heff(t), y);
    let mut rec = Recorder::new(observables, t_grid.len(), opts);
    let mut y = rho0.as_operator().entries().clone();
    let mut t = 0.0;
    let mut k1 = f(t, &y);
    let scale = k1.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut h = (0.01 / scale).min(t_grid.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE));
    let mut steps = 0usize;
    let mut last = None;
    for (idx, &target) in t_grid.iter().enumerate() {
        while t < target {
            if steps > RK_MAX_STEPS {
                return Err(Error::IntegrationAccuracy("step budget exhausted".into()));
            }
            steps += 1;
            let remaining = target - t;
            let hstep = h.min(remaining);
            let mut ks: Vec<Array2<C64>> = Vec::with_capacity(7);
            ks.push(k1.clone());
            for s in 1..7 {
                let mut ys = y.clone();
                for (j, kj) in ks.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        ys.scaled_add(C64::new(hstep * A[s][j], 0.0), kj);
                    }
                }
                ks.push(f(t + C[s] * hstep, &ys));
            }
            let mut y5 = y.clone();
            let mut err = Array2::<C64>::zeros(y.raw_dim());
            for s in 0..7 {
                if B5[s] != 0.0 {
                    y5.scaled_add(C64::new(hstep * B5[s], 0.0), &ks[s]);
                }
                let e = B5[s] - B4[s];
                if e != 0.0 {
                    err.scaled_add(C64::new(hstep * e, 0.0), &ks[s]);
                }
            }
            let mut enorm = 0.0f64;
            for ((e, a), b) in err.iter().zip(y.iter()).zip(y5.iter()) {
                let sc = opts.atol + opts.rtol * a.norm().max(b.norm());
                enorm = enorm.max(e.norm() / sc);
            }
            if !enorm.is_finite() {
                return Err(Error::IntegrationAccuracy(format!("non-finite state at t = {t:e}")));
            }
            if enorm <= 1.0 {
                t = if hstep == remaining { target } else { t + hstep };
                y = y5;
                k1 = ks.pop().unwrap();
            }
            let factor = if enorm == 0.0 {
                5.0
            } else {
                (0.9 * enorm.powf(-0.2)).clamp(0.2, 5.0)
            };
            let proposal = hstep * factor;
            h = if enorm <= 1.0 && hstep < h {
                h.max(proposal)
            } else {
                proposal
            };
            if h < 1e-14 * target.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::IntegrationAccuracy(format!("step size underflow at t = {t:e}")));
            }
        }
        let n = y.nrows();
        let trace: f64 = (0..n).map(|i| y[[i, i]].re).sum();
        let values = observables
            .iter()
            .map(|o| {
                let a = o.op.entries();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += (a[[i, j]] * y[[j, i]]).re;
                    }
                }
                acc
            })
            .collect();
        let ycur = &y;
        if let Some(rho) = rec.push(idx, target, trace, values, || {
            OperatorMatrix::from_array(ycur.clone()).expect("square")
        })? {
            last = Some(rho);
        }
    }
    let last = last.expect("final state recorded");
    Ok(rec.finish(t_grid, last))
}
