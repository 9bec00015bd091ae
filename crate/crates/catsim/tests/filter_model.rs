mod common;

use catsim::bases::{build_kerr_basis, CatBasis};
use catsim::filter::{chain_response, couple_system, single_excitation_ops, FilterChain};
use catsim::fit::{fit_decay, FitModel};
use catsim::lindblad::{
    evolve, evolve_time_dependent, evolve_with, DensityMatrix, Dissipator, EvolveOptions, Integrator, Observable,
};
use catsim::model::{build_model, ModelOptions};
use catsim::operators::{
    annihilation_op, hermitian_eigensystem, partial_trace_right, tensor_product, OperatorMatrix, StateVector, C64,
};
use catsim::params::SystemParams;
use catsim::Error;
use common::{rel_err, TWO_PI};

fn linspace(t_end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn single_excitation_dimensions() {
    let chain = FilterChain::new(3, 1.0, 2.0, -10.0).unwrap();
    assert_eq!(chain.dim(), 4);
    let ops = single_excitation_ops(&chain);
    assert_eq!(ops.hamiltonian.dim(), 4);
    assert_eq!(ops.lowering.len(), 3);
    let fm = &ops.terminal;
    let mut proj = vec![0.0; 4];
    proj[3] = 1.0;
    assert!(fm.adjoint().dot(fm).max_diff(&OperatorMatrix::from_diag(&proj)) < 1e-15);

    let empty = single_excitation_ops(&FilterChain::new(0, 0.0, 0.0, 0.0).unwrap());
    assert_eq!(empty.hamiltonian.dim(), 1);
    assert!(empty.lowering.is_empty());
    assert!(FilterChain::new(5, 1.0, 2.0, -10.0).is_err());
    assert!(FilterChain::new(2, -1.0, 2.0, -10.0).is_err());
}

#[test]
fn open_chain_band() {
    let j = 0.7;
    for m in 1..=4usize {
        let ops = single_excitation_ops(&FilterChain::new(m, j, 0.0, 0.0).unwrap());
        let eig = hermitian_eigensystem(&ops.hamiltonian).unwrap();
        let mut expected: Vec<f64> = (1..=m)
            .map(|k| 2.0 * j * (k as f64 * std::f64::consts::PI / (m + 1) as f64).cos())
            .collect();
        expected.push(0.0);
        expected.sort_by(f64::total_cmp);
        for (a, b) in eig.values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
            assert!(a.abs() <= 2.0 * j);
        }
    }
}

#[test]
fn coupling_exchanges_one_quantum_with_mode_one() {
    let chain = FilterChain::new(3, 1.0, 2.0, -5.0).unwrap();
    let a = annihilation_op(4).unwrap();
    let cs = couple_system(&a, &chain, 0.3).unwrap();
    let bare = tensor_product(&OperatorMatrix::identity(4), &single_excitation_ops(&chain).hamiltonian);
    let coupling = &cs.hamiltonian - &bare;
    let nf = chain.dim();
    for r in 0..cs.dim() {
        for c in 0..cs.dim() {
            if coupling.get(r, c).norm() > 0.0 {
                let (fr, fc) = (r % nf, c % nf);
                assert!((fr, fc) == (1, 0) || (fr, fc) == (0, 1), "entry ({r},{c})");
            }
        }
    }
    assert_eq!(cs.dissipators.len(), 1);
    assert!((cs.dissipators[0].rate - 2.0).abs() < 1e-15);
}

#[test]
fn joint_dimension_is_capped() {
    let chain = FilterChain::new(4, 1.0, 2.0, -5.0).unwrap();
    let a = annihilation_op(40).unwrap();
    assert!(matches!(
        couple_system(&a, &chain, 0.1),
        Err(Error::DimensionCap { dim: 200, cap: 128 })
    ));
    assert!(couple_system(&a, &FilterChain::new(1, 1.0, 2.0, -5.0).unwrap(), -0.1).is_err());
}

#[test]
fn zero_coupling_leaves_system_unchanged() {
    let kb = build_kerr_basis(1.0, 4.0, 60, 3).unwrap();
    let h = kb.hamiltonian().unwrap();
    let a = kb.lowering().unwrap();
    let sys_d = vec![
        Dissipator::new(a.clone(), 0.02).unwrap(),
        Dissipator::new(a.adjoint(), 0.002).unwrap(),
    ];
    let chain = FilterChain::new(2, 0.5, 1.0, -3.0).unwrap();
    let cs = couple_system(&a, &chain, 0.0).unwrap();
    let mut joint_d = cs.dissipators.clone();
    for d in &sys_d {
        joint_d.push(Dissipator::new(cs.lift(&d.jump), d.rate).unwrap());
    }
    let joint_h = &cs.lift(&h) + &cs.hamiltonian;
    let psi = StateVector::basis(6, 1).unwrap();
    let grid = linspace(5.0, 11);
    let opts = EvolveOptions {
        store_states: true,
        ..Default::default()
    };
    let sys = evolve_with(&DensityMatrix::pure(&psi).unwrap(), &h, &sys_d, &grid, &[], &opts).unwrap();
    let joint_psi = psi.tensor(&StateVector::basis(3, 0).unwrap());
    let joint = evolve_with(
        &DensityMatrix::pure(&joint_psi).unwrap(),
        &joint_h,
        &joint_d,
        &grid,
        &[],
        &opts,
    )
    .unwrap();
    for (s, j) in sys.states.unwrap().iter().zip(joint.states.unwrap()) {
        assert!(partial_trace_right(&j, 6, 3).unwrap().max_diff(s) < 1e-10);
    }
}

#[test]
fn filter_is_a_zero_temperature_sink() {
    let chain = FilterChain::new(2, 1.0, 2.0, -4.0).unwrap();
    let cs = couple_system(&annihilation_op(2).unwrap(), &chain, 0.0).unwrap();
    for d in &cs.dissipators {
        // lowering only: no entry maps the empty filter state upward
        for r in 0..cs.dim() {
            for c in 0..cs.dim() {
                if d.jump.get(r, c).norm() > 0.0 {
                    assert!(r % 3 < c % 3);
                }
            }
        }
    }
    let psi = StateVector::basis(2, 0)
        .unwrap()
        .tensor(&StateVector::basis(3, 1).unwrap());
    let n_f = tensor_product(&OperatorMatrix::identity(2), &single_excitation_ops(&chain).number);
    let traj = evolve(
        &DensityMatrix::pure(&psi).unwrap(),
        &cs.hamiltonian,
        &cs.dissipators,
        &linspace(40.0, 41),
        &[Observable::new("nf", n_f)],
    )
    .unwrap();
    assert!(traj.series("nf").unwrap().last().unwrap().abs() < 1e-8);
}

#[test]
fn two_level_emitter_decays_at_engineered_rate() {
    let kappa_f = 1.0;
    let g = kappa_f / 10.0;
    let chain = FilterChain::new(1, 0.0, kappa_f, 0.0).unwrap();
    let sm = annihilation_op(2).unwrap();
    let cs = couple_system(&sm, &chain, g).unwrap();
    let psi = StateVector::basis(2, 1)
        .unwrap()
        .tensor(&StateVector::basis(2, 0).unwrap());
    let pe = cs.lift(&OperatorMatrix::from_diag(&[0.0, 1.0]));
    let predicted = 4.0 * g * g / kappa_f;
    let grid = linspace(3.0 / predicted, 301);
    let traj = evolve(
        &DensityMatrix::pure(&psi).unwrap(),
        &cs.hamiltonian,
        &cs.dissipators,
        &grid,
        &[Observable::new("pe", pe)],
    )
    .unwrap();
    let fit = fit_decay(
        &grid,
        &traj.series("pe").unwrap(),
        FitModel::Exponential,
        (0.5 / predicted, 3.0 / predicted),
    )
    .unwrap();
    assert!(rel_err(fit.rate, predicted) < 0.1, "{} vs {}", fit.rate, predicted);
}

#[test]
fn colored_preset_cooling_rate() {
    let p = SystemParams::colored(6.0, 3);
    let model = build_model(&p, &ModelOptions::default()).unwrap();
    let psi = model.logical_state(0, 1).unwrap();
    let grid = linspace(100e-9, 101);
    let traj = evolve(
        &DensityMatrix::pure(&psi).unwrap(),
        &model.hamiltonian,
        &model.dissipators,
        &grid,
        &model.observables().unwrap(),
    )
    .unwrap();
    let fit = fit_decay(
        &grid,
        &traj.series("p1").unwrap(),
        FitModel::Exponential,
        (10e-9, 100e-9),
    )
    .unwrap();
    let quoted = TWO_PI * 6.9e6;
    assert!(rel_err(fit.rate, quoted) < 0.15, "{} MHz", fit.rate / TWO_PI / 1e6);
    assert!(rel_err(p.resolved_kappa1_eng(), quoted) < 0.01);
}

#[test]
fn band_center_and_edges() {
    for m in 1..=4 {
        let chain = FilterChain::new(m, 1.0, 2.0, 0.0).unwrap();
        assert!((chain_response(&chain, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((chain_response(&chain, 0.7).unwrap() - chain_response(&chain, -0.7).unwrap()).abs() < 1e-12);
    }
    assert!(chain_response(&FilterChain::new(0, 1.0, 2.0, 0.0).unwrap(), 0.0).is_err());
}

fn half_power_edge(m: usize) -> f64 {
    let chain = FilterChain::new(m, 1.0, 2.0, 0.0).unwrap();
    let mut edge = 0.0;
    for k in 0..=30_000 {
        let w = 3.0 * k as f64 / 30_000.0;
        if chain_response(&chain, w).unwrap() >= 0.5 {
            edge = w;
        }
    }
    edge
}

#[test]
fn half_power_edge_approaches_band_edge() {
    let edges: Vec<f64> = (1..=4).map(half_power_edge).collect();
    assert!(edges.windows(2).all(|w| w[1] > w[0]), "{edges:?}");
    // outer half-power point reaches 2J within 20% from four modes on
    assert!(rel_err(edges[3], 2.0) < 0.2, "{edges:?}");
    assert!(rel_err(edges[2], 2.0) < 0.25, "{edges:?}");
}

#[test]
fn out_of_band_rejection_grows_with_modes() {
    let j = 1.0;
    for w in [3.0, 5.0, 10.0] {
        let r: Vec<f64> = (1..=4)
            .map(|m| chain_response(&FilterChain::new(m, j, 2.0 * j, 0.0).unwrap(), w * j).unwrap())
            .collect();
        assert!(r.windows(2).all(|p| p[1] < p[0]), "w={w} {r:?}");
    }
    for m in 1..=3 {
        let r0 = chain_response(&FilterChain::new(m, j, 2.0 * j, 0.0).unwrap(), 10.0 * j).unwrap();
        let r1 = chain_response(&FilterChain::new(m + 1, j, 2.0 * j, 0.0).unwrap(), 10.0 * j).unwrap();
        let ratio = (r1 / r0) / 1e-2;
        assert!((0.5..2.0).contains(&ratio), "M={m} ratio {}", r1 / r0);
    }
}

fn kerr_with_filter(modes: usize) -> (OperatorMatrix, OperatorMatrix, Vec<Dissipator>, FilterChain, f64) {
    let p = SystemParams::colored(4.0, modes);
    let kb = build_kerr_basis(p.kerr, p.alpha2, 60, 3).unwrap();
    let a = kb.lowering().unwrap();
    let d = vec![
        Dissipator::new(a.clone(), p.kappa1 * (1.0 + p.n_th)).unwrap(),
        Dissipator::new(a.adjoint(), p.kappa1 * p.n_th).unwrap(),
    ];
    (kb.hamiltonian().unwrap(), a, d, p.chain().unwrap(), p.g)
}

#[test]
fn static_and_rotating_frames_agree() {
    let (h, a, sys_d, chain, g) = kerr_with_filter(2);
    let cs = couple_system(&a, &chain, g).unwrap();
    let nf = chain.dim();
    let mut diss = cs.dissipators.clone();
    for d in &sys_d {
        diss.push(Dissipator::new(cs.lift(&d.jump), d.rate).unwrap());
    }
    let static_h = &cs.lift(&h) + &cs.hamiltonian;
    let mut hop_only = chain;
    hop_only.delta = 0.0;
    let hop = tensor_product(
        &OperatorMatrix::identity(6),
        &single_excitation_ops(&hop_only).hamiltonian,
    );
    let raise = tensor_product(&a, &single_excitation_ops(&chain).lowering[0].adjoint());
    let delta = chain.delta;
    let frame_h = |t: f64| {
        let c = &raise * C64::from_polar(g, delta * t);
        &(&(&cs.lift(&h) + &hop) + &c) + &c.adjoint()
    };
    let psi = StateVector::basis(6, 1)
        .unwrap()
        .tensor(&StateVector::basis(nf, 0).unwrap());
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    let grid = linspace(20e-9, 11);
    let opts = EvolveOptions {
        integrator: Integrator::RungeKutta,
        rtol: 1e-10,
        atol: 1e-12,
        store_states: true,
        ..Default::default()
    };
    let s = evolve_with(&rho0, &static_h, &diss, &grid, &[], &opts).unwrap();
    let r = evolve_time_dependent(&rho0, &frame_h, &diss, &grid, &[], &opts).unwrap();
    for (x, y) in s.states.unwrap().iter().zip(r.states.unwrap()) {
        let xs = partial_trace_right(x, 6, nf).unwrap();
        let ys = partial_trace_right(&y, 6, nf).unwrap();
        assert!(xs.max_diff(&ys) < 1e-7, "{}", xs.max_diff(&ys));
    }
}

#[test]
fn single_excitation_truncation_matches_three_level_mode() {
    let p = SystemParams::colored(6.0, 1);
    let kb = build_kerr_basis(p.kerr, p.alpha2, 60, 5).unwrap();
    let h = kb.hamiltonian().unwrap();
    let a = kb.lowering().unwrap();
    let intrinsic = |lift: &dyn Fn(&OperatorMatrix) -> OperatorMatrix| {
        vec![
            Dissipator::new(lift(&a), p.kappa1 * (1.0 + p.n_th)).unwrap(),
            Dissipator::new(lift(&a.adjoint()), p.kappa1 * p.n_th).unwrap(),
        ]
    };
    let grid = linspace(200e-9, 41);
    let p1 = OperatorMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let p0 = OperatorMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);

    let run = |levels: usize, h_f: OperatorMatrix, f: OperatorMatrix| {
        let lift = |op: &OperatorMatrix| tensor_product(op, &OperatorMatrix::identity(levels));
        let hop = tensor_product(&a, &f.adjoint());
        let hj = &(&(&lift(&h) + &tensor_product(&OperatorMatrix::identity(10), &h_f)) + &(&hop * p.g))
            + &(&hop.adjoint() * p.g);
        let mut d = intrinsic(&lift);
        d.push(Dissipator::new(tensor_product(&OperatorMatrix::identity(10), &f), p.kappa_f).unwrap());
        let psi = StateVector::basis(10, 1)
            .unwrap()
            .tensor(&StateVector::basis(levels, 0).unwrap());
        let obs = [Observable::new("p1", lift(&p1)), Observable::new("p0", lift(&p0))];
        let t = evolve(&DensityMatrix::pure(&psi).unwrap(), &hj, &d, &grid, &obs).unwrap();
        (t.series("p1").unwrap(), t.series("p0").unwrap())
    };
    let f2 = single_excitation_ops(&p.chain().unwrap());
    let (t1, t0) = run(2, f2.hamiltonian.clone(), f2.terminal.clone());
    let b = annihilation_op(3).unwrap();
    let (u1, u0) = run(3, &b.adjoint().dot(&b) * p.delta, b);
    // populations as probabilities agree to five points everywhere
    for k in 0..grid.len() {
        assert!(
            (t0[k] - u0[k]).abs() < 0.05 && (t1[k] - u1[k]).abs() < 0.05,
            "t index {k}"
        );
    }
    let window = (10e-9, 100e-9);
    let rt = fit_decay(&grid, &t1, FitModel::Exponential, window).unwrap().rate;
    let ru = fit_decay(&grid, &u1, FitModel::Exponential, window).unwrap().rate;
    assert!(rel_err(rt, ru) < 0.05, "cooling rate {rt:e} vs {ru:e}");
}
