//! Joint cat ⊗ filter master-equation model assembled from [`SystemParams`].

use serde::{Deserialize, Serialize};

use crate::bases::{
    build_kerr_basis, build_shifted_fock_with_dim, gauge_ladder, kerr_hamiltonian, signed_gauge_ladder, CatBasis,
    KerrBasis, ShiftedFockBasis, DEFAULT_D_GAUGE,
};
use crate::error::{Error, Result};
use crate::filter::{couple_system_with_cap, FilterChain, JOINT_DIM_CAP};
use crate::lindblad::{evolve, logical_observable_set, DensityMatrix, Dissipator, Observable};
use crate::operators::{default_fock_dim, number_op, tensor_product, OperatorMatrix, StateVector, C64};
use crate::params::SystemParams;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    #[default]
    Kerr,
    ShiftedFock,
}

/// System operator coupled to the first filter mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// The projected annihilation operator, carrier included.
    #[default]
    Lowering,
    /// `Z ⊗ a′`, gauge excitations only.
    SignedGauge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelOptions {
    pub basis: BasisKind,
    pub d_gauge: usize,
    /// Fock truncation used to build the basis; derived from `α²` when absent.
    pub fock_dim: Option<usize>,
    pub coupling: CouplingKind,
    /// Include `κ₁(1+n_th)D[a]` and `κ₁ n_th D[a†]`.
    pub intrinsic_loss: bool,
    pub joint_dim_cap: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            basis: BasisKind::Kerr,
            d_gauge: DEFAULT_D_GAUGE,
            fock_dim: None,
            coupling: CouplingKind::Lowering,
            intrinsic_loss: true,
            joint_dim_cap: JOINT_DIM_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ModelBasis {
    Kerr(KerrBasis),
    ShiftedFock(ShiftedFockBasis),
}

impl ModelBasis {
    pub fn as_cat_basis(&self) -> &dyn CatBasis {
        match self {
            Self::Kerr(b) => b,
            Self::ShiftedFock(b) => b,
        }
    }
}

/// Hamiltonian, dissipators and bookkeeping on `qubit ⊗ gauge ⊗ filter`.
#[derive(Clone, Debug)]
pub struct CatModel {
    pub params: SystemParams,
    pub options: ModelOptions,
    pub basis: ModelBasis,
    pub hamiltonian: OperatorMatrix,
    pub dissipators: Vec<Dissipator>,
    pub chain: FilterChain,
    pub system_dim: usize,
    pub filter_dim: usize,
}

pub fn build_model(params: &SystemParams, options: &ModelOptions) -> Result<CatModel> {
    params.validate()?;
    let chain = params.chain()?;
    let fock_dim = options.fock_dim.unwrap_or_else(|| default_fock_dim(params.alpha2));
    let d = options.d_gauge;
    let basis = match options.basis {
        BasisKind::Kerr => ModelBasis::Kerr(build_kerr_basis(params.kerr, params.alpha2, fock_dim, d)?),
        BasisKind::ShiftedFock => ModelBasis::ShiftedFock(build_shifted_fock_with_dim(params.alpha(), d, fock_dim)?),
    };
    let cat = basis.as_cat_basis();
    let system_dim = cat.dim();
    let filter_dim = chain.dim();
    if system_dim * filter_dim > options.joint_dim_cap {
        return Err(Error::DimensionCap {
            dim: system_dim * filter_dim,
            cap: options.joint_dim_cap,
        });
    }

    let mut h_sys = match &basis {
        ModelBasis::Kerr(b) => b.hamiltonian()?,
        ModelBasis::ShiftedFock(b) => b
            .project(&kerr_hamiltonian(params.kerr, params.alpha(), fock_dim)?)?
            .hermitian_part(),
    };
    if params.epsilon > 0.0 {
        let ladder = gauge_ladder(d);
        h_sys = &h_sys + &(&(&ladder + &ladder.adjoint()) * params.epsilon);
    }
    let a = cat.lowering()?;
    let coupled_op = match options.coupling {
        CouplingKind::Lowering => a.clone(),
        CouplingKind::SignedGauge => signed_gauge_ladder(d),
    };
    let coupled = couple_system_with_cap(&coupled_op, &chain, params.g, options.joint_dim_cap)?;
    let lift = |op: &OperatorMatrix| coupled.lift(op);

    let hamiltonian = (&lift(&h_sys) + &coupled.hamiltonian).hermitian_part();
    let mut dissipators = coupled.dissipators.clone();
    if options.intrinsic_loss && params.kappa1 > 0.0 {
        dissipators.push(Dissipator::new(lift(&a), params.kappa1 * (1.0 + params.n_th))?);
        if params.n_th > 0.0 {
            dissipators.push(Dissipator::new(lift(&a.adjoint()), params.kappa1 * params.n_th)?);
        }
    }
    if params.modes == 0 {
        if let Some(k) = params.kappa1_eng.filter(|&k| k > 0.0) {
            dissipators.push(Dissipator::new(lift(&signed_gauge_ladder(d)), k)?);
        }
    }
    if params.kappa_phi01 > 0.0 {
        let n = cat.project(&number_op(fock_dim))?.hermitian_part();
        dissipators.push(Dissipator::new(lift(&n), params.kappa_phi01)?);
    }
    Ok(CatModel {
        params: params.clone(),
        options: options.clone(),
        basis,
        hamiltonian,
        dissipators,
        chain,
        system_dim,
        filter_dim,
    })
}

impl CatModel {
    pub fn cat_basis(&self) -> &dyn CatBasis {
        self.basis.as_cat_basis()
    }

    pub fn dim(&self) -> usize {
        self.system_dim * self.filter_dim
    }

    pub fn d_gauge(&self) -> usize {
        self.options.d_gauge
    }

    fn with_empty_filter(&self, sys: &StateVector) -> StateVector {
        sys.tensor(&StateVector::basis(self.filter_dim, 0).expect("filter vacuum"))
    }

    /// `|q⟩ ⊗ |n⟩ ⊗ |filter vacuum⟩`.
    pub fn logical_state(&self, q: usize, n: usize) -> Result<StateVector> {
        let d = self.d_gauge();
        if q > 1 || n >= d {
            return Err(Error::InvalidParameter(format!(
                "no logical state q={q}, n={n} with d={d}"
            )));
        }
        Ok(self.with_empty_filter(&StateVector::basis(self.system_dim, q * d + n)?))
    }

    /// Even cat `(|0,0⟩ + |1,0⟩)/√2` with empty filter.
    pub fn plus_cat(&self) -> Result<StateVector> {
        let d = self.d_gauge();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sys = StateVector::basis(self.system_dim, 0)?.add(&StateVector::basis(self.system_dim, d)?)?;
        Ok(self.with_empty_filter(&sys.scale(C64::new(s, 0.0))))
    }

    /// Embeds a Fock-space state (for example a coherent state) into the model.
    pub fn project_fock_state(&self, psi: &StateVector) -> Result<StateVector> {
        Ok(self.with_empty_filter(&self.cat_basis().project_state(psi)?))
    }

    pub fn observables(&self) -> Result<Vec<Observable>> {
        logical_observable_set(self.cat_basis(), self.filter_dim)
    }

    /// Lifts a system operator to the joint space.
    pub fn lift(&self, op: &OperatorMatrix) -> OperatorMatrix {
        tensor_product(op, &OperatorMatrix::identity(self.filter_dim))
    }
}

/// Evolves `|0_L⟩ ⊗ vacuum` for `t_equil` under the full model.
pub fn equilibrate(params: &SystemParams, t_equil: f64) -> Result<DensityMatrix> {
    equilibrate_model(&build_model(params, &ModelOptions::default())?, t_equil)
}

pub fn equilibrate_model(model: &CatModel, t_equil: f64) -> Result<DensityMatrix> {
    if !(t_equil >= 0.0 && t_equil.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "equilibration time must be >= 0, got {t_equil}"
        )));
    }
    let rho0 = DensityMatrix::pure(&model.logical_state(0, 0)?)?;
    if t_equil == 0.0 {
        return Ok(rho0);
    }
    let traj = evolve(&rho0, &model.hamiltonian, &model.dissipators, &[0.0, t_equil], &[])?;
    Ok(traj.final_state)
}
