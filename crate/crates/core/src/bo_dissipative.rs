//! Open-system Born-Oppenheimer evolution through the normal-ordered
//! characteristic function.
//!
//! Each branch carries a Gaussian ansatz `χ(z) = exp(-zᵀ L z + i zᵀ q)` in the
//! coordinates `z = (Re ε, Im ε, Re η, Im η)`, `ε` and `η` being the arguments
//! conjugate to the centre-of-mass mode `C` and relative mode `D`. Mirror
//! damping turns the master equation into
//!
//! ```text
//! dL/dt = M L + L Mᵀ - 4λ K,    dq/dt = M q
//! ```
//!
//! Cavity loss enters only through the branch weights, whose coherent
//! amplitudes decay as `α e^{-κt}`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rayon::prelude::*;

use crate::bo_closed::{branches, mix, BoBranch, BoParams, MixtureMode};
use crate::error::{Error, Result};
use crate::gaussian::{symplectic_eigenvalues, NegativityValue, TwoModeCM};
use crate::numerics::{integrate, OdeSpec, SolveReport, Tolerances};
use crate::weights::{coherent_branch_weights, BranchWeights, DEFAULT_CUTOFF_SIGMAS};

/// Slack below 1/2 tolerated when reading a covariance back from `L`.
pub const CHAR_PHYSICAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeParams {
    pub base: BoParams,
    /// Cavity amplitude decay rate κ.
    pub kappa: f64,
    /// Mirror energy decay rate Γ.
    pub gamma: f64,
    /// Mean occupancy of the mirror baths.
    pub n_bath: f64,
}

impl DissipativeParams {
    /// Reference lossy parameters: closed-system defaults plus κ = 1e-3, Γ = 1e-4, n̄ = 0.
    pub fn weak_damping() -> Self {
        Self {
            base: BoParams::weak_coupling(),
            kappa: 1e-3,
            gamma: 1e-4,
            n_bath: 0.0,
        }
    }

    /// No cavity or mirror loss.
    pub fn lossless(base: BoParams) -> Self {
        Self {
            base,
            kappa: 0.0,
            gamma: 0.0,
            n_bath: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (name, value) in [("kappa", self.kappa), ("gamma", self.gamma), ("n_bath", self.n_bath)] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::param(name, format!("must be >= 0, got {value}")));
            }
        }
        Ok(())
    }
}

/// Gaussian characteristic-function state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharState {
    pub l: Matrix4<f64>,
    pub q: Vector4<f64>,
}

/// Number of independent reals in `(L, q)`.
pub const PACKED_LEN: usize = 14;

const UPPER: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

impl CharState {
    /// Product of two thermal mirrors: `χ = exp(-n̄(|ε|² + |η|²))`.
    pub fn thermal(n_thermal: f64) -> Self {
        Self {
            l: Matrix4::identity() * n_thermal,
            q: Vector4::zeros(),
        }
    }

    pub fn pack(&self) -> [f64; PACKED_LEN] {
        let mut out = [0.0; PACKED_LEN];
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            out[k] = self.l[(i, j)];
        }
        out[10..].copy_from_slice(self.q.as_slice());
        out
    }

    pub fn unpack(y: &[f64]) -> Self {
        let mut l = Matrix4::zeros();
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            l[(i, j)] = y[k];
            l[(j, i)] = y[k];
        }
        Self {
            l,
            q: Vector4::new(y[10], y[11], y[12], y[13]),
        }
    }
}

/// Drift `M` and source `K` of the characteristic-function equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharSystem {
    pub m: Matrix4<f64>,
    pub k: Matrix4<f64>,
    /// `4λ`
    pub lambda4: f64,
}

pub fn build_char_system(params: &DissipativeParams, branch: &BoBranch) -> Result<CharSystem> {
    let lambda = params.base.lambda;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::param("lambda", "must be finite and non-zero"));
    }
    let omega = params.base.omega;
    let half_gamma = params.gamma / 2.0;
    let big_n = branch.big_n;
    let k_diag = -params.gamma * params.n_bath / (4.0 * lambda);

    let m1 = Matrix2::new(-half_gamma, omega, -omega, -half_gamma);
    let m2 = Matrix2::new(-half_gamma, omega - 8.0 * big_n * lambda, -omega, -half_gamma);
    let k1 = Matrix2::new(k_diag, 0.0, 0.0, k_diag);
    let k2 = Matrix2::new(k_diag, big_n, big_n, k_diag);

    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&m1);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&m2);
    let mut k = Matrix4::zeros();
    k.fixed_view_mut::<2, 2>(0, 0).copy_from(&k1);
    k.fixed_view_mut::<2, 2>(2, 2).copy_from(&k2);
    Ok(CharSystem {
        m,
        k,
        lambda4: 4.0 * lambda,
    })
}

/// `(dL, dq) = (M L + L Mᵀ - 4λK, M q)`, with `dL` explicitly symmetrized.
pub fn char_rhs(state: &CharState, sys: &CharSystem) -> (Matrix4<f64>, Vector4<f64>) {
    let ml = sys.m * state.l;
    let dl = ml + ml.transpose() - sys.k * sys.lambda4;
    let dl = (dl + dl.transpose()) * 0.5;
    (dl, sys.m * state.q)
}

/// Integrates one branch from the thermal initial state over `t_grid`.
///
/// `t_grid` must be strictly ascending and start at or after 0; the returned
/// states align with `t_grid`.
pub fn integrate_char(
    params: &DissipativeParams,
    branch: &BoBranch,
    t_grid: &[f64],
    tol: Tolerances,
) -> Result<(Vec<CharState>, SolveReport)> {
    params.validate()?;
    let sys = build_char_system(params, branch)?;
    let Some(&first) = t_grid.first() else {
        return Ok((Vec::new(), SolveReport::default()));
    };
    if !(first >= 0.0) {
        return Err(Error::param("t_grid", format!("times must be >= 0, got {first}")));
    }
    let prepend = first > 0.0;
    let mut grid = Vec::with_capacity(t_grid.len() + 1);
    if prepend {
        grid.push(0.0);
    }
    grid.extend_from_slice(t_grid);

    let spec = OdeSpec::new(PACKED_LEN, move |_t, y: &[f64], dy: &mut [f64]| {
        let (dl, dq) = char_rhs(&CharState::unpack(y), &sys);
        let packed = CharState { l: dl, q: dq }.pack();
        dy.copy_from_slice(&packed);
    })
    .with_tolerances(tol);
    let y0 = CharState::thermal(params.base.n_thermal).pack();
    let (ys, report) = integrate(&spec, &y0, &grid)?;
    let states = ys
        .iter()
        .skip(usize::from(prepend))
        .map(|y| CharState::unpack(y))
        .collect();
    Ok((states, report))
}

/// Maps `(x, p)` quadrature coefficients of each mode to the `z` coordinates:
/// the normal-ordered exponent is `i√2 (Im ε · x - Re ε · p)` per mode.
fn z_to_quadrature() -> Matrix4<f64> {
    let mut p = Matrix4::zeros();
    for k in 0..2 {
        p[(2 * k, 2 * k + 1)] = 1.0;
        p[(2 * k + 1, 2 * k)] = -1.0;
    }
    p
}

/// `(x_C, p_C, x_D, p_D)` → `(x_c, p_c, x_d, p_d)`.
fn collective_to_local() -> Matrix4<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix4::new(
        h, 0.0, h, 0.0, //
        0.0, h, 0.0, h, //
        h, 0.0, -h, 0.0, //
        0.0, h, 0.0, -h,
    )
}

/// Symmetric covariance of the local mirror modes `c`, `d`.
///
/// Second derivatives of `χ` give normal-ordered moments; adding the
/// commutator half turns them into symmetrized ones: `V_CD = P (L + I/2) Pᵀ`.
/// The linear term `q` only shifts first moments and drops out.
pub fn covariance_from_char(state: &CharState) -> Result<TwoModeCM> {
    let p = z_to_quadrature();
    let v_cd = p * (state.l + Matrix4::identity() * 0.5) * p.transpose();
    let r = collective_to_local();
    let v = TwoModeCM::from_matrix(&(r * v_cd * r.transpose()));
    let nu = symplectic_eigenvalues(&v.to_dmatrix())?;
    if nu[0] < 0.5 - CHAR_PHYSICAL_TOL {
        return Err(Error::Unphysical(format!(
            "characteristic-function state has symplectic eigenvalue {}",
            nu[0]
        )));
    }
    Ok(v)
}

/// Inverse of [`covariance_from_char`] for zero-mean states.
pub fn char_from_covariance(v: &TwoModeCM) -> CharState {
    let p = z_to_quadrature();
    let r = collective_to_local();
    let v_cd = r.transpose() * v.to_matrix() * r;
    let l = p.transpose() * v_cd * p - Matrix4::identity() * 0.5;
    CharState {
        l: (l + l.transpose()) * 0.5,
        q: Vector4::zeros(),
    }
}

/// Branch weights at time `t` with amplitudes `α e^{-κt}`, normalized to one.
pub fn decayed_weights(params: &DissipativeParams, t: f64) -> Result<BranchWeights> {
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be >= 0, got {t}")));
    }
    let decay = (-2.0 * params.kappa * t).exp();
    let w = coherent_branch_weights(
        params.base.alpha_a.norm_sqr() * decay,
        params.base.alpha_b.norm_sqr() * decay,
        DEFAULT_CUTOFF_SIGMAS,
    )?;
    Ok(w.normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DissipativeOptions {
    pub mode: MixtureMode,
    pub tol: Tolerances,
}

/// Per-branch trajectories on a shared grid.
#[derive(Debug, Clone)]
pub struct BranchTrajectories {
    pub times: Vec<f64>,
    pub branches: Vec<BoBranch>,
    /// `covariances[b][k]` is branch `b` at `times[k]`.
    pub covariances: Vec<Vec<TwoModeCM>>,
    pub reports: Vec<SolveReport>,
}

/// Integrates every branch supported by the initial weight table.
pub fn branch_trajectories(
    params: &DissipativeParams,
    t_grid: &[f64],
    tol: Tolerances,
) -> Result<BranchTrajectories> {
    params.validate()?;
    let initial = decayed_weights(params, 0.0)?;
    let table = branches(&params.base, &initial)?;
    let results: Vec<(Vec<TwoModeCM>, SolveReport)> = table
        .par_iter()
        .map(|(branch, _)| {
            let (states, report) = integrate_char(params, branch, t_grid, tol)?;
            let covs = states
                .iter()
                .map(covariance_from_char)
                .collect::<Result<Vec<_>>>()?;
            Ok((covs, report))
        })
        .collect::<Result<_>>()?;
    let (covariances, reports) = results.into_iter().unzip();
    Ok(BranchTrajectories {
        times: t_grid.to_vec(),
        branches: table.into_iter().map(|(b, _)| b).collect(),
        covariances,
        reports,
    })
}

/// `𝒩̄(t) = Σ_n w_n(t) 𝒩(V_n(t))` with weights decayed to each grid time.
pub fn dissipative_negativity(
    params: &DissipativeParams,
    t_grid: &[f64],
    options: DissipativeOptions,
) -> Result<Vec<NegativityValue>> {
    let traj = branch_trajectories(params, t_grid, options.tol)?;
    mix_trajectories(params, &traj, options.mode)
}

/// Recombines stored trajectories with time-dependent weights.
pub fn mix_trajectories(
    params: &DissipativeParams,
    traj: &BranchTrajectories,
    mode: MixtureMode,
) -> Result<Vec<NegativityValue>> {
    traj.times
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let weights = branch_weights_at(params, &traj.branches, t)?;
            mix(
                weights
                    .iter()
                    .zip(&traj.covariances)
                    .map(|(w, covs)| (*w, covs[k])),
                mode,
            )
        })
        .collect()
}

/// Decayed weights restricted to `branches` and renormalized over them.
pub fn branch_weights_at(params: &DissipativeParams, branches: &[BoBranch], t: f64) -> Result<Vec<f64>> {
    let table = decayed_weights(params, t)?;
    let mut w: Vec<f64> = branches.iter().map(|b| table.weight_of(b.n)).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        for x in &mut w {
            *x /= total;
        }
    }
    Ok(w)
}
