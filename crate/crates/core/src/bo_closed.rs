//! Closed-system Born-Oppenheimer evolution of the two mirrors.
//!
//! For a fixed photon-number difference `n = n_A - n_B` the mirrors see
//!
//! ```text
//! H_n = Ω C†C + (Ω - 4Nλ) D†D - 2Nλ (D² + D†²),   N = n (g / 4λ)²
//! ```
//!
//! with `C = (c + d)/√2` and `D = (c - d)/√2`. A Bogoliubov rotation
//! diagonalizes the `D` part, giving the closed-form Heisenberg propagators
//!
//! ```text
//! c(t) = ½ [F c + G d + i s c† - i s d†]
//! d(t) = ½ [G c + F d - i s c† + i s d†]
//! ```
//!
//! where `s = 2uv sin(2ω₀t)`. The `C` mode rotates as `e^{-iΩt}`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{log_negativity, NegativityValue, TwoModeCM};
use crate::weights::{coherent_branch_weights, BranchWeights, DEFAULT_CUTOFF_SIGMAS};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Radiation-pressure coupling `g = (ω/L)·sqrt(ħ/(mΩ))` in rad/s.
///
/// `cavity_omega` and `mech_omega` in rad/s, `length` in m, `mass` in kg.
/// Divide by `mech_omega` for the dimensionless value used by the solvers.
pub fn radiation_pressure_coupling(cavity_omega: f64, length: f64, mass: f64, mech_omega: f64) -> f64 {
    cavity_omega / length * (HBAR / (mass * mech_omega)).sqrt()
}

/// How branch results are combined into one curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixtureMode {
    /// Weighted average of per-branch negativities.
    #[default]
    PerBranch,
    /// Negativity of the weighted average covariance.
    AveragedState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoParams {
    pub omega: f64,
    pub g: f64,
    pub lambda: f64,
    pub alpha_a: Complex64,
    pub alpha_b: Complex64,
    pub n_thermal: f64,
}

impl BoParams {
    /// Ω = 1, g = 1e-2, λ = 1e-1, α_A = 4, α_B = 1, mirrors in the ground state.
    pub fn weak_coupling() -> Self {
        Self {
            omega: 1.0,
            g: 1e-2,
            lambda: 1e-1,
            alpha_a: Complex64::new(4.0, 0.0),
            alpha_b: Complex64::new(1.0, 0.0),
            n_thermal: 0.0,
        }
    }

    pub fn with_thermal(mut self, n_thermal: f64) -> Self {
        self.n_thermal = n_thermal;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::param("omega", format!("must be > 0, got {}", self.omega)));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::param("g", format!("must be >= 0, got {}", self.g)));
        }
        if self.lambda == 0.0 || !self.lambda.is_finite() {
            return Err(Error::param("lambda", "must be finite and non-zero"));
        }
        if !(self.n_thermal >= 0.0) || !self.n_thermal.is_finite() {
            return Err(Error::param(
                "n_thermal",
                format!("must be >= 0, got {}", self.n_thermal),
            ));
        }
        if !(self.alpha_a.norm().is_finite() && self.alpha_b.norm().is_finite()) {
            return Err(Error::param("alpha", "coherent amplitudes must be finite"));
        }
        Ok(())
    }

    /// `N = n (g/4λ)²` for branch `n`.
    pub fn squeezing_strength(&self, n: i64) -> f64 {
        n as f64 * (self.g / (4.0 * self.lambda)).powi(2)
    }
}

/// Bogoliubov data of one photon-difference branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoBranch {
    pub n: i64,
    /// `N = n (g/4λ)²`
    pub big_n: f64,
    /// `M = 2Nλ / (Ω - 4Nλ)`
    pub m: f64,
    pub u: f64,
    /// Carries the sign of `M`.
    pub v: f64,
    /// Half the `E`-mode frequency; `2ω₀ = sqrt(Ω(Ω - 8Nλ))`.
    pub omega0: f64,
}

pub fn make_branch(params: &BoParams, n: i64) -> Result<BoBranch> {
    let omega = params.omega;
    let lambda = params.lambda;
    let big_n = params.squeezing_strength(n);
    let denom = omega - 4.0 * big_n * lambda;
    if denom == 0.0 {
        return Err(Error::BranchDomain {
            n,
            reason: "Ω = 4Nλ".into(),
        });
    }
    let m = 2.0 * big_n * lambda / denom;
    if !(m.abs() < 0.5) {
        return Err(Error::BranchDomain {
            n,
            reason: format!("|M| = {} >= 1/2", m.abs()),
        });
    }
    let root = (1.0 - 4.0 * m * m).sqrt();
    // v² = (1/root - 1)/2 rewritten to avoid cancellation for small M.
    let v2 = 2.0 * m * m / (root * (1.0 + root));
    let u = (1.0 + v2).sqrt();
    let v = v2.sqrt().copysign(m);
    let omega0 = (omega - 8.0 * lambda * big_n) * omega / (2.0 * root * denom);
    Ok(BoBranch {
        n,
        big_n,
        m,
        u,
        v: if m == 0.0 { 0.0 } else { v },
        omega0,
    })
}

/// Closed-form propagator coefficients at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorFG {
    pub t: f64,
    pub f: Complex64,
    pub g: Complex64,
    /// `2uv sin(2ω₀t)`
    pub s: f64,
}

impl PropagatorFG {
    /// `|F|² + |G|² - 2s²`, equal to 4 when `[c(t), c†(t)] = 1`.
    pub fn commutator_norm(&self) -> f64 {
        self.f.norm_sqr() + self.g.norm_sqr() - 2.0 * self.s * self.s
    }

    /// Real symplectic map `R(t) = S R(0)` on `(x_c, p_c, x_d, p_d)`.
    pub fn transfer_matrix(&self) -> Matrix4<f64> {
        let i_s = Complex64::new(0.0, self.s);
        let half = 0.5;
        // Coefficients (α, β) of c(0), c†(0), d(0), d†(0) in each output mode.
        let rows = [
            [self.f * half, i_s * half, self.g * half, -i_s * half],
            [self.g * half, -i_s * half, self.f * half, i_s * half],
        ];
        let mut m = Matrix4::zeros();
        for (mode, coeffs) in rows.iter().enumerate() {
            for k in 0..2 {
                let alpha = coeffs[2 * k];
                let beta = coeffs[2 * k + 1];
                let sum = alpha + beta;
                let diff = alpha - beta;
                m[(2 * mode, 2 * k)] = sum.re;
                m[(2 * mode, 2 * k + 1)] = -diff.im;
                m[(2 * mode + 1, 2 * k)] = sum.im;
                m[(2 * mode + 1, 2 * k + 1)] = diff.re;
            }
        }
        m
    }
}

pub fn propagator(branch: &BoBranch, omega: f64, t: f64) -> PropagatorFG {
    let w = 2.0 * branch.omega0;
    let free = Complex64::from_polar(1.0, -omega * t);
    let fwd = Complex64::from_polar(1.0, -w * t);
    let bwd = Complex64::from_polar(1.0, w * t);
    let u2 = branch.u * branch.u;
    let v2 = branch.v * branch.v;
    PropagatorFG {
        t,
        f: free + fwd * u2 - bwd * v2,
        g: free + bwd * v2 - fwd * u2,
        s: 2.0 * branch.u * branch.v * (w * t).sin(),
    }
}

/// Covariance of the mirrors at `t`, starting from identical uncorrelated thermal states.
pub fn evolve_covariance(branch: &BoBranch, params: &BoParams, t: f64) -> TwoModeCM {
    let s = propagator(branch, params.omega, t).transfer_matrix();
    let v = s * s.transpose() * (params.n_thermal + 0.5);
    TwoModeCM::from_matrix(&v)
}

pub fn branch_weights(alpha_a: Complex64, alpha_b: Complex64, cutoff_sigmas: f64) -> Result<BranchWeights> {
    coherent_branch_weights(alpha_a.norm_sqr(), alpha_b.norm_sqr(), cutoff_sigmas)
}

/// Branch table for `params` with every retained branch checked against the BO domain.
pub fn branches(params: &BoParams, weights: &BranchWeights) -> Result<Vec<(BoBranch, f64)>> {
    weights
        .iter()
        .map(|e| make_branch(params, e.n).map(|b| (b, e.weight)))
        .collect()
}

/// Combines weighted branch covariances according to `mode`.
pub(crate) fn mix<I>(items: I, mode: MixtureMode) -> Result<NegativityValue>
where
    I: IntoIterator<Item = (f64, TwoModeCM)>,
{
    match mode {
        MixtureMode::PerBranch => {
            let mut acc = 0.0;
            for (w, v) in items {
                acc += w * log_negativity(&v)?.value();
            }
            Ok(NegativityValue::from_value(acc))
        }
        MixtureMode::AveragedState => {
            let mut sum = Matrix4::zeros();
            let mut total = 0.0;
            for (w, v) in items {
                sum += v.to_matrix() * w;
                total += w;
            }
            log_negativity(&TwoModeCM::from_matrix(&(sum / total)))
        }
    }
}

/// `𝒩̄(t) = Σ_n w_n 𝒩(V_n(t))` over the coherent-state branch table.
pub fn weighted_negativity(params: &BoParams, t: f64) -> Result<NegativityValue> {
    weighted_negativity_with(params, t, MixtureMode::PerBranch)
}

pub fn weighted_negativity_with(params: &BoParams, t: f64, mode: MixtureMode) -> Result<NegativityValue> {
    Ok(negativity_curve(params, &[t], mode)?[0])
}

/// Mixture negativity at each time, evaluated in parallel over times.
///
/// Within a time point branches are reduced in ascending `n`, so results do
/// not depend on thread count.
pub fn negativity_curve(params: &BoParams, times: &[f64], mode: MixtureMode) -> Result<Vec<NegativityValue>> {
    params.validate()?;
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::param("t", format!("times must be >= 0, got {t}")));
    }
    let weights = branch_weights(params.alpha_a, params.alpha_b, DEFAULT_CUTOFF_SIGMAS)?;
    let table = branches(params, &weights)?;
    times
        .par_iter()
        .map(|&t| {
            mix(
                table
                    .iter()
                    .map(|(b, w)| (*w, evolve_covariance(b, params, t))),
                mode,
            )
        })
        .collect()
}
