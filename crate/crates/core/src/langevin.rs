//! Driven two-cavity steady state from the linearized quantum Langevin equations.
//!
//! Fluctuations are ordered `(q1, p1, q2, p2, X_a, P_a, X_b, P_b)` and obey
//! `dR/dt = Z R + N`. With δ-correlated noise the stationary covariance solves
//! `Z V + V Zᵀ = -Ñ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, NegativityValue, PHYSICAL_TOL};
use crate::numerics::{lyapunov_residual, lyapunov_solve, spectral_abscissa};

/// A drift matrix counts as stable only below this spectral abscissa.
pub const STABILITY_MARGIN: f64 = -1e-12;
/// Accepted Lyapunov residual relative to `max |Ñ|`.
pub const LYAPUNOV_REL_TOL: f64 = 1e-10;

pub const STEADY_DAMPING: f64 = 0.5;
pub const STEADY_MAX_ITER: usize = 10_000;
pub const STEADY_TOL: f64 = 1e-12;

/// Phase mismatch between `a_s` and `b_s` tolerated by a common rotation.
const PHASE_TOL: f64 = 1e-9;

/// How the optical operating point is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Laser amplitude `η`, bare detuning `Δ̃ = ω - ω_L` and single-photon coupling `g`.
    Bare { eta: f64, delta_tilde: f64, g: f64 },
    /// Effective couplings and detunings given directly.
    Effective {
        g_a: f64,
        g_b: f64,
        delta_a: f64,
        delta_b: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub omega: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub gamma_m: f64,
    pub n1: f64,
    pub n2: f64,
    pub drive: Drive,
}

impl DriveParams {
    /// Ω = 1, g_a = g_b = 2.5, λ = 20, κ = 0.08, γ_m = 0.01 at detuning `delta`
    /// and bath occupancy `nbar` for both mirrors.
    pub fn symmetric(delta: f64, nbar: f64) -> Self {
        Self {
            omega: 1.0,
            lambda: 20.0,
            kappa: 0.08,
            gamma_m: 0.01,
            n1: nbar,
            n2: nbar,
            drive: Drive::Effective {
                g_a: 2.5,
                g_b: 2.5,
                delta_a: delta,
                delta_b: delta,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite, got {v}")))
            }
        };
        finite("omega", self.omega)?;
        finite("lambda", self.lambda)?;
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be > 0, got {}", self.kappa)));
        }
        for (name, v) in [("gamma_m", self.gamma_m), ("n1", self.n1), ("n2", self.n2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be >= 0, got {v}")));
            }
        }
        match self.drive {
            Drive::Bare { eta, delta_tilde, g } => {
                finite("eta", eta)?;
                finite("delta_tilde", delta_tilde)?;
                finite("g", g)?;
                if self.omega == 0.0 {
                    return Err(Error::param("omega", "must be non-zero for the bare drive"));
                }
            }
            Drive::Effective {
                g_a,
                g_b,
                delta_a,
                delta_b,
            } => {
                finite("g_a", g_a)?;
                finite("g_b", g_b)?;
                finite("delta_a", delta_a)?;
                finite("delta_b", delta_b)?;
            }
        }
        Ok(())
    }
}

/// Classical operating point of the driven system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub a_s: Complex64,
    pub b_s: Complex64,
    pub q1_s: f64,
    pub q2_s: f64,
    pub p1_s: f64,
    pub p2_s: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub iterations: usize,
    /// Max-norm residual of the fixed-point equations at the returned point.
    pub residual: f64,
}

impl SteadyState {
    /// Same state with both amplitudes rotated by the common phase of `a_s`
    /// (or `b_s` if `a_s` vanishes), making them real and non-negative.
    pub fn phase_rotated(&self) -> Result<Self> {
        let reference = if self.a_s.norm() > 0.0 { self.a_s } else { self.b_s };
        if reference.norm() == 0.0 {
            return Ok(*self);
        }
        let rot = reference.conj() / reference.norm();
        let a = self.a_s * rot;
        let b = self.b_s * rot;
        for (name, z) in [("a_s", a), ("b_s", b)] {
            if z.im.abs() > PHASE_TOL * z.norm().max(1.0) || z.re < 0.0 && z.norm() > 0.0 {
                return Err(Error::PhaseReference(format!(
                    "{name} has phase {} relative to the reference",
                    z.arg()
                )));
            }
        }
        Ok(Self {
            a_s: Complex64::new(a.re, 0.0),
            b_s: Complex64::new(b.re, 0.0),
            ..*self
        })
    }
}

/// Amplitudes from the coupled-cavity field equations at fixed detunings.
pub fn field_amplitudes(eta: f64, kappa: f64, lambda: f64, delta_a: f64, delta_b: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let den = Complex64::new(lambda * lambda + kappa * kappa - delta_a * delta_b, kappa * (delta_a + delta_b));
    let a = (-i * lambda * eta + eta * (kappa + i * delta_b)) / den;
    let b = (-i * lambda * eta + eta * (kappa + i * delta_a)) / den;
    (a, b)
}

/// Solves the self-consistent operating point for a bare drive by damped
/// fixed-point iteration on the amplitudes.
pub fn solve_steady_state(params: &DriveParams) -> Result<SteadyState> {
    params.validate()?;
    let Drive::Bare { eta, delta_tilde, g } = params.drive else {
        return Err(Error::param("drive", "steady state needs the bare drive (eta, delta_tilde, g)"));
    };
    let map = |a: Complex64, b: Complex64| {
        let q1 = g * a.norm_sqr() / params.omega;
        let q2 = g * b.norm_sqr() / params.omega;
        let da = delta_tilde - g * q1;
        let db = delta_tilde - g * q2;
        let (na, nb) = field_amplitudes(eta, params.kappa, params.lambda, da, db);
        (na, nb, q1, q2, da, db)
    };

    let (mut a, mut b) = field_amplitudes(eta, params.kappa, params.lambda, delta_tilde, delta_tilde);
    let mut residual = f64::INFINITY;
    for iter in 1..=STEADY_MAX_ITER {
        let (na, nb, ..) = map(a, b);
        let step = (na - a).norm().max((nb - b).norm());
        residual = step;
        if step <= STEADY_TOL * a.norm().max(b.norm()).max(1.0) {
            let (fa, fb, q1, q2, da, db) = map(na, nb);
            let final_residual = (fa - na).norm().max((fb - nb).norm());
            return Ok(SteadyState {
                a_s: na,
                b_s: nb,
                q1_s: q1,
                q2_s: q2,
                p1_s: 0.0,
                p2_s: 0.0,
                delta_a: da,
                delta_b: db,
                iterations: iter,
                residual: final_residual,
            });
        }
        a += (na - a) * STEADY_DAMPING;
        b += (nb - b) * STEADY_DAMPING;
    }
    Err(Error::SteadyStateNonConvergence {
        iterations: STEADY_MAX_ITER,
        residual,
        last_a: a,
        last_b: b,
    })
}

/// Effective couplings and detunings entering the drift matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    pub g_a: f64,
    pub g_b: f64,
    pub delta_a: f64,
    pub delta_b: f64,
}

impl EffectiveCouplings {
    /// `g_a = √2 g a_s`, `g_b = √2 g b_s`. Amplitudes must already be real.
    pub fn from_steady_state(ss: &SteadyState, g: f64) -> Result<Self> {
        for (name, z) in [("a_s", ss.a_s), ("b_s", ss.b_s)] {
            if z.im != 0.0 {
                return Err(Error::PhaseReference(format!(
                    "{name} = {z} is complex; rotate with SteadyState::phase_rotated first"
                )));
            }
        }
        Ok(Self {
            g_a: std::f64::consts::SQRT_2 * g * ss.a_s.re,
            g_b: std::f64::consts::SQRT_2 * g * ss.b_s.re,
            delta_a: ss.delta_a,
            delta_b: ss.delta_b,
        })
    }

    /// Resolves either drive form; the bare form runs the steady-state solver.
    pub fn resolve(params: &DriveParams) -> Result<Self> {
        params.validate()?;
        match params.drive {
            Drive::Effective {
                g_a,
                g_b,
                delta_a,
                delta_b,
            } => Ok(Self {
                g_a,
                g_b,
                delta_a,
                delta_b,
            }),
            Drive::Bare { g, .. } => {
                let ss = solve_steady_state(params)?.phase_rotated()?;
                Self::from_steady_state(&ss, g)
            }
        }
    }
}

/// Drift and diffusion of the linearized fluctuations.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftModel {
    pub z: DMatrix<f64>,
    pub noise: DMatrix<f64>,
}

pub fn build_drift(params: &DriveParams, eff: &EffectiveCouplings) -> DriftModel {
    let (w, gm, k, l) = (params.omega, params.gamma_m, params.kappa, params.lambda);
    let (da, db) = (eff.delta_a, eff.delta_b);
    #[rustfmt::skip]
    let z = DMatrix::from_row_slice(8, 8, &[
        0.0,   w,   0.0, 0.0,       0.0,      0.0, 0.0,      0.0,
        -w,    -gm, 0.0, 0.0,       eff.g_a,  0.0, 0.0,      0.0,
        0.0,   0.0, 0.0, w,         0.0,      0.0, 0.0,      0.0,
        0.0,   0.0, -w,  -gm,       0.0,      0.0, eff.g_b,  0.0,
        0.0,   0.0, 0.0, 0.0,       -k,       da,  0.0,      l,
        eff.g_a, 0.0, 0.0, 0.0,     -da,      -k,  -l,       0.0,
        0.0,   0.0, 0.0, 0.0,       0.0,      l,   -k,       db,
        0.0,   0.0, eff.g_b, 0.0,   -l,       0.0, -db,      -k,
    ]);
    let noise = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[
        0.0,
        gm * (2.0 * params.n1 + 1.0),
        0.0,
        gm * (2.0 * params.n2 + 1.0),
        k,
        k,
        k,
        k,
    ]));
    DriftModel { z, noise }
}

/// `(stable, abscissa)` with stability meaning abscissa < -1e-12.
pub fn is_stable(z: &DMatrix<f64>) -> Result<(bool, f64)> {
    let abscissa = spectral_abscissa(z)?;
    Ok((abscissa < STABILITY_MARGIN, abscissa))
}

/// Stationary covariance together with its Lyapunov residual.
///
/// The momentum-only Brownian noise is not a completely positive model, so
/// `v` is only checked for symmetry; `min_symplectic` reports how far it is
/// from the uncertainty bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyCovariance {
    pub v: CovarianceMatrix,
    /// `max |Z V + V Zᵀ + Ñ| / max |Ñ|`
    pub relative_residual: f64,
    pub min_symplectic: f64,
}

impl SteadyCovariance {
    pub fn is_physical(&self) -> bool {
        self.min_symplectic >= 0.5 - PHYSICAL_TOL
    }
}

/// Solves `Z V + V Zᵀ = -Ñ`. Refuses unstable drift matrices.
pub fn solve_lyapunov(model: &DriftModel) -> Result<SteadyCovariance> {
    let (stable, abscissa) = is_stable(&model.z)?;
    if !stable {
        return Err(Error::Unstable { abscissa });
    }
    let v = lyapunov_solve(&model.z, &model.noise)?;
    let scale = model.noise.amax().max(f64::MIN_POSITIVE);
    let relative_residual = lyapunov_residual(&model.z, &v, &model.noise) / scale;
    let v = CovarianceMatrix::symmetric(v)?;
    let min_symplectic = v.symplectic_eigenvalues()?[0];
    Ok(SteadyCovariance {
        v,
        relative_residual,
        min_symplectic,
    })
}

/// Mode order in the steady covariance: mirror 1, mirror 2, cavity A, cavity B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModePair {
    MirrorMirror,
    MirrorCavityA,
    MirrorCavityB,
}

impl ModePair {
    pub const ALL: [ModePair; 3] = [ModePair::MirrorMirror, ModePair::MirrorCavityA, ModePair::MirrorCavityB];

    pub fn modes(self) -> (usize, usize) {
        match self {
            ModePair::MirrorMirror => (0, 1),
            ModePair::MirrorCavityA => (0, 2),
            ModePair::MirrorCavityB => (0, 3),
        }
    }
}

pub fn pair_negativity(v: &CovarianceMatrix, pair: ModePair) -> Result<NegativityValue> {
    let (i, j) = pair.modes();
    v.extract_pair(i, j)?.log_negativity()
}

/// One grid point of a detuning/occupancy sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub delta: f64,
    pub nbar: f64,
    pub stable: bool,
    pub abscissa: f64,
    /// Mirror-mirror, mirror-cavity A, mirror-cavity B. `None` for flagged points.
    pub negativities: Option<[NegativityValue; 3]>,
    pub relative_residual: Option<f64>,
    pub min_symplectic: Option<f64>,
    pub note: Option<String>,
}

impl SweepPoint {
    pub fn is_flagged(&self) -> bool {
        self.negativities.is_none()
    }
}

/// Evaluates one point with `Δ_a = Δ_b = delta` and `n1 = n2 = nbar`.
///
/// The bare drive ignores `delta` for the detunings; its `Δ̃` is replaced instead.
pub fn sweep_point(base: &DriveParams, delta: f64, nbar: f64) -> SweepPoint {
    let mut p = *base;
    p.n1 = nbar;
    p.n2 = nbar;
    p.drive = match p.drive {
        Drive::Effective { g_a, g_b, .. } => Drive::Effective {
            g_a,
            g_b,
            delta_a: delta,
            delta_b: delta,
        },
        Drive::Bare { eta, g, .. } => Drive::Bare {
            eta,
            delta_tilde: delta,
            g,
        },
    };
    let flagged = |stable: bool, abscissa: f64, note: String| SweepPoint {
        delta,
        nbar,
        stable,
        abscissa,
        negativities: None,
        relative_residual: None,
        min_symplectic: None,
        note: Some(note),
    };
    let model = match EffectiveCouplings::resolve(&p) {
        Ok(eff) => build_drift(&p, &eff),
        Err(e) => return flagged(false, f64::NAN, e.to_string()),
    };
    let (stable, abscissa) = match is_stable(&model.z) {
        Ok(s) => s,
        Err(e) => return flagged(false, f64::NAN, e.to_string()),
    };
    if !stable {
        return flagged(false, abscissa, Error::Unstable { abscissa }.to_string());
    }
    let result = solve_lyapunov(&model).and_then(|sc| {
        let mut negs = [NegativityValue::ZERO; 3];
        for (slot, pair) in negs.iter_mut().zip(ModePair::ALL) {
            *slot = pair_negativity(&sc.v, pair)?;
        }
        Ok((negs, sc))
    });
    match result {
        Ok((negs, sc)) => SweepPoint {
            delta,
            nbar,
            stable,
            abscissa,
            negativities: Some(negs),
            relative_residual: Some(sc.relative_residual),
            min_symplectic: Some(sc.min_symplectic),
            note: (!sc.is_physical())
                .then(|| format!("smallest symplectic eigenvalue {} < 1/2", sc.min_symplectic)),
        },
        Err(e) => flagged(stable, abscissa, e.to_string()),
    }
}

/// Full grid sweep, `delta` outer and `nbar` inner. Rows keep grid order.
pub fn sweep(base: &DriveParams, deltas: &[f64], nbars: &[f64]) -> Result<Vec<SweepPoint>> {
    base.validate()?;
    if deltas.is_empty() || nbars.is_empty() {
        return Err(Error::param("grid", "delta and nbar grids must be non-empty"));
    }
    let points: Vec<(f64, f64)> = deltas
        .iter()
        .flat_map(|&d| nbars.iter().map(move |&n| (d, n)))
        .collect();
    Ok(points
        .par_iter()
        .map(|&(d, n)| sweep_point(base, d, n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bare(eta: f64, delta_tilde: f64, g: f64) -> DriveParams {
        DriveParams {
            drive: Drive::Bare { eta, delta_tilde, g },
            ..DriveParams::symmetric(0.0, 0.0)
        }
    }

    #[test]
    fn undriven_steady_state() {
        let ss = solve_steady_state(&bare(0.0, 1.3, 0.5)).unwrap();
        assert_eq!(ss.a_s, Complex64::new(0.0, 0.0));
        assert_eq!(ss.b_s, Complex64::new(0.0, 0.0));
        assert_eq!((ss.q1_s, ss.q2_s), (0.0, 0.0));
        assert_eq!((ss.delta_a, ss.delta_b), (1.3, 1.3));
    }

    #[test]
    fn uncoupled_closed_form() {
        let p = bare(3.0, 0.7, 0.0);
        let ss = solve_steady_state(&p).unwrap();
        let expect = 3.0 / Complex64::new(p.kappa, 0.7 + p.lambda);
        assert!((ss.a_s - expect).norm() < 1e-12);
        assert!((ss.b_s - expect).norm() < 1e-12);
    }

    #[test]
    fn weak_coupling_self_consistency() {
        let p = bare(10.0, 1.0, 1e-4);
        let ss = solve_steady_state(&p).unwrap();
        assert!(ss.residual <= 1e-10);
        assert_abs_diff_eq!(ss.q1_s, 1e-4 * ss.a_s.norm_sqr() / p.omega, epsilon = 1e-12);
        assert_abs_diff_eq!(ss.delta_a, 1.0 - 1e-4 * ss.q1_s, epsilon = 1e-15);
        assert_eq!(ss.p1_s, 0.0);
        assert_eq!(ss.p2_s, 0.0);
    }

    #[test]
    fn effective_drive_is_not_solved() {
        assert!(solve_steady_state(&DriveParams::symmetric(1.0, 0.0)).is_err());
    }

    #[test]
    fn unrotated_amplitudes_are_rejected() {
        let ss = solve_steady_state(&bare(2.0, 0.5, 1e-3)).unwrap();
        assert!(ss.a_s.im != 0.0);
        assert!(matches!(
            EffectiveCouplings::from_steady_state(&ss, 1e-3),
            Err(Error::PhaseReference(_))
        ));
        let rotated = ss.phase_rotated().unwrap();
        assert_abs_diff_eq!(rotated.a_s.re, ss.a_s.norm(), epsilon = 1e-14);
        let eff = EffectiveCouplings::from_steady_state(&rotated, 1e-3).unwrap();
        assert_abs_diff_eq!(eff.g_a, std::f64::consts::SQRT_2 * 1e-3 * ss.a_s.norm(), epsilon = 1e-15);
    }

    #[test]
    fn mismatched_phases_cannot_be_rotated() {
        let ss = SteadyState {
            a_s: Complex64::new(1.0, 0.0),
            b_s: Complex64::new(0.0, 1.0),
            q1_s: 0.0,
            q2_s: 0.0,
            p1_s: 0.0,
            p2_s: 0.0,
            delta_a: 0.0,
            delta_b: 0.0,
            iterations: 0,
            residual: 0.0,
        };
        assert!(ss.phase_rotated().is_err());
    }

    #[test]
    fn reference_drift_entries() {
        let p = DriveParams::symmetric(0.7, 0.0);
        let eff = EffectiveCouplings::resolve(&p).unwrap();
        let m = build_drift(&p, &eff);
        let z = |r: usize, c: usize| m.z[(r - 1, c - 1)];
        assert_eq!(z(5, 8), 20.0);
        assert_eq!(z(6, 5), -0.7);
        assert_eq!(z(5, 6), 0.7);
        assert_eq!(z(2, 5), 2.5);
        assert_eq!(z(6, 1), 2.5);
        assert_eq!(z(4, 7), 2.5);
        assert_eq!(z(8, 3), 2.5);
        assert_eq!(z(2, 2), -0.01);
        assert_eq!(z(1, 2), 1.0);
        assert_eq!(z(7, 7), -0.08);
        let nonzero = m.z.iter().filter(|x| **x != 0.0).count();
        assert_eq!(nonzero, 22);
    }

    #[test]
    fn zero_occupancy_noise() {
        let p = DriveParams::symmetric(0.0, 0.0);
        let m = build_drift(&p, &EffectiveCouplings::resolve(&p).unwrap());
        let d: Vec<f64> = m.noise.diagonal().iter().copied().collect();
        assert_eq!(d, vec![0.0, 0.01, 0.0, 0.01, 0.08, 0.08, 0.08, 0.08]);
        assert_eq!(m.noise.iter().filter(|x| **x != 0.0).count(), 6);
    }

    #[test]
    fn uncoupled_mechanics_spectrum() {
        let mut p = DriveParams::symmetric(0.3, 0.0);
        p.drive = Drive::Effective {
            g_a: 0.0,
            g_b: 0.0,
            delta_a: 0.3,
            delta_b: 0.3,
        };
        let m = build_drift(&p, &EffectiveCouplings::resolve(&p).unwrap());
        let ev = crate::numerics::eigenvalues(&m.z).unwrap();
        let disc = Complex64::new(p.gamma_m * p.gamma_m - 4.0, 0.0).sqrt();
        let expect = (Complex64::new(-p.gamma_m, 0.0) + disc) / 2.0;
        let hits = ev.iter().filter(|l| (**l - expect).norm() < 1e-10).count();
        assert_eq!(hits, 2);
    }

    #[test]
    fn stability_reference_cases() {
        let (s, a) = is_stable(&(-DMatrix::<f64>::identity(8, 8))).unwrap();
        assert!(s);
        assert_abs_diff_eq!(a, -1.0, epsilon = 1e-14);

        let p = DriveParams {
            lambda: 0.0,
            gamma_m: 0.0,
            kappa: 1.0,
            drive: Drive::Effective {
                g_a: 0.0,
                g_b: 0.0,
                delta_a: 1.0,
                delta_b: 1.0,
            },
            ..DriveParams::symmetric(0.0, 0.0)
        };
        let mut m = build_drift(&p, &EffectiveCouplings::resolve(&p).unwrap());
        for i in 4..8 {
            m.z[(i, i)] = 0.0;
        }
        let (s, a) = is_stable(&m.z).unwrap();
        assert!(!s);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
        assert!(matches!(solve_lyapunov(&m), Err(Error::Unstable { .. })));
    }

    #[test]
    fn lyapunov_trivial_cases() {
        let m = DriftModel {
            z: -DMatrix::<f64>::identity(8, 8),
            noise: DMatrix::identity(8, 8),
        };
        let sc = solve_lyapunov(&m).unwrap();
        assert_abs_diff_eq!(sc.v.as_matrix(), &(DMatrix::<f64>::identity(8, 8) * 0.5), epsilon = 1e-15);
    }

    #[test]
    fn zero_coupling_pairs_vanish() {
        let mut p = DriveParams::symmetric(2.0, 0.0);
        p.drive = Drive::Effective {
            g_a: 0.0,
            g_b: 0.0,
            delta_a: 2.0,
            delta_b: 2.0,
        };
        let sc = solve_lyapunov(&build_drift(&p, &EffectiveCouplings::resolve(&p).unwrap())).unwrap();
        for pair in ModePair::ALL {
            assert_eq!(pair_negativity(&sc.v, pair).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn hot_baths_are_separable() {
        let pt = sweep_point(&DriveParams::symmetric(3.0, 0.0), 3.0, 1e4);
        assert!(pt.stable);
        for n in pt.negativities.unwrap() {
            assert_eq!(n.value(), 0.0);
        }
    }

    #[test]
    fn single_point_sweep() {
        let rows = sweep(&DriveParams::symmetric(0.0, 0.0), &[3.0], &[0.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].negativities.is_some(), "{:?}", rows[0]);
        assert!(rows[0].relative_residual.unwrap() <= LYAPUNOV_REL_TOL);
    }

    #[test]
    fn unstable_point_is_flagged() {
        let mut base = DriveParams::symmetric(0.0, 0.0);
        base.drive = Drive::Effective {
            g_a: 40.0,
            g_b: 40.0,
            delta_a: 0.0,
            delta_b: 0.0,
        };
        let rows = sweep(&base, &[-1.0, 3.0], &[0.0]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().any(|r| r.is_flagged() && !r.stable && r.note.is_some()));
    }

    #[test]
    fn grid_order_is_delta_major() {
        let rows = sweep(&DriveParams::symmetric(0.0, 0.0), &[1.5, 2.5], &[0.0, 1.0, 2.0]).unwrap();
        let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.nbar)).collect();
        assert_eq!(
            coords,
            vec![(1.5, 0.0), (1.5, 1.0), (1.5, 2.0), (2.5, 0.0), (2.5, 1.0), (2.5, 2.0)]
        );
    }
}
