//! Adaptive Dormand–Prince 5(4) integration with exact stops at requested times.

use crate::error::{Error, Result};

pub const DEFAULT_ATOL: f64 = 1e-12;
pub const DEFAULT_RTOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

/// Absolute/relative error tolerances for the embedded error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: DEFAULT_ATOL,
            rtol: DEFAULT_RTOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.atol > 0.0) {
            return Err(Error::param("atol", format!("must be > 0, got {}", self.atol)));
        }
        if !(self.rtol > 0.0) {
            return Err(Error::param("rtol", format!("must be > 0, got {}", self.rtol)));
        }
        Ok(())
    }
}

/// An autonomous or non-autonomous system `y' = f(t, y)` with solver settings.
pub struct OdeSpec<F> {
    pub dim: usize,
    pub rhs: F,
    pub tol: Tolerances,
    pub max_steps: usize,
}

impl<F> OdeSpec<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dim: usize, rhs: F) -> Self {
        Self {
            dim,
            rhs,
            tol: Tolerances::default(),
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveReport {
    pub steps: usize,
    pub rejected: usize,
    /// Largest scaled error norm among accepted steps (`<= 1` by construction).
    pub max_error_estimate: f64,
}

// Dormand & Prince (1980) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrates from `t_grid[0]` (where the state is `y0`) through every grid time.
///
/// Steps are clipped so that each grid time is hit exactly; the returned vector
/// has one state per grid entry, the first being `y0` itself.
pub fn integrate<F>(spec: &OdeSpec<F>, y0: &[f64], t_grid: &[f64]) -> Result<(Vec<Vec<f64>>, SolveReport)>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    spec.tol.validate()?;
    if y0.len() != spec.dim {
        return Err(Error::Dimension {
            expected: spec.dim,
            actual: y0.len(),
        });
    }
    for (i, w) in t_grid.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::TimeGrid { index: i + 1 });
        }
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut report = SolveReport::default();
    let Some(&t_start) = t_grid.first() else {
        return Ok((out, report));
    };
    out.push(y0.to_vec());
    if t_grid.len() == 1 {
        return Ok((out, report));
    }

    let n = spec.dim;
    let f = &spec.rhs;
    let mut stepper = Stepper::new(n);
    let mut t = t_start;
    let mut y = y0.to_vec();
    f(t, &y, &mut stepper.k1);
    let mut h = initial_step(spec, t, &y, &stepper.k1, t_grid[1] - t_start);

    for &t_target in &t_grid[1..] {
        while t < t_target {
            if report.steps >= spec.max_steps {
                return Err(Error::MaxSteps {
                    t,
                    max_steps: spec.max_steps,
                });
            }
            let remaining = t_target - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t, h: h_try });
            }

            let err = stepper.step(f, t, &y, h_try, &spec.tol);
            if err <= 1.0 {
                report.steps += 1;
                report.max_error_estimate = report.max_error_estimate.max(err);
                t = if clipped { t_target } else { t + h_try };
                std::mem::swap(&mut y, &mut stepper.y_new);
                std::mem::swap(&mut stepper.k1, &mut stepper.k7);
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // A step shortened to land on the grid says nothing about the
                // natural step size, so never shrink h because of it.
                let grown = h_try * factor;
                h = if clipped { h.max(grown) } else { grown };
            } else {
                report.rejected += 1;
                h = h_try * (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
        }
        out.push(y.clone());
    }
    Ok((out, report))
}

struct Stepper {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    k5: Vec<f64>,
    k6: Vec<f64>,
    k7: Vec<f64>,
    tmp: Vec<f64>,
    y_new: Vec<f64>,
}

impl Stepper {
    fn new(n: usize) -> Self {
        let z = || vec![0.0; n];
        Self {
            k1: z(),
            k2: z(),
            k3: z(),
            k4: z(),
            k5: z(),
            k6: z(),
            k7: z(),
            tmp: z(),
            y_new: z(),
        }
    }

    /// Takes one trial step, leaving the 5th-order result in `y_new` and
    /// `f(t + h, y_new)` in `k7`. Returns the scaled RMS error estimate.
    fn step<F>(&mut self, f: &F, t: f64, y: &[f64], h: f64, tol: &Tolerances) -> f64
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        for i in 0..n {
            self.tmp[i] = y[i] + h * A21 * self.k1[i];
        }
        f(t + C2 * h, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + h * (A31 * self.k1[i] + A32 * self.k2[i]);
        }
        f(t + C3 * h, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + h * (A41 * self.k1[i] + A42 * self.k2[i] + A43 * self.k3[i]);
        }
        f(t + C4 * h, &self.tmp, &mut self.k4);
        for i in 0..n {
            self.tmp[i] = y[i]
                + h * (A51 * self.k1[i] + A52 * self.k2[i] + A53 * self.k3[i] + A54 * self.k4[i]);
        }
        f(t + C5 * h, &self.tmp, &mut self.k5);
        for i in 0..n {
            self.tmp[i] = y[i]
                + h * (A61 * self.k1[i]
                    + A62 * self.k2[i]
                    + A63 * self.k3[i]
                    + A64 * self.k4[i]
                    + A65 * self.k5[i]);
        }
        f(t + h, &self.tmp, &mut self.k6);
        for i in 0..n {
            self.y_new[i] = y[i]
                + h * (A71 * self.k1[i]
                    + A73 * self.k3[i]
                    + A74 * self.k4[i]
                    + A75 * self.k5[i]
                    + A76 * self.k6[i]);
        }
        f(t + h, &self.y_new, &mut self.k7);

        let mut acc = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * self.k1[i]
                    + E3 * self.k3[i]
                    + E4 * self.k4[i]
                    + E5 * self.k5[i]
                    + E6 * self.k6[i]
                    + E7 * self.k7[i]);
            let scale = tol.atol + tol.rtol * y[i].abs().max(self.y_new[i].abs());
            acc += (e / scale).powi(2);
        }
        let err = (acc / n.max(1) as f64).sqrt();
        if err.is_finite() {
            err
        } else {
            f64::INFINITY
        }
    }
}

// Hairer, Nørsett & Wanner, "Solving ODEs I", II.4.
fn initial_step<F>(spec: &OdeSpec<F>, t: f64, y: &[f64], f0: &[f64], span: f64) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let tol = &spec.tol;
    let scale: Vec<f64> = y.iter().map(|v| tol.atol + tol.rtol * v.abs()).collect();
    let rms = |v: &[f64]| {
        (v.iter().zip(&scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / v.len().max(1) as f64).sqrt()
    };
    let d0 = rms(y);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; y.len()];
    (spec.rhs)(t + h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}
