use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time grid `t_k = k · t_max / n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default = "TimeGrid::default_t_max")]
    pub t_max: f64,
    #[serde(default = "TimeGrid::default_n_steps")]
    pub n_steps: usize,
}

impl TimeGrid {
    fn default_t_max() -> f64 {
        100.0
    }

    fn default_n_steps() -> usize {
        1000
    }

    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        let g = Self { t_max, n_steps };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::param("t_max", format!("must be positive, got {}", self.t_max)));
        }
        if self.n_steps == 0 {
            return Err(Error::param("n_steps", "must be at least 1"));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|k| self.t_max * k as f64 / self.n_steps as f64)
            .collect()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_max: Self::default_t_max(),
            n_steps: Self::default_n_steps(),
        }
    }
}

/// Inclusive uniform grid; `n == 1` yields `[min]`.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_grid_endpoints() {
        let t = TimeGrid::default().times();
        assert_eq!(t.len(), 1001);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1000], 100.0);
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn linspace_is_inclusive() {
        let v = linspace(-5.0, 5.0, 201);
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], -5.0);
        assert_eq!(v[200], 5.0);
        assert!((v[100]).abs() < 1e-15);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
