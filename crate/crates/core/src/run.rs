//! Executes a [`RunConfig`] and writes its CSV.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bo_closed::{branch_weights, negativity_curve};
use crate::bo_dissipative::{branch_trajectories, mix_trajectories};
use crate::config::{Pipeline, RunConfig};
use crate::error::{Error, Result};
use crate::langevin::{is_stable, build_drift, sweep, EffectiveCouplings, SweepPoint};
use crate::weights::DEFAULT_CUTOFF_SIGMAS;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepResult {
    Unitary {
        t: f64,
        n_thermal: f64,
        negativity: f64,
        branches: usize,
    },
    Dissipative {
        t: f64,
        negativity: f64,
        branches: usize,
    },
    Steady(SweepPoint),
    Stability {
        delta: f64,
        /// `None` when the eigenvalue solver failed.
        abscissa: Option<f64>,
        stable: bool,
        note: Option<String>,
    },
}

impl SweepResult {
    pub fn is_flagged(&self) -> bool {
        match self {
            SweepResult::Steady(p) => p.is_flagged(),
            SweepResult::Stability { abscissa, .. } => abscissa.is_none(),
            _ => false,
        }
    }

    pub fn note(&self) -> Option<&str> {
        match self {
            SweepResult::Steady(p) => p.note.as_deref(),
            SweepResult::Stability { note, .. } => note.as_deref(),
            _ => None,
        }
    }

    fn write_csv(&self, out: &mut String) {
        let f = fmt_f64;
        let o = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        let _ = match self {
            SweepResult::Unitary {
                t,
                n_thermal,
                negativity,
                ..
            } => writeln!(out, "{},{},{}", f(*t), f(*n_thermal), f(*negativity)),
            SweepResult::Dissipative { t, negativity, .. } => writeln!(out, "{},{}", f(*t), f(*negativity)),
            SweepResult::Steady(p) => {
                let n = |i: usize| o(p.negativities.map(|v| v[i].value()));
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    f(p.delta),
                    f(p.nbar),
                    p.stable,
                    n(0),
                    n(1),
                    n(2)
                )
            }
            SweepResult::Stability {
                delta,
                abscissa,
                stable,
                ..
            } => writeln!(out, "{},{},{}", f(*delta), o(*abscissa), stable),
        };
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Rows of `config` in grid order. Per-point failures become flagged rows;
/// anything else is fatal.
pub fn compute(config: &RunConfig) -> Result<Vec<SweepResult>> {
    config.validate()?;
    match config.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("threads: {e}")))?
            .install(|| compute_inner(config)),
        None => compute_inner(config),
    }
}

fn compute_inner(config: &RunConfig) -> Result<Vec<SweepResult>> {
    match config.pipeline {
        Pipeline::BoUnitary => {
            let bo = config.bo.as_ref().ok_or_else(|| Error::Config("bo: missing".into()))?;
            let times = config.time_grid().times();
            let temps = config.n_thermal_points()?;
            let branches = branch_weights(
                bo.params(0.0).alpha_a,
                bo.params(0.0).alpha_b,
                DEFAULT_CUTOFF_SIGMAS,
            )?
            .len();
            let curves = temps
                .iter()
                .map(|&n| negativity_curve(&bo.params(n), &times, config.mixture()))
                .collect::<Result<Vec<_>>>()?;
            let mut rows = Vec::with_capacity(times.len() * temps.len());
            for (k, &t) in times.iter().enumerate() {
                for (curve, &n) in curves.iter().zip(&temps) {
                    rows.push(SweepResult::Unitary {
                        t,
                        n_thermal: n,
                        negativity: curve[k].value(),
                        branches,
                    });
                }
            }
            Ok(rows)
        }
        Pipeline::BoDissipative => {
            let params = config.dissipative_params()?;
            let times = config.time_grid().times();
            let traj = branch_trajectories(&params, &times, config.tolerances())?;
            let curve = mix_trajectories(&params, &traj, config.mixture())?;
            Ok(times
                .iter()
                .zip(curve)
                .map(|(&t, n)| SweepResult::Dissipative {
                    t,
                    negativity: n.value(),
                    branches: traj.branches.len(),
                })
                .collect())
        }
        Pipeline::SteadySweep => {
            let drive = config.drive.as_ref().ok_or_else(|| Error::Config("drive: missing".into()))?;
            let deltas = config.delta_points()?;
            let nbars = config.nbar_points()?;
            Ok(sweep(&drive.params(0.0, 0.0), &deltas, &nbars)?
                .into_iter()
                .map(SweepResult::Steady)
                .collect())
        }
        Pipeline::Stability => {
            let drive = config.drive.as_ref().ok_or_else(|| Error::Config("drive: missing".into()))?;
            let nbar = config.nbar_points()?[0];
            let deltas = config.delta_points()?;
            Ok(deltas
                .par_iter()
                .map(|&delta| {
                    let p = drive.params(delta, nbar);
                    let result = EffectiveCouplings::resolve(&p).and_then(|eff| is_stable(&build_drift(&p, &eff).z));
                    match result {
                        Ok((stable, abscissa)) => SweepResult::Stability {
                            delta,
                            abscissa: Some(abscissa),
                            stable,
                            note: None,
                        },
                        Err(e) => SweepResult::Stability {
                            delta,
                            abscissa: None,
                            stable: false,
                            note: Some(e.to_string()),
                        },
                    }
                })
                .collect())
        }
    }
}

/// Header line plus one line per row.
pub fn render_csv(pipeline: Pipeline, rows: &[SweepResult]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(pipeline.csv_header());
    out.push('\n');
    for r in rows {
        r.write_csv(&mut out);
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub path: PathBuf,
    pub rows: usize,
    pub flagged: usize,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.flagged > 0 {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        }
    }
}

/// Computes and writes the CSV. `out` overrides the config's `output`.
pub fn run(config: &RunConfig, out: Option<&Path>) -> Result<RunOutcome> {
    let path = out
        .map(Path::to_path_buf)
        .or_else(|| config.output.clone())
        .ok_or_else(|| Error::Config("no output path: set `output` or pass --out".into()))?;
    let rows = compute(config)?;
    write_atomic(&path, render_csv(config.pipeline, &rows).as_bytes())?;
    Ok(RunOutcome {
        path,
        rows: rows.len(),
        flagged: rows.iter().filter(|r| r.is_flagged()).count(),
    })
}
