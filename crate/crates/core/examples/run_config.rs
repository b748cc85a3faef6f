// Builds a run config in code, saves it, and executes it like the CLI does.

use optomech::config::{CouplingConfig, DriveConfig, GridSpec};
use optomech::{load_config, run, write_config, Pipeline, RunConfig};

pub fn run_example() -> optomech::Result<()> {
    let dir = tempfile::tempdir()?;
    let mut config = RunConfig::new(Pipeline::SteadySweep);
    config.drive = Some(DriveConfig {
        omega: 1.0,
        lambda: 20.0,
        kappa: 0.08,
        gamma_m: 0.01,
        coupling: CouplingConfig::Effective { g_a: 2.5, g_b: 2.5 },
    });
    config.delta = Some(GridSpec::range(2.0, 4.0, 5));
    config.nbar = Some(GridSpec::list(vec![0.0, 2.0]));
    config.output = Some(dir.path().join("sweep.csv"));

    let path = dir.path().join("sweep.json");
    write_config(&config, &path)?;
    let loaded = load_config(&path)?;
    assert_eq!(loaded, config);

    let outcome = run(&loaded, None)?;
    println!("{} rows, {} flagged, exit code {}", outcome.rows, outcome.flagged, outcome.exit_code());
    print!("{}", std::fs::read_to_string(&outcome.path)?);
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
