// Same system with cavity loss and mechanical damping, via the characteristic function.

use optomech::bo_closed::MixtureMode;
use optomech::bo_dissipative::{dissipative_negativity, DissipativeOptions, DissipativeParams};

pub fn run_example() -> optomech::Result<()> {
    let params = DissipativeParams::weak_damping();
    let times: Vec<f64> = (0..=8).map(|k| 25.0 * k as f64).collect();
    for mode in [MixtureMode::PerBranch, MixtureMode::AveragedState] {
        let curve = dissipative_negativity(
            &params,
            &times,
            DissipativeOptions {
                mode,
                ..Default::default()
            },
        )?;
        println!("{mode:?}");
        for (t, n) in times.iter().zip(&curve) {
            println!("  t = {t:>5.1}  E_N = {:.6e}", n.value());
        }
    }
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
