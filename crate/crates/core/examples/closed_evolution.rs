// Mirror-mirror entanglement in the closed system, averaged over photon branches.

use optomech::bo_closed::{branch_weights, negativity_curve, BoParams, MixtureMode};
use optomech::weights::DEFAULT_CUTOFF_SIGMAS;

pub fn run_example() -> optomech::Result<()> {
    let base = BoParams::weak_coupling();
    let weights = branch_weights(base.alpha_a, base.alpha_b, DEFAULT_CUTOFF_SIGMAS)?;
    println!("{} branches, most likely n = {:?}", weights.len(), weights.mode());

    let times: Vec<f64> = (0..=10).map(|k| 10.0 * k as f64).collect();
    for n_thermal in [0.0, 1e-3] {
        let curve = negativity_curve(&base.with_thermal(n_thermal), &times, MixtureMode::PerBranch)?;
        println!("n_thermal = {n_thermal}");
        for (t, n) in times.iter().zip(&curve) {
            println!("  t = {t:>5.1}  E_N = {:.6e}", n.value());
        }
    }
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
