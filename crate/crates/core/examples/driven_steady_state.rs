// Classical operating point under a bare laser drive, and the couplings it induces.

use optomech::langevin::{
    build_drift, is_stable, solve_lyapunov, solve_steady_state, Drive, DriveParams, EffectiveCouplings,
};

pub fn run_example() -> optomech::Result<()> {
    let mut params = DriveParams::symmetric(0.0, 0.0);
    for eta in [1.0, 4.0, 8.0] {
        params.drive = Drive::Bare {
            eta,
            delta_tilde: 1.0,
            g: 0.5,
        };
        let ss = solve_steady_state(&params)?;
        let eff = EffectiveCouplings::resolve(&params)?;
        println!(
            "eta = {eta:>4}: |a_s| = {:.4}, |b_s| = {:.4}, q1 = {:.4}, delta_a = {:.4}, g_a = {:.4} ({} iterations)",
            ss.a_s.norm(),
            ss.b_s.norm(),
            ss.q1_s,
            ss.delta_a,
            eff.g_a,
            ss.iterations
        );
        let model = build_drift(&params, &eff);
        let (stable, abscissa) = is_stable(&model.z)?;
        if stable {
            let v = solve_lyapunov(&model)?;
            println!("  stable (abscissa {abscissa:.3e}), residual {:.1e}", v.relative_residual);
        } else {
            println!("  unstable (abscissa {abscissa:.3e})");
        }
    }
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
