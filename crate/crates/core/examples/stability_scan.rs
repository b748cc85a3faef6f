// Spectral abscissa of the drift matrix across detuning, with the stable windows.

use optomech::langevin::{build_drift, is_stable, Drive, DriveParams, EffectiveCouplings};

pub fn run_example() -> optomech::Result<()> {
    for g in [2.5, 8.0] {
        println!("g_a = g_b = {g}");
        scan(g)?;
    }
    Ok(())
}

fn scan(g: f64) -> optomech::Result<()> {
    let deltas: Vec<f64> = (0..=100).map(|k| -5.0 + 0.1 * k as f64).collect();
    let mut windows: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let mut worst = f64::NEG_INFINITY;
    for &delta in &deltas {
        let mut p = DriveParams::symmetric(delta, 0.0);
        p.drive = Drive::Effective {
            g_a: g,
            g_b: g,
            delta_a: delta,
            delta_b: delta,
        };
        let (stable, abscissa) = is_stable(&build_drift(&p, &EffectiveCouplings::resolve(&p)?).z)?;
        worst = worst.max(abscissa);
        match (stable, open) {
            (true, None) => open = Some(delta),
            (false, Some(start)) => {
                windows.push((start, delta - 0.1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        windows.push((start, *deltas.last().unwrap()));
    }
    println!("  largest abscissa {worst:.4e}");
    if windows.is_empty() {
        println!("  no stable window");
    }
    for (a, b) in windows {
        println!("  stable for delta in [{a:.1}, {b:.1}]");
    }
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
