// Steady-state negativities of the three mode pairs over detuning and mirror temperature.

use optomech::langevin::{sweep, DriveParams};

pub fn run_example() -> optomech::Result<()> {
    let deltas: Vec<f64> = (0..=20).map(|k| -5.0 + 0.5 * k as f64).collect();
    let nbars = [0.0, 5.0, 10.0];
    let points = sweep(&DriveParams::symmetric(0.0, 0.0), &deltas, &nbars)?;

    println!("{:>6} {:>5} {:>7} {:>10} {:>10} {:>10}", "delta", "nbar", "stable", "m1-m2", "m1-ca", "m1-cb");
    for p in &points {
        let cells = match p.negativities {
            Some(n) => n.map(|v| format!("{:>10.5}", v.value())).join(" "),
            None => format!("{:>32}", p.note.as_deref().unwrap_or("")),
        };
        println!("{:>6.2} {:>5.1} {:>7} {cells}", p.delta, p.nbar, p.stable);
    }

    let best = points
        .iter()
        .filter_map(|p| p.negativities.map(|n| (p.delta, p.nbar, n[0].value())))
        .fold((0.0, 0.0, 0.0), |a, b| if b.2 > a.2 { b } else { a });
    println!("max mirror-mirror E_N = {:.5} at delta = {}, nbar = {}", best.2, best.0, best.1);
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
