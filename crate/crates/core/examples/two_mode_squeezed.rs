// Log negativity of two-mode squeezed vacua: `E_N = 2r`.

use optomech::gaussian::TwoModeCM;

pub fn run_example() -> optomech::Result<()> {
    println!("{:>6} {:>12} {:>12}", "r", "E_N", "nu_min_pt");
    for r in [0.0, 0.25, 0.5, 1.0, 1.5] {
        let v = TwoModeCM::two_mode_squeezed(r);
        let e = v.log_negativity()?.value();
        let nu = v.symplectic_min_pt()?;
        assert!((e - 2.0 * r).abs() < 1e-12);
        println!("{r:>6.2} {e:>12.6} {nu:>12.6}");
    }
    Ok(())
}

fn main() -> optomech::Result<()> {
    run_example()
}
