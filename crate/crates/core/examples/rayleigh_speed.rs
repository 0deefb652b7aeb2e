//! Rayleigh speed of a few solids, with the decay kernels at the root.

use surfwave::dispersion::{kernels, rayleigh_speed};
use surfwave::MaterialPoint;

fn main() -> surfwave::Result<()> {
    println!("{:>6} {:>6} {:>6} {:>10} {:>10} {:>8} {:>8}", "rho", "lam", "mu", "c_R", "c_R/c_s", "a", "b");
    for (rho, lam, mu) in [(1.0, 1.0, 1.0), (2.7, 30.0, 30.0), (1.0, 3.0, 0.5), (1.0, 0.5, 3.0)] {
        let m = MaterialPoint::new(rho, lam, mu)?;
        let r = rayleigh_speed(&m)?;
        let k = kernels(r.c_r, &m)?;
        println!("{rho:>6} {lam:>6} {mu:>6} {:>10.6} {:>10.6} {:>8.4} {:>8.4}", r.c_r, r.c_r / m.cs(), k.a, k.b);
    }
    Ok(())
}
