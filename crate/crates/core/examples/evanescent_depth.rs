//! Depth decay of a surface mode below the boundary.

use surfwave::dispersion::rayleigh_speed;
use surfwave::synthesis::evanescent_mode;
use surfwave::{MaterialPoint, C64};

fn main() -> surfwave::Result<()> {
    let m = MaterialPoint::new(1.0, 1.0, 1.0)?;
    let c = rayleigh_speed(&m)?.c_r;
    let xi = [2.0, 0.0];
    let f = [C64::new(0.0, 0.68), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let depths: Vec<f64> = (0..=10).map(|k| k as f64 * 0.25).collect();
    let (samples, [alpha, beta]) = evanescent_mode(&m, 2.0 * c, xi, f, &depths)?;
    println!("alpha = {alpha:.5}, beta = {beta:.5}");
    for s in samples {
        let mag = |v: [f64; 2]| v[0].hypot(v[1]);
        println!("x3={:.2}  |u1|={:.5}  |u3|={:.5}", s.x3, mag(s.u[0]), mag(s.u[2]));
    }
    Ok(())
}
