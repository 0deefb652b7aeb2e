//! Regularized impulse response on a flat surface: two pulses leaving the
//! origin at +-c_R t.

use surfwave::flat::{impulse_closed_form, FlatModel};
use surfwave::MaterialPoint;

fn main() -> surfwave::Result<()> {
    let model = FlatModel::new(MaterialPoint::new(1.0, 1.0, 1.0)?)?;
    for t in [1.0, 2.0, 3.0] {
        let (mut best, mut at) = (0.0, 0.0);
        for i in 0..=6000 {
            let x = i as f64 * 1e-3;
            let v = impulse_closed_form(t, x, 1.0, 0.02, &model)?[2].norm();
            if v > best {
                best = v;
                at = x;
            }
        }
        println!("t = {t}: |f3| peaks at x1 = {at:.3} (c_R t = {:.3})", model.c_r * t);
    }
    Ok(())
}
