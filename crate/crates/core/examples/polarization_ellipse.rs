//! Particle orbit of a Rayleigh wave over one period, and the retrograde
//! test on it and on its mirror image.

use surfwave::synthesis::{polarization_series, retrograde_check, SeriesPart};
use surfwave::{BoundaryMetric, MaterialField, MaterialPoint, Medium};

fn main() -> surfwave::Result<()> {
    let m = MaterialPoint::new(1.0, 1.0, 1.0)?;
    let medium = Medium::Rayleigh(MaterialField::constant(m)?);
    let g = BoundaryMetric::identity();
    let xi = [3.0, 0.0];
    let period = 2.0 * std::f64::consts::PI / (medium.speed([0.0, 0.0], None)? * 3.0);
    let times: Vec<f64> = (0..24).map(|k| period * k as f64 / 24.0).collect();
    let series = polarization_series(&medium, &g, [0.0, 0.0], xi, &times, &Default::default())?;
    for s in series.iter().step_by(3) {
        let u = s.displacement(SeriesPart::Real);
        println!("t={:.4}  u1={:+.4}  u3={:+.4}", s.t, u[0], u[2]);
    }
    let rep = retrograde_check(&series, SeriesPart::Real)?;
    println!("semi-axes {:?}, retrograde: {}", rep.semi_axes, rep.retrograde);
    let mirrored: Vec<_> = series.iter().map(|s| s.conjugated()).collect();
    println!("conjugated series retrograde: {}", retrograde_check(&mirrored, SeriesPart::Real)?.retrograde);
    Ok(())
}
