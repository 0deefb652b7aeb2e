//! A ray through a shear-modulus bump: Jacobi fields, caustic monitor and
//! the leading amplitude.

use surfwave::ray::{trace_dynamic, transport_amplitude, RayContext};
use surfwave::{BoundaryMetric, MaterialBump, MaterialField, MaterialPoint, Medium, Param, WorkingBox};

fn main() -> surfwave::Result<()> {
    let field = MaterialField::new(
        MaterialPoint::new(1.0, 1.0, 1.0)?,
        vec![MaterialBump::new(Param::Mu, 0.4, [0.5, 0.3], 0.6)],
        WorkingBox::default(),
    )?;
    let medium = Medium::Rayleigh(field);
    let g = BoundaryMetric::identity();
    let ctx = RayContext::new(&medium, &g)?;
    let mut ray = trace_dynamic([-0.5, 0.0], [-1.0, 0.0], 1.5, 1e-3, &ctx)?;
    if let Some(c) = ray.caustic {
        println!("caustic at t = {:.3}", c.t);
        return Ok(());
    }
    let logs = transport_amplitude(&mut ray, &medium, &g, None)?;
    for (s, l) in ray.states.iter().zip(&logs).step_by(150) {
        println!(
            "t={:.3} x=({:+.4}, {:+.4}) det J={:.4} |a0|={:.5}",
            s.t,
            s.x[0],
            s.x[1],
            s.det_jac().unwrap(),
            l.a0.norm()
        );
    }
    Ok(())
}
