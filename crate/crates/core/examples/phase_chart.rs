//! Eikonal solution by the method of characteristics, checked with the
//! finite-difference residual.

use surfwave::grid::Grid2;
use surfwave::ray::{eikonal_residual, phase_chart, ChartOptions};
use surfwave::{BoundaryMetric, MaterialBump, MaterialField, MaterialPoint, Medium, Param, WorkingBox};

fn main() -> surfwave::Result<()> {
    let field = MaterialField::new(
        MaterialPoint::new(1.0, 1.0, 1.0)?,
        vec![MaterialBump::new(Param::Rho, -0.2, [0.0, 0.0], 0.8)],
        WorkingBox::default(),
    )?;
    let medium = Medium::Rayleigh(field);
    let g = BoundaryMetric::identity();
    let seeds = Grid2::with_spacing([-1.8, -0.9], [-0.2, 0.9], 0.1)?;
    let target = Grid2::new([-0.5, -0.5], [0.5, 0.5], [5, 5])?;
    let opts = ChartOptions { dt: 2e-3, refine: true, ..Default::default() };
    let chart = phase_chart(1.0, [-1.0, 0.0], &seeds, &target, &medium, &g, &opts)?;
    for (x, phi) in target.nodes().zip(&chart.phi).step_by(6) {
        println!("phi(1, {:+.2}, {:+.2}) = {:.8}", x[0], x[1], phi);
    }
    let res = eikonal_residual(1.0, 1e-4, [-1.0, 0.0], &seeds, &target, &medium, &g, &opts)?;
    println!("eikonal residual max {:.2e}, mean {:.2e}", res.max, res.mean);
    Ok(())
}
