//! Time-harmonic line source on a flat surface: source-driven synthesis
//! against the closed-form large-time field.

use surfwave::flat::{line_source_closed_form, FlatModel, LineSource};
use surfwave::grid::Grid2;
use surfwave::synthesis::large_t_field;
use surfwave::{BoundaryMetric, MaterialField, MaterialPoint, Medium};

fn main() -> surfwave::Result<()> {
    let m = MaterialPoint::new(1.0, 1.0, 1.0)?;
    let model = FlatModel::new(m)?;
    let medium = Medium::Rayleigh(MaterialField::constant(m)?);
    let ls = LineSource::default();
    let src = ls.source_data()?;
    let t = ls.mid_window();
    let grid = Grid2::new([0.5, 0.0], [3.0, 0.0], [6, 1])?;
    let f = large_t_field(&src, t, &grid, &medium, &BoundaryMetric::identity(), &Default::default())?;
    println!("{:>5} {:>24} {:>24}", "x1", "-c_R f3 (synthesis)", "f3 (closed form)");
    for (k, x) in grid.nodes().enumerate() {
        let cf = line_source_closed_form(t, x[0], ls.a3, ls.p, &model)?;
        let z = f.f[k][2] * (-model.c_r);
        println!("{:>5.2} {:>11.6}{:+.6}i {:>11.6}{:+.6}i", x[0], z.re, z.im, cf[2].re, cf[2].im);
    }
    Ok(())
}
