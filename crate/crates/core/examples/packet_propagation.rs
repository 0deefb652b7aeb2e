//! Gaussian Rayleigh packet on a flat half-space: snapshots and the tracked
//! centre, which moves at c_R along -xi_c.

use surfwave::grid::Grid2;
use surfwave::synthesis::{cauchy_field, track_packet, GaussianWindow, WavePacketData};
use surfwave::{BoundaryMetric, MaterialField, MaterialPoint, Medium};

fn main() -> surfwave::Result<()> {
    let medium = Medium::Rayleigh(MaterialField::constant(MaterialPoint::new(1.0, 1.0, 1.0)?)?);
    let g = BoundaryMetric::identity();
    let packet = WavePacketData::gaussian(GaussianWindow { center: [6.0, 3.0], width: 1.0, x_center: [1.0, 0.5] }, 128)?;
    let grid = Grid2::new([-4.0, -4.0], [4.0, 4.0], [81, 81])?;
    let snaps = [0.0, 1.0, 2.0]
        .iter()
        .map(|&t| cauchy_field(&packet, t, &grid, &medium, &g, &Default::default()))
        .collect::<surfwave::Result<Vec<_>>>()?;
    let track = track_packet(&snaps)?;
    println!("centres   {:?}", track.centers);
    println!("speed     {:.5} (c_R = {:.5})", track.speed, medium.speed([0.0, 0.0], None)?);
    println!("direction {:.3} deg from -xi_c", track.angle_to([-6.0, -3.0]));
    Ok(())
}
