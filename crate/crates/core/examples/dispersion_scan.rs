//! Rayleigh function R(s) on (0, c_s) as CSV on stdout.

use surfwave::dispersion::rayleigh_residual;
use surfwave::io::write_csv;
use surfwave::MaterialPoint;

fn main() -> surfwave::Result<()> {
    let m = MaterialPoint::new(1.0, 2.0, 1.0)?;
    let n = 200;
    let rows = (1..n).map(|i| {
        let s = m.cs() * i as f64 / n as f64;
        vec![s, rayleigh_residual(s, &m).unwrap()]
    });
    write_csv(std::io::stdout(), &["s", "R"], rows)
}
