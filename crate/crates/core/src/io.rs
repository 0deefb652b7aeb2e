//! Plot-ready outputs: CSV with a fixed header and 17 significant digits,
//! pretty JSON for reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::ray::RayState;
use crate::synthesis::{BoundaryFieldGrid, BulkField};

/// Round-trip formatting of a float.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt(*v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    write_csv(BufWriter::new(File::create(path)?), header, rows)
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub const RAY_HEADER: [&str; 9] = ["t", "x1", "x2", "xi1", "xi2", "phase", "det_jac", "re_a0", "im_a0"];

pub fn ray_rows(states: &[RayState]) -> Vec<Vec<f64>> {
    states
        .iter()
        .map(|s| {
            let a0 = s.a0();
            vec![s.t, s.x[0], s.x[1], s.xi[0], s.xi[1], s.phase, s.det_jac().unwrap_or(f64::NAN), a0.re, a0.im]
        })
        .collect()
}

pub const FIELD_HEADER: [&str; 9] = ["t", "x1", "x2", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3"];
pub const BULK_HEADER: [&str; 10] = ["t", "x1", "x2", "x3", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3"];

pub fn field_rows(fields: &[BoundaryFieldGrid]) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    for f in fields {
        for (k, x) in f.x_grid.nodes().enumerate() {
            let v = f.f[k];
            rows.push(vec![f.t, x[0], x[1], v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im]);
        }
    }
    rows
}

pub fn bulk_rows(t: f64, bulk: &BulkField) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    for s in &bulk.samples {
        for (k, x) in bulk.x_grid.nodes().enumerate() {
            let v = s.u[k];
            rows.push(vec![t, x[0], x[1], s.x3, v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im]);
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats() {
        let mut buf = Vec::new();
        let v = [0.1 + 0.2, -1.0 / 3.0, 6.02e23];
        write_csv(&mut buf, &["a", "b", "c"], [v.to_vec()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b,c"));
        let back: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(back, v);
    }
}
