use serde::Serialize;

use super::BoundaryFieldGrid;
use crate::error::{Error, Result};

/// Intensity-weighted centre of `|f|^2` over the samples above 10% of the
/// peak intensity.
pub fn packet_centroid(field: &BoundaryFieldGrid) -> Option<[f64; 2]> {
    let intensity: Vec<f64> = field.f.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum()).collect();
    let peak = intensity.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let (mut w, mut c) = (0.0, [0.0; 2]);
    for (k, &i) in intensity.iter().enumerate() {
        if i >= 0.1 * peak {
            let x = field.x_grid.node_at(k);
            w += i;
            c[0] += i * x[0];
            c[1] += i * x[1];
        }
    }
    Some([c[0] / w, c[1] / w])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PacketTrack {
    pub times: Vec<f64>,
    pub centers: Vec<[f64; 2]>,
    /// Least-squares velocity of the centre.
    pub velocity: [f64; 2],
    pub speed: f64,
    /// Direction of motion in degrees.
    pub direction_deg: f64,
}

impl PacketTrack {
    /// Angle in degrees between the motion and `dir`.
    pub fn angle_to(&self, dir: [f64; 2]) -> f64 {
        let dot = self.velocity[0] * dir[0] + self.velocity[1] * dir[1];
        let n = self.speed * dir[0].hypot(dir[1]);
        (dot / n).clamp(-1.0, 1.0).acos().to_degrees()
    }
}

/// Fit a constant velocity to the packet centres of successive snapshots.
pub fn track_packet(snapshots: &[BoundaryFieldGrid]) -> Result<PacketTrack> {
    if snapshots.len() < 2 {
        return Err(Error::InvalidInput("tracking needs at least two snapshots".into()));
    }
    let centers = snapshots
        .iter()
        .map(|f| packet_centroid(f).ok_or_else(|| Error::InvalidInput(format!("empty field at t = {}", f.t))))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = snapshots.iter().map(|f| f.t).collect();
    let n = times.len() as f64;
    let tm = times.iter().sum::<f64>() / n;
    let cm = [centers.iter().map(|c| c[0]).sum::<f64>() / n, centers.iter().map(|c| c[1]).sum::<f64>() / n];
    let stt: f64 = times.iter().map(|t| (t - tm).powi(2)).sum();
    if !(stt > 0.0) {
        return Err(Error::InvalidInput("snapshots must be at distinct times".into()));
    }
    let mut v = [0.0; 2];
    for (t, c) in times.iter().zip(&centers) {
        v[0] += (t - tm) * (c[0] - cm[0]) / stt;
        v[1] += (t - tm) * (c[1] - cm[1]) / stt;
    }
    Ok(PacketTrack {
        speed: v[0].hypot(v[1]),
        direction_deg: v[1].atan2(v[0]).to_degrees(),
        velocity: v,
        times,
        centers,
    })
}
