//! Regular 2-D grids for seeds, charts, fields and covector quadratures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regular node grid on `[min, max]` with `n` nodes per axis, row-major with
/// the first axis fastest. An axis with a single node sits at `min` and has
/// unit weight, which lets a one-row grid stand for a line integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2 {
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub n: [usize; 2],
}

impl Grid2 {
    pub fn new(min: [f64; 2], max: [f64; 2], n: [usize; 2]) -> Result<Self> {
        let g = Self { min, max, n };
        g.validate()?;
        Ok(g)
    }

    /// Grid with the given spacing covering `[min, max]` (the upper end is
    /// moved outwards to the next node).
    pub fn with_spacing(min: [f64; 2], max: [f64; 2], h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::NonPositiveParameter { name: "spacing", value: h });
        }
        let mut n = [1usize; 2];
        let mut hi = max;
        for k in 0..2 {
            let span = (max[k] - min[k]).max(0.0);
            let cells = (span / h - 1e-9).ceil().max(1.0) as usize;
            n[k] = cells + 1;
            hi[k] = min[k] + cells as f64 * h;
        }
        Self::new(min, hi, n)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..2 {
            if self.n[k] == 0 {
                return Err(Error::InvalidInput("grid needs at least one node per axis".into()));
            }
            if !(self.min[k].is_finite() && self.max[k].is_finite()) {
                return Err(Error::InvalidInput("grid bounds must be finite".into()));
            }
            if self.n[k] > 1 && !(self.max[k] > self.min[k]) {
                return Err(Error::InvalidInput(format!(
                    "grid axis {k}: max {} must exceed min {}",
                    self.max[k], self.min[k]
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1]
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn spacing(&self) -> [f64; 2] {
        let h = |k: usize| {
            if self.n[k] > 1 {
                (self.max[k] - self.min[k]) / (self.n[k] - 1) as f64
            } else {
                0.0
            }
        };
        [h(0), h(1)]
    }

    /// Quadrature weight of one node (product of the spacings of the
    /// non-degenerate axes).
    #[inline]
    pub fn cell_weight(&self) -> f64 {
        let h = self.spacing();
        (if self.n[0] > 1 { h[0] } else { 1.0 }) * (if self.n[1] > 1 { h[1] } else { 1.0 })
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n[0] + i
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let h = self.spacing();
        [self.min[0] + i as f64 * h[0], self.min[1] + j as f64 * h[1]]
    }

    #[inline]
    pub fn node_at(&self, k: usize) -> [f64; 2] {
        self.node(k % self.n[0], k / self.n[0])
    }

    pub fn nodes(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(move |k| self.node_at(k))
    }

    pub fn contains_node(&self, k: usize) -> bool {
        k < self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let g = Grid2::new([-1.0, 0.0], [1.0, 3.0], [5, 4]).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g.node_at(g.index(4, 3)), [1.0, 3.0]);
        assert_eq!(g.spacing(), [0.5, 1.0]);
        assert_eq!(g.cell_weight(), 0.5);
    }

    #[test]
    fn line_grid_has_unit_transverse_weight() {
        let g = Grid2::new([-2.0, 0.0], [2.0, 0.0], [9, 1]).unwrap();
        assert_eq!(g.cell_weight(), 0.5);
        assert_eq!(g.node_at(8), [2.0, 0.0]);
    }

    #[test]
    fn spacing_constructor_covers_box() {
        let g = Grid2::with_spacing([0.0, 0.0], [1.0, 0.35], 0.1).unwrap();
        assert_eq!(g.n, [11, 5]);
        assert!(g.max[1] >= 0.35);
    }
}
