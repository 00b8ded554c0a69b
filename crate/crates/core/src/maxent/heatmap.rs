use num_complex::Complex;

use super::{forward_expectations, LagrangeSet, Target};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Evenly spaced closed interval `[start, stop]` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis<T> {
    pub start: T,
    pub stop: T,
    pub steps: usize,
}

impl<T: Real> GridAxis<T> {
    pub fn new(start: T, stop: T, steps: usize) -> Result<Self> {
        if steps == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(Error::validation("grid axis needs finite bounds and at least one point"));
        }
        Ok(GridAxis { start, stop, steps })
    }

    /// A single point.
    pub fn point(value: T) -> Self {
        GridAxis {
            start: value,
            stop: value,
            steps: 1,
        }
    }

    pub fn values(&self) -> Vec<T> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = T::from_usize_lossy(self.steps - 1);
        (0..self.steps)
            .map(|i| {
                let t = T::from_usize_lossy(i) / last;
                self.start + (self.stop - self.start) * t
            })
            .collect()
    }
}

/// Grid over `λ11` (outer) and `Re λ1K` (inner) at fixed `λKK` and `Im λ1K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapGrid<T> {
    pub target: Target,
    pub lam_11: GridAxis<T>,
    pub lam_1k_re: GridAxis<T>,
    pub lam_1k_im: T,
    pub lam_kk: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapRow<T> {
    pub lam_11: T,
    pub lam_1k: Complex<T>,
    pub x11: T,
    pub x1k: Complex<T>,
}

/// Evaluates the forward map on every grid point, row-major with `λ11` outermost.
pub fn heatmap_scan<T: Real>(grid: &HeatmapGrid<T>) -> Result<Vec<HeatmapRow<T>>> {
    let outer = grid.lam_11.values();
    let inner = grid.lam_1k_re.values();
    let mut rows = Vec::with_capacity(outer.len() * inner.len());
    for &l11 in &outer {
        for &l1k in &inner {
            let lam_1k = Complex::new(l1k, grid.lam_1k_im);
            let set = LagrangeSet::new(grid.target, l11, lam_1k, grid.lam_kk)?;
            let rec = forward_expectations(&set);
            rows.push(HeatmapRow {
                lam_11: l11,
                lam_1k,
                x11: rec.x11,
                x1k: rec.x1k,
            });
        }
    }
    Ok(rows)
}
