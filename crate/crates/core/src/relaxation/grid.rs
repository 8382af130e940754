use serde::{Deserialize, Serialize};

use super::RelaxationError;
use crate::spinors::{Dimension, Vec3};

/// Cell-centred lattice: along axis `i` the `k`-th point (`k = 1..=n`) sits
/// at `low + k·w/n − w/2n` with `w = high − low`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeGrid {
    pub bounds: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
}

impl LatticeGrid {
    pub fn new(bounds: Vec<(f64, f64)>, counts: Vec<usize>) -> Result<Self, RelaxationError> {
        let g = Self { bounds, counts };
        g.validate()?;
        Ok(g)
    }

    /// `[-h, h]²` with `n × n` points.
    pub fn square(half_width: f64, n: usize) -> Self {
        Self {
            bounds: vec![(-half_width, half_width); 2],
            counts: vec![n; 2],
        }
    }

    pub fn validate(&self) -> Result<(), RelaxationError> {
        let bad = |m: String| Err(RelaxationError::InvalidGrid(m));
        if self.bounds.len() != self.counts.len() {
            return bad("bounds and counts differ in length".into());
        }
        if Dimension::from_spatial(self.bounds.len()).is_none() {
            return bad(format!("{} axes; need 2 or 3", self.bounds.len()));
        }
        for (i, (&(lo, hi), &n)) in self.bounds.iter().zip(&self.counts).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return bad(format!("axis {i}: interval ({lo}, {hi}) is empty"));
            }
            if n == 0 {
                return bad(format!("axis {i}: no points"));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> Dimension {
        Dimension::from_spatial(self.bounds.len()).expect("validated grid")
    }

    pub fn axes(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.bounds[axis].1 - self.bounds[axis].0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.width(axis) / self.counts[axis] as f64
    }

    /// Volume (area in 2D) attached to one lattice point.
    pub fn point_volume(&self) -> f64 {
        (0..self.axes()).map(|a| self.spacing(a)).product()
    }

    /// Coordinate of the zero-based index `i` on `axis`.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let (lo, _) = self.bounds[axis];
        let w = self.width(axis);
        let n = self.counts[axis] as f64;
        lo + (i + 1) as f64 * (w / n) - w / (2.0 * n)
    }

    /// Row-major split of a flat index; the last axis varies fastest.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes()];
        for a in (0..self.axes()).rev() {
            idx[a] = flat % self.counts[a];
            flat /= self.counts[a];
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn point(&self, flat: usize) -> Vec3 {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 3];
        for (a, &i) in idx.iter().enumerate() {
            x[a] = self.coordinate(a, i);
        }
        x
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.len()).map(|f| self.point(f))
    }
}

/// Per-point densities on a lattice at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub grid: LatticeGrid,
    pub t: f64,
    /// Zero wherever `good` is false.
    pub values: Vec<f64>,
    pub good: Vec<bool>,
}

impl DensityGrid {
    pub fn good_fraction(&self) -> f64 {
        if self.good.is_empty() {
            return 0.0;
        }
        self.good.iter().filter(|&&g| g).count() as f64 / self.good.len() as f64
    }

    /// Lattice sum of good values times the point volume.
    pub fn integral(&self) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&self.good)
            .filter(|(_, &g)| g)
            .map(|(v, _)| v)
            .sum();
        s * self.grid.point_volume()
    }

    /// Sample `f` at every point, all marked good.
    pub fn from_fn<F: Fn(&Vec3) -> f64>(grid: &LatticeGrid, t: f64, f: F) -> Self {
        let values: Vec<f64> = grid.points().map(|x| f(&x)).collect();
        Self {
            grid: grid.clone(),
            t,
            good: vec![true; values.len()],
            values,
        }
    }

    /// Same lattice and mask with new values; bad points read zero.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        let values = values
            .into_iter()
            .zip(&self.good)
            .map(|(v, &g)| if g { v } else { 0.0 })
            .collect();
        Self {
            grid: self.grid.clone(),
            t: self.t,
            values,
            good: self.good.clone(),
        }
    }
}
