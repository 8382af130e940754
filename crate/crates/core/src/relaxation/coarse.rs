use serde::{Deserialize, Serialize};

use super::{DensityGrid, LatticeGrid, RelaxationError};
use crate::spinors::Vec3;

/// Box-cell averaging layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoarseGrainSpec {
    /// `cells[i]` tiles along axis `i`, each an integer number of points.
    NonOverlapping { cells: Vec<usize> },
    /// Windows the size of a `cells` tile, placed at `centers[i]` uniformly
    /// spaced positions per axis.
    Overlapping { cells: Vec<usize>, centers: Vec<usize> },
}

impl CoarseGrainSpec {
    pub fn cells(&self) -> &[usize] {
        match self {
            Self::NonOverlapping { cells } | Self::Overlapping { cells, .. } => cells,
        }
    }

    /// Per-axis window width (points) and window start indices.
    fn windows(&self, grid: &LatticeGrid) -> Result<Vec<(usize, Vec<usize>)>, RelaxationError> {
        let cells = self.cells();
        let bad = |m: String| Err(RelaxationError::InvalidCoarseGrain(m));
        if cells.len() != grid.axes() {
            return bad(format!("{} cell counts for a {}-axis grid", cells.len(), grid.axes()));
        }
        let mut out = Vec::with_capacity(cells.len());
        for (a, (&c, &n)) in cells.iter().zip(&grid.counts).enumerate() {
            if c == 0 || n % c != 0 {
                return bad(format!("axis {a}: {n} points do not split into {c} cells"));
            }
            let w = n / c;
            let starts = match self {
                Self::NonOverlapping { .. } => (0..c).map(|k| k * w).collect(),
                Self::Overlapping { centers, .. } => {
                    if centers.len() != cells.len() || centers[a] == 0 {
                        return bad(format!("axis {a}: overlapping layout needs a positive center count"));
                    }
                    let k = centers[a];
                    if k == 1 {
                        vec![(n - w) / 2]
                    } else {
                        let slack = (n - w) as f64;
                        (0..k)
                            .map(|i| (i as f64 * slack / (k - 1) as f64).round() as usize)
                            .collect()
                    }
                }
            };
            out.push((w, starts));
        }
        Ok(out)
    }
}

/// Cell averages of one [`DensityGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseGrained {
    pub t: f64,
    /// Cells per axis.
    pub shape: Vec<usize>,
    /// Row-major cell centers.
    pub centers: Vec<Vec3>,
    /// Mean over good points; `None` for cells without any.
    pub values: Vec<Option<f64>>,
    pub good_fraction: Vec<f64>,
    pub cell_volume: f64,
}

impl CoarseGrained {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for a in (0..self.shape.len()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    /// `Σ |a − b|·V` over cells populated in both.
    pub fn l1_distance(&self, other: &CoarseGrained) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter_map(|(a, b)| Some((a.as_ref()? - b.as_ref()?).abs()))
            .sum::<f64>()
            * self.cell_volume
    }
}

/// Average `density` over the cells of `spec`, skipping points whose
/// backtracking was not certified.
pub fn coarse_grain(density: &DensityGrid, spec: &CoarseGrainSpec) -> Result<CoarseGrained, RelaxationError> {
    let grid = &density.grid;
    let windows = spec.windows(grid)?;
    let shape: Vec<usize> = windows.iter().map(|(_, s)| s.len()).collect();
    let n_cells: usize = shape.iter().product();
    let cell_volume: f64 = windows
        .iter()
        .enumerate()
        .map(|(a, (w, _))| *w as f64 * grid.spacing(a))
        .product();
    let mut centers = Vec::with_capacity(n_cells);
    let mut values = Vec::with_capacity(n_cells);
    let mut good_fraction = Vec::with_capacity(n_cells);
    let axes = grid.axes();
    for cell in 0..n_cells {
        let mut cidx = vec![0; axes];
        let mut rest = cell;
        for a in (0..axes).rev() {
            cidx[a] = rest % shape[a];
            rest /= shape[a];
        }
        let mut center = [0.0; 3];
        for a in 0..axes {
            let (w, starts) = &windows[a];
            let s = starts[cidx[a]];
            center[a] = 0.5 * (grid.coordinate(a, s) + grid.coordinate(a, s + w - 1));
        }
        let (mut sum, mut good, mut total) = (0.0, 0usize, 0usize);
        let mut idx = vec![0; axes];
        let sizes: Vec<usize> = windows.iter().map(|(w, _)| *w).collect();
        let count: usize = sizes.iter().product();
        for local in 0..count {
            let mut r = local;
            for a in (0..axes).rev() {
                idx[a] = windows[a].1[cidx[a]] + r % sizes[a];
                r /= sizes[a];
            }
            let f = grid.flatten(&idx);
            total += 1;
            if density.good[f] {
                good += 1;
                sum += density.values[f];
            }
        }
        centers.push(center);
        values.push((good > 0).then(|| sum / good as f64));
        good_fraction.push(good as f64 / total as f64);
    }
    Ok(CoarseGrained {
        t: density.t,
        shape,
        centers,
        values,
        good_fraction,
        cell_volume,
    })
}

/// Lattice points per non-overlapping cell.
pub fn points_per_cell(grid: &LatticeGrid, cells: &[usize]) -> Result<usize, RelaxationError> {
    let spec = CoarseGrainSpec::NonOverlapping { cells: cells.to_vec() };
    Ok(spec.windows(grid)?.iter().map(|(w, _)| w).product())
}
