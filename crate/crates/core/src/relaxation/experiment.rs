use rayon::prelude::*;
use serde::Serialize;

use super::{coarse_grain, CoarseGrainSpec, CoarseGrained, DensityGrid, LatticeGrid, RelaxationError};
use crate::dynamics::{backtrack, IntegratorConfig};
use crate::spinors::{FieldKind, SpinorField, Vec3};

/// Backtracked origins of every lattice point, reusable across initial
/// densities.
#[derive(Debug, Clone, PartialEq)]
pub struct Origins {
    pub grid: LatticeGrid,
    pub t_i: f64,
    pub t_f: f64,
    /// Origin at `t_i` and `j⁰(t_f, x)/j⁰(t_i, x_i)`, or `None` when the
    /// backtrack is not certified.
    pub points: Vec<Option<(Vec3, f64)>>,
}

impl Origins {
    pub fn compute<F>(
        field: &F,
        grid: &LatticeGrid,
        t_i: f64,
        t_f: f64,
        cfg: &IntegratorConfig,
    ) -> Result<Self, RelaxationError>
    where
        F: SpinorField + ?Sized,
    {
        grid.validate()?;
        cfg.validate()?;
        if grid.dimension() != field.dimension() {
            return Err(RelaxationError::InvalidExperiment(format!(
                "{}-axis lattice for a {}-dimensional field",
                grid.axes(),
                field.dimension().spatial()
            )));
        }
        let points = (0..grid.len())
            .into_par_iter()
            .map(|flat| origin(field, &grid.point(flat), t_i, t_f, cfg))
            .collect();
        Ok(Self {
            grid: grid.clone(),
            t_i,
            t_f,
            points,
        })
    }

    pub fn good_fraction(&self) -> f64 {
        self.points.iter().filter(|p| p.is_some()).count() as f64 / self.points.len().max(1) as f64
    }

    /// `rho_i(x_i)·j⁰_f/j⁰_i` at every good point.
    pub fn transport<R>(&self, rho_i: &R) -> DensityGrid
    where
        R: Fn(&Vec3) -> f64 + Sync + ?Sized,
    {
        let (values, good) = self
            .points
            .par_iter()
            .map(|p| match p {
                Some((x, ratio)) => {
                    let v = rho_i(x) * ratio;
                    if v.is_finite() {
                        (v.max(0.0), true)
                    } else {
                        (0.0, false)
                    }
                }
                None => (0.0, false),
            })
            .unzip();
        DensityGrid {
            grid: self.grid.clone(),
            t: self.t_f,
            values,
            good,
        }
    }
}

/// Transport `rho_i` from `t_i` to every lattice point at `t_f`.
///
/// Points whose backtracking is not certified, or whose origin sits on a
/// node, are kept with `good = false` and value zero.
pub fn evolve_density<F, R>(
    field: &F,
    rho_i: &R,
    grid: &LatticeGrid,
    t_i: f64,
    t_f: f64,
    cfg: &IntegratorConfig,
) -> Result<DensityGrid, RelaxationError>
where
    F: SpinorField + ?Sized,
    R: Fn(&Vec3) -> f64 + Sync + ?Sized,
{
    Ok(Origins::compute(field, grid, t_i, t_f, cfg)?.transport(rho_i))
}

fn origin<F>(field: &F, x: &Vec3, t_i: f64, t_f: f64, cfg: &IntegratorConfig) -> Option<(Vec3, f64)>
where
    F: SpinorField + ?Sized,
{
    let bt = backtrack(field, *x, t_f, t_i, cfg).ok()?;
    if !bt.quality.is_good() {
        return None;
    }
    let j_f = field.evaluate(t_f, x).norm_sqr();
    let j_i = field.evaluate(t_i, &bt.x).norm_sqr();
    if !(j_i > cfg.node_threshold) {
        return None;
    }
    let ratio = j_f / j_i;
    ratio.is_finite().then_some((bt.x, ratio))
}

/// `ψ†ψ(t)` on the lattice of `like`, under its good mask.
fn equilibrium_like<F: SpinorField + ?Sized>(field: &F, like: &DensityGrid) -> DensityGrid {
    let values = (0..like.grid.len())
        .into_par_iter()
        .map(|f| field.evaluate(like.t, &like.grid.point(f)).norm_sqr())
        .collect();
    like.with_values(values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub t: f64,
    /// `Σ_cells |ρ̄ − ψ†ψ‾|·V` over non-overlapping cells.
    pub l1: f64,
    pub good_fraction: f64,
    pub rho: CoarseGrained,
    pub equilibrium: CoarseGrained,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxationReport {
    pub kind: FieldKind,
    pub t_initial: f64,
    pub grid: LatticeGrid,
    pub coarse_grain: CoarseGrainSpec,
    pub checkpoints: Vec<Checkpoint>,
}

impl RelaxationReport {
    pub fn distances(&self) -> Vec<(f64, f64)> {
        self.checkpoints.iter().map(|c| (c.t, c.l1)).collect()
    }
}

/// Transported density and matching equilibrium at one checkpoint.
pub type CheckpointDensities = (DensityGrid, DensityGrid);

fn require_disjoint(spec: &CoarseGrainSpec) -> Result<(), RelaxationError> {
    if !matches!(spec, CoarseGrainSpec::NonOverlapping { .. }) {
        return Err(RelaxationError::InvalidCoarseGrain(
            "distances need non-overlapping cells".into(),
        ));
    }
    Ok(())
}

/// Coarse-grained comparison of `rho_i` carried along `origins` with the
/// equilibrium density at `origins.t_f`.
pub fn checkpoint<F, R>(
    field: &F,
    origins: &Origins,
    rho_i: &R,
    spec: &CoarseGrainSpec,
) -> Result<(Checkpoint, CheckpointDensities), RelaxationError>
where
    F: SpinorField + ?Sized,
    R: Fn(&Vec3) -> f64 + Sync + ?Sized,
{
    require_disjoint(spec)?;
    let rho = origins.transport(rho_i);
    let eq = equilibrium_like(field, &rho);
    let rho_cg = coarse_grain(&rho, spec)?;
    let eq_cg = coarse_grain(&eq, spec)?;
    let cp = Checkpoint {
        t: origins.t_f,
        l1: rho_cg.l1_distance(&eq_cg),
        good_fraction: rho.good_fraction(),
        rho: rho_cg,
        equilibrium: eq_cg,
    };
    Ok((cp, (rho, eq)))
}

/// Run one field through every checkpoint; also hands back the lattice
/// densities for output.
#[allow(clippy::too_many_arguments)]
pub fn relax_field<F, R>(
    field: &F,
    rho_i: &R,
    grid: &LatticeGrid,
    spec: &CoarseGrainSpec,
    t_i: f64,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(RelaxationReport, Vec<CheckpointDensities>), RelaxationError>
where
    F: SpinorField + ?Sized,
    R: Fn(&Vec3) -> f64 + Sync + ?Sized,
{
    require_disjoint(spec)?;
    let mut checkpoints = Vec::with_capacity(times.len());
    let mut densities = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(RelaxationError::InvalidExperiment(format!("checkpoint time {t}")));
        }
        let origins = Origins::compute(field, grid, t_i, t, cfg)?;
        let (cp, d) = checkpoint(field, &origins, rho_i, spec)?;
        checkpoints.push(cp);
        densities.push(d);
    }
    Ok((
        RelaxationReport {
            kind: field.kind(),
            t_initial: t_i,
            grid: grid.clone(),
            coarse_grain: spec.clone(),
            checkpoints,
        },
        densities,
    ))
}

/// Dirac and Majorana reports on a shared lattice, for comparing their
/// relaxation.
#[allow(clippy::too_many_arguments)]
pub fn relax_experiment<D, M, R>(
    dirac: &D,
    majorana: &M,
    rho_i: &R,
    grid: &LatticeGrid,
    spec: &CoarseGrainSpec,
    t_i: f64,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(RelaxationReport, RelaxationReport), RelaxationError>
where
    D: SpinorField + ?Sized,
    M: SpinorField + ?Sized,
    R: Fn(&Vec3) -> f64 + Sync + ?Sized,
{
    if dirac.mass_profile() != majorana.mass_profile() || dirac.dimension() != majorana.dimension() {
        return Err(RelaxationError::InvalidExperiment(
            "fields live in different cavities".into(),
        ));
    }
    let (d, _) = relax_field(dirac, rho_i, grid, spec, t_i, times, cfg)?;
    let (m, _) = relax_field(majorana, rho_i, grid, spec, t_i, times, cfg)?;
    Ok((d, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubComptonPoint {
    pub t: f64,
    /// Cell mean of the transported density.
    pub rho: f64,
    /// Cell mean of `ψ†ψ` over the same good points.
    pub equilibrium: f64,
    pub abs_diff: f64,
    /// `abs_diff / equilibrium`.
    pub rel_diff: f64,
    pub good_fraction: f64,
}

/// Square (cubic in 3D) cell of edge `edge` around `center`, sampled on a
/// cell-centred `samples` per axis lattice.
pub fn subcompton_cell(center: &Vec3, edge: f64, samples: usize, axes: usize) -> Result<LatticeGrid, RelaxationError> {
    if !(edge > 0.0) || !edge.is_finite() {
        return Err(RelaxationError::InvalidExperiment(format!("cell edge {edge}")));
    }
    LatticeGrid::new(
        (0..axes)
            .map(|a| (center[a] - 0.5 * edge, center[a] + 0.5 * edge))
            .collect(),
        vec![samples; axes],
    )
}

/// Time series of the cell-averaged mismatch between transported and
/// equilibrium densities.
#[allow(clippy::too_many_arguments)]
pub fn subcompton_scan<F, R>(
    field: &F,
    rho_i: &R,
    center: &Vec3,
    edge: f64,
    samples: usize,
    t_i: f64,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<SubComptonPoint>, RelaxationError>
where
    F: SpinorField + ?Sized,
    R: Fn(&Vec3) -> f64 + Sync + ?Sized,
{
    let grid = subcompton_cell(center, edge, samples, field.dimension().spatial())?;
    times
        .iter()
        .map(|&t| {
            let rho = evolve_density(field, rho_i, &grid, t_i, t, cfg)?;
            let eq = equilibrium_like(field, &rho);
            let good = rho.good.iter().filter(|&&g| g).count();
            let mean = |d: &DensityGrid| {
                if good == 0 {
                    f64::NAN
                } else {
                    d.values.iter().sum::<f64>() / good as f64
                }
            };
            let (r, e) = (mean(&rho), mean(&eq));
            Ok(SubComptonPoint {
                t,
                rho: r,
                equilibrium: e,
                abs_diff: (r - e).abs(),
                rel_diff: (r - e).abs() / e,
                good_fraction: rho.good_fraction(),
            })
        })
        .collect()
}

/// Percentage disagreement between two sampling resolutions of one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionComparison {
    pub mean_percent: f64,
    /// The last nine checkpoints.
    pub tail_percent: Vec<f64>,
}

/// Compare relative differences point by point, as a percentage of the
/// `reference` series.
pub fn resolution_comparison(reference: &[SubComptonPoint], other: &[SubComptonPoint]) -> ResolutionComparison {
    let pct: Vec<f64> = reference
        .iter()
        .zip(other)
        .filter(|(a, _)| a.rel_diff > 0.0)
        .map(|(a, b)| 100.0 * (a.rel_diff - b.rel_diff).abs() / a.rel_diff)
        .collect();
    let mean_percent = if pct.is_empty() {
        0.0
    } else {
        pct.iter().sum::<f64>() / pct.len() as f64
    };
    let tail_percent = pct[pct.len().saturating_sub(9)..].to_vec();
    ResolutionComparison {
        mean_percent,
        tail_percent,
    }
}
