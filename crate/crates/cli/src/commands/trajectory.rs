use pilotwave::dynamics::{helix_fit, integrate, write_trajectory_csv, HelixFit, Quality, Sampling};
use pilotwave::spinors::{FieldKind, Vec3};
use serde::Serialize;

use crate::config::{point, ExperimentConfig};
use crate::error::{numerical_err, CliError, CliResult};
use crate::output::RunContext;
use crate::system::build_system;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEntry {
    pub kind: FieldKind,
    pub index: usize,
    pub file: String,
    pub start: Vec3,
    pub t_end: f64,
    pub final_position: Vec3,
    pub quality: Quality,
    pub steps: usize,
    /// Present when the trajectory completes at least one loop.
    pub helix: Option<HelixFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadEntry {
    pub kind: FieldKind,
    /// Mean distance between final positions.
    pub mean_pairwise_separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySummary {
    pub trajectories: Vec<TrajectoryEntry>,
    pub spread: Vec<SpreadEntry>,
}

fn kind_name(k: FieldKind) -> &'static str {
    match k {
        FieldKind::Dirac => "dirac",
        FieldKind::Majorana => "majorana",
    }
}

fn mean_pairwise(points: &[Vec3]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            sum += ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// One CSV per start point and kind under `trajectories/`, plus
/// `trajectories/summary.json`.
pub fn cmd_trajectory(cfg: &ExperimentConfig, ctx: &RunContext) -> CliResult<TrajectorySummary> {
    let tc = cfg
        .trajectory
        .as_ref()
        .ok_or_else(|| CliError::Config("trajectory needs a [trajectory] section".into()))?;
    let system = build_system(cfg, true)?;
    let dim = system.dimension;
    let starts = tc
        .starts
        .iter()
        .map(|s| point(s, dim, "trajectory start"))
        .collect::<CliResult<Vec<_>>>()?;
    let mut trajectories = Vec::new();
    let mut spread = Vec::new();
    for (kind, field) in system.selected(cfg) {
        let mut finals = Vec::with_capacity(starts.len());
        for (index, &x0) in starts.iter().enumerate() {
            let traj = integrate(
                field.as_ref(),
                x0,
                tc.t_start,
                tc.t_end,
                &cfg.integrator,
                &Sampling::Every(tc.sample_interval),
            )
            .map_err(numerical_err)?;
            let file = format!("{}_{index}.csv", kind_name(kind));
            ctx.write_with(format!("trajectories/{file}"), |w| write_trajectory_csv(w, &traj))?;
            ctx.progress(format!("{file}: {} after {} steps", traj.quality, traj.steps));
            finals.push(traj.x_end);
            trajectories.push(TrajectoryEntry {
                kind,
                index,
                file,
                start: x0,
                t_end: traj.t_end,
                final_position: traj.x_end,
                quality: traj.quality,
                steps: traj.steps,
                helix: helix_fit(&traj.samples, dim),
            });
        }
        spread.push(SpreadEntry {
            kind,
            mean_pairwise_separation: mean_pairwise(&finals),
        });
    }
    let summary = TrajectorySummary { trajectories, spread };
    ctx.write_json("trajectories/summary.json", &summary)?;
    Ok(summary)
}
