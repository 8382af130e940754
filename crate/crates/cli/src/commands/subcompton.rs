use std::time::Instant;

use pilotwave::relaxation::{
    resolution_comparison, subcompton_scan, write_subcompton_csv, ResolutionComparison, SubComptonPoint,
};
use pilotwave::spinors::{FieldKind, Vec3};
use serde::Serialize;

use super::relax::GOOD_FRACTION_FLOOR;
use crate::config::{point, ExperimentConfig};
use crate::error::{numerical_err, CliError, CliResult};
use crate::output::RunContext;
use crate::system::{build_system, initial_density};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubComptonSeries {
    pub kind: FieldKind,
    pub center: Vec3,
    pub edge: f64,
    pub samples: usize,
    pub series: Vec<SubComptonPoint>,
    /// Against the `compare_samples` resolution, when configured.
    pub comparison: Option<ResolutionComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubComptonOutcome {
    pub runs: Vec<SubComptonSeries>,
}

#[derive(Serialize)]
struct Sidecar {
    kind: FieldKind,
    runtime_seconds: f64,
}

/// Cell-averaged mismatch series for every selected kind, written to
/// `<kind>/subcompton.csv` and `subcompton.json`.
pub fn cmd_subcompton(cfg: &ExperimentConfig, ctx: &RunContext) -> CliResult<SubComptonOutcome> {
    let sc = cfg
        .subcompton
        .as_ref()
        .ok_or_else(|| CliError::Config("subcompton needs a [subcompton] section".into()))?;
    let t_i = cfg.schedule.as_ref().map_or(0.0, |s| s.t_initial);
    let system = build_system(cfg, true)?;
    let center = point(&sc.center, system.dimension, "subcompton.center")?;
    let mut runs = Vec::new();
    for (kind, field) in system.selected(cfg) {
        let dir = match kind {
            FieldKind::Dirac => "dirac",
            FieldKind::Majorana => "majorana",
        };
        let rho_i = initial_density(cfg, &field, t_i)?;
        let clock = Instant::now();
        let scan = |n: usize| {
            subcompton_scan(
                field.as_ref(),
                rho_i.as_ref(),
                &center,
                sc.edge,
                n,
                t_i,
                &sc.times,
                &cfg.integrator,
            )
            .map_err(numerical_err)
        };
        let series = scan(sc.samples)?;
        ctx.write_with(format!("{dir}/subcompton.csv"), |w| write_subcompton_csv(w, &series))?;
        let comparison = match sc.compare_samples {
            Some(n) => {
                let other = scan(n)?;
                ctx.write_with(format!("{dir}/subcompton_{n}.csv"), |w| write_subcompton_csv(w, &other))?;
                Some(resolution_comparison(&series, &other))
            }
            None => None,
        };
        ctx.write_json(
            format!("{dir}/subcompton.meta.json"),
            &Sidecar {
                kind,
                runtime_seconds: clock.elapsed().as_secs_f64(),
            },
        )?;
        for p in &series {
            ctx.progress(format!(
                "{dir} t={}: rel diff {:.4} good {:.3}",
                p.t, p.rel_diff, p.good_fraction
            ));
        }
        let worst = series.iter().map(|p| p.good_fraction).fold(1.0, f64::min);
        runs.push(SubComptonSeries {
            kind,
            center,
            edge: sc.edge,
            samples: sc.samples,
            series,
            comparison,
        });
        if worst < GOOD_FRACTION_FLOOR {
            ctx.write_json("subcompton.json", &SubComptonOutcome { runs })?;
            return Err(CliError::Numerical(format!(
                "{dir}: only {:.1}% of backtracked points are good",
                100.0 * worst
            )));
        }
    }
    let outcome = SubComptonOutcome { runs };
    ctx.write_json("subcompton.json", &outcome)?;
    Ok(outcome)
}
