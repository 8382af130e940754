use std::time::Instant;

use pilotwave::relaxation::{
    coarse_grain, relax_field, write_coarse_csv, write_density_csv, CoarseGrainSpec, RelaxationReport,
};
use pilotwave::spinors::FieldKind;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{numerical_err, CliError, CliResult};
use crate::output::{time_label, RunContext};
use crate::system::{build_system, initial_density};

/// Below this good fraction at any checkpoint the integrator settings are
/// considered broken and the run aborts.
pub const GOOD_FRACTION_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxOutcome {
    pub reports: Vec<RelaxationReport>,
}

impl RelaxOutcome {
    pub fn report(&self, kind: FieldKind) -> Option<&RelaxationReport> {
        self.reports.iter().find(|r| r.kind == kind)
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    t: f64,
    kind: FieldKind,
    grid: &'a pilotwave::relaxation::LatticeGrid,
    coarse_grain: &'a CoarseGrainSpec,
    smoothing: Option<&'a CoarseGrainSpec>,
    l1: f64,
    good_fraction: f64,
    runtime_seconds: f64,
}

fn kind_dir(kind: FieldKind) -> &'static str {
    match kind {
        FieldKind::Dirac => "dirac",
        FieldKind::Majorana => "majorana",
    }
}

/// Transport the initial density to each checkpoint for every selected
/// kind, writing `<kind>/report.json`, per-checkpoint CSVs under
/// `<kind>/densities/` and a combined `report.json`.
pub fn cmd_relax(cfg: &ExperimentConfig, ctx: &RunContext) -> CliResult<RelaxOutcome> {
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("relax needs a [grid] section".into()))?;
    let spec = cfg
        .coarse_grain
        .as_ref()
        .ok_or_else(|| CliError::Config("relax needs a [coarse_grain] section".into()))?;
    if !matches!(spec, CoarseGrainSpec::NonOverlapping { .. }) {
        return Err(CliError::Config(
            "coarse_grain must be non_overlapping; use [smoothing] for overlapping cells".into(),
        ));
    }
    let schedule = cfg
        .schedule
        .as_ref()
        .ok_or_else(|| CliError::Config("relax needs a [schedule] section".into()))?;
    let system = build_system(cfg, true)?;
    let mut reports = Vec::new();
    for (kind, field) in system.selected(cfg) {
        let rho_i = initial_density(cfg, &field, schedule.t_initial)?;
        let dir = kind_dir(kind);
        let mut report: Option<RelaxationReport> = None;
        for &t in &schedule.checkpoints {
            let clock = Instant::now();
            let (r, dens) = relax_field(
                field.as_ref(),
                rho_i.as_ref(),
                grid,
                spec,
                schedule.t_initial,
                &[t],
                &cfg.integrator,
            )
            .map_err(numerical_err)?;
            let runtime = clock.elapsed().as_secs_f64();
            let cp = r.checkpoints[0].clone();
            let (rho, eq) = &dens[0];
            let label = time_label(t);
            let base = format!("{dir}/densities/t_{label}");
            ctx.write_with(format!("{base}.csv"), |w| write_density_csv(w, rho))?;
            ctx.write_with(format!("{base}_equilibrium.csv"), |w| write_density_csv(w, eq))?;
            ctx.write_with(format!("{base}_coarse.csv"), |w| write_coarse_csv(w, &cp.rho))?;
            ctx.write_with(format!("{base}_coarse_equilibrium.csv"), |w| {
                write_coarse_csv(w, &cp.equilibrium)
            })?;
            if let Some(smooth) = &cfg.smoothing {
                let a = coarse_grain(rho, smooth).map_err(|e| CliError::Config(e.to_string()))?;
                let b = coarse_grain(eq, smooth).map_err(|e| CliError::Config(e.to_string()))?;
                ctx.write_with(format!("{base}_smooth.csv"), |w| write_coarse_csv(w, &a))?;
                ctx.write_with(format!("{base}_smooth_equilibrium.csv"), |w| write_coarse_csv(w, &b))?;
            }
            ctx.write_json(
                format!("{base}.json"),
                &Sidecar {
                    t,
                    kind,
                    grid,
                    coarse_grain: spec,
                    smoothing: cfg.smoothing.as_ref(),
                    l1: cp.l1,
                    good_fraction: cp.good_fraction,
                    runtime_seconds: runtime,
                },
            )?;
            ctx.progress(format!(
                "{dir} t={label}: D={:.6} good={:.4} ({runtime:.1} s)",
                cp.l1, cp.good_fraction
            ));
            let good = cp.good_fraction;
            match report.as_mut() {
                Some(rep) => rep.checkpoints.push(cp),
                None => report = Some(r),
            }
            if good < GOOD_FRACTION_FLOOR {
                if let Some(rep) = &report {
                    ctx.write_json(format!("{dir}/report.json"), rep)?;
                }
                return Err(CliError::Numerical(format!(
                    "{dir} t={label}: only {:.1}% of backtracked points are good",
                    100.0 * good
                )));
            }
        }
        let report = report.expect("schedule is nonempty");
        ctx.write_json(format!("{dir}/report.json"), &report)?;
        reports.push(report);
    }
    let outcome = RelaxOutcome { reports };
    ctx.write_json("report.json", &outcome)?;
    Ok(outcome)
}
