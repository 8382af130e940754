use pilotwave::modes::{solve_eigenvalues_2d, solve_eigenvalues_3d, CavityParams};
use pilotwave::specfun::HalfInteger;
use pilotwave::spinors::Dimension;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{config_err, CliError, CliResult};
use crate::output::RunContext;

/// Largest `|κ|` whose radial functions are available.
const MAX_KAPPA: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueRow {
    /// `qn` in 2D, `κ` in 3D.
    pub label: i32,
    pub j: Option<HalfInteger>,
    pub j3: HalfInteger,
    pub energy: f64,
}

fn disk_rows(cavity: &CavityParams) -> CliResult<Vec<EigenvalueRow>> {
    let mut rows = Vec::new();
    // Higher |qn| channels only lift the energies, so stop at the first
    // empty channel in each direction.
    for dir in [1, -1] {
        let mut qn = if dir > 0 { 0 } else { -1 };
        loop {
            let roots = solve_eigenvalues_2d(cavity, qn).map_err(config_err)?;
            if roots.is_empty() {
                break;
            }
            for e in roots {
                rows.push(EigenvalueRow {
                    label: qn,
                    j: None,
                    j3: HalfInteger::from_twice(2 * qn + 1),
                    energy: e,
                });
            }
            qn += dir;
        }
    }
    rows.sort_by(|a, b| a.label.cmp(&b.label).then(a.energy.total_cmp(&b.energy)));
    Ok(rows)
}

fn ball_rows(cavity: &CavityParams) -> CliResult<Vec<EigenvalueRow>> {
    let mut rows = Vec::new();
    for kappa in (-MAX_KAPPA..=MAX_KAPPA).filter(|&k| k != 0) {
        let roots = solve_eigenvalues_3d(cavity, kappa).map_err(config_err)?;
        let twice_j = 2 * kappa.abs() - 1;
        for e in roots {
            for twice_j3 in (-twice_j..=twice_j).step_by(2) {
                rows.push(EigenvalueRow {
                    label: kappa,
                    j: Some(HalfInteger::from_twice(twice_j)),
                    j3: HalfInteger::from_twice(twice_j3),
                    energy: e,
                });
            }
        }
    }
    Ok(rows)
}

/// Every bound state in the cavity window, written to `eigenvalues.csv`.
pub fn cmd_eigenvalues(cfg: &ExperimentConfig, ctx: &RunContext) -> CliResult<Vec<EigenvalueRow>> {
    let cavity = cfg
        .system
        .cavity
        .ok_or_else(|| CliError::Config("eigenvalues needs a cavity".into()))?;
    let rows = match cfg.system.dimension {
        Dimension::Two => disk_rows(&cavity)?,
        Dimension::Three => ball_rows(&cavity)?,
    };
    ctx.write_with("eigenvalues.csv", |w| {
        use std::io::Write;
        writeln!(w, "qn_or_kappa,j,j3,energy")?;
        for r in &rows {
            let j = r.j.map(|j| j.value().to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{j},{},{}",
                r.label,
                r.j3.value(),
                pilotwave::io::fmt_float(r.energy)
            )?;
        }
        Ok(())
    })?;
    ctx.progress(format!("{} eigenvalues written", rows.len()));
    Ok(rows)
}
