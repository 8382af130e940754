//! Fields built from a validated configuration.

use std::sync::Arc;

use pilotwave::modes::{
    eigenmode_2d, eigenmode_3d, majorana_from_dirac, normalize_majorana_ball, normalize_majorana_disk,
    solve_eigenvalues_2d, solve_eigenvalues_3d, BallField, CavityParams, DiskField, PlaneWave,
};
use pilotwave::relaxation::{rho1, rho2};
use pilotwave::spinors::{Dimension, FieldKind, SpinorField, Vec3};
use serde::Serialize;

use crate::config::{ExperimentConfig, InitialDensity, ModeConfig, ENERGY_MATCH_TOL};
use crate::error::{config_err, numerical_err, CliError, CliResult};

pub type SharedField = Arc<dyn SpinorField>;

/// A configured mode with its solved energy.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedMode {
    pub label: String,
    pub energy: f64,
    pub listed: Option<f64>,
}

pub struct System {
    pub dimension: Dimension,
    pub cavity: Option<CavityParams>,
    pub dirac: SharedField,
    pub majorana: Option<SharedField>,
    pub modes: Vec<ResolvedMode>,
}

impl System {
    /// The fields selected by `kind`, Dirac first.
    pub fn selected(&self, cfg: &ExperimentConfig) -> Vec<(FieldKind, SharedField)> {
        let mut out = Vec::new();
        if cfg.system.kind.dirac() {
            out.push((FieldKind::Dirac, self.dirac.clone()));
        }
        if let (true, Some(m)) = (cfg.system.kind.majorana(), &self.majorana) {
            out.push((FieldKind::Majorana, m.clone()));
        }
        out
    }
}

fn label(m: &ModeConfig) -> String {
    match (m.qn, m.kappa) {
        (Some(q), _) => format!("qn={q}"),
        (_, Some(k)) => format!(
            "kappa={k} j={} j3={}",
            m.j.map(|v| v.to_string()).unwrap_or_default(),
            m.j3.map(|v| v.to_string()).unwrap_or_default()
        ),
        _ => "mode".into(),
    }
}

/// Energy of `m` from a fresh root solve, checked against the listed one.
pub fn resolve_energy(m: &ModeConfig, dim: Dimension, cavity: &CavityParams) -> CliResult<f64> {
    let roots = match dim {
        Dimension::Two => solve_eigenvalues_2d(cavity, m.qn.unwrap_or(0)),
        Dimension::Three => solve_eigenvalues_3d(cavity, m.kappa.unwrap_or(0)),
    }
    .map_err(config_err)?;
    if roots.is_empty() {
        return Err(CliError::Config(format!("{}: no bound state in the window", label(m))));
    }
    match m.energy {
        None => roots.get(m.radial).copied().ok_or_else(|| {
            CliError::Config(format!(
                "{}: only {} roots, radial index {} requested",
                label(m),
                roots.len(),
                m.radial
            ))
        }),
        Some(e) => {
            let best = roots
                .iter()
                .copied()
                .min_by(|a, b| (a - e).abs().total_cmp(&(b - e).abs()))
                .expect("nonempty");
            let rel = (best - e).abs() / best;
            if rel > ENERGY_MATCH_TOL {
                return Err(CliError::Config(format!(
                    "{}: listed energy {e} differs from the solved eigenvalue {best} by {rel:.3e} (relative)",
                    label(m)
                )));
            }
            Ok(best)
        }
    }
}

fn weights(modes: &[ModeConfig]) -> Vec<f64> {
    let equal = (modes.len() as f64).sqrt().recip();
    modes.iter().map(|m| m.weight.unwrap_or(equal)).collect()
}

/// Build the configured fields. With `solve` false the listed energies are
/// used as given, which lets verification inspect off-eigenvalue input.
pub fn build_system(cfg: &ExperimentConfig, solve: bool) -> CliResult<System> {
    let sys = &cfg.system;
    let dim = sys.dimension;
    let Some(cavity) = sys.cavity else {
        let waves = PlaneWave::new(&sys.plane_waves, dim).map_err(config_err)?;
        let majorana = majorana_from_dirac(waves.clone(), sys.plane_wave_normalization).map_err(config_err)?;
        return Ok(System {
            dimension: dim,
            cavity: None,
            dirac: Arc::new(waves),
            majorana: Some(Arc::new(majorana)),
            modes: Vec::new(),
        });
    };
    let ws = weights(&sys.modes);
    let mut resolved = Vec::with_capacity(sys.modes.len());
    for m in &sys.modes {
        let energy = match (solve, m.energy) {
            (false, Some(e)) => e,
            _ => resolve_energy(m, dim, &cavity)?,
        };
        resolved.push(ResolvedMode {
            label: label(m),
            energy,
            listed: m.energy,
        });
    }
    let (dirac, majorana): (SharedField, Option<SharedField>) = match dim {
        Dimension::Two => {
            let modes = sys
                .modes
                .iter()
                .zip(&resolved)
                .zip(&ws)
                .map(|((m, r), &w)| eigenmode_2d(&cavity, m.qn.unwrap_or(0), r.energy, m.phase, w))
                .collect::<Result<Vec<_>, _>>()
                .map_err(config_err)?;
            let field = DiskField::new(modes).map_err(config_err)?;
            let maj = if sys.kind.majorana() {
                Some(Arc::new(normalize_majorana_disk(field.clone(), &cavity).map_err(numerical_err)?) as SharedField)
            } else {
                None
            };
            (Arc::new(field), maj)
        }
        Dimension::Three => {
            let modes = sys
                .modes
                .iter()
                .zip(&resolved)
                .zip(&ws)
                .map(|((m, r), &w)| {
                    eigenmode_3d(
                        &cavity,
                        m.kappa.unwrap_or(0),
                        m.j.expect("validated"),
                        m.j3.expect("validated"),
                        r.energy,
                        m.phase,
                        w,
                    )
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(config_err)?;
            let field = BallField::new(modes).map_err(config_err)?;
            let maj = if sys.kind.majorana() {
                Some(Arc::new(normalize_majorana_ball(field.clone(), &cavity).map_err(numerical_err)?) as SharedField)
            } else {
                None
            };
            (Arc::new(field), maj)
        }
    };
    Ok(System {
        dimension: dim,
        cavity: Some(cavity),
        dirac,
        majorana,
        modes: resolved,
    })
}

pub type Density = Box<dyn Fn(&Vec3) -> f64 + Sync + Send>;

/// Initial density selected by the configuration.
pub fn initial_density(cfg: &ExperimentConfig, field: &SharedField, t_i: f64) -> CliResult<Density> {
    match cfg.system.initial_density {
        InitialDensity::Equilibrium => {
            let f = field.clone();
            Ok(Box::new(move |x: &Vec3| f.evaluate(t_i, x).norm_sqr()))
        }
        InitialDensity::Cavity => {
            let cavity = cfg
                .system
                .cavity
                .ok_or_else(|| CliError::Config("the cavity initial density needs a cavity".into()))?;
            let r0 = cavity.radius;
            Ok(match cfg.system.dimension {
                Dimension::Two => Box::new(move |x: &Vec3| rho1(x[0].hypot(x[1]), r0)),
                Dimension::Three => {
                    Box::new(move |x: &Vec3| rho2((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt(), r0))
                }
            })
        }
    }
}
