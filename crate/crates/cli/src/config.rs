//! Experiment configuration, read from TOML.

use std::path::{Path, PathBuf};

use pilotwave::dynamics::IntegratorConfig;
use pilotwave::modes::{CavityParams, PlaneWaveSpec};
use pilotwave::relaxation::{CoarseGrainSpec, LatticeGrid};
use pilotwave::specfun::HalfInteger;
use pilotwave::spinors::Dimension;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError, CliResult};

/// Listed energies must agree with freshly solved roots to this relative
/// tolerance.
pub const ENERGY_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSelection {
    Dirac,
    Majorana,
    Both,
}

impl KindSelection {
    pub fn dirac(self) -> bool {
        matches!(self, Self::Dirac | Self::Both)
    }

    pub fn majorana(self) -> bool {
        matches!(self, Self::Majorana | Self::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialDensity {
    /// `ρ₁` on a disk or `ρ₂` on a ball, sized to the cavity radius.
    #[default]
    Cavity,
    /// `ψ†ψ` at the initial time.
    Equilibrium,
}

/// One cavity eigenmode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    /// Disk quantum number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qn: Option<i32>,
    /// Ball channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<HalfInteger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j3: Option<HalfInteger>,
    /// Checked against the solved roots; when absent the root with index
    /// `radial` is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default)]
    pub radial: usize,
    #[serde(default)]
    pub phase: f64,
    /// Defaults to equal weights `1/√n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub dimension: Dimension,
    pub kind: KindSelection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavityParams>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plane_waves: Vec<PlaneWaveSpec>,
    /// Majorana normalization for plane-wave systems, which have no finite
    /// norm; 2 gives unit density for a single unit-weight wave.
    #[serde(default = "two")]
    pub plane_wave_normalization: f64,
    #[serde(default)]
    pub initial_density: InitialDensity,
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    #[serde(default)]
    pub t_initial: f64,
    pub checkpoints: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub starts: Vec<Vec<f64>>,
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    pub sample_interval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubComptonConfig {
    pub center: Vec<f64>,
    pub edge: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub times: Vec<f64>,
    /// Second resolution for the robustness comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_samples: Option<usize>,
}

fn default_samples() -> usize {
    33
}

/// Full-size replacements applied with `--long-run`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongRunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<LatticeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcompton_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Long backtracks need tighter tolerances to stay certified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorConfig>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<LatticeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_grain: Option<CoarseGrainSpec>,
    /// Overlapping layout written alongside, for smooth figures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<CoarseGrainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcompton: Option<SubComptonConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub long_run: Option<LongRunConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn finite_times(name: &str, ts: &[f64]) -> CliResult<()> {
    if ts.is_empty() {
        return Err(CliError::Config(format!("{name} is empty")));
    }
    if let Some(t) = ts.iter().find(|t| !t.is_finite()) {
        return Err(CliError::Config(format!("{name} contains {t}")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    /// Swap in the `[long_run]` replacements.
    pub fn with_long_run(mut self) -> Self {
        let Some(lr) = self.long_run.clone() else {
            return self;
        };
        if let Some(g) = lr.grid {
            self.grid = Some(g);
        }
        if let (Some(c), Some(s)) = (lr.checkpoints, self.schedule.as_mut()) {
            s.checkpoints = c;
        }
        if let (Some(t), Some(s)) = (lr.subcompton_times, self.subcompton.as_mut()) {
            s.times = t;
        }
        if let (Some(t), Some(tr)) = (lr.t_end, self.trajectory.as_mut()) {
            tr.t_end = t;
        }
        if let Some(i) = lr.integrator {
            self.integrator = i;
        }
        self
    }

    /// Check everything that does not need eigenvalue solves.
    pub fn validate(&self) -> CliResult<()> {
        let sys = &self.system;
        let dim = sys.dimension;
        self.integrator.validate().map_err(config_err)?;
        if let Some(i) = self.long_run.as_ref().and_then(|l| l.integrator.as_ref()) {
            i.validate().map_err(config_err)?;
        }
        match (&sys.cavity, sys.plane_waves.is_empty()) {
            (Some(c), true) => {
                c.validate().map_err(config_err)?;
                if sys.modes.is_empty() {
                    return Err(CliError::Config("cavity system lists no modes".into()));
                }
                for m in &sys.modes {
                    validate_mode(m, dim, c)?;
                }
            }
            (None, false) => {
                if !sys.modes.is_empty() {
                    return Err(CliError::Config("modes need a cavity".into()));
                }
                if !(sys.plane_wave_normalization > 0.0 && sys.plane_wave_normalization.is_finite()) {
                    return Err(CliError::Config("plane_wave_normalization must be positive".into()));
                }
            }
            (Some(_), false) => return Err(CliError::Config("give either a cavity or plane waves, not both".into())),
            (None, true) => return Err(CliError::Config("system has neither a cavity nor plane waves".into())),
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(config_err)?;
            if g.dimension() != dim {
                return Err(CliError::Config(format!(
                    "grid has {} axes for a {}-dimensional system",
                    g.axes(),
                    dim.spatial()
                )));
            }
        }
        if let Some(s) = &self.schedule {
            finite_times("schedule.checkpoints", &s.checkpoints)?;
            if !s.t_initial.is_finite() {
                return Err(CliError::Config("schedule.t_initial is not finite".into()));
            }
        }
        if let Some(t) = &self.trajectory {
            if t.starts.is_empty() {
                return Err(CliError::Config("trajectory.starts is empty".into()));
            }
            for s in &t.starts {
                point(s, dim, "trajectory start")?;
            }
            if !(t.sample_interval > 0.0 && t.sample_interval.is_finite()) {
                return Err(CliError::Config("trajectory.sample_interval must be positive".into()));
            }
            if !(t.t_start.is_finite() && t.t_end.is_finite()) {
                return Err(CliError::Config("trajectory times must be finite".into()));
            }
        }
        if let Some(s) = &self.subcompton {
            point(&s.center, dim, "subcompton.center")?;
            finite_times("subcompton.times", &s.times)?;
            if !(s.edge > 0.0 && s.edge.is_finite()) || s.samples == 0 || s.compare_samples == Some(0) {
                return Err(CliError::Config(
                    "subcompton needs a positive edge and sample count".into(),
                ));
            }
        }
        Ok(())
    }
}

fn validate_mode(m: &ModeConfig, dim: Dimension, cavity: &CavityParams) -> CliResult<()> {
    match dim {
        Dimension::Two => {
            if m.qn.is_none() || m.kappa.is_some() || m.j.is_some() || m.j3.is_some() {
                return Err(CliError::Config("disk modes take `qn` only".into()));
            }
        }
        Dimension::Three => {
            let (Some(kappa), Some(j), Some(j3)) = (m.kappa, m.j, m.j3) else {
                return Err(CliError::Config("ball modes need `kappa`, `j` and `j3`".into()));
            };
            if m.qn.is_some() {
                return Err(CliError::Config("ball modes take `kappa`, not `qn`".into()));
            }
            if kappa == 0 {
                return Err(CliError::Config("kappa must be nonzero".into()));
            }
            if j.twice() as i64 + 1 != 2 * kappa.unsigned_abs() as i64 {
                return Err(CliError::Config(format!(
                    "j = {j} is inconsistent with kappa = {kappa}"
                )));
            }
            if j3.twice().abs() > j.twice() || !j3.is_half_odd() {
                return Err(CliError::Config(format!("j3 = {j3} is not a projection of j = {j}")));
            }
        }
    }
    if let Some(e) = m.energy {
        if !(e > cavity.m_in && e < cavity.m_out) {
            return Err(CliError::Config(format!(
                "energy {e} lies outside ({}, {})",
                cavity.m_in, cavity.m_out
            )));
        }
    }
    if let Some(w) = m.weight {
        if !w.is_finite() {
            return Err(CliError::Config("mode weight is not finite".into()));
        }
    }
    if !m.phase.is_finite() {
        return Err(CliError::Config("mode phase is not finite".into()));
    }
    Ok(())
}

/// A configured point padded to three coordinates.
pub fn point(v: &[f64], dim: Dimension, what: &str) -> CliResult<[f64; 3]> {
    if v.len() != dim.spatial() || v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config(format!(
            "{what} {v:?} needs {} finite coordinates",
            dim.spatial()
        )));
    }
    let mut p = [0.0; 3];
    p[..v.len()].copy_from_slice(v);
    Ok(p)
}
