//! Guidance-equation trajectories: adaptive Dormand–Prince integration with
//! dense output, node detection and round-trip certified backtracking.

mod analysis;
mod dopri;
mod integrator;
mod output;

pub use analysis::{detect_loops, helix_fit, HelixFit, Loop};
pub use integrator::{backtrack, effective_max_step, flow, integrate, Backtrack, FlowEnd};
pub use output::{write_trajectory_csv, TRAJECTORY_COLUMNS_2D, TRAJECTORY_COLUMNS_3D};

use serde::{Deserialize, Serialize};

use crate::spinors::{Dimension, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid integrator setting: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Densities at or below this are treated as nodes.
    pub node_threshold: f64,
    /// Largest accepted distance between a point and its backtracked,
    /// re-integrated image.
    pub round_trip_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: 1.0,
            node_threshold: 1e-14,
            round_trip_tol: 1e-4,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let checks = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("node_threshold", self.node_threshold),
            ("round_trip_tol", self.round_trip_tol),
        ];
        for (name, v) in checks {
            if !(v > 0.0) || !v.is_finite() {
                return Err(DynamicsError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quality {
    Good,
    /// The density fell below the node threshold.
    NearNode,
    /// The step size underflowed or the step budget ran out.
    StepFailure,
    /// Backtracking closed worse than the round-trip tolerance.
    RoundTripMismatch,
}

impl Quality {
    pub fn is_good(self) -> bool {
        self == Quality::Good
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quality::Good => "good",
            Quality::NearNode => "near_node",
            Quality::StepFailure => "step_failure",
            Quality::RoundTripMismatch => "round_trip_mismatch",
        }
    }
}

impl std::fmt::Display for Quality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec3,
    pub v: Vec3,
}

/// Which times [`integrate`] records.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    /// Every accepted step.
    Steps,
    /// `t0, t0 ± dt, …` and the end time.
    Every(f64),
    /// Explicit times, ordered along the direction of integration.
    At(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dimension: Dimension,
    pub samples: Vec<Sample>,
    pub quality: Quality,
    /// Accepted steps.
    pub steps: usize,
    pub rejected: usize,
    /// Last time reached; equals the requested end time when `quality` is
    /// good.
    pub t_end: f64,
    pub x_end: Vec3,
}
