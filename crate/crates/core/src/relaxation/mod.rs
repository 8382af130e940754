//! Relaxation experiments: transported densities on a lattice, box
//! coarse-graining and sub-Compton cell series.
//!
//! A lattice point `x` at `t_f` is backtracked to `BT(x)` at `t_i`; since
//! `ρ/ψ†ψ` is conserved along trajectories,
//! `ρ(t_f, x) = ψ†ψ(t_f, x) · ρ(t_i, BT(x)) / ψ†ψ(t_i, BT(x))`.

mod coarse;
mod experiment;
mod grid;
mod output;

pub use coarse::{coarse_grain, points_per_cell, CoarseGrainSpec, CoarseGrained};
pub use experiment::{
    checkpoint, evolve_density, relax_experiment, relax_field, resolution_comparison, subcompton_cell, subcompton_scan,
    Checkpoint, CheckpointDensities, Origins, RelaxationReport, ResolutionComparison, SubComptonPoint,
};
pub use grid::{DensityGrid, LatticeGrid};
pub use output::{write_coarse_csv, write_density_csv, write_subcompton_csv, SUBCOMPTON_COLUMNS};

use std::f64::consts::PI;

use crate::dynamics::DynamicsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelaxationError {
    #[error("invalid lattice: {0}")]
    InvalidGrid(String),
    #[error("invalid coarse-graining: {0}")]
    InvalidCoarseGrain(String),
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Initial disk density `2π cos²(πr/2R) / (R²(π²−4))`, zero outside.
pub fn rho1(r: f64, radius: f64) -> f64 {
    if r > radius {
        return 0.0;
    }
    let c = (PI * r / (2.0 * radius)).cos();
    2.0 * PI * c * c / (radius * radius * (PI * PI - 4.0))
}

/// Initial ball density `π² cos(πr/2R) / (8R³(π²−8))`, zero outside.
pub fn rho2(r: f64, radius: f64) -> f64 {
    if r > radius {
        return 0.0;
    }
    let c = (0.5 * PI * r / radius).cos();
    c * PI * PI / (8.0 * radius.powi(3) * (PI * PI - 8.0))
}
