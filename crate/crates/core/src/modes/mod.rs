//! Concrete spinor fields: plane waves, superpositions, the Majorana
//! construction and confined cavity eigenmodes.

mod ball;
mod check;
mod combine;
mod disk;
mod plane;
mod roots;
pub mod tables;

pub use ball::{eigenmode_3d, solve_eigenvalues_3d, solve_eigenvalues_3d_scan, BallField, BallMode};
pub use check::{continuity_residual, dirac_residual};
pub use combine::{
    majorana_from_dirac, normalize_majorana_ball, normalize_majorana_disk, superpose, Majorana, Superposition,
};
pub use disk::{eigenmode_2d, solve_eigenvalues_2d, solve_eigenvalues_2d_scan, DiskField, DiskMode};
pub use plane::{plane_wave_dirac, PlaneWave, PlaneWaveSpec};
pub use roots::{bracket_roots, ROOT_TOL, SCAN_STEPS};

use serde::{Deserialize, Serialize};

use crate::specfun::SpecfunError;
use crate::spinors::{Dimension, FieldKind, MassProfile};

/// Distance beyond the boundary, in decay lengths, at which exterior
/// quadratures are truncated.
pub const EXTERIOR_DECAY_LENGTHS: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModesError {
    #[error("invalid cavity: {0}")]
    InvalidCavity(String),
    #[error("energy {energy} lies outside the bound-state window ({lo}, {hi})")]
    EnergyOutsideWindow { energy: f64, lo: f64, hi: f64 },
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("cannot combine fields: {0}")]
    Incompatible(String),
    #[error("expected a {expected:?} field, got {found:?}")]
    WrongKind { expected: FieldKind, found: FieldKind },
    #[error("normalization must be positive and finite, got {0}")]
    InvalidNormalization(f64),
    #[error("invalid plane wave: {0}")]
    InvalidPlaneWave(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Radius and the two masses of a confining cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub radius: f64,
    pub m_in: f64,
    pub m_out: f64,
}

impl CavityParams {
    pub fn new(radius: f64, m_in: f64, m_out: f64) -> Result<Self, ModesError> {
        let c = Self { radius, m_in, m_out };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ModesError> {
        let finite = self.radius.is_finite() && self.m_in.is_finite() && self.m_out.is_finite();
        if !finite || self.radius <= 0.0 {
            return Err(ModesError::InvalidCavity(format!(
                "radius must be positive and finite, got {}",
                self.radius
            )));
        }
        if !(self.m_in > 0.0 && self.m_in < self.m_out) {
            return Err(ModesError::InvalidCavity(format!(
                "need 0 < m_in < m_out, got m_in={} m_out={}",
                self.m_in, self.m_out
            )));
        }
        Ok(())
    }

    pub fn mass_profile(&self) -> MassProfile {
        MassProfile::Piecewise {
            inner: self.m_in,
            outer: self.m_out,
            radius: self.radius,
        }
    }

    /// Open energy interval holding bound states.
    pub fn window(&self) -> (f64, f64) {
        (self.m_in, self.m_out)
    }

    pub(crate) fn check_energy(&self, energy: f64) -> Result<(), ModesError> {
        if energy > self.m_in && energy < self.m_out {
            Ok(())
        } else {
            Err(ModesError::EnergyOutsideWindow {
                energy,
                lo: self.m_in,
                hi: self.m_out,
            })
        }
    }

    /// Interior and exterior wave numbers `(√(E²−m²), √(M²−E²))`.
    pub fn wave_numbers(&self, energy: f64) -> (f64, f64) {
        (
            ((energy - self.m_in) * (energy + self.m_in)).max(0.0).sqrt(),
            ((self.m_out - energy) * (self.m_out + energy)).max(0.0).sqrt(),
        )
    }
}

pub(crate) fn check_dimension(found: Dimension, expected: Dimension) -> Result<(), ModesError> {
    if found == expected {
        Ok(())
    } else {
        Err(ModesError::Incompatible(format!(
            "dimension {} where {} was expected",
            found.spatial(),
            expected.spatial()
        )))
    }
}
