use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Dimension, Spinor, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Dirac,
    Majorana,
}

/// Mass term entering the Dirac equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MassProfile {
    Uniform(f64),
    /// `inner` for `r <= radius`, `outer` beyond.
    Piecewise {
        inner: f64,
        outer: f64,
        radius: f64,
    },
}

impl MassProfile {
    pub fn at(&self, x: &Vec3, dim: Dimension) -> f64 {
        match *self {
            Self::Uniform(m) => m,
            Self::Piecewise { inner, outer, radius } => {
                let r2 = x[..dim.spatial()].iter().map(|v| v * v).sum::<f64>();
                if r2 <= radius * radius {
                    inner
                } else {
                    outer
                }
            }
        }
    }

    /// The mass seen by a configuration that stays inside the confining
    /// region.
    pub fn interior(&self) -> f64 {
        match *self {
            Self::Uniform(m) => m,
            Self::Piecewise { inner, .. } => inner,
        }
    }
}

/// A spinor-valued function of `(t, x)`.
///
/// Implementations are immutable after construction and shared between
/// worker threads.
pub trait SpinorField: Send + Sync {
    fn dimension(&self) -> Dimension;

    fn kind(&self) -> FieldKind;

    fn mass_profile(&self) -> MassProfile;

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor;

    /// Range of the positive energies the field is built from, if known.
    fn energy_range(&self) -> Option<(f64, f64)> {
        None
    }

    /// Period `πE/m²` of the fastest Compton-scale circulation a Majorana
    /// trajectory can perform in this field.
    fn helix_period(&self) -> Option<f64> {
        if self.kind() != FieldKind::Majorana {
            return None;
        }
        let m = self.mass_profile().interior();
        let (e_min, _) = self.energy_range()?;
        (m > 0.0).then(|| std::f64::consts::PI * e_min / (m * m))
    }
}

impl<T: SpinorField + ?Sized> SpinorField for Arc<T> {
    fn dimension(&self) -> Dimension {
        (**self).dimension()
    }
    fn kind(&self) -> FieldKind {
        (**self).kind()
    }
    fn mass_profile(&self) -> MassProfile {
        (**self).mass_profile()
    }
    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        (**self).evaluate(t, x)
    }
    fn energy_range(&self) -> Option<(f64, f64)> {
        (**self).energy_range()
    }
    fn helix_period(&self) -> Option<f64> {
        (**self).helix_period()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("density {density:e} at t={t}, x={x:?} is below the node threshold {threshold:e}")]
pub struct NodeError {
    pub t: f64,
    pub x: Vec3,
    pub density: f64,
    pub threshold: f64,
}

/// Guidance velocity `j/j⁰` at `(t, x)`.
pub fn velocity<F: SpinorField + ?Sized>(field: &F, t: f64, x: &Vec3, node_threshold: f64) -> Result<Vec3, NodeError> {
    let j = field.evaluate(t, x).current();
    if !(j.j0 > node_threshold) {
        return Err(NodeError {
            t,
            x: *x,
            density: j.j0,
            threshold: node_threshold,
        });
    }
    let inv = 1.0 / j.j0;
    Ok([j.jvec[0] * inv, j.jvec[1] * inv, j.jvec[2] * inv])
}
