use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModesError;
use crate::spinors::{Dimension, FieldKind, MassProfile, Spinor, SpinorField, Vec3};

/// One positive-energy, positive-helicity plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSpec {
    /// In 2+1 only the first two entries are used.
    pub momentum: Vec3,
    pub mass: f64,
    /// Phase angle in radians.
    #[serde(default)]
    pub phase: f64,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl PlaneWaveSpec {
    pub fn new(momentum: Vec3, mass: f64) -> Self {
        Self {
            momentum,
            mass,
            phase: 0.0,
            weight: 1.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    fn momentum_in(&self, dim: Dimension) -> Vec3 {
        match dim {
            Dimension::Two => [self.momentum[0], self.momentum[1], 0.0],
            Dimension::Three => self.momentum,
        }
    }

    pub fn energy(&self, dim: Dimension) -> f64 {
        let p = self.momentum_in(dim);
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + self.mass * self.mass).sqrt()
    }
}

/// Time-independent spinor `u_R(p)`.
pub(crate) fn helicity_spinor(p: &Vec3, mass: f64, dim: Dimension) -> Spinor {
    let pn = crate::spinors::norm3(p);
    let e = (pn * pn + mass * mass).sqrt();
    match dim {
        Dimension::Three => {
            // Helicity-up eigenvector of σ·p̂; p = 0 falls back to ẑ.
            let (theta, phi) = if pn > 0.0 {
                ((p[2] / pn).clamp(-1.0, 1.0).acos(), p[1].atan2(p[0]))
            } else {
                (0.0, 0.0)
            };
            let chi = [
                Complex64::new((0.5 * theta).cos(), 0.0),
                Complex64::from_polar((0.5 * theta).sin(), phi),
            ];
            let a = ((e - pn) / (2.0 * e)).sqrt();
            let b = ((e + pn) / (2.0 * e)).sqrt();
            Spinor::four([chi[0] * a, chi[1] * a, chi[0] * b, chi[1] * b])
        }
        Dimension::Two => {
            let phi = if pn > 0.0 { p[1].atan2(p[0]) } else { 0.0 };
            let a = ((e + mass) / (2.0 * e)).sqrt();
            let b = ((e - mass) / (2.0 * e)).sqrt();
            Spinor::two(Complex64::new(a, 0.0), Complex64::from_polar(b, phi))
        }
    }
}

#[derive(Debug, Clone)]
struct Wave {
    k: Vec3,
    energy: f64,
    amplitude: Spinor,
}

/// A finite sum of Dirac plane waves sharing one mass.
#[derive(Debug, Clone)]
pub struct PlaneWave {
    dim: Dimension,
    mass: f64,
    waves: Vec<Wave>,
}

impl PlaneWave {
    pub fn new(specs: &[PlaneWaveSpec], dim: Dimension) -> Result<Self, ModesError> {
        let first = specs
            .first()
            .ok_or_else(|| ModesError::InvalidPlaneWave("no plane waves given".into()))?;
        let mass = first.mass;
        let mut waves = Vec::with_capacity(specs.len());
        for s in specs {
            if !(s.mass >= 0.0) || !s.mass.is_finite() {
                return Err(ModesError::InvalidPlaneWave(format!("mass {} is negative", s.mass)));
            }
            if s.mass != mass {
                return Err(ModesError::InvalidPlaneWave(format!(
                    "masses {} and {} differ",
                    mass, s.mass
                )));
            }
            let k = s.momentum_in(dim);
            if k.iter().chain([&s.phase, &s.weight]).any(|v| !v.is_finite()) {
                return Err(ModesError::InvalidPlaneWave("non-finite parameter".into()));
            }
            let coeff = Complex64::from_polar(s.weight, s.phase);
            waves.push(Wave {
                k,
                energy: s.energy(dim),
                amplitude: helicity_spinor(&k, mass, dim) * coeff,
            });
        }
        Ok(Self { dim, mass, waves })
    }

    pub fn len(&self) -> usize {
        self.waves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }
}

/// Single plane wave `weight·e^{i·phase}·u_R(p)·e^{−iEt+ip·x}`.
pub fn plane_wave_dirac(spec: &PlaneWaveSpec, dim: Dimension) -> Result<PlaneWave, ModesError> {
    PlaneWave::new(std::slice::from_ref(spec), dim)
}

impl SpinorField for PlaneWave {
    fn dimension(&self) -> Dimension {
        self.dim
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Dirac
    }

    fn mass_profile(&self) -> MassProfile {
        MassProfile::Uniform(self.mass)
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let mut out = Spinor::zero(self.dim);
        for w in &self.waves {
            let arg = -w.energy * t + w.k[0] * x[0] + w.k[1] * x[1] + w.k[2] * x[2];
            let (s, c) = arg.sin_cos();
            out = out + w.amplitude * Complex64::new(c, s);
        }
        out
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        let lo = self.waves.iter().map(|w| w.energy).fold(f64::INFINITY, f64::min);
        let hi = self.waves.iter().map(|w| w.energy).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}
