//! Spinor algebra in 3+1 and 2+1 dimensions.
//!
//! Representations are fixed once for the whole crate:
//!
//! * 3+1: Weyl basis, `γ^μ = [[0, σ^μ], [σ̃^μ, 0]]` with `σ̃^j = -σ^j`, so
//!   `α_k = diag(-σ_k, σ_k)` and `β = γ^0 = [[0, 1], [1, 0]]`.
//! * 2+1: `α_1 = σ_1`, `α_2 = σ_2`, `β = σ_3`.
//!
//! Charge conjugation is `iγ²ψ*` in 3+1 and `iσ₃σ₂ψ* = σ₁ψ*` in 2+1. Both
//! maps square to `+1`.

mod algebra;
mod field;

pub use algebra::{charge_conjugate, current, pauli_current, Current};
pub use field::{velocity, FieldKind, MassProfile, NodeError, SpinorField};

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A spatial point; 2+1 fields ignore the third coordinate.
pub type Vec3 = [f64; 3];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    /// 2+1 spacetime, two-component spinors.
    Two,
    /// 3+1 spacetime, four-component spinors.
    Three,
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.spatial() as u8)
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Self::from_spatial(n as usize)
            .ok_or_else(|| serde::de::Error::custom(format!("spatial dimension {n} is not 2 or 3")))
    }
}

impl Dimension {
    pub fn from_spatial(n: usize) -> Option<Self> {
        match n {
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            _ => None,
        }
    }

    pub const fn spatial(self) -> usize {
        match self {
            Self::Two => 2,
            Self::Three => 3,
        }
    }

    pub const fn components(self) -> usize {
        match self {
            Self::Two => 2,
            Self::Three => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpinorError {
    #[error("spinor has {found} components, {dimension:?} needs {expected}")]
    LengthMismatch {
        dimension: Dimension,
        expected: usize,
        found: usize,
    },
    #[error("spinor component is not finite")]
    NonFinite,
}

/// A two- or four-component complex spinor.
///
/// Two-component spinors keep the unused tail at zero, so arithmetic can act
/// on all four slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    c: [Complex64; 4],
    dim: Dimension,
}

impl Spinor {
    pub fn zero(dim: Dimension) -> Self {
        Self { c: [ZERO; 4], dim }
    }

    pub const fn two(a: Complex64, b: Complex64) -> Self {
        Self {
            c: [a, b, ZERO, ZERO],
            dim: Dimension::Two,
        }
    }

    pub const fn four(c: [Complex64; 4]) -> Self {
        Self {
            c,
            dim: Dimension::Three,
        }
    }

    pub fn from_components(dim: Dimension, comps: &[Complex64]) -> Result<Self, SpinorError> {
        if comps.len() != dim.components() {
            return Err(SpinorError::LengthMismatch {
                dimension: dim,
                expected: dim.components(),
                found: comps.len(),
            });
        }
        if comps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpinorError::NonFinite);
        }
        let mut s = Self::zero(dim);
        s.c[..comps.len()].copy_from_slice(comps);
        Ok(s)
    }

    pub fn dimension(&self) -> Dimension {
        self.dim
    }

    pub fn components(&self) -> &[Complex64] {
        &self.c[..self.dim.components()]
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.components()[i]
    }

    /// `ψ†ψ`
    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn conj(&self) -> Self {
        let mut s = *self;
        for z in &mut s.c {
            *z = z.conj();
        }
        s
    }

    /// `ψ†φ`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Spinor {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        self
    }
}

impl Sub for Spinor {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        self
    }
}

impl Mul<Complex64> for Spinor {
    type Output = Self;
    fn mul(mut self, rhs: Complex64) -> Self {
        for a in &mut self.c {
            *a *= rhs;
        }
        self
    }
}

impl Mul<f64> for Spinor {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in &mut self.c {
            *a *= rhs;
        }
        self
    }
}

pub(crate) fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
