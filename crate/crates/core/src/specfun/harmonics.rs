//! Spherical harmonics (Condon–Shortley phase) and two-component spinor
//! spherical harmonics.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpecfunError;

/// A half-integer (or integer) stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    /// Exact conversion; `None` unless `v` is a multiple of 1/2.
    pub fn from_f64(v: f64) -> Option<Self> {
        let t = 2.0 * v;
        if t.is_finite() && t.fract() == 0.0 && t.abs() < i32::MAX as f64 {
            Some(Self(t as i32))
        } else {
            None
        }
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for HalfInteger {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Self::from_f64(v).ok_or_else(|| serde::de::Error::custom(format!("{v} is not a multiple of 1/2")))
    }
}

/// Labels of a spin-angular function 𝒴^{j3}_{j l}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinorHarmonicSpec {
    j: HalfInteger,
    l: u32,
    j3: HalfInteger,
}

impl SpinorHarmonicSpec {
    pub fn new(j: HalfInteger, l: u32, j3: HalfInteger) -> Result<Self, SpecfunError> {
        let bad = || SpecfunError::InvalidSpinorHarmonic {
            j: j.value(),
            l,
            j3: j3.value(),
        };
        if !j.is_half_odd() || !j3.is_half_odd() || j.twice() <= 0 {
            return Err(bad());
        }
        let two_l = 2 * l as i32;
        if j.twice() != two_l + 1 && j.twice() != two_l - 1 {
            return Err(bad());
        }
        if j3.twice().abs() > j.twice() {
            return Err(bad());
        }
        Ok(Self { j, l, j3 })
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn j3(&self) -> HalfInteger {
        self.j3
    }

    /// Clebsch–Gordan weights `(up, down)` multiplying `Y_l^{j3-1/2}` and
    /// `Y_l^{j3+1/2}`.
    pub fn coefficients(&self) -> (f64, f64) {
        let l = self.l as f64;
        let m = self.j3.value();
        let denom = 2.0 * l + 1.0;
        let plus = ((l + m + 0.5) / denom).max(0.0).sqrt();
        let minus = ((l - m + 0.5) / denom).max(0.0).sqrt();
        if self.j.twice() == 2 * self.l as i32 + 1 {
            (plus, minus)
        } else {
            (-minus, plus)
        }
    }
}

/// Associated Legendre `P_l^m(x)` for `0 <= m <= l`, Condon–Shortley phase
/// included.
fn legendre(l: u32, m: u32, x: f64) -> f64 {
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= -((2 * i + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut p = 0.0;
    for ll in (m + 2)..=l {
        p = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = p;
    }
    p
}

/// Orthonormal spherical harmonic `Y_l^m(θ, φ)`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64, SpecfunError> {
    if m.unsigned_abs() > l {
        return Err(SpecfunError::Order {
            function: "spherical_harmonic",
            order: m as i64,
        });
    }
    Ok(ylm(l, m, theta.cos(), phi))
}

fn ylm(l: u32, m: i32, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let mut ratio = 1.0; // (l-m)!/(l+m)!
    for k in (l - am + 1)..=(l + am) {
        ratio /= k as f64;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let v = norm * legendre(l, am, cos_theta);
    let y = Complex64::from_polar(v, am as f64 * phi);
    if m < 0 {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    }
}

/// Two-component spinor spherical harmonic 𝒴^{j3}_{j l}(θ, φ).
pub fn spinor_spherical_harmonic(spec: &SpinorHarmonicSpec, theta: f64, phi: f64) -> [Complex64; 2] {
    let (a, b) = spec.coefficients();
    let l = spec.l;
    let m_up = (spec.j3.twice() - 1) / 2;
    let m_down = (spec.j3.twice() + 1) / 2;
    let ct = theta.cos();
    let pick = |m: i32| {
        if m.unsigned_abs() > l {
            Complex64::new(0.0, 0.0)
        } else {
            ylm(l, m, ct, phi)
        }
    };
    [pick(m_up) * a, pick(m_down) * b]
}
