//! Bound states of the three-dimensional ball cavity.
//!
//! Radial functions are derived in the Dirac representation, where the
//! spinor reads `(g 𝒴_{l_A}, i f 𝒴_{l_B})`, and are rotated into the Weyl
//! basis on evaluation.

use num_complex::Complex64;

use super::roots::{bracket_roots, SCAN_STEPS};
use super::{CavityParams, ModesError, EXTERIOR_DECAY_LENGTHS};
use crate::quadrature::GaussLegendre;
use crate::specfun::{sph_bessel_j, sph_bessel_k, spinor_spherical_harmonic, HalfInteger, SpinorHarmonicSpec};
use crate::spinors::{Dimension, FieldKind, MassProfile, Spinor, SpinorField, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(l(κ), lm(κ))`: orbital momenta of the upper and lower components.
fn orbitals(kappa: i32) -> Result<(u32, u32), ModesError> {
    match kappa {
        0 => Err(ModesError::InvalidQuantumNumbers("kappa must be nonzero".into())),
        k if k > 0 => Ok((k as u32, (k - 1) as u32)),
        k => Ok(((-k - 1) as u32, (-k) as u32)),
    }
}

fn matching(cavity: &CavityParams, kappa: i32, la: u32, lb: u32, e: f64) -> f64 {
    let (p, q) = cavity.wave_numbers(e);
    let (m, big_m, r) = (cavity.m_in, cavity.m_out, cavity.radius);
    let sign = kappa.signum() as f64;
    let ja = sph_bessel_j(la, p * r).unwrap_or(f64::NAN);
    let jb = sph_bessel_j(lb, p * r).unwrap_or(f64::NAN);
    let ka = sph_bessel_k(la, q * r).unwrap_or(f64::NAN);
    let kb = sph_bessel_k(lb, q * r).unwrap_or(f64::NAN);
    (e + m) * q * ja * kb + sign * (e + big_m) * p * ka * jb
}

/// Energies of the bound states in the `κ` channel, ascending.
pub fn solve_eigenvalues_3d(cavity: &CavityParams, kappa: i32) -> Result<Vec<f64>, ModesError> {
    solve_eigenvalues_3d_scan(cavity, kappa, SCAN_STEPS)
}

/// Same as [`solve_eigenvalues_3d`] with an explicit scan resolution.
pub fn solve_eigenvalues_3d_scan(cavity: &CavityParams, kappa: i32, steps: usize) -> Result<Vec<f64>, ModesError> {
    cavity.validate()?;
    let (la, lb) = orbitals(kappa)?;
    // Surface unsupported orders as an error instead of NaN brackets.
    sph_bessel_j(la.max(lb), 1.0)?;
    let lo = cavity.m_in + 1e-9;
    let hi = cavity.m_out - 1e-9;
    Ok(bracket_roots(|e| matching(cavity, kappa, la, lb, e), lo, hi, steps))
}

/// One normalized ball eigenmode with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMode {
    cavity: CavityParams,
    kappa: i32,
    j: HalfInteger,
    j3: HalfInteger,
    energy: f64,
    phase: f64,
    weight: f64,
    harm_a: SpinorHarmonicSpec,
    harm_b: SpinorHarmonicSpec,
    p_int: f64,
    p_ext: f64,
    /// `B/A`
    ratio: f64,
    coeff: Complex64,
}

/// Ball eigenmode `(κ, j, j3)` at `energy`, normalized and multiplied by
/// `weight·e^{i·phase}`.
pub fn eigenmode_3d(
    cavity: &CavityParams,
    kappa: i32,
    j: HalfInteger,
    j3: HalfInteger,
    energy: f64,
    phase: f64,
    weight: f64,
) -> Result<BallMode, ModesError> {
    cavity.validate()?;
    cavity.check_energy(energy)?;
    let (la, lb) = orbitals(kappa)?;
    if j.twice() + 1 != 2 * kappa.abs() {
        return Err(ModesError::InvalidQuantumNumbers(format!(
            "kappa={kappa} requires j={}, got j={j}",
            HalfInteger::from_twice(2 * kappa.abs() - 1)
        )));
    }
    if !phase.is_finite() || !weight.is_finite() {
        return Err(ModesError::InvalidQuantumNumbers("non-finite phase or weight".into()));
    }
    let bad_j3 = |_| ModesError::InvalidQuantumNumbers(format!("j3={j3} is not allowed for j={j}"));
    let harm_a = SpinorHarmonicSpec::new(j, la, j3).map_err(bad_j3)?;
    let harm_b = SpinorHarmonicSpec::new(j, lb, j3).map_err(bad_j3)?;
    sph_bessel_j(la.max(lb), 1.0)?;

    let (p, q) = cavity.wave_numbers(energy);
    let r = cavity.radius;
    let ratio = sph_bessel_j(la, p * r)? / sph_bessel_k(la, q * r)?;
    let mut mode = BallMode {
        cavity: *cavity,
        kappa,
        j,
        j3,
        energy,
        phase,
        weight,
        harm_a,
        harm_b,
        p_int: p,
        p_ext: q,
        ratio,
        coeff: Complex64::new(1.0, 0.0),
    };
    let density = |s: f64| {
        let (g, f) = mode.radial(s);
        s * s * (g * g + f * f)
    };
    let interior = GaussLegendre::new(256).integrate(0.0, r, density);
    let exterior = GaussLegendre::new(32).integrate_composite(r, r + EXTERIOR_DECAY_LENGTHS / q, 8, density);
    mode.coeff = Complex64::from_polar(weight / (interior + exterior).sqrt(), phase);
    Ok(mode)
}

impl BallMode {
    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn j3(&self) -> HalfInteger {
        self.j3
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn cavity(&self) -> &CavityParams {
        &self.cavity
    }

    /// Unnormalized radial pair `(g, f)`.
    pub fn radial(&self, r: f64) -> (f64, f64) {
        self.radial_branch(r, r > self.cavity.radius)
    }

    fn radial_branch(&self, r: f64, exterior: bool) -> (f64, f64) {
        let (la, lb) = (self.harm_a.l(), self.harm_b.l());
        if !exterior {
            let x = self.p_int * r;
            let s = self.kappa.signum() as f64 * self.p_int / (self.energy + self.cavity.m_in);
            (
                sph_bessel_j(la, x).unwrap_or(0.0),
                s * sph_bessel_j(lb, x).unwrap_or(0.0),
            )
        } else {
            let x = self.p_ext * r;
            let s = -self.p_ext / (self.energy + self.cavity.m_out);
            (
                self.ratio * sph_bessel_k(la, x).unwrap_or(0.0),
                s * self.ratio * sph_bessel_k(lb, x).unwrap_or(0.0),
            )
        }
    }

    /// Jump of `f` across `r = R`, relative to its interior value.
    pub fn boundary_mismatch(&self) -> f64 {
        let r = self.cavity.radius;
        let (_, inside) = self.radial_branch(r, false);
        let (_, outside) = self.radial_branch(r, true);
        (inside - outside).abs() / inside.abs().max(outside.abs()).max(f64::MIN_POSITIVE)
    }

    /// Dirac-representation halves `(ψ_A, ψ_B)` of the unnormalized mode.
    fn dirac_halves(&self, r: f64, theta: f64, phi: f64) -> ([Complex64; 2], [Complex64; 2]) {
        let (g, f) = self.radial(r);
        let ya = spinor_spherical_harmonic(&self.harm_a, theta, phi);
        let yb = spinor_spherical_harmonic(&self.harm_b, theta, phi);
        ([ya[0] * g, ya[1] * g], [I * f * yb[0], I * f * yb[1]])
    }

    fn add_to(&self, t: f64, sph: &(f64, f64, f64), acc: &mut [Complex64; 4]) {
        let (a, b) = self.dirac_halves(sph.0, sph.1, sph.2);
        let c = self.coeff * Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -self.energy * t);
        acc[0] += c * (a[0] - b[0]);
        acc[1] += c * (a[1] - b[1]);
        acc[2] += c * (a[0] + b[0]);
        acc[3] += c * (a[1] + b[1]);
    }
}

fn spherical(x: &Vec3) -> (f64, f64, f64) {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    (r, (x[2] / r).clamp(-1.0, 1.0).acos(), x[1].atan2(x[0]))
}

impl SpinorField for BallMode {
    fn dimension(&self) -> Dimension {
        Dimension::Three
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Dirac
    }

    fn mass_profile(&self) -> MassProfile {
        self.cavity.mass_profile()
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        self.add_to(t, &spherical(x), &mut acc);
        Spinor::four(acc)
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        Some((self.energy, self.energy))
    }
}

/// Sum of ball eigenmodes sharing one cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct BallField {
    cavity: CavityParams,
    modes: Vec<BallMode>,
}

impl BallField {
    pub fn new(modes: Vec<BallMode>) -> Result<Self, ModesError> {
        let first = modes
            .first()
            .ok_or_else(|| ModesError::Incompatible("no modes given".into()))?;
        let cavity = first.cavity;
        if modes.iter().any(|m| m.cavity != cavity) {
            return Err(ModesError::Incompatible("modes belong to different cavities".into()));
        }
        Ok(Self { cavity, modes })
    }

    pub fn modes(&self) -> &[BallMode] {
        &self.modes
    }

    pub fn cavity(&self) -> &CavityParams {
        &self.cavity
    }
}

impl SpinorField for BallField {
    fn dimension(&self) -> Dimension {
        Dimension::Three
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Dirac
    }

    fn mass_profile(&self) -> MassProfile {
        self.cavity.mass_profile()
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let sph = spherical(x);
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for m in &self.modes {
            m.add_to(t, &sph, &mut acc);
        }
        Spinor::four(acc)
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        let lo = self.modes.iter().map(|m| m.energy).fold(f64::INFINITY, f64::min);
        let hi = self.modes.iter().map(|m| m.energy).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}
