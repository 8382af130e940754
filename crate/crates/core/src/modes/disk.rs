//! Bound states of the two-dimensional disk cavity.

use num_complex::Complex64;

use super::roots::{bracket_roots, SCAN_STEPS};
use super::{CavityParams, ModesError, EXTERIOR_DECAY_LENGTHS};
use crate::quadrature::GaussLegendre;
use crate::specfun::{bessel_j, bessel_j_pair, bessel_j_signed, bessel_k, bessel_k_pair};
use crate::spinors::{Dimension, FieldKind, MassProfile, Spinor, SpinorField, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Orders, angular windings and lower-component signs of one branch.
///
/// `qn = n >= 0` pairs `J_n e^{inθ}` with `J_{n+1} e^{i(n+1)θ}`; `qn = −p`
/// pairs `J_p e^{−ipθ}` with `J_{p−1} e^{−i(p−1)θ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Branch {
    upper: u32,
    lower: u32,
    wind_upper: i32,
    wind_lower: i32,
    sign_int: f64,
    sign_ext: f64,
}

impl Branch {
    fn new(qn: i32) -> Self {
        if qn >= 0 {
            let n = qn as u32;
            Self {
                upper: n,
                lower: n + 1,
                wind_upper: qn,
                wind_lower: qn + 1,
                sign_int: 1.0,
                sign_ext: 1.0,
            }
        } else {
            let p = qn.unsigned_abs();
            Self {
                upper: p,
                lower: p - 1,
                wind_upper: qn,
                wind_lower: qn + 1,
                sign_int: -1.0,
                sign_ext: 1.0,
            }
        }
    }
}

/// Lower-component continuity at `r = R` with the upper components already
/// matched, multiplied through by every denominator so that it has no poles.
fn matching(cavity: &CavityParams, b: &Branch, e: f64) -> f64 {
    let (k, kappa) = cavity.wave_numbers(e);
    let (m, big_m, r) = (cavity.m_in, cavity.m_out, cavity.radius);
    let ju = bessel_j(b.upper, k * r);
    let jl = bessel_j(b.lower, k * r);
    let ku = bessel_k(b.upper, kappa * r).unwrap_or(f64::NAN);
    let kl = bessel_k(b.lower, kappa * r).unwrap_or(f64::NAN);
    b.sign_ext * (e + m) * kappa * ju * kl - b.sign_int * (e + big_m) * k * jl * ku
}

/// Energies of the bound states with quantum number `qn`, ascending.
pub fn solve_eigenvalues_2d(cavity: &CavityParams, qn: i32) -> Result<Vec<f64>, ModesError> {
    solve_eigenvalues_2d_scan(cavity, qn, SCAN_STEPS)
}

/// Same as [`solve_eigenvalues_2d`] with an explicit scan resolution.
pub fn solve_eigenvalues_2d_scan(cavity: &CavityParams, qn: i32, steps: usize) -> Result<Vec<f64>, ModesError> {
    cavity.validate()?;
    let b = Branch::new(qn);
    let lo = cavity.m_in + 1e-9;
    let hi = cavity.m_out - 1e-9;
    Ok(bracket_roots(|e| matching(cavity, &b, e), lo, hi, steps))
}

/// One normalized disk eigenmode with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMode {
    cavity: CavityParams,
    qn: i32,
    energy: f64,
    phase: f64,
    weight: f64,
    branch: Branch,
    k_int: f64,
    k_ext: f64,
    beta: f64,
    lower_int: f64,
    lower_ext: f64,
    /// `weight·e^{i·phase}/√(∫ψ†ψ)` for the unnormalized mode.
    coeff: Complex64,
}

/// Disk eigenmode with quantum number `qn` at energy `energy`, normalized to
/// unit probability and multiplied by `weight·e^{i·phase}`.
///
/// Any energy inside the window is accepted; [`DiskMode::boundary_mismatch`]
/// reports how far it is from being a true eigenvalue.
pub fn eigenmode_2d(
    cavity: &CavityParams,
    qn: i32,
    energy: f64,
    phase: f64,
    weight: f64,
) -> Result<DiskMode, ModesError> {
    cavity.validate()?;
    cavity.check_energy(energy)?;
    if !phase.is_finite() || !weight.is_finite() {
        return Err(ModesError::InvalidQuantumNumbers("non-finite phase or weight".into()));
    }
    let branch = Branch::new(qn);
    let (k, kappa) = cavity.wave_numbers(energy);
    let r = cavity.radius;
    let beta = bessel_j(branch.upper, k * r) / bessel_k(branch.upper, kappa * r)?;
    let lower_int = k / (energy + cavity.m_in);
    let lower_ext = kappa / (energy + cavity.m_out);

    // ∫₀^R r J_n(kr)² dr = R²/2 (J_n² − J_{n−1}J_{n+1}) at kR.
    let bessel_norm = |n: u32| {
        let x = k * r;
        let jn = bessel_j(n, x);
        let below = bessel_j_signed(n as i32 - 1, x);
        0.5 * r * r * (jn * jn - below * bessel_j(n + 1, x))
    };
    let interior = bessel_norm(branch.upper) + lower_int * lower_int * bessel_norm(branch.lower);
    let gl = GaussLegendre::new(32);
    let exterior = gl.integrate_composite(r, r + EXTERIOR_DECAY_LENGTHS / kappa, 8, |s| {
        let ku = bessel_k(branch.upper, kappa * s).unwrap_or(0.0);
        let kl = bessel_k(branch.lower, kappa * s).unwrap_or(0.0);
        s * beta * beta * (ku * ku + lower_ext * lower_ext * kl * kl)
    });
    let total = 2.0 * std::f64::consts::PI * (interior + exterior);
    Ok(DiskMode {
        cavity: *cavity,
        qn,
        energy,
        phase,
        weight,
        branch,
        k_int: k,
        k_ext: kappa,
        beta,
        lower_int,
        lower_ext,
        coeff: Complex64::from_polar(weight / total.sqrt(), phase),
    })
}

fn winding(w: Complex64, n: i32) -> Complex64 {
    let base = if n < 0 { w.conj() } else { w };
    (0..n.unsigned_abs()).fold(Complex64::new(1.0, 0.0), |acc, _| acc * base)
}

impl DiskMode {
    pub fn qn(&self) -> i32 {
        self.qn
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

    /// Exterior amplitude `β` relative to the interior one.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Real radial profiles `(upper, lower)` of the unnormalized mode, the
    /// lower one without its `±i`.
    pub fn radial(&self, r: f64) -> (f64, f64) {
        let b = &self.branch;
        // Orders differ by one; evaluate both with a single call.
        let ordered = |(lo, hi): (f64, f64)| if b.upper < b.lower { (lo, hi) } else { (hi, lo) };
        let base = b.upper.min(b.lower);
        if r <= self.cavity.radius {
            let (ju, jl) = ordered(bessel_j_pair(base, self.k_int * r));
            (ju, b.sign_int * self.lower_int * jl)
        } else {
            let (ku, kl) = ordered(bessel_k_pair(base, self.k_ext * r).unwrap_or((0.0, 0.0)));
            (self.beta * ku, b.sign_ext * self.lower_ext * self.beta * kl)
        }
    }

    /// Jump of the lower component across `r = R`, relative to its interior
    /// value. Zero exactly at an eigenvalue.
    pub fn boundary_mismatch(&self) -> f64 {
        let b = &self.branch;
        let r = self.cavity.radius;
        let inside = b.sign_int * self.lower_int * bessel_j(b.lower, self.k_int * r);
        let outside = b.sign_ext * self.lower_ext * self.beta * bessel_k(b.lower, self.k_ext * r).unwrap_or(0.0);
        (inside - outside).abs() / inside.abs().max(outside.abs()).max(f64::MIN_POSITIVE)
    }

    /// Time-independent part at polar radius `r` and `w = e^{iθ}`.
    fn stationary(&self, r: f64, w: Complex64) -> (Complex64, Complex64) {
        let (up, low) = self.radial(r);
        let b = &self.branch;
        (winding(w, b.wind_upper) * up, I * winding(w, b.wind_lower) * low)
    }

    fn add_to(&self, t: f64, r: f64, w: Complex64, acc: &mut (Complex64, Complex64)) {
        let (a, b) = self.stationary(r, w);
        let c = self.coeff * Complex64::from_polar(1.0, -self.energy * t);
        acc.0 += c * a;
        acc.1 += c * b;
    }
}

fn polar(x: &Vec3) -> (f64, Complex64) {
    let r = x[0].hypot(x[1]);
    let w = if r > 0.0 {
        Complex64::new(x[0] / r, x[1] / r)
    } else {
        Complex64::new(1.0, 0.0)
    };
    (r, w)
}

impl SpinorField for DiskMode {
    fn dimension(&self) -> Dimension {
        Dimension::Two
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Dirac
    }

    fn mass_profile(&self) -> MassProfile {
        self.cavity.mass_profile()
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let (r, w) = polar(x);
        let mut acc = Default::default();
        self.add_to(t, r, w, &mut acc);
        Spinor::two(acc.0, acc.1)
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        Some((self.energy, self.energy))
    }
}

/// Sum of disk eigenmodes sharing one cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskField {
    cavity: CavityParams,
    modes: Vec<DiskMode>,
}

impl DiskField {
    pub fn new(modes: Vec<DiskMode>) -> Result<Self, ModesError> {
        let first = modes
            .first()
            .ok_or_else(|| ModesError::Incompatible("no modes given".into()))?;
        let cavity = first.cavity;
        if modes.iter().any(|m| m.cavity != cavity) {
            return Err(ModesError::Incompatible("modes belong to different cavities".into()));
        }
        Ok(Self { cavity, modes })
    }

    pub fn modes(&self) -> &[DiskMode] {
        &self.modes
    }

    pub fn cavity(&self) -> &CavityParams {
        &self.cavity
    }
}

impl SpinorField for DiskField {
    fn dimension(&self) -> Dimension {
        Dimension::Two
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Dirac
    }

    fn mass_profile(&self) -> MassProfile {
        self.cavity.mass_profile()
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let (r, w) = polar(x);
        let mut acc = Default::default();
        for m in &self.modes {
            m.add_to(t, r, w, &mut acc);
        }
        Spinor::two(acc.0, acc.1)
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        let lo = self.modes.iter().map(|m| m.energy).fold(f64::INFINITY, f64::min);
        let hi = self.modes.iter().map(|m| m.energy).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}
