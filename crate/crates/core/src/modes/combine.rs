use std::sync::Arc;

use num_complex::Complex64;

use super::{CavityParams, ModesError, EXTERIOR_DECAY_LENGTHS};
use crate::quadrature::GaussLegendre;
use crate::spinors::{Dimension, FieldKind, MassProfile, Spinor, SpinorField, Vec3};

/// Pointwise weighted sum of fields of one dimension and kind.
#[derive(Clone)]
pub struct Superposition {
    dim: Dimension,
    kind: FieldKind,
    mass: MassProfile,
    terms: Vec<(Complex64, Arc<dyn SpinorField>)>,
}

impl std::fmt::Debug for Superposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Superposition")
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .field("terms", &self.terms.len())
            .finish()
    }
}

/// Combine `terms` into one field.
///
/// Majorana terms only admit real coefficients, since a complex multiple of
/// a self-conjugate spinor is no longer self-conjugate.
pub fn superpose(terms: Vec<(Complex64, Arc<dyn SpinorField>)>) -> Result<Superposition, ModesError> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| ModesError::Incompatible("empty superposition".into()))?;
    let dim = first.dimension();
    let kind = first.kind();
    let mass = first.mass_profile();
    for (c, f) in &terms {
        if f.dimension() != dim {
            return Err(ModesError::Incompatible("fields of different dimension".into()));
        }
        if f.kind() != kind {
            return Err(ModesError::Incompatible("Dirac and Majorana fields mixed".into()));
        }
        if f.mass_profile() != mass {
            return Err(ModesError::Incompatible("fields with different mass profiles".into()));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(ModesError::Incompatible("non-finite coefficient".into()));
        }
        if kind == FieldKind::Majorana && c.im != 0.0 {
            return Err(ModesError::Incompatible(
                "Majorana fields need real coefficients".into(),
            ));
        }
    }
    Ok(Superposition { dim, kind, mass, terms })
}

impl SpinorField for Superposition {
    fn dimension(&self) -> Dimension {
        self.dim
    }

    fn kind(&self) -> FieldKind {
        self.kind
    }

    fn mass_profile(&self) -> MassProfile {
        self.mass
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        self.terms
            .iter()
            .fold(Spinor::zero(self.dim), |acc, (c, f)| acc + f.evaluate(t, x) * *c)
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, f) in &self.terms {
            let (a, b) = f.energy_range()?;
            lo = lo.min(a);
            hi = hi.max(b);
        }
        Some((lo, hi))
    }
}

/// `(ψ_D + Cψ_D)/√N` for a Dirac field `ψ_D`.
#[derive(Debug, Clone)]
pub struct Majorana<F> {
    dirac: F,
    normalization: f64,
    scale: f64,
}

pub fn majorana_from_dirac<F: SpinorField>(dirac: F, normalization: f64) -> Result<Majorana<F>, ModesError> {
    if dirac.kind() != FieldKind::Dirac {
        return Err(ModesError::WrongKind {
            expected: FieldKind::Dirac,
            found: dirac.kind(),
        });
    }
    if !(normalization > 0.0) || !normalization.is_finite() {
        return Err(ModesError::InvalidNormalization(normalization));
    }
    Ok(Majorana {
        dirac,
        normalization,
        scale: normalization.sqrt().recip(),
    })
}

impl<F> Majorana<F> {
    pub fn dirac(&self) -> &F {
        &self.dirac
    }

    /// The factor `N`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }
}

impl<F: SpinorField> SpinorField for Majorana<F> {
    fn dimension(&self) -> Dimension {
        self.dirac.dimension()
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Majorana
    }

    fn mass_profile(&self) -> MassProfile {
        self.dirac.mass_profile()
    }

    fn evaluate(&self, t: f64, x: &Vec3) -> Spinor {
        let psi = self.dirac.evaluate(t, x);
        (psi + psi.charge_conjugate()) * self.scale
    }

    fn energy_range(&self) -> Option<(f64, f64)> {
        self.dirac.energy_range()
    }
}

fn exterior_extent<F: SpinorField + ?Sized>(field: &F, cavity: &CavityParams) -> Result<f64, ModesError> {
    let (_, e_max) = field
        .energy_range()
        .ok_or_else(|| ModesError::Incompatible("field does not report its energy range".into()))?;
    cavity.check_energy(e_max)?;
    let (_, k_ext) = cavity.wave_numbers(e_max);
    Ok(EXTERIOR_DECAY_LENGTHS / k_ext)
}

/// `∫ψ†ψ d²x` at time `t` by polar quadrature.
pub(crate) fn disk_density_integral<F: SpinorField + ?Sized>(
    field: &F,
    cavity: &CavityParams,
    t: f64,
) -> Result<f64, ModesError> {
    super::check_dimension(field.dimension(), Dimension::Two)?;
    let extent = exterior_extent(field, cavity)?;
    let n_theta = 64;
    let inner = GaussLegendre::new(128);
    let outer = GaussLegendre::new(32);
    let ring = |r: f64| {
        let mut s = 0.0;
        for i in 0..n_theta {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n_theta as f64;
            s += field.evaluate(t, &[r * th.cos(), r * th.sin(), 0.0]).norm_sqr();
        }
        s * 2.0 * std::f64::consts::PI / n_theta as f64 * r
    };
    let r = cavity.radius;
    Ok(inner.integrate(0.0, r, ring) + outer.integrate_composite(r, r + extent, 8, ring))
}

/// `∫ψ†ψ d³x` at time `t` by spherical quadrature.
pub(crate) fn ball_density_integral<F: SpinorField + ?Sized>(
    field: &F,
    cavity: &CavityParams,
    t: f64,
) -> Result<f64, ModesError> {
    super::check_dimension(field.dimension(), Dimension::Three)?;
    let extent = exterior_extent(field, cavity)?;
    let n_phi = 32;
    let polar = GaussLegendre::new(24);
    let inner = GaussLegendre::new(96);
    let outer = GaussLegendre::new(24);
    let shell = |r: f64| {
        let mut s = 0.0;
        for (ct, w) in polar.nodes_on(-1.0, 1.0) {
            let st = (1.0 - ct * ct).sqrt();
            for i in 0..n_phi {
                let ph = 2.0 * std::f64::consts::PI * i as f64 / n_phi as f64;
                let x = [r * st * ph.cos(), r * st * ph.sin(), r * ct];
                s += w * field.evaluate(t, &x).norm_sqr();
            }
        }
        s * 2.0 * std::f64::consts::PI / n_phi as f64 * r * r
    };
    let r = cavity.radius;
    Ok(inner.integrate(0.0, r, shell) + outer.integrate_composite(r, r + extent, 8, shell))
}

/// Majorana field built from `dirac` with `N` fixed so that
/// `∫ψ_M†ψ_M d²x = 1`.
pub fn normalize_majorana_disk<F: SpinorField>(dirac: F, cavity: &CavityParams) -> Result<Majorana<F>, ModesError> {
    let raw = majorana_from_dirac(dirac, 1.0)?;
    let n = disk_density_integral(&raw, cavity, 0.0)?;
    majorana_from_dirac(raw.dirac, n)
}

/// Three-dimensional counterpart of [`normalize_majorana_disk`].
pub fn normalize_majorana_ball<F: SpinorField>(dirac: F, cavity: &CavityParams) -> Result<Majorana<F>, ModesError> {
    let raw = majorana_from_dirac(dirac, 1.0)?;
    let n = ball_density_integral(&raw, cavity, 0.0)?;
    majorana_from_dirac(raw.dirac, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{plane_wave_dirac, PlaneWave, PlaneWaveSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_waves(m: f64) -> [PlaneWaveSpec; 3] {
        [
            PlaneWaveSpec::new([1.0, 0.0, 1.0], m),
            PlaneWaveSpec::new([-1.0, -2.0, -1.0], m).with_phase(4.0),
            PlaneWaveSpec::new([1.0, -1.0, 1.0], m).with_phase(9.0),
        ]
    }

    #[test]
    fn single_term_is_identity() {
        let f: Arc<dyn SpinorField> =
            Arc::new(plane_wave_dirac(&PlaneWaveSpec::new([0.3, 1.0, -2.0], 2.0), Dimension::Three).unwrap());
        let s = superpose(vec![(Complex64::new(1.0, 0.0), f.clone())]).unwrap();
        for i in 0..20 {
            let x = [0.1 * i as f64, -0.3 * i as f64, 0.05 * i as f64];
            assert_eq!(s.evaluate(0.2 * i as f64, &x), f.evaluate(0.2 * i as f64, &x));
        }
    }

    #[test]
    fn three_wave_sum_at_origin() {
        let specs = three_waves(3.0);
        let s3 = 3f64.sqrt().recip();
        let terms: Vec<(Complex64, Arc<dyn SpinorField>)> = specs
            .iter()
            .map(|s| {
                let w = PlaneWaveSpec { phase: 0.0, ..*s };
                let f: Arc<dyn SpinorField> = Arc::new(plane_wave_dirac(&w, Dimension::Three).unwrap());
                (Complex64::from_polar(s3, s.phase), f)
            })
            .collect();
        let sum = superpose(terms).unwrap();
        let direct = PlaneWave::new(&specs.map(|s| s.with_weight(s3)), Dimension::Three).unwrap();
        let mut want = Spinor::zero(Dimension::Three);
        for s in &specs {
            let u = crate::modes::plane::helicity_spinor(&s.momentum, 3.0, Dimension::Three);
            want = want + u * Complex64::from_polar(s3, s.phase);
        }
        assert!(sum.evaluate(0.0, &[0.0; 3]).max_abs_diff(&want) < 1e-15);
        assert!(direct.evaluate(0.0, &[0.0; 3]).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn mixing_kinds_is_rejected() {
        let d = plane_wave_dirac(&PlaneWaveSpec::new([0.0, 0.0, 1.0], 1.0), Dimension::Three).unwrap();
        let m: Arc<dyn SpinorField> = Arc::new(majorana_from_dirac(d.clone(), 2.0).unwrap());
        let d: Arc<dyn SpinorField> = Arc::new(d);
        let one = Complex64::new(1.0, 0.0);
        assert!(superpose(vec![(one, d), (one, m.clone())]).is_err());
        assert!(superpose(vec![(Complex64::new(0.0, 1.0), m)]).is_err());
    }

    #[test]
    fn majorana_requires_dirac_input() {
        let d = plane_wave_dirac(&PlaneWaveSpec::new([0.0, 0.0, 1.0], 1.0), Dimension::Two).unwrap();
        let m = majorana_from_dirac(d.clone(), 2.0).unwrap();
        assert!(majorana_from_dirac(m, 2.0).is_err());
        assert!(majorana_from_dirac(d.clone(), 0.0).is_err());
        assert!(majorana_from_dirac(d, f64::NAN).is_err());
    }

    /// A field that is already self-conjugate.
    struct Fixed(Spinor);

    impl SpinorField for Fixed {
        fn dimension(&self) -> Dimension {
            self.0.dimension()
        }
        fn kind(&self) -> FieldKind {
            FieldKind::Dirac
        }
        fn mass_profile(&self) -> MassProfile {
            MassProfile::Uniform(1.0)
        }
        fn evaluate(&self, _t: f64, _x: &Vec3) -> Spinor {
            self.0
        }
    }

    #[test]
    fn self_conjugate_input_is_rescaled_by_two_over_root_n() {
        let d = Spinor::four([
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.1, 0.4),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let psi = d + d.charge_conjugate();
        let m = majorana_from_dirac(Fixed(psi), 4.0).unwrap();
        assert!(m.evaluate(0.0, &[0.0; 3]).max_abs_diff(&psi) < 1e-16);
    }

    #[test]
    fn plane_wave_majorana_current() {
        let (m, p) = (5.0, 3.0);
        let e: f64 = 34f64.sqrt();
        let d = plane_wave_dirac(&PlaneWaveSpec::new([0.0, 0.0, p], m), Dimension::Three).unwrap();
        let n = 2.0;
        let f = majorana_from_dirac(d, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-5.0..5.0);
            let x = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            let j = f.evaluate(t, &x).current();
            let ph = 2.0 * e * t - 2.0 * p * x[2];
            let s = 2.0 / n;
            assert!((j.j0 - s).abs() < 1e-14);
            assert!((j.jvec[0] - s * m / e * ph.cos()).abs() < 1e-13);
            // The transverse component rotates the opposite way to the
            // printed form in this representation.
            assert!((j.jvec[1] - s * m / e * ph.sin()).abs() < 1e-13);
            assert!((j.jvec[2] - s * p / e).abs() < 1e-14);
        }
        let v = crate::spinors::velocity(&f, 0.0, &[0.0; 3], 1e-12).unwrap();
        assert!((v[0] - 5.0 / e).abs() < 1e-15 && v[1].abs() < 1e-15 && (v[2] - 3.0 / e).abs() < 1e-15);
        assert!((crate::spinors::norm3(&v) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conjugation_commutes_with_real_superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [Dimension::Two, Dimension::Three] {
            let specs = three_waves(6.0);
            let weights = [0.7, -1.3, 0.4];
            let parts: Vec<PlaneWave> = specs.iter().map(|s| plane_wave_dirac(s, dim).unwrap()).collect();
            let sum = superpose(
                parts
                    .iter()
                    .zip(weights)
                    .map(|(p, w)| (Complex64::new(w, 0.0), Arc::new(p.clone()) as Arc<dyn SpinorField>))
                    .collect(),
            )
            .unwrap();
            let lhs = majorana_from_dirac(sum, 2.0).unwrap();
            let rhs = superpose(
                parts
                    .iter()
                    .zip(weights)
                    .map(|(p, w)| {
                        let m = majorana_from_dirac(p.clone(), 2.0).unwrap();
                        (Complex64::new(w, 0.0), Arc::new(m) as Arc<dyn SpinorField>)
                    })
                    .collect(),
            )
            .unwrap();
            for _ in 0..100 {
                let t = rng.gen_range(0.0..10.0);
                let x = [
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                ];
                assert!(lhs.evaluate(t, &x).max_abs_diff(&rhs.evaluate(t, &x)) < 1e-14);
            }
        }
    }
}
