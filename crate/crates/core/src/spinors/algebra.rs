use num_complex::Complex64;
use serde::Serialize;

use super::{Dimension, Spinor, SpinorError, Vec3};

/// Probability current `(j⁰, j)`; `jvec[2]` is zero in 2+1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Current {
    pub j0: f64,
    pub jvec: Vec3,
    #[serde(skip)]
    pub dim: Dimension,
}

impl Current {
    pub fn spatial(&self) -> &[f64] {
        &self.jvec[..self.dim.spatial()]
    }

    pub fn spatial_norm(&self) -> f64 {
        super::norm3(&self.jvec)
    }
}

/// `(Φ†Φ, Φ†σ_1Φ, Φ†σ_2Φ, Φ†σ_3Φ)` for a two-spinor.
pub fn pauli_current(a: Complex64, b: Complex64) -> [f64; 4] {
    let ab = a.conj() * b;
    [
        a.norm_sqr() + b.norm_sqr(),
        2.0 * ab.re,
        2.0 * ab.im,
        a.norm_sqr() - b.norm_sqr(),
    ]
}

impl Spinor {
    /// `iγ²ψ*` (3+1) or `σ₁ψ*` (2+1).
    pub fn charge_conjugate(&self) -> Spinor {
        let c = self.components();
        match self.dimension() {
            Dimension::Two => Spinor::two(c[1].conj(), c[0].conj()),
            Dimension::Three => Spinor::four([c[3].conj(), -c[2].conj(), -c[1].conj(), c[0].conj()]),
        }
    }

    pub fn current(&self) -> Current {
        let c = self.components();
        match self.dimension() {
            Dimension::Two => {
                let p = pauli_current(c[0], c[1]);
                Current {
                    j0: p[0],
                    jvec: [p[1], p[2], 0.0],
                    dim: Dimension::Two,
                }
            }
            Dimension::Three => {
                let up = pauli_current(c[0], c[1]);
                let down = pauli_current(c[2], c[3]);
                Current {
                    j0: up[0] + down[0],
                    jvec: [down[1] - up[1], down[2] - up[2], down[3] - up[3]],
                    dim: Dimension::Three,
                }
            }
        }
    }
}

fn check_len(psi: &Spinor, dim: Dimension) -> Result<(), SpinorError> {
    if psi.dimension() != dim {
        return Err(SpinorError::LengthMismatch {
            dimension: dim,
            expected: dim.components(),
            found: psi.components().len(),
        });
    }
    Ok(())
}

/// Charge conjugate of `psi`, which must belong to `dim`.
pub fn charge_conjugate(psi: &Spinor, dim: Dimension) -> Result<Spinor, SpinorError> {
    check_len(psi, dim)?;
    Ok(psi.charge_conjugate())
}

/// `j⁰ = ψ†ψ`, `j^k = ψ†α_kψ` in the fixed representation.
pub fn current(psi: &Spinor, dim: Dimension) -> Result<Current, SpinorError> {
    check_len(psi, dim)?;
    Ok(psi.current())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);
    const O: Complex64 = Complex64::new(0.0, 0.0);
    const L: Complex64 = Complex64::new(1.0, 0.0);

    type M4 = [[Complex64; 4]; 4];

    fn sigma(k: usize) -> [[Complex64; 2]; 2] {
        match k {
            0 => [[L, O], [O, L]],
            1 => [[O, L], [L, O]],
            2 => [[O, -I], [I, O]],
            _ => [[L, O], [O, -L]],
        }
    }

    /// Weyl-basis γ^μ assembled from blocks, independent of the
    /// hand-expanded formulas above.
    fn gamma(mu: usize) -> M4 {
        let s = sigma(mu);
        let sign = if mu == 0 { 1.0 } else { -1.0 };
        let mut g = [[O; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j + 2] = s[i][j];
                g[i + 2][j] = s[i][j] * sign;
            }
        }
        g
    }

    fn matvec(m: &M4, v: &[Complex64]) -> [Complex64; 4] {
        let mut out = [O; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += m[i][j] * v[j];
            }
        }
        out
    }

    fn matmul(a: &M4, b: &M4) -> M4 {
        let mut out = [[O; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn oracle_conjugate(psi: &[Complex64]) -> [Complex64; 4] {
        let conj: Vec<Complex64> = psi.iter().map(|z| z.conj()).collect();
        let v = matvec(&gamma(2), &conj);
        v.map(|z| z * I)
    }

    fn oracle_current(psi: &[Complex64]) -> [f64; 4] {
        let g0 = gamma(0);
        let mut out = [0.0; 4];
        for (mu, o) in out.iter_mut().enumerate() {
            // ψ̄γ^μψ = ψ†γ⁰γ^μψ
            let m = matmul(&g0, &gamma(mu));
            let v = matvec(&m, psi);
            *o = psi.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
        }
        out
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn conjugation_of_unit_spinor() {
        let psi = Spinor::four([L, O, O, O]);
        let cpsi = charge_conjugate(&psi, Dimension::Three).unwrap();
        let oracle = oracle_conjugate(psi.components());
        assert_eq!(cpsi.components(), &oracle);
        assert_eq!(cpsi.components(), &[O, O, O, L]);
    }

    #[test]
    fn frozen_conjugation_matrix() {
        // iγ² = [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
        let ig2 = gamma(2).map(|row| row.map(|z| z * I));
        let expected = [[O, O, O, L], [O, O, -L, O], [O, -L, O, O], [L, O, O, O]];
        assert_eq!(ig2, expected);
    }

    #[test]
    fn conjugation_squares_to_identity() {
        let psi = Spinor::four([c(0.3, 0.1), c(-0.2, 0.5), c(0.7, -0.4), c(0.0, 0.9)]);
        let back = psi.charge_conjugate().charge_conjugate();
        assert!(back.max_abs_diff(&psi) < 1e-16);
        let p2 = Spinor::two(c(0.3, -0.8), c(1.1, 0.2));
        assert!(p2.charge_conjugate().charge_conjugate().max_abs_diff(&p2) < 1e-16);
    }

    #[test]
    fn majorana_is_fixed_point() {
        let d = Spinor::four([c(0.3, 0.1), c(-0.2, 0.5), c(0.7, -0.4), c(0.0, 0.9)]);
        let m = d + d.charge_conjugate();
        assert!(m.charge_conjugate().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn mismatched_dimension_rejected() {
        let p2 = Spinor::two(L, O);
        assert!(charge_conjugate(&p2, Dimension::Three).is_err());
        assert!(current(&p2, Dimension::Three).is_err());
        assert!(Spinor::from_components(Dimension::Two, &[L, O, O]).is_err());
    }

    #[test]
    fn zero_spinor_has_zero_current() {
        let j = Spinor::zero(Dimension::Three).current();
        assert_eq!(j.j0, 0.0);
        assert_eq!(j.jvec, [0.0; 3]);
    }

    #[test]
    fn plane_wave_current() {
        let (m, p): (f64, f64) = (5.0, 3.0);
        let e = (m * m + p * p).sqrt();
        let a = ((e - p) / (2.0 * e)).sqrt();
        let b = ((e + p) / (2.0 * e)).sqrt();
        let j = Spinor::four([c(a, 0.0), O, c(b, 0.0), O]).current();
        assert!((j.j0 - 1.0).abs() < 1e-15);
        assert!(j.jvec[0].abs() < 1e-15 && j.jvec[1].abs() < 1e-15);
        assert!((j.jvec[2] - p / e).abs() < 1e-15);
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn current_matches_matrix_oracle(z in proptest::array::uniform4(arb_c())) {
            let psi = Spinor::four(z);
            let j = psi.current();
            let o = oracle_current(&z);
            prop_assert!((j.j0 - o[0]).abs() < 1e-13);
            for k in 0..3 {
                prop_assert!((j.jvec[k] - o[k + 1]).abs() < 1e-13);
            }
            let cz = oracle_conjugate(&z);
            prop_assert!(psi.charge_conjugate().max_abs_diff(&Spinor::four(cz)) < 1e-15);
        }

        #[test]
        fn pauli_current_is_lightlike(a in arb_c(), b in arb_c()) {
            let p = pauli_current(a, b);
            let lhs = p[0] * p[0];
            let rhs = p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn majorana_currents_are_lightlike(z in proptest::array::uniform4(arb_c())) {
            let d = Spinor::four(z);
            let m = d + d.charge_conjugate();
            let j = m.current();
            prop_assert!((j.spatial_norm() - j.j0).abs() < 1e-12 * j.j0.max(1e-300));
            let d2 = Spinor::two(z[0], z[1]);
            let m2 = d2 + d2.charge_conjugate();
            let j2 = m2.current();
            prop_assert!((j2.spatial_norm() - j2.j0).abs() < 1e-12 * j2.j0.max(1e-300));
        }

        #[test]
        fn dirac_currents_are_causal(z in proptest::array::uniform4(arb_c())) {
            let j = Spinor::four(z).current();
            prop_assert!(j.spatial_norm() <= j.j0 * (1.0 + 1e-12));
            let j2 = Spinor::two(z[0], z[1]).current();
            prop_assert!(j2.spatial_norm() <= j2.j0 * (1.0 + 1e-12));
        }
    }
}
