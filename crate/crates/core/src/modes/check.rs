//! Finite-difference residuals used to validate fields.

use num_complex::Complex64;

use crate::spinors::{Dimension, Spinor, SpinorField, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sigma(k: usize, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    match k {
        0 => (b, a),
        1 => (-I * b, I * a),
        _ => (a, -b),
    }
}

fn shifted(x: &Vec3, k: usize, h: f64) -> Vec3 {
    let mut y = *x;
    y[k] += h;
    y
}

fn central<F: SpinorField + ?Sized>(field: &F, t: f64, x: &Vec3, k: usize, h: f64) -> Spinor {
    (field.evaluate(t, &shifted(x, k, h)) - field.evaluate(t, &shifted(x, k, -h))) * (0.5 / h)
}

/// Largest component of `i∂_tψ − Hψ` at `(t, x)`, derivatives by central
/// differences of step `h`.
pub fn dirac_residual<F: SpinorField + ?Sized>(field: &F, t: f64, x: &Vec3, h: f64) -> f64 {
    let dim = field.dimension();
    let n = dim.spatial();
    let psi = field.evaluate(t, x);
    let m = field.mass_profile().at(x, dim);
    let dt = (field.evaluate(t + h, x) - field.evaluate(t - h, x)) * (0.5 / h);
    let grads: Vec<Spinor> = (0..n).map(|k| central(field, t, x, k, h)).collect();
    let c = psi.components();
    let lhs: Vec<Complex64> = dt.components().iter().map(|z| I * z).collect();
    let mut h_psi = vec![Complex64::new(0.0, 0.0); c.len()];
    match dim {
        Dimension::Two => {
            for (k, g) in grads.iter().enumerate() {
                let (a, b) = sigma(k, g.get(0), g.get(1));
                h_psi[0] -= I * a;
                h_psi[1] -= I * b;
            }
            h_psi[0] += m * c[0];
            h_psi[1] -= m * c[1];
        }
        Dimension::Three => {
            for (k, g) in grads.iter().enumerate() {
                let (ua, ub) = sigma(k, g.get(0), g.get(1));
                let (wa, wb) = sigma(k, g.get(2), g.get(3));
                h_psi[0] += I * ua;
                h_psi[1] += I * ub;
                h_psi[2] -= I * wa;
                h_psi[3] -= I * wb;
            }
            h_psi[0] += m * c[2];
            h_psi[1] += m * c[3];
            h_psi[2] += m * c[0];
            h_psi[3] += m * c[1];
        }
    }
    lhs.iter().zip(&h_psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// `∂_t j⁰ + ∇·j` at `(t, x)` by central differences.
pub fn continuity_residual<F: SpinorField + ?Sized>(field: &F, t: f64, x: &Vec3, h: f64) -> f64 {
    let n = field.dimension().spatial();
    let j0 = |t: f64, x: &Vec3| field.evaluate(t, x).current().j0;
    let mut r = (j0(t + h, x) - j0(t - h, x)) / (2.0 * h);
    for k in 0..n {
        let jp = field.evaluate(t, &shifted(x, k, h)).current().jvec[k];
        let jm = field.evaluate(t, &shifted(x, k, -h)).current().jvec[k];
        r += (jp - jm) / (2.0 * h);
    }
    r
}
