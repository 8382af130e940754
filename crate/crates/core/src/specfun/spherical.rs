//! Spherical Bessel `j_l` and modified spherical Bessel `k_l` for `l <= 3`.
//!
//! The modified function follows `k_0(x) = e^{-x}/x`, so that
//! `k_1(x) = e^{-x}(1+x)/x^2` and `k_{l+1} = k_{l-1} + (2l+1)/x k_l`.

use super::SpecfunError;

pub const MAX_ORDER: u32 = 3;

/// Spherical Bessel function of the first kind.
pub fn sph_bessel_j(l: u32, x: f64) -> Result<f64, SpecfunError> {
    if l > MAX_ORDER {
        return Err(SpecfunError::Order {
            function: "sph_bessel_j",
            order: l as i64,
        });
    }
    if x < 0.0 || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "sph_bessel_j",
            argument: x,
        });
    }
    // Closed forms lose ~2l digits near the origin.
    let series_below = if l == 0 { 1e-3 } else { 2.0 * l as f64 };
    if x < series_below {
        return Ok(j_series(l, x));
    }
    let (s, c) = x.sin_cos();
    let inv = 1.0 / x;
    Ok(match l {
        0 => s * inv,
        1 => s * inv * inv - c * inv,
        2 => (3.0 * inv * inv * inv - inv) * s - 3.0 * c * inv * inv,
        _ => {
            let inv2 = inv * inv;
            (15.0 * inv2 * inv2 - 6.0 * inv2) * s - (15.0 * inv2 * inv - inv) * c
        }
    })
}

/// `j_l(x) = x^l Σ_k (-x²/2)^k / (k! (2l+2k+1)!!)`
fn j_series(l: u32, x: f64) -> f64 {
    let mut lead = 1.0;
    for i in 0..l {
        lead *= x / (2 * i + 3) as f64;
    }
    let q = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40u32 {
        term *= q / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Modified spherical Bessel function of the second kind, `x > 0`.
pub fn sph_bessel_k(l: u32, x: f64) -> Result<f64, SpecfunError> {
    if l > MAX_ORDER {
        return Err(SpecfunError::Order {
            function: "sph_bessel_k",
            order: l as i64,
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "sph_bessel_k",
            argument: x,
        });
    }
    let e = (-x).exp();
    let inv = 1.0 / x;
    Ok(match l {
        0 => e * inv,
        1 => e * inv * inv * (1.0 + x),
        2 => e * inv * inv * inv * (x * x + 3.0 * x + 3.0),
        _ => e * inv * inv * inv * inv * (((x + 6.0) * x + 15.0) * x + 15.0),
    })
}
