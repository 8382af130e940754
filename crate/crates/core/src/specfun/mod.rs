//! Special functions needed by the cavity eigensolvers.
//!
//! Only the orders and argument ranges the cavities actually reach are
//! validated: `J_n`, `K_n` for small integer `n`, spherical `j_l`, `k_l` for
//! `l <= 3`, and spherical harmonics with their spinor combinations.

mod bessel;
mod harmonics;
mod spherical;

pub use bessel::{bessel_j, bessel_j_pair, bessel_j_signed, bessel_k, bessel_k_pair, bessel_k_signed};
pub use harmonics::{spherical_harmonic, spinor_spherical_harmonic, HalfInteger, SpinorHarmonicSpec};
pub use spherical::{sph_bessel_j, sph_bessel_k};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecfunError {
    #[error("{function}: argument {argument} outside the domain")]
    Domain { function: &'static str, argument: f64 },
    #[error("{function}: unsupported order {order}")]
    Order { function: &'static str, order: i64 },
    #[error("invalid spinor harmonic (j={j}, l={l}, j3={j3})")]
    InvalidSpinorHarmonic { j: f64, l: u32, j3: f64 },
}
