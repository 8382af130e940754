//! Pilot-wave dynamics for Dirac and Majorana spinors.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Bessel functions and spinor spherical harmonics.
//! * [`spinors`]: gamma/Pauli algebra, charge conjugation, currents and the
//!   guidance velocity.
//! * [`modes`]: plane waves, superpositions and confined cavity eigenmodes.
//! * [`dynamics`]: adaptive trajectory integration and backtracking.
//! * [`relaxation`]: density transport, coarse-graining and relaxation
//!   experiments.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod io;
pub mod modes;
pub mod quadrature;
pub mod relaxation;
pub mod specfun;
pub mod spinors;
