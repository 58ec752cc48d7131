//! Numerical workbench for maximal Fourier multiplier operators.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: periodic grids, complex fields and the scaled DFT used as
//!   quadrature for Fourier inversion integrals.
//! - [`dyadic`]: the smooth bump, Littlewood–Paley windows and the
//!   shell-localisation (retract) maps.
//! - [`fraccalc`]: Riemann–Liouville integrals, the Marchaud derivative and
//!   the symbol transform `m -> m~` that trades a supremum over dilations for
//!   a square function.
//! - [`symbols`]: the multiplier zoo.
//! - [`norms`]: shell norms, dyadic aggregates and their weighted-integral
//!   equivalents.
//! - [`operators`]: `T_m`, the maximal operator, the square function and the
//!   half-wave difference operator.
//! - [`lab`]: config-driven experiments and the command line front end.
//!
//! Data-parallel loops go through [`par`], which dispatches to rayon when the
//! `parallel` feature is enabled and to plain iterators otherwise.

pub mod dyadic;
pub mod error;
pub mod fraccalc;
pub mod lab;
pub mod norms;
pub mod operators;
pub mod par;
pub mod special;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
