//! Band spectra of periodic chains and lattices of spheres coupled through
//! line segments or contact points.
//!
//! The crate is organised bottom-up: [`specfun`] supplies real special
//! functions, [`greens`] the Green's functions of the building blocks,
//! [`krein`] the generic coupled-cell Floquet condition, [`dispersion`] the
//! closed-form conditions of the six model variants, and [`bands`] the band
//! enumeration, interval families and band-to-gap statistics.

// Negated comparisons such as `!(x > 0.0)` are used on purpose so that NaN
// inputs are rejected together with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod dispersion;
pub mod error;
pub mod greens;
pub mod krein;
pub mod model;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{ModelKind, ModelParams};
