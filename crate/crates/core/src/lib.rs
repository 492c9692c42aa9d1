//! Complex vorticity moments, spherical averages and local kinetic energy of
//! two-dimensional vortex sheets with unbounded support.
//!
//! The central identity expresses the circle average of `|v|²` through the
//! inner moments `∫_{|u|<r} uⁿ dω` and outer moments `∫_{|u|≥r} u^{−k} dω` of
//! the vorticity; the [`velocity`] module evaluates the Biot-Savart integral
//! directly and serves as the independent check.

pub mod cli;
pub mod energy;
pub mod error;
pub mod kaden;
pub mod measures;
pub mod moments;
pub mod quadrature;
pub mod special;
pub mod velocity;

pub use error::{Result, VortexError};
pub use measures::{
    Atom, AtomicMeasure, HalfLineSheet, KadenMeasure, KadenParams, PowerLawRadial, SignedVorticity,
    Vorticity, VorticityMeasure,
};
