//! Numerical laboratory for Herz-type Besov and Triebel-Lizorkin spaces.
//!
//! The crate evaluates homogeneous Herz quasi-norms and the associated
//! sequence-space quasi-norms exactly on one-dimensional dyadic data,
//! estimates them by stratified Monte Carlo in two and three dimensions,
//! implements the φ-transform on sampled band-limited functions, and ships a
//! harness that checks the Jawerth and Franke embeddings between these spaces.
//!
//! Module map:
//!
//! * [`dyadic`]: dyadic cubes, annuli, exact dyadic rationals, coefficient fields.
//! * [`herznorm`]: Herz norms and the `b`/`f` sequence norms.
//! * [`rearrange`]: distribution functions, non-increasing rearrangements, Hardy sums.
//! * [`phitransform`]: Littlewood-Paley blocks, window families, analysis/synthesis.
//! * [`embedlab`]: embedding classification, ensembles, sharpness and dilation probes.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyadic;
pub mod embedlab;
mod error;
mod exponent;
pub mod herznorm;
pub mod phitransform;
pub mod rearrange;

pub use error::{Error, Result};
pub use exponent::Exponent;

pub use dyadic::{CoefficientField, Dyadic, DyadicCube, Partition1D};
pub use herznorm::{HerzParams, NormValue, SpaceKind, SpaceParams};
pub use num_complex::Complex64;
