//! Exact computations of tensor-ideal structure in rigid tensor categories:
//! walled-Brauer diagram categories, their super-vector-space evaluations,
//! trace-form radicals and prime chains, idempotent/ideal correspondences
//! for products of fields, and presentations of spectral spaces.

pub mod boolean_flat;
pub mod error;
pub mod field;
pub mod idealcalc;
pub mod linalg;
pub mod projcat;
pub mod scalars;
pub mod spectral;
pub mod supereval;
pub mod symgroup;
pub mod wbcat;

pub use error::{Error, Result};
