//! Exact verification kernel for flat connections over the universal
//! differential calculus of a finite-dimensional algebra.
//!
//! Everything in this crate computes over exact scalars (arbitrary-precision
//! rationals or a prime field); there are no floats and no tolerances — every
//! identity is checked to literal equality. The crate is `no_std` (with
//! `alloc`): IO, file formats, and the command-line front end live in the
//! companion crate `ncflat-cli`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod calculus;
pub mod connection;
pub mod dga;
pub mod field;
pub mod homconn;
pub mod mat;
pub mod report;
pub mod rng;

pub use field::{FieldSpec, Scalar};
pub use mat::{Mat, QuotientData, Subspace};
pub use report::{CheckRecord, CheckStatus, Report};
