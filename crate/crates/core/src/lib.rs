// NaN-rejecting checks are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod job;
pub mod krein;
pub mod lattice;
pub mod mfunction;
pub mod models;
pub mod numerics;
pub mod ryzhov;
pub mod spectral;

pub use error::{Error, Result};
