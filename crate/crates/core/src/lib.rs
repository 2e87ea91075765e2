//! Unitary-measure toolkit: zero-dimensional cubic integrals, spectral probes,
//! classical source dynamics and their polar-coordinate counterparts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cylindrical;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod potential;
pub mod spectral;
pub mod zerodim;

pub use error::{Error, Result};
