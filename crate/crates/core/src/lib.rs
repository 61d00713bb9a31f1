//! Direct and inverse scattering for the AKNS system through spectral
//! parameter power series.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direct;
pub mod error;
pub mod formats;
pub mod inverse;
pub mod numerics;
pub mod potential;
pub mod reference;
pub mod seed;
pub mod spps;

pub use error::{Error, Result};
