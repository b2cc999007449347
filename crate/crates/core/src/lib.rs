//! Tsukamoto-type neural fuzzy inference networks trained by cat swarm
//! optimization, together with the GLCM texture features that feed them and
//! the rank statistics used to compare trained variants.
//!
//! The crate is `no_std` and only needs `alloc`. Image decoding, CSV files and
//! the experiment runner live in the `tnfin-pipeline` crate.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cso;
mod error;
pub mod glcm;
mod math;
pub mod rng;
pub mod scaling;
pub mod stats;
pub mod tnfin;

pub use error::{Error, Result};
pub use tnfin::{
    Layout, MembershipFunction, Orientation, Sample, TnfinNetwork, TsukamotoConsequent,
};
