//! The five-layer Tsukamoto-type neural fuzzy inference network.
//!
//! Layer 1 fuzzifies each input with a bank of bell membership functions,
//! layer 2 multiplies one membership per input into a rule firing strength,
//! layer 3 normalizes the strengths, layer 4 inverts each rule's monotone
//! consequent at its normalized strength and layer 5 sums the weighted rule
//! outputs.

mod consequent;
mod forward;
mod gd;
mod layout;
mod membership;
mod network;

pub use consequent::{Orientation, TsukamotoConsequent};
pub use forward::{normalize, ForwardTrace, Workspace, EPS_FIRE};
pub use gd::{fd_gradient, train_gd, train_gd_observed, FD_STEP};
pub use layout::{Layout, ParamBounds};
pub use membership::MembershipFunction;
pub use network::TnfinNetwork;

use alloc::vec::Vec;

/// One training or test point: a feature vector and its scalar target.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub target: f64,
}

impl Sample {
    pub fn new(features: Vec<f64>, target: f64) -> Self {
        Self { features, target }
    }
}
