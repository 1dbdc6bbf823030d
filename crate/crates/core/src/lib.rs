//! Exact, asymptotic and Monte Carlo performance analysis of terahertz links
//! over α-F fading with beam misalignment, random-waypoint mobility, path
//! loss and molecular absorption.
//!
//! The analytic side expresses SNR statistics as finite sums of Fox
//! H-functions ([`foxh`]), assembled in [`snrstats`] and turned into outage,
//! error-rate and capacity figures in [`metrics`]. [`mcsim`] draws the same
//! channel sample by sample and serves as an independent check.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod foxh;
pub mod mcsim;
pub mod metrics;
pub mod mobility;
pub mod snrstats;
pub mod specfun;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
