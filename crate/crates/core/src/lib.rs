//! Modeling, simulation and fitting toolkit for temporally multiplexed
//! DLCZ spin-wave/photon entanglement interfaces.
//!
//! - [`noise`]: closed-form detection probabilities, visibility, Bell
//!   parameter, mode limits and storage-time decay.
//! - [`chsh`]: polarization pair state, joint projection probabilities and
//!   CHSH estimation from states or coincidence counts.
//! - [`montecarlo`]: event-level simulation of write trains with
//!   feed-forward readout of the first herald.
//! - [`geometry`]: Gaussian-beam propagation and the collection
//!   solid-angle ratio.
//! - [`fitting`]: weighted least-squares recovery of the solid-angle ratio
//!   and the storage lifetime.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chsh;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod montecarlo;
pub mod noise;
pub mod numfmt;

pub use error::{Error, Result};
pub use noise::{ChannelParams, V1Convention, CH1, CH2};
