//! Sub-array partitioned, beam-domain channel model for RIS-assisted
//! UAV-to-vehicle links, with Monte Carlo propagation statistics.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! fix the double-precision instantiation used by the CLI.

// `!(x > 0)` is used deliberately so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod output;
pub mod partition;
pub mod preset;
pub mod scalar;
pub mod scenario;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use scalar::Real;
pub use scenario::Scenario;

pub type Scenario64 = Scenario<f64>;
pub type Vec3f64 = geometry::Vec3<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type Partition64 = partition::SubArrayPartition<f64>;
pub type Realization64 = channel::ChannelRealization<f64>;
