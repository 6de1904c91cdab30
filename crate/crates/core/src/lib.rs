//! Connectivity and capacity of an indoor THz network with self-blockage
//! and moving human blockers.
//!
//! The closed-form kernels ([`blockage`], [`distances`] densities,
//! [`channel`] and the strategy weights in [`analysis`]) are generic over
//! [`Scalar`] (`f32` or `f64`). Integration, sampling and the simulators
//! work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod blockage;
pub mod channel;
pub mod distances;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod scalar;
pub mod simulator;

pub use analysis::{Estimator, MetricResult, StrategyKind};
pub use blockage::{LosDuration, SystemParams};
pub use channel::{
    AbsorptionSpectrum, AbsorptionTable, CapacityCurve, ChannelModel, LinkBudget, PowerAllocation, TransmissionWindow,
};
pub use distances::OrderedDistances;
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Single-precision aliases.
pub mod f32 {
    pub type SystemParams = crate::blockage::SystemParams<f32>;
    pub type ChannelModel = crate::channel::ChannelModel<f32>;
    pub type AbsorptionSpectrum = crate::channel::AbsorptionSpectrum<f32>;
    pub type TransmissionWindow = crate::channel::TransmissionWindow<f32>;
    pub type LinkBudget = crate::channel::LinkBudget<f32>;
    pub type SwitchChain = crate::analysis::SwitchChain<f32>;
}

/// Double-precision aliases.
pub mod f64 {
    pub type SystemParams = crate::blockage::SystemParams<f64>;
    pub type ChannelModel = crate::channel::ChannelModel<f64>;
    pub type AbsorptionSpectrum = crate::channel::AbsorptionSpectrum<f64>;
    pub type TransmissionWindow = crate::channel::TransmissionWindow<f64>;
    pub type LinkBudget = crate::channel::LinkBudget<f64>;
    pub type SwitchChain = crate::analysis::SwitchChain<f64>;
}
