//! Performance metrics of single and multi-connectivity: connection
//! probability, average ergodic capacity, time-share weights and gains.

mod capacity;
mod connection;
mod expectation;
mod weights;

pub use capacity::{
    capacity_curve, capacity_gain, conditional_capacity, ergodic_capacity, ergodic_capacity_mc, ergodic_capacity_sc,
    CapacityProfile, ConstantCapacity,
};
pub use connection::{conn_prob_mc, conn_prob_sc, conn_prob_sc_quadrature, connection_probability};
pub use weights::{
    any_los_probability, build_switch_chain, closest_shares, closest_shares_from_probabilities, reactive_shares,
    reactive_shares_from_chain, SwitchChain,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::QuadOptions;

/// Connectivity strategy and its degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Single connectivity to the closest AP.
    Sc,
    /// Multi-connectivity that always uses the closest LOS AP.
    ClosestMc(usize),
    /// Multi-connectivity that switches only when its AP gets blocked.
    ReactiveMc(usize),
}

impl StrategyKind {
    pub fn degree(self) -> usize {
        match self {
            StrategyKind::Sc => 1,
            StrategyKind::ClosestMc(n) | StrategyKind::ReactiveMc(n) => n,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            StrategyKind::Sc => Ok(()),
            StrategyKind::ClosestMc(n) | StrategyKind::ReactiveMc(n) if n >= 2 => Ok(()),
            _ => Err(Error::InvalidParameter {
                name: "degree",
                reason: format!("{self} needs at least two APs"),
            }),
        }
    }

    /// Short label used in tables: `SC`, `C-MC`, `R-MC`.
    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::Sc => "SC",
            StrategyKind::ClosestMc(_) => "C-MC",
            StrategyKind::ReactiveMc(_) => "R-MC",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Sc => write!(f, "SC"),
            other => write!(f, "{}(N={})", other.label(), other.degree()),
        }
    }
}

/// How a metric was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::ClosedForm => "closed_form",
            Estimator::Quadrature => "quadrature",
            Estimator::MonteCarlo => "monte_carlo_integration",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed metric with its provenance. `std_error` is zero for
/// deterministic estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    pub estimator: Estimator,
    pub std_error: f64,
}

impl MetricResult {
    pub fn exact(value: f64, estimator: Estimator) -> Self {
        Self {
            value,
            estimator,
            std_error: 0.0,
        }
    }
}

/// Numerical settings shared by the integrating evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub quad: QuadOptions,
    /// Tail mass dropped when truncating the distance integrals.
    pub tail: f64,
    /// Monte Carlo sample count for degrees above two.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::with_rel_tol(1e-9),
            tail: 1e-9,
            samples: 1_000_000,
            seed: 0x7e4a_11c0,
        }
    }
}

impl AnalysisOptions {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Distances drawn per Monte Carlo sample regardless of degree, so that
/// runs at different degrees share their random numbers.
pub(crate) const SHARED_DRAWS: usize = 4;
