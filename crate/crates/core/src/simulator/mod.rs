//! Monte Carlo oracles: a snapshot simulator for connection probability
//! and an event-driven simulator of moving blockers and strategy switching.

mod geometry;
mod mobility;
mod snapshot;
mod temporal;

pub use geometry::{LinkZone, Point};
pub use mobility::{rdm_step, BlockerState, RdmModel, DEFAULT_MEAN_LEG};
pub use snapshot::{region_radius, snapshot_capacity, snapshot_connection_probability, Snapshot, SnapshotConfig};
pub use temporal::{
    apply_strategy, arena_radius, run_temporal, simulate_links, temporal_throughput, ApSite, BlockerSharing, LinkEvent,
    LinkTrace, Segment, SimTrace, TemporalConfig, Topology, Transition,
};

use crate::montecarlo::Moments;

/// A simulated estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Trials, or batches for time averages.
    pub samples: u64,
}

impl SimEstimate {
    /// Distance to `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.value - target;
        if diff == 0.0 {
            0.0
        } else {
            diff.abs() / self.std_error
        }
    }
}

impl From<&Moments> for SimEstimate {
    fn from(m: &Moments) -> Self {
        Self {
            value: m.mean,
            std_error: m.std_error(),
            samples: m.count,
        }
    }
}
