//! Slotted discovery protocol: TNID acquisition, probabilistic beaconing,
//! collision monitoring and hidden-device jamming.
//!
//! Only discovery slots are simulated; the `period - 1` slots in between are
//! sleep. All nodes act on the state left by the previous slot, and a node
//! that transmits cannot receive in the same slot.

mod node;
mod sim;
mod topology;

use std::collections::BTreeMap;

use thiserror::Error;

pub use node::{acquire_tnid, hidden_check, Action, NodeState, Observation, Phase};
pub use sim::{run_discovery, DiscoveryOutcome, DiscoverySim, SlotReport};
pub use topology::{link_probability, nodes_for_mean_degree, Topology};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("transmit probability {0} outside (0, 1)")]
    Probability(f64),
    #[error("{name} must be at least 1")]
    Zero { name: &'static str },
    #[error("candidate set size {m} exceeds channel count {d}")]
    Candidates { m: usize, d: u64 },
    #[error("protocol simulation needs a single-digit code (k = 1), got k = {0}")]
    MultiDigit(usize),
    #[error("invalid jam margin {0}")]
    JamMargin(f64),
    #[error("oscillator offset {max_offset} too large for d = {d}")]
    Offset { max_offset: u32, d: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Per-slot transmit probability.
    pub p: f64,
    /// Slots per discovery slot (only affects wall-clock conversion).
    pub period: u64,
    /// Size `M` of the least-energy candidate set at acquisition.
    pub candidates: usize,
    /// Listening slots `W` behind occupancy and collision statistics, also
    /// the upper bound of the re-acquisition backoff.
    pub window: usize,
    /// Slots of energy scanning before a TNID is picked.
    pub acq_window: usize,
    /// Occupancy excess over `p` that triggers a jam; `None` means
    /// `3 * sqrt(p (1 - p) / W)`.
    pub jam_margin: Option<f64>,
    /// Own-TNID detections within the window that force re-acquisition.
    pub collision_count: usize,
    /// Consecutive slots spent jamming a flagged channel.
    pub jam_burst: u32,
    /// Simulation horizon in discovery slots.
    pub max_slots: u64,
    /// End the run once every node has completed discovery.
    pub stop_when_complete: bool,
    pub tone_energy: f64,
    /// Oscillator offsets are drawn uniformly from `-max..=max` subcarriers.
    pub max_offset: u32,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            p: 0.3,
            period: 100,
            candidates: 256,
            window: 50,
            acq_window: 1,
            jam_margin: None,
            collision_count: 2,
            jam_burst: 6,
            max_slots: 2000,
            stop_when_complete: true,
            tone_energy: 1.0,
            max_offset: 0,
        }
    }
}

impl ProtocolConfig {
    pub fn jam_margin(&self) -> f64 {
        self.jam_margin
            .unwrap_or_else(|| 3.0 * (self.p * (1.0 - self.p) / self.window as f64).sqrt())
    }

    pub fn validate(&self, channels: u64) -> Result<(), ProtocolError> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(ProtocolError::Probability(self.p));
        }
        for (name, v) in [
            ("period", self.period as usize),
            ("candidates", self.candidates),
            ("window", self.window),
            ("acq_window", self.acq_window),
            ("collision_count", self.collision_count),
            ("jam_burst", self.jam_burst as usize),
        ] {
            if v == 0 {
                return Err(ProtocolError::Zero { name });
            }
        }
        if self.candidates as u64 > channels {
            return Err(ProtocolError::Candidates {
                m: self.candidates,
                d: channels,
            });
        }
        if 2 * self.max_offset as u64 >= channels {
            return Err(ProtocolError::Offset {
                max_offset: self.max_offset,
                d: channels as u32,
            });
        }
        if let Some(m) = self.jam_margin {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(ProtocolError::JamMargin(m));
            }
        }
        Ok(())
    }
}

/// Per-node discovery timing shared by the proposed and baseline schemes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeTimes {
    /// For each node: true neighbor -> slot it was first identified.
    pub discovered: Vec<BTreeMap<usize, u64>>,
    /// Slot at which each node knew all of its neighbors; the horizon for
    /// nodes that never did.
    pub completion: Vec<u64>,
    pub completed: Vec<bool>,
}

impl NodeTimes {
    pub fn new(nodes: usize) -> Self {
        NodeTimes {
            discovered: vec![BTreeMap::new(); nodes],
            completion: vec![0; nodes],
            completed: vec![false; nodes],
        }
    }

    pub fn all_complete(&self) -> bool {
        self.completed.iter().all(|&c| c)
    }
}
