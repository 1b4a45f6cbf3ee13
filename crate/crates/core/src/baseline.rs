//! Classic slotted random-access discovery, used as the reference scheme.
//!
//! Every node beacons with probability `p` per discovery slot and otherwise
//! listens. A listener identifies a neighbor only when that neighbor is the
//! single one of its neighbors on air; two or more simultaneous beacons
//! destroy the slot for that listener.

use rand::{Rng, SeedableRng};

use crate::protocol::{NodeTimes, Topology};
use crate::seed::SimRng;

/// Probability that a given neighbor is heard at least once within `t`
/// slots when `l` devices contend: `1 - (1 - p (1-p)^(l-1))^t`.
pub fn p_discover(p: f64, l: u32, t: u32) -> f64 {
    let per_slot = p * (1.0 - p).powi(l as i32 - 1);
    1.0 - (1.0 - per_slot).powi(t as i32)
}

/// [`p_discover`] at its maximizing `p = 1/l`.
pub fn p_discover_opt(l: u32, t: u32) -> f64 {
    p_discover(1.0 / l as f64, l, t)
}

/// One baseline slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineSlot {
    pub transmitting: Vec<bool>,
    /// The neighbor each listener identified, if exactly one was on air.
    pub heard: Vec<Option<usize>>,
}

pub struct BaselineSim<'a> {
    topo: &'a Topology,
    p: f64,
    rng: SimRng,
    slot: u64,
    times: NodeTimes,
}

impl<'a> BaselineSim<'a> {
    pub fn new<R: Rng + ?Sized>(topo: &'a Topology, p: f64, rng: &mut R) -> Self {
        assert!(
            (0.0..=1.0).contains(&p),
            "transmit probability out of range"
        );
        let mut times = NodeTimes::new(topo.len());
        for i in 0..topo.len() {
            if topo.neighbors(i).is_empty() {
                times.completed[i] = true;
            }
        }
        BaselineSim {
            topo,
            p,
            rng: SimRng::seed_from_u64(rng.random()),
            slot: 0,
            times,
        }
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn times(&self) -> &NodeTimes {
        &self.times
    }

    pub fn step(&mut self) -> BaselineSlot {
        self.slot += 1;
        let slot = self.slot;
        let transmitting: Vec<bool> = (0..self.topo.len())
            .map(|_| self.rng.random_bool(self.p))
            .collect();
        let heard: Vec<Option<usize>> = (0..self.topo.len())
            .map(|i| {
                if transmitting[i] {
                    return None;
                }
                let mut on_air = self.topo.neighbors(i).iter().filter(|&&j| transmitting[j]);
                match (on_air.next(), on_air.next()) {
                    (Some(&j), None) => Some(j),
                    _ => None,
                }
            })
            .collect();
        for (i, h) in heard.iter().enumerate() {
            if let Some(j) = *h {
                self.times.discovered[i].entry(j).or_insert(slot);
                if !self.times.completed[i]
                    && self.times.discovered[i].len() == self.topo.neighbors(i).len()
                {
                    self.times.completed[i] = true;
                    self.times.completion[i] = slot;
                }
            }
        }
        BaselineSlot {
            transmitting,
            heard,
        }
    }
}

/// Runs the baseline for up to `horizon` slots, stopping early once every
/// node has heard all of its neighbors. Isolated nodes complete at slot 0;
/// nodes that never complete report `horizon`.
pub fn simulate_baseline<R: Rng + ?Sized>(
    topo: &Topology,
    p: f64,
    horizon: u64,
    rng: &mut R,
) -> NodeTimes {
    let mut sim = BaselineSim::new(topo, p, rng);
    while sim.slot() < horizon && !sim.times().all_complete() {
        sim.step();
    }
    let mut times = sim.times;
    for (c, done) in times.completion.iter_mut().zip(&times.completed) {
        if !done {
            *c = horizon;
        }
    }
    times
}
