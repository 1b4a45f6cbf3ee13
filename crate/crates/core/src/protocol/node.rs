use std::collections::{BTreeMap, VecDeque};

use rand::Rng;

use super::ProtocolConfig;
use crate::codec::{DecodeResult, Tnid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Acquiring,
    Discovering,
}

/// What a node does with one discovery slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Transmit(Tnid),
    Listen,
    /// Transmit another channel's discovery signal to flag a collision.
    Jam(Tnid),
    /// Drop the owned TNID and listen; acquisition restarts after a backoff.
    Reacquire,
}

impl Action {
    /// The TNID put on air, if any.
    pub fn on_air(&self) -> Option<Tnid> {
        match *self {
            Action::Transmit(t) | Action::Jam(t) => Some(t),
            Action::Listen | Action::Reacquire => None,
        }
    }
}

/// What a listening node learned in one slot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Observation {
    pub decoded: Vec<DecodeResult>,
    /// Per-channel received energy; only filled while the node is scanning.
    pub channel_energy: Option<Vec<f64>>,
}

/// Uniform choice among the `m` channels of least average energy, ties
/// ordered by channel index before the draw.
pub fn acquire_tnid<R: Rng + ?Sized>(energy: &[f64], m: usize, rng: &mut R) -> Tnid {
    assert!(
        m >= 1 && m <= energy.len(),
        "candidate set size out of range"
    );
    let mut order: Vec<usize> = (0..energy.len()).collect();
    order.sort_by(|&a, &b| energy[a].total_cmp(&energy[b]).then(a.cmp(&b)));
    Tnid(order[rng.random_range(0..m)] as u64)
}

/// Channels whose detection frequency over a full window of `window`
/// listening slots exceeds `p + margin`.
pub fn hidden_check(counts: &[u32], window: usize, cfg: &ProtocolConfig) -> Vec<Tnid> {
    let limit = cfg.p + cfg.jam_margin();
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c as f64 / window as f64 > limit)
        .map(|(k, _)| Tnid(k as u64))
        .collect()
}

/// Discovery state of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    phase: Phase,
    tnid: Option<Tnid>,
    backoff: u32,
    scanned: u32,
    energy_sum: Vec<f64>,
    // detections per channel over the last `window` listening slots
    window: VecDeque<Vec<Tnid>>,
    counts: Vec<u32>,
    neighbors: BTreeMap<Tnid, u64>,
    own_hits: VecDeque<u64>,
    listened: u64,
    jam_queue: VecDeque<Tnid>,
    jamming: Option<(Tnid, u32)>,
    reacquire: bool,
    // TNID given up at re-acquisition; ignored until a new one is chosen
    released: Option<Tnid>,
}

impl NodeState {
    /// A node that has just entered the network with `channels` TNIDs in
    /// the pool.
    pub fn new(channels: usize) -> Self {
        NodeState {
            phase: Phase::Acquiring,
            tnid: None,
            backoff: 0,
            scanned: 0,
            energy_sum: vec![0.0; channels],
            window: VecDeque::new(),
            counts: vec![0; channels],
            neighbors: BTreeMap::new(),
            own_hits: VecDeque::new(),
            listened: 0,
            jam_queue: VecDeque::new(),
            jamming: None,
            reacquire: false,
            released: None,
        }
    }

    /// A node already holding `tnid`.
    pub fn with_tnid(channels: usize, tnid: Tnid) -> Self {
        let mut s = Self::new(channels);
        s.phase = Phase::Discovering;
        s.tnid = Some(tnid);
        s
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn tnid(&self) -> Option<Tnid> {
        self.tnid
    }

    /// TNID -> slot of first decoding.
    pub fn neighbors(&self) -> &BTreeMap<Tnid, u64> {
        &self.neighbors
    }

    pub fn own_channel_hits(&self) -> usize {
        self.own_hits.len()
    }

    /// Fraction of the current window's listening slots in which each
    /// channel was detected.
    pub fn occupancy(&self) -> Vec<f64> {
        let w = self.window.len().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / w).collect()
    }

    /// Whether the next observation should carry channel energies.
    pub fn is_scanning(&self) -> bool {
        self.phase == Phase::Acquiring && self.backoff == 0 && !self.reacquire
    }

    /// Picks this slot's action.
    pub fn decide<R: Rng + ?Sized>(&mut self, cfg: &ProtocolConfig, rng: &mut R) -> Action {
        if self.reacquire {
            self.reacquire = false;
            self.phase = Phase::Acquiring;
            self.released = self.tnid.take();
            self.backoff = rng.random_range(1..=cfg.window as u32);
            self.scanned = 0;
            self.energy_sum.iter_mut().for_each(|e| *e = 0.0);
            self.own_hits.clear();
            self.jam_queue.clear();
            self.jamming = None;
            return Action::Reacquire;
        }
        let Some(own) = self.tnid else {
            return Action::Listen;
        };
        if let Some((k, left)) = self.jamming {
            self.jamming = (left > 1).then_some((k, left - 1));
            return Action::Jam(k);
        }
        if let Some(k) = self.jam_queue.pop_front() {
            self.jamming = (cfg.jam_burst > 1).then_some((k, cfg.jam_burst - 1));
            return Action::Jam(k);
        }
        if rng.random_bool(cfg.p) {
            Action::Transmit(own)
        } else {
            Action::Listen
        }
    }

    /// Folds in what was heard during a slot spent listening.
    pub fn observe<R: Rng + ?Sized>(
        &mut self,
        slot: u64,
        obs: &Observation,
        cfg: &ProtocolConfig,
        rng: &mut R,
    ) {
        self.listened += 1;
        for r in &obs.decoded {
            if Some(r.tnid) != self.tnid && Some(r.tnid) != self.released {
                self.neighbors.entry(r.tnid).or_insert(slot);
            }
        }
        self.record_occupancy(&obs.decoded, cfg);

        match self.phase {
            Phase::Acquiring => self.scan(obs, cfg, rng),
            Phase::Discovering => {
                let own = self.tnid.expect("discovering node owns a TNID");
                if obs.decoded.iter().any(|r| r.tnid == own) {
                    self.own_hits.push_back(self.listened);
                }
                while self
                    .own_hits
                    .front()
                    .is_some_and(|&h| h + cfg.window as u64 <= self.listened)
                {
                    self.own_hits.pop_front();
                }
                if self.own_hits.len() >= cfg.collision_count {
                    self.reacquire = true;
                    return;
                }
                if self.window.len() == cfg.window {
                    for k in hidden_check(&self.counts, cfg.window, cfg) {
                        if k == own || self.jam_queue.contains(&k) {
                            continue;
                        }
                        self.neighbors.remove(&k);
                        self.forget_channel(k);
                        self.jam_queue.push_back(k);
                    }
                }
            }
        }
    }

    /// `observe` followed by `decide`, for callers that drive one node at a
    /// time. `obs` is `None` when the previous slot was not spent listening.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        slot: u64,
        obs: Option<&Observation>,
        cfg: &ProtocolConfig,
        rng: &mut R,
    ) -> Action {
        if let Some(o) = obs {
            self.observe(slot, o, cfg, rng);
        }
        self.decide(cfg, rng)
    }

    fn record_occupancy(&mut self, decoded: &[DecodeResult], cfg: &ProtocolConfig) {
        let heard: Vec<Tnid> = decoded.iter().map(|r| r.tnid).collect();
        for t in &heard {
            self.counts[t.0 as usize] += 1;
        }
        self.window.push_back(heard);
        while self.window.len() > cfg.window {
            for t in self.window.pop_front().unwrap() {
                self.counts[t.0 as usize] -= 1;
            }
        }
    }

    fn forget_channel(&mut self, k: Tnid) {
        for slot in self.window.iter_mut() {
            slot.retain(|&t| t != k);
        }
        self.counts[k.0 as usize] = 0;
    }

    fn scan<R: Rng + ?Sized>(&mut self, obs: &Observation, cfg: &ProtocolConfig, rng: &mut R) {
        if self.backoff > 0 {
            self.backoff -= 1;
            return;
        }
        if let Some(e) = &obs.channel_energy {
            for (acc, x) in self.energy_sum.iter_mut().zip(e) {
                *acc += x;
            }
        }
        self.scanned += 1;
        if self.scanned as usize >= cfg.acq_window {
            let avg: Vec<f64> = self
                .energy_sum
                .iter()
                .map(|e| e / self.scanned as f64)
                .collect();
            let t = acquire_tnid(&avg, cfg.candidates.min(avg.len()), rng);
            self.tnid = Some(t);
            self.released = None;
            self.phase = Phase::Discovering;
            self.neighbors.remove(&t);
            self.own_hits.clear();
        }
    }
}
