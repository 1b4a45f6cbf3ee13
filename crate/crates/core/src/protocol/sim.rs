use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use super::node::{Action, NodeState, Observation};
use super::{NodeTimes, ProtocolConfig, ProtocolError, Topology};
use crate::channel::{self, ChannelModel, FadingKind, SparseGrid, Transmission};
use crate::codec::{Codeword, DecodeResult, DiscoveryCode, Tnid};
use crate::receiver::ReceiverConfig;
use crate::seed::SimRng;

/// Everything that happened in one discovery slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotReport {
    pub slot: u64,
    pub actions: Vec<Action>,
    /// Decode results of each listening node; `None` for transmitters.
    pub decoded: Vec<Option<Vec<DecodeResult>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscoveryOutcome {
    pub times: NodeTimes,
    pub final_tnids: Vec<Option<Tnid>>,
    /// Each node's TNID -> first-heard table at the end of the run.
    pub tables: Vec<BTreeMap<Tnid, u64>>,
    pub slots_run: u64,
}

/// Synchronous multi-node simulation of the discovery protocol.
pub struct DiscoverySim<'a> {
    topo: &'a Topology,
    cfg: ProtocolConfig,
    code: DiscoveryCode,
    channel: ChannelModel,
    rx: ReceiverConfig,
    codewords: Vec<Codeword>,
    nodes: Vec<NodeState>,
    node_rng: Vec<SimRng>,
    phy_rng: SimRng,
    offsets: Vec<i64>,
    slot: u64,
    times: NodeTimes,
}

impl<'a> DiscoverySim<'a> {
    pub fn new<R: Rng + ?Sized>(
        topo: &'a Topology,
        cfg: ProtocolConfig,
        code: DiscoveryCode,
        channel: ChannelModel,
        rx: ReceiverConfig,
        rng: &mut R,
    ) -> Result<Self, ProtocolError> {
        if code.k() != 1 {
            return Err(ProtocolError::MultiDigit(code.k()));
        }
        cfg.validate(code.pool_size())?;
        let channels = code.pool_size() as usize;
        let codewords = (0..channels as u64)
            .map(|m| code.encode_tnid(Tnid(m)).expect("in-range TNID"))
            .collect();
        let n = topo.len();
        let node_rng: Vec<SimRng> = (0..n)
            .map(|_| SimRng::seed_from_u64(rng.random()))
            .collect();
        let mut phy_rng = SimRng::seed_from_u64(rng.random());
        let m = cfg.max_offset as i64;
        let offsets = (0..n).map(|_| phy_rng.random_range(-m..=m)).collect();
        Ok(DiscoverySim {
            topo,
            cfg,
            code,
            channel,
            rx,
            codewords,
            nodes: (0..n).map(|_| NodeState::new(channels)).collect(),
            node_rng,
            phy_rng,
            offsets,
            slot: 0,
            times: NodeTimes::new(n),
        })
    }

    /// Starts `node` already holding `tnid`.
    pub fn force_tnid(&mut self, node: usize, tnid: Tnid) {
        self.nodes[node] = NodeState::with_tnid(self.codewords.len(), tnid);
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn times(&self) -> &NodeTimes {
        &self.times
    }

    /// Oscillator offset of each node in subcarriers.
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn step(&mut self) -> SlotReport {
        self.slot += 1;
        let slot = self.slot;
        let actions: Vec<Action> = self
            .nodes
            .iter_mut()
            .zip(self.node_rng.iter_mut())
            .map(|(s, r)| s.decide(&self.cfg, r))
            .collect();

        let mut decoded = vec![None; self.nodes.len()];
        for i in 0..self.nodes.len() {
            if actions[i].on_air().is_some() {
                continue;
            }
            let txs: Vec<(usize, Tnid)> = self
                .topo
                .neighbors(i)
                .iter()
                .filter_map(|&j| actions[j].on_air().map(|t| (j, t)))
                .collect();
            let scanning = self.nodes[i].is_scanning();
            let obs = self.receive(i, &txs, scanning);

            for r in &obs.decoded {
                let mut senders = txs.iter().filter(|(_, t)| *t == r.tnid);
                if let (Some(&(j, _)), None) = (senders.next(), senders.next()) {
                    if matches!(actions[j], Action::Transmit(_)) {
                        self.times.discovered[i].entry(j).or_insert(slot);
                    }
                }
            }
            self.nodes[i].observe(slot, &obs, &self.cfg, &mut self.node_rng[i]);
            decoded[i] = Some(obs.decoded);
        }

        for i in 0..self.nodes.len() {
            if !self.times.completed[i] && self.knows_all(i) {
                self.times.completed[i] = true;
                self.times.completion[i] = slot;
            }
        }
        SlotReport {
            slot,
            actions,
            decoded,
        }
    }

    // Node i holds a TNID and its table lists every neighbor's current TNID,
    // with no two neighbors sharing one.
    fn knows_all(&self, i: usize) -> bool {
        if self.nodes[i].tnid().is_none() {
            return false;
        }
        let mut seen = Vec::with_capacity(self.topo.neighbors(i).len());
        for &j in self.topo.neighbors(i) {
            match self.nodes[j].tnid() {
                Some(t) if self.nodes[i].neighbors().contains_key(&t) => seen.push(t),
                _ => return false,
            }
        }
        seen.sort_unstable();
        let n = seen.len();
        seen.dedup();
        seen.len() == n
    }

    fn receive(&mut self, rx_node: usize, txs: &[(usize, Tnid)], scanning: bool) -> Observation {
        let n = self.code.n();
        let d = self.codewords.len();
        let amp = self.cfg.tone_energy.sqrt();
        let empty = txs.is_empty() && self.channel.noise_var == 0.0;
        if empty {
            return Observation {
                decoded: Vec::new(),
                channel_energy: scanning.then(|| vec![0.0; d]),
            };
        }
        let (decoded, energy) = if self.channel.noise_var == 0.0 {
            let mut grid = SparseGrid::new(n, d);
            let field = self.code.field().clone();
            for &(j, t) in txs {
                let dist = self.topo.distance(rx_node, j).max(1.0);
                let shift = self.offsets[j] - self.offsets[rx_node];
                let flat = match self.channel.kind {
                    FadingKind::Awgn => Some(
                        channel::unit_phasor(&mut self.phy_rng)
                            * self.channel.path_gain(dist).sqrt(),
                    ),
                    FadingKind::RayleighBlock => None,
                };
                let mut per_bin: Vec<(u32, Complex64)> = Vec::with_capacity(n);
                for (sym, &c) in self.codewords[t.0 as usize].0.iter().enumerate() {
                    let b = field.reduce(c as i64 + shift);
                    let g = match flat {
                        Some(g) => g,
                        None => match per_bin.iter().find(|(x, _)| *x == b) {
                            Some(&(_, g)) => g,
                            None => {
                                let g = self.channel.bin_gain(dist, &mut self.phy_rng);
                                per_bin.push((b, g));
                                g
                            }
                        },
                    };
                    grid.add(sym, b, g * amp);
                }
            }
            let decoded = self
                .rx
                .receive_sparse(&self.code, &grid)
                .expect("validated receiver");
            (decoded, scanning.then(|| grid.channel_energy(&self.code)))
        } else {
            let transmissions: Vec<Transmission> = txs
                .iter()
                .map(|&(j, t)| {
                    let dist = self.topo.distance(rx_node, j).max(1.0);
                    let mut link_gain = self.channel.link_gain(d, dist, &mut self.phy_rng);
                    if self.channel.kind == FadingKind::Awgn {
                        channel::random_phase(&mut link_gain, &mut self.phy_rng);
                    }
                    Transmission {
                        codeword: self.codewords[t.0 as usize].clone(),
                        tone_energy: self.cfg.tone_energy,
                        link_gain,
                        offset: self.offsets[j] - self.offsets[rx_node],
                    }
                })
                .collect();
            let grid = channel::synthesize_slot(
                self.code.field(),
                &transmissions,
                &self.channel,
                &mut self.phy_rng,
            )
            .expect("codewords match the field");
            let decoded = self
                .rx
                .receive(&self.code, &grid)
                .expect("validated receiver");
            (decoded, scanning.then(|| grid.channel_energy(&self.code)))
        };
        Observation {
            decoded,
            channel_energy: energy,
        }
    }

    pub fn finish(self) -> DiscoveryOutcome {
        let mut times = self.times;
        for (c, done) in times.completion.iter_mut().zip(&times.completed) {
            if !done {
                *c = self.cfg.max_slots;
            }
        }
        DiscoveryOutcome {
            times,
            final_tnids: self.nodes.iter().map(NodeState::tnid).collect(),
            tables: self.nodes.iter().map(|s| s.neighbors().clone()).collect(),
            slots_run: self.slot,
        }
    }
}

/// Runs the protocol until the horizon, or until every node has completed
/// when `cfg.stop_when_complete` is set.
pub fn run_discovery<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &ProtocolConfig,
    code: &DiscoveryCode,
    channel: &ChannelModel,
    rx: &ReceiverConfig,
    rng: &mut R,
) -> Result<DiscoveryOutcome, ProtocolError> {
    let mut sim = DiscoverySim::new(topo, cfg.clone(), code.clone(), *channel, *rx, rng)?;
    while sim.slot() < cfg.max_slots {
        if cfg.stop_when_complete && sim.times().all_complete() {
            break;
        }
        sim.step();
    }
    Ok(sim.finish())
}
