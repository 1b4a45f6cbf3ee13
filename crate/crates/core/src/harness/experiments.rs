use num_complex::Complex64;
use rand::seq::index;

use super::{ExperimentConfig, HarnessError};
use crate::baseline::{p_discover, p_discover_opt, simulate_baseline};
use crate::channel::{self, synthesize_slot, unit_phasor, ChannelModel, FadingKind, Transmission};
use crate::codec::{Codeword, Tnid};
use crate::protocol::{nodes_for_mean_degree, run_discovery, Topology};
use crate::seed::{stream, SimRng};

#[derive(Debug, Clone, PartialEq)]
pub struct SnrRow {
    pub snr_db: f64,
    pub trials: u64,
    /// Missed transmitted TNIDs per transmitted TNID.
    pub erasure_rate: f64,
    /// Accepted non-transmitted TNIDs per transmitted TNID.
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    /// Nodes per unit area.
    pub density: f64,
    pub nodes: usize,
    pub median_proposed: f64,
    pub median_baseline: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub neighbors: u32,
    pub slots: u32,
    pub p: f64,
    pub p_discover: f64,
    pub p_discover_opt: f64,
}

/// Median of a sample; the mean of the middle pair for even sizes, NaN
/// when empty.
pub fn median(mut v: Vec<u64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

// Gains only on the bins the codeword occupies; the rest stay zero and are
// never read. Bins are independent, so this matches a full draw.
fn link_gains(model: &ChannelModel, cw: &Codeword, d: usize, rng: &mut SimRng) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); d];
    let mut set = vec![false; d];
    let phase = (model.kind == FadingKind::Awgn).then(|| unit_phasor(rng));
    for &c in &cw.0 {
        let b = c as usize;
        if !set[b] {
            set[b] = true;
            g[b] = model.bin_gain(1.0, rng) * phase.unwrap_or(Complex64::new(1.0, 0.0));
        }
    }
    g
}

/// Per SNR point, `trials` slots with `sim.transmitters` distinct random
/// TNIDs at unit path gain, pushed through synthesis, detection and decoding.
pub fn snr_sweep(cfg: &ExperimentConfig) -> Result<Vec<SnrRow>, HarnessError> {
    let code = cfg.code()?;
    let rx = cfg.receiver(&code);
    let d = code.pool_size() as usize;
    let tx_count = cfg.transmitters;
    let mut rows = Vec::with_capacity(cfg.sweep_snr_db.len());
    for (pt, &snr_db) in cfg.sweep_snr_db.iter().enumerate() {
        let model = ChannelModel {
            kind: cfg.channel_kind,
            noise_var: channel::snr_db_to_noise(snr_db, d),
            pathloss_exp: 0.0,
            ref_gain: 1.0,
        };
        let label = format!("sweep-snr/{pt}");
        let (mut erasures, mut errors) = (0u64, 0u64);
        for trial in 0..cfg.trials {
            let mut rng = stream(cfg.seed, &label, trial);
            let mut sent: Vec<u64> = index::sample(&mut rng, d, tx_count)
                .iter()
                .map(|m| m as u64)
                .collect();
            sent.sort_unstable();
            let txs = sent
                .iter()
                .map(|&m| {
                    let codeword = code
                        .encode_tnid(Tnid(m))
                        .map_err(|e| HarnessError::Runtime(e.to_string()))?;
                    let link_gain = link_gains(&model, &codeword, d, &mut rng);
                    Ok(Transmission {
                        codeword,
                        tone_energy: 1.0,
                        link_gain,
                        offset: 0,
                    })
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            let grid = synthesize_slot(code.field(), &txs, &model, &mut rng)
                .map_err(|e| HarnessError::Runtime(e.to_string()))?;
            let got = rx
                .receive(&code, &grid)
                .map_err(|e| HarnessError::Runtime(e.to_string()))?;
            let hits = got
                .iter()
                .filter(|r| sent.binary_search(&r.tnid.0).is_ok())
                .count() as u64;
            erasures += tx_count as u64 - hits;
            errors += got.len() as u64 - hits;
        }
        let total = (tx_count as u64 * cfg.trials) as f64;
        rows.push(SnrRow {
            snr_db,
            trials: cfg.trials,
            erasure_rate: erasures as f64 / total,
            error_rate: errors as f64 / total,
        });
    }
    Ok(rows)
}

/// Node counts of the density axis: explicit densities when given,
/// otherwise the counts that hit each target mean degree.
fn density_axis(cfg: &ExperimentConfig) -> Vec<usize> {
    if cfg.sweep_density.is_empty() {
        cfg.sweep_mean_degree
            .iter()
            .map(|&deg| {
                if deg <= 0.0 {
                    0
                } else {
                    nodes_for_mean_degree(deg, cfg.area, cfg.range)
                }
            })
            .collect()
    } else {
        cfg.sweep_density
            .iter()
            .map(|&rho| (rho * cfg.area).round() as usize)
            .collect()
    }
}

/// Both schemes on the same random drops; medians pool the completion slots
/// of every node with at least one neighbor across all trials. Points with
/// no nodes produce no row.
pub fn density_sweep(cfg: &ExperimentConfig) -> Result<Vec<DensityRow>, HarnessError> {
    let code = cfg.code()?;
    let rx = cfg.receiver(&code);
    let channel = cfg.channel();
    let mut rows = Vec::new();
    for (pt, nodes) in density_axis(cfg).into_iter().enumerate() {
        if nodes == 0 {
            continue;
        }
        let (mut prop, mut base) = (Vec::new(), Vec::new());
        for trial in 0..cfg.trials {
            let topo = Topology::random(
                nodes,
                cfg.area,
                cfg.range,
                &mut stream(cfg.seed, &format!("density-sweep/{pt}/topology"), trial),
            );
            let out = run_discovery(
                &topo,
                &cfg.protocol,
                &code,
                &channel,
                &rx,
                &mut stream(cfg.seed, &format!("density-sweep/{pt}/proposed"), trial),
            )
            .map_err(|e| HarnessError::Runtime(e.to_string()))?;
            let b = simulate_baseline(
                &topo,
                cfg.protocol.p,
                cfg.protocol.max_slots,
                &mut stream(cfg.seed, &format!("density-sweep/{pt}/baseline"), trial),
            );
            for i in (0..nodes).filter(|&i| !topo.neighbors(i).is_empty()) {
                prop.push(out.times.completion[i]);
                base.push(b.completion[i]);
            }
        }
        rows.push(DensityRow {
            density: nodes as f64 / cfg.area,
            nodes,
            median_proposed: median(prop),
            median_baseline: median(base),
        });
    }
    Ok(rows)
}

/// Closed-form discovery probabilities over the neighbor and slot axes at
/// `protocol.p`.
pub fn baseline_curve(cfg: &ExperimentConfig) -> Vec<CurveRow> {
    let p = cfg.protocol.p;
    let mut rows = Vec::new();
    for &l in &cfg.baseline_neighbors {
        for &t in &cfg.baseline_slots {
            let (l, t) = (l as u32, t as u32);
            rows.push(CurveRow {
                neighbors: l,
                slots: t,
                p,
                p_discover: p_discover(p, l, t),
                p_discover_opt: p_discover_opt(l, t),
            });
        }
    }
    rows
}
