//! Frequency-domain model of one discovery slot.
//!
//! Every transmitter puts a complex amplitude on one bin per OFDM symbol;
//! amplitudes landing on the same bin add. Complex white noise is added to
//! every bin and the receiver sees squared magnitudes. The time-domain
//! waveform is never built: cyclic prefix and timing are taken as ideal.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::codec::{Codeword, DetectedTones, DiscoveryCode};
use crate::gfield::{Elem, FieldParams};

/// Median guard used by tone detection when most bins are empty.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("negative tone energy {0}")]
    NegativeEnergy(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingKind {
    /// Flat, deterministic path-loss gain.
    Awgn,
    /// Independent unit-power complex Gaussian gain per bin, redrawn per slot.
    RayleighBlock,
}

impl std::str::FromStr for FadingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "awgn" => Ok(FadingKind::Awgn),
            "rayleigh" | "rayleigh_block" => Ok(FadingKind::RayleighBlock),
            other => Err(format!("unknown channel kind '{other}'")),
        }
    }
}

impl std::fmt::Display for FadingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FadingKind::Awgn => "awgn",
            FadingKind::RayleighBlock => "rayleigh",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub kind: FadingKind,
    /// Complex noise variance per frequency bin.
    pub noise_var: f64,
    pub pathloss_exp: f64,
    /// Power gain at unit distance.
    pub ref_gain: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        ChannelModel {
            kind: FadingKind::RayleighBlock,
            noise_var: 0.0,
            pathloss_exp: 0.0,
            ref_gain: 1.0,
        }
    }
}

/// Circularly symmetric complex Gaussian with total variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(var: f64, rng: &mut R) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

pub fn unit_phasor<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

impl ChannelModel {
    /// Mean power gain `ref_gain * distance^-pathloss_exp`.
    pub fn path_gain(&self, distance: f64) -> f64 {
        assert!(distance > 0.0, "link distance must be positive");
        self.ref_gain * distance.powf(-self.pathloss_exp)
    }

    /// Gain of a single bin on a link of the given distance.
    pub fn bin_gain<R: Rng + ?Sized>(&self, distance: f64, rng: &mut R) -> Complex64 {
        let pg = self.path_gain(distance);
        match self.kind {
            FadingKind::Awgn => Complex64::new(pg.sqrt(), 0.0),
            FadingKind::RayleighBlock => complex_gaussian(pg, rng),
        }
    }

    /// Per-bin complex gains of one transmitter-to-receiver link for one
    /// slot. AWGN links are real and flat; see [`random_phase`].
    pub fn link_gain<R: Rng + ?Sized>(
        &self,
        bins: usize,
        distance: f64,
        rng: &mut R,
    ) -> Vec<Complex64> {
        (0..bins).map(|_| self.bin_gain(distance, rng)).collect()
    }
}

/// Rotates a whole link by one uniform random phase.
pub fn random_phase<R: Rng + ?Sized>(gains: &mut [Complex64], rng: &mut R) {
    let rot = unit_phasor(rng);
    for g in gains {
        *g *= rot;
    }
}

/// One transmitter as seen by one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub codeword: Codeword,
    pub tone_energy: f64,
    /// One complex gain per subcarrier.
    pub link_gain: Vec<Complex64>,
    /// Subcarrier shift applied to every tone.
    pub offset: i64,
}

/// Received energies, one row of `d` bins per OFDM symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ToneGrid {
    n: usize,
    d: usize,
    energy: Vec<f64>,
}

impl ToneGrid {
    pub fn zeros(n: usize, d: usize) -> Self {
        ToneGrid {
            n,
            d,
            energy: vec![0.0; n * d],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == d), "ragged grid");
        ToneGrid {
            n,
            d,
            energy: rows.into_iter().flatten().collect(),
        }
    }

    pub fn symbols(&self) -> usize {
        self.n
    }

    pub fn bins(&self) -> usize {
        self.d
    }

    pub fn row(&self, symbol: usize) -> &[f64] {
        &self.energy[symbol * self.d..(symbol + 1) * self.d]
    }

    pub fn energy(&self, symbol: usize, bin: usize) -> f64 {
        self.energy[symbol * self.d + bin]
    }

    /// Total energy on each single-digit discovery channel:
    /// `sum_j energy(j, u * beta^j)` for every `u`.
    pub fn channel_energy(&self, code: &DiscoveryCode) -> Vec<f64> {
        let f = code.field();
        (0..f.d())
            .map(|u| {
                (0..self.n)
                    .map(|j| self.energy(j, f.mul(u, f.beta_pow(j)) as usize))
                    .sum()
            })
            .collect()
    }
}

fn mod_bin(c: Elem, offset: i64, d: usize) -> usize {
    (c as i64 + offset).rem_euclid(d as i64) as usize
}

/// Superposes all transmissions, adds complex noise of variance
/// `model.noise_var` to every bin and returns squared magnitudes.
pub fn synthesize_slot<R: Rng + ?Sized>(
    field: &FieldParams,
    txs: &[Transmission],
    model: &ChannelModel,
    rng: &mut R,
) -> Result<ToneGrid, ChannelError> {
    let n = field.n();
    let d = field.d() as usize;
    for (i, tx) in txs.iter().enumerate() {
        if tx.codeword.len() != n {
            return Err(ChannelError::DimensionMismatch(format!(
                "transmission {i}: codeword length {} != {n}",
                tx.codeword.len()
            )));
        }
        if tx.link_gain.len() != d {
            return Err(ChannelError::DimensionMismatch(format!(
                "transmission {i}: {} link gains for {d} bins",
                tx.link_gain.len()
            )));
        }
        if tx.tone_energy < 0.0 {
            return Err(ChannelError::NegativeEnergy(tx.tone_energy));
        }
    }
    let mut amp = vec![Complex64::new(0.0, 0.0); n * d];
    for tx in txs {
        let a = tx.tone_energy.sqrt();
        for (j, &c) in tx.codeword.0.iter().enumerate() {
            let b = mod_bin(c, tx.offset, d);
            amp[j * d + b] += tx.link_gain[b] * a;
        }
    }
    if model.noise_var > 0.0 {
        for x in amp.iter_mut() {
            *x += complex_gaussian(model.noise_var, rng);
        }
    }
    Ok(ToneGrid {
        n,
        d,
        energy: amp.iter().map(|x| x.norm_sqr()).collect(),
    })
}

fn threshold(median: f64, gamma: f64) -> f64 {
    gamma * median.max(NOISE_FLOOR)
}

/// Per symbol, keeps the bins whose energy exceeds `gamma` times the
/// symbol's median bin energy (floored at [`NOISE_FLOOR`]).
pub fn detect_tones(grid: &ToneGrid, gamma: f64) -> DetectedTones {
    assert!(gamma > 1.0, "detection factor must exceed 1");
    let mut scratch = Vec::with_capacity(grid.d);
    let symbols = (0..grid.n)
        .map(|j| {
            let row = grid.row(j);
            scratch.clear();
            scratch.extend_from_slice(row);
            let mid = grid.d / 2;
            let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
            let thr = threshold(*median, gamma);
            row.iter()
                .enumerate()
                .filter(|&(_, &e)| e > thr)
                .map(|(b, _)| b as Elem)
                .collect()
        })
        .collect();
    DetectedTones::new(symbols)
}

/// Noise-free grid holding only the bins that carry energy.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseGrid {
    d: usize,
    rows: Vec<Vec<(Elem, Complex64)>>,
}

impl SparseGrid {
    pub fn new(n: usize, d: usize) -> Self {
        SparseGrid {
            d,
            rows: vec![Vec::new(); n],
        }
    }

    /// Adds a complex amplitude on `bin` of `symbol`.
    pub fn add(&mut self, symbol: usize, bin: Elem, amplitude: Complex64) {
        let row = &mut self.rows[symbol];
        match row.iter_mut().find(|(b, _)| *b == bin) {
            Some((_, a)) => *a += amplitude,
            None => row.push((bin, amplitude)),
        }
    }

    /// Nonzero `(bin, energy)` pairs of one symbol.
    pub fn energies(&self, symbol: usize) -> impl Iterator<Item = (Elem, f64)> + '_ {
        self.rows[symbol].iter().map(|&(b, a)| (b, a.norm_sqr()))
    }

    /// Same rule as [`detect_tones`] applied to the implied dense grid.
    pub fn detect(&self, gamma: f64) -> DetectedTones {
        assert!(gamma > 1.0, "detection factor must exceed 1");
        let symbols = (0..self.rows.len())
            .map(|j| {
                let mut e: Vec<f64> = self.energies(j).map(|(_, x)| x).collect();
                let zeros = self.d - e.len();
                let mid = self.d / 2;
                let median = if mid < zeros {
                    0.0
                } else {
                    e.sort_by(f64::total_cmp);
                    e[mid - zeros]
                };
                let thr = threshold(median, gamma);
                self.energies(j)
                    .filter(|&(_, x)| x > thr)
                    .map(|(b, _)| b)
                    .collect()
            })
            .collect();
        DetectedTones::new(symbols)
    }

    /// Per-channel energy for a single-digit code, as
    /// [`ToneGrid::channel_energy`].
    pub fn channel_energy(&self, code: &DiscoveryCode) -> Vec<f64> {
        let f = code.field();
        let mut out = vec![0.0; f.d() as usize];
        for j in 0..self.rows.len() {
            for (b, e) in self.energies(j) {
                out[f.mul(b, f.beta_inv_pow(j)) as usize] += e;
            }
        }
        out
    }

    pub fn to_dense(&self) -> ToneGrid {
        let mut g = ToneGrid::zeros(self.rows.len(), self.d);
        for j in 0..self.rows.len() {
            for (b, e) in self.energies(j) {
                g.energy[j * self.d + b as usize] = e;
            }
        }
        g
    }
}

/// Per-bin noise variance for a per-sample SNR, with one unit-energy tone
/// per OFDM symbol of `d` samples and a unitary transform: `1 / (d * snr)`.
pub fn snr_to_noise(snr: f64, d: usize) -> f64 {
    assert!(snr > 0.0, "snr must be positive");
    1.0 / (d as f64 * snr)
}

pub fn snr_db_to_noise(snr_db: f64, d: usize) -> f64 {
    snr_to_noise(10f64.powf(snr_db / 10.0), d)
}
