use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::channel::{self, ChannelModel, FadingKind};
use crate::codec::DiscoveryCode;
use crate::protocol::ProtocolConfig;
use crate::receiver::ReceiverConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    Value { key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

fn bad(key: &str, msg: impl ToString) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        msg: msg.to_string(),
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| bad(key, e))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse(key, x.trim())).collect()
}

fn parse_opt<T: FromStr>(key: &str, v: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    match v {
        "auto" | "none" | "" => Ok(None),
        _ => parse(key, v).map(Some),
    }
}

fn show_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn show_opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "auto".to_string(), T::to_string)
}

/// Every tunable of an experiment run. Unset optional keys print as `auto`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub d: u64,
    pub n: u64,
    pub k: usize,
    pub channel_kind: FadingKind,
    pub pathloss_exp: f64,
    pub ref_gain: f64,
    pub gamma: f64,
    /// `None` selects the code's default threshold.
    pub tau: Option<usize>,
    pub delta_max: u32,
    pub protocol: ProtocolConfig,
    pub seed: u64,
    pub trials: u64,
    pub area: f64,
    pub range: f64,
    /// Simultaneous transmitters per slot in the SNR sweep.
    pub transmitters: usize,
    /// Per-bin SNR of protocol runs; `None` is noiseless.
    pub snr_db: Option<f64>,
    pub sweep_snr_db: Vec<f64>,
    /// Target mean node degrees; used when `sweep_density` is empty.
    pub sweep_mean_degree: Vec<f64>,
    /// Nodes per unit area.
    pub sweep_density: Vec<f64>,
    pub baseline_neighbors: Vec<f64>,
    pub baseline_slots: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            d: 521,
            n: 8,
            k: 1,
            channel_kind: FadingKind::RayleighBlock,
            pathloss_exp: 0.0,
            ref_gain: 1.0,
            gamma: ReceiverConfig::DEFAULT_GAMMA,
            tau: None,
            delta_max: 0,
            protocol: ProtocolConfig::default(),
            seed: 1,
            trials: 1000,
            area: 1024.0,
            range: 10.0,
            transmitters: 30,
            snr_db: None,
            sweep_snr_db: (0..9).map(|i| -24.0 + 3.0 * i as f64).collect(),
            sweep_mean_degree: vec![2.0, 5.0, 10.0],
            sweep_density: Vec::new(),
            baseline_neighbors: vec![1.0, 2.0, 5.0, 10.0],
            baseline_slots: vec![1.0, 10.0, 50.0, 100.0],
        }
    }
}

impl ExperimentConfig {
    pub const KEYS: &'static [&'static str] = &[
        "field.d",
        "code.n",
        "code.k",
        "channel.kind",
        "channel.pathloss_exp",
        "channel.ref_gain",
        "detect.gamma",
        "decode.tau",
        "decode.delta_max",
        "protocol.p",
        "protocol.period",
        "protocol.m",
        "protocol.w",
        "protocol.acq_window",
        "protocol.c",
        "protocol.jam_margin",
        "protocol.jam_burst",
        "protocol.max_slots",
        "protocol.max_offset",
        "sim.seed",
        "sim.trials",
        "sim.area",
        "sim.range",
        "sim.transmitters",
        "sim.snr_db",
        "sweep.snr_db",
        "sweep.mean_degree",
        "sweep.density",
        "baseline.neighbors",
        "baseline.slots",
    ];

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_assignment(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (k, v) = kv.split_once('=').ok_or(ConfigError::Syntax { line: 0 })?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let p = &mut self.protocol;
        match key {
            "field.d" => self.d = parse(key, v)?,
            "code.n" => self.n = parse(key, v)?,
            "code.k" => self.k = parse(key, v)?,
            "channel.kind" => self.channel_kind = v.parse().map_err(|e: String| bad(key, e))?,
            "channel.pathloss_exp" => self.pathloss_exp = parse(key, v)?,
            "channel.ref_gain" => self.ref_gain = parse(key, v)?,
            "detect.gamma" => self.gamma = parse(key, v)?,
            "decode.tau" => self.tau = parse_opt(key, v)?,
            "decode.delta_max" => self.delta_max = parse(key, v)?,
            "protocol.p" => p.p = parse(key, v)?,
            "protocol.period" => p.period = parse(key, v)?,
            "protocol.m" => p.candidates = parse(key, v)?,
            "protocol.w" => p.window = parse(key, v)?,
            "protocol.acq_window" => p.acq_window = parse(key, v)?,
            "protocol.c" => p.collision_count = parse(key, v)?,
            "protocol.jam_margin" => p.jam_margin = parse_opt(key, v)?,
            "protocol.jam_burst" => p.jam_burst = parse(key, v)?,
            "protocol.max_slots" => p.max_slots = parse(key, v)?,
            "protocol.max_offset" => p.max_offset = parse(key, v)?,
            "sim.seed" => self.seed = parse(key, v)?,
            "sim.trials" => self.trials = parse(key, v)?,
            "sim.area" => self.area = parse(key, v)?,
            "sim.range" => self.range = parse(key, v)?,
            "sim.transmitters" => self.transmitters = parse(key, v)?,
            "sim.snr_db" => self.snr_db = parse_opt(key, v)?,
            "sweep.snr_db" => self.sweep_snr_db = parse_list(key, v)?,
            "sweep.mean_degree" => self.sweep_mean_degree = parse_list(key, v)?,
            "sweep.density" => self.sweep_density = parse_list(key, v)?,
            "baseline.neighbors" => self.baseline_neighbors = parse_list(key, v)?,
            "baseline.slots" => self.baseline_slots = parse_list(key, v)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Value of `key` as it would be written in a config file.
    pub fn get(&self, key: &str) -> Option<String> {
        let p = &self.protocol;
        Some(match key {
            "field.d" => self.d.to_string(),
            "code.n" => self.n.to_string(),
            "code.k" => self.k.to_string(),
            "channel.kind" => self.channel_kind.to_string(),
            "channel.pathloss_exp" => self.pathloss_exp.to_string(),
            "channel.ref_gain" => self.ref_gain.to_string(),
            "detect.gamma" => self.gamma.to_string(),
            "decode.tau" => show_opt(&self.tau),
            "decode.delta_max" => self.delta_max.to_string(),
            "protocol.p" => p.p.to_string(),
            "protocol.period" => p.period.to_string(),
            "protocol.m" => p.candidates.to_string(),
            "protocol.w" => p.window.to_string(),
            "protocol.acq_window" => p.acq_window.to_string(),
            "protocol.c" => p.collision_count.to_string(),
            "protocol.jam_margin" => show_opt(&p.jam_margin),
            "protocol.jam_burst" => p.jam_burst.to_string(),
            "protocol.max_slots" => p.max_slots.to_string(),
            "protocol.max_offset" => p.max_offset.to_string(),
            "sim.seed" => self.seed.to_string(),
            "sim.trials" => self.trials.to_string(),
            "sim.area" => self.area.to_string(),
            "sim.range" => self.range.to_string(),
            "sim.transmitters" => self.transmitters.to_string(),
            "sim.snr_db" => self
                .snr_db
                .map_or_else(|| "none".to_string(), |x| x.to_string()),
            "sweep.snr_db" => show_list(&self.sweep_snr_db),
            "sweep.mean_degree" => show_list(&self.sweep_mean_degree),
            "sweep.density" => show_list(&self.sweep_density),
            "baseline.neighbors" => show_list(&self.baseline_neighbors),
            "baseline.slots" => show_list(&self.baseline_slots),
            _ => return None,
        })
    }

    /// All keys in canonical order, space separated, for CSV headers.
    pub fn render(&self) -> String {
        Self::KEYS
            .iter()
            .map(|k| format!("{k}={}", self.get(k).expect("listed key")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn code(&self) -> Result<DiscoveryCode, ConfigError> {
        DiscoveryCode::with_params(self.d, self.n, self.k)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn receiver(&self, code: &DiscoveryCode) -> ReceiverConfig {
        ReceiverConfig {
            gamma: self.gamma,
            tau: self.tau.unwrap_or_else(|| code.default_threshold()),
            delta_max: self.delta_max,
        }
    }

    /// Channel for protocol runs, noiseless unless `sim.snr_db` is set.
    pub fn channel(&self) -> ChannelModel {
        ChannelModel {
            kind: self.channel_kind,
            noise_var: self
                .snr_db
                .map_or(0.0, |s| channel::snr_db_to_noise(s, self.d as usize)),
            pathloss_exp: self.pathloss_exp,
            ref_gain: self.ref_gain,
        }
    }

    /// Checks every precondition the experiments rely on.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        let code = self.code()?;
        let rx = self.receiver(&code);
        if rx.tau < self.k || rx.tau > code.n() {
            return invalid(format!(
                "decode.tau = {} outside {}..={}",
                rx.tau,
                self.k,
                code.n()
            ));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return invalid(format!("detect.gamma = {} must be positive", self.gamma));
        }
        if 2 * self.delta_max as u64 >= self.d {
            return invalid(format!(
                "decode.delta_max = {} too large for field.d = {}",
                self.delta_max, self.d
            ));
        }
        if self.k == 1 {
            self.protocol
                .validate(code.pool_size())
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if !(self.pathloss_exp >= 0.0 && self.pathloss_exp.is_finite()) {
            return invalid("channel.pathloss_exp must be non-negative".into());
        }
        if !(self.ref_gain > 0.0 && self.ref_gain.is_finite()) {
            return invalid("channel.ref_gain must be positive".into());
        }
        if self.trials == 0 {
            return invalid("sim.trials must be at least 1".into());
        }
        if !(self.area > 0.0 && self.area.is_finite())
            || !(self.range > 0.0 && self.range.is_finite())
        {
            return invalid("sim.area and sim.range must be positive".into());
        }
        if self.transmitters == 0 || self.transmitters as u64 > code.pool_size() {
            return invalid(format!(
                "sim.transmitters = {} outside 1..={}",
                self.transmitters,
                code.pool_size()
            ));
        }
        if self.snr_db.is_some_and(|s| !s.is_finite())
            || self.sweep_snr_db.iter().any(|s| !s.is_finite())
        {
            return invalid("SNR values must be finite".into());
        }
        if self
            .sweep_mean_degree
            .iter()
            .any(|&x| !(x >= 0.0 && x.is_finite()))
        {
            return invalid("sweep.mean_degree values must be non-negative".into());
        }
        if self
            .sweep_density
            .iter()
            .any(|&x| !(x >= 0.0 && x.is_finite()))
        {
            return invalid("sweep.density values must be non-negative".into());
        }
        if self
            .baseline_neighbors
            .iter()
            .any(|&l| l < 1.0 || l.fract() != 0.0)
        {
            return invalid("baseline.neighbors must be positive integers".into());
        }
        if self
            .baseline_slots
            .iter()
            .any(|&t| t < 0.0 || t.fract() != 0.0)
        {
            return invalid("baseline.slots must be non-negative integers".into());
        }
        Ok(())
    }
}
