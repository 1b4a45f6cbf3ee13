use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ndisc::codec::{Codeword, DetectedTones, DiscoveryCode, Tnid};
use ndisc::gfield::Elem;
use ndisc::harness::{run_command, ConfigError, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(
    name = "ndisc",
    version,
    about = "Coded single-tone neighbor discovery experiments"
)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key=value` override applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a TNID, optionally shift and corrupt it, then decode it.
    Codec {
        tnid: u64,
        #[arg(long, default_value_t = 8)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 521)]
        d: u64,
        /// Subcarrier offset applied to every tone.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        /// Comma list of `symbol=tone` substitutions; `symbol=-` erases.
        #[arg(long)]
        corrupt: Option<String>,
        /// Acceptance threshold; the code default when absent.
        #[arg(long)]
        tau: Option<usize>,
    },
    /// Erasure and error rates against SNR.
    SweepSnr,
    /// Median discovery time of both schemes against node density.
    DensitySweep,
    /// Closed-form discovery probability tables of the baseline.
    BaselineCurve,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    for kv in &cli.sets {
        cfg.apply_assignment(kv)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn join(v: &[Elem]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn signed(x: Elem, d: Elem) -> i64 {
    if x > d / 2 {
        x as i64 - d as i64
    } else {
        x as i64
    }
}

// Received symbols after the corruption list: `None` marks an erasure.
fn apply_corruption(word: &[Elem], list: &str, d: Elem) -> Result<Vec<Option<Elem>>, String> {
    let mut out: Vec<Option<Elem>> = word.iter().map(|&x| Some(x)).collect();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let (i, v) = item
            .split_once('=')
            .ok_or_else(|| format!("corruption `{item}` is not `symbol=tone`"))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| format!("bad symbol index `{i}`"))?;
        if i >= out.len() {
            return Err(format!("symbol index {i} out of range 0..{}", out.len()));
        }
        out[i] = match v.trim() {
            "-" => None,
            t => {
                let t: Elem = t.parse().map_err(|_| format!("bad tone `{t}`"))?;
                if t >= d {
                    return Err(format!("tone {t} out of range 0..{d}"));
                }
                Some(t)
            }
        };
    }
    Ok(out)
}

/// Returns whether the round trip recovered the TNID.
#[allow(clippy::too_many_arguments)]
fn codec_roundtrip(
    tnid: u64,
    n: u64,
    k: usize,
    d: u64,
    offset: i64,
    corrupt: Option<&str>,
    tau: Option<usize>,
    out: &mut String,
) -> Result<bool, String> {
    use std::fmt::Write;
    let code = DiscoveryCode::with_params(d, n, k).map_err(|e| e.to_string())?;
    let f = code.field();
    let tau = tau.unwrap_or_else(|| code.default_threshold());
    let syms = code
        .message_to_symbols(Tnid(tnid))
        .map_err(|e| e.to_string())?;
    let cw = code.encode(&syms).map_err(|e| e.to_string())?;
    let shifted = cw.shifted(f, offset);
    let received = apply_corruption(&shifted.0, corrupt.unwrap_or(""), f.d())?;
    let delta_max = (offset.unsigned_abs().max(3) as u32).min((f.d() - 1) / 2);

    let _ = writeln!(
        out,
        "field: D={} alpha={} N={} beta={}",
        f.d(),
        f.alpha(),
        f.n(),
        f.beta()
    );
    let _ = writeln!(out, "tnid: {tnid}");
    let _ = writeln!(out, "symbols: {}", join(&syms.0));
    let _ = writeln!(out, "codeword: {}", join(&cw.0));
    let shown: Vec<String> = received
        .iter()
        .map(|x| x.map_or_else(|| "-".to_string(), |t| t.to_string()))
        .collect();
    let _ = writeln!(out, "received: {}", shown.join(","));
    if received.iter().all(Option::is_some) {
        let word = Codeword(received.iter().map(|x| x.unwrap()).collect());
        let valid = code.is_valid_codeword(&word).map_err(|e| e.to_string())?;
        let est = code.estimate_offset(&word).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "valid: {valid}");
        let _ = writeln!(out, "offset estimate: {}", signed(est, f.d()));
    } else {
        let _ = writeln!(out, "valid: false");
    }
    let det = DetectedTones::new(
        received
            .iter()
            .map(|x| x.iter().copied().collect())
            .collect(),
    );
    let results = code
        .decode_with_offset_search(&det, tau, delta_max)
        .map_err(|e| e.to_string())?;
    match results.first() {
        Some(r) => {
            let _ = writeln!(
                out,
                "decoded: {} offset={} matches={}/{}",
                r.tnid,
                r.offset,
                r.matches,
                code.n()
            );
        }
        None => {
            let _ = writeln!(out, "decoded: none");
        }
    }
    Ok(results
        .first()
        .is_some_and(|r| r.tnid == Tnid(tnid) && r.offset == offset))
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), HarnessError> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Codec {
        tnid,
        n,
        k,
        d,
        offset,
        corrupt,
        tau,
    } = &cli.command
    {
        let mut text = String::new();
        return match codec_roundtrip(
            *tnid,
            *n,
            *k,
            *d,
            *offset,
            corrupt.as_deref(),
            *tau,
            &mut text,
        ) {
            Ok(ok) => match write_out(cli.out.as_ref(), text.as_bytes()) {
                Ok(()) if ok => ExitCode::SUCCESS,
                Ok(()) => {
                    eprintln!("error: round trip failed");
                    ExitCode::from(2)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            },
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    let name = match cli.command {
        Command::SweepSnr => "sweep-snr",
        Command::DensitySweep => "density-sweep",
        Command::BaselineCurve => "baseline-curve",
        Command::Codec { .. } => unreachable!(),
    };
    let result = resolve(&cli)
        .map_err(HarnessError::from)
        .and_then(|cfg| run_command(name, &cfg))
        .and_then(|bytes| write_out(cli.out.as_ref(), &bytes));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
