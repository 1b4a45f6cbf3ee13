//! Experiment orchestration and CSV output.
//!
//! Each experiment derives its random streams from `(sim.seed, label, trial)`
//! so that every row depends only on the configuration and the seed.

mod config;
mod experiments;

use std::io::Write;

use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig};
pub use experiments::{
    baseline_curve, density_sweep, median, snr_sweep, CurveRow, DensityRow, SnrRow,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            _ => 2,
        }
    }
}

/// `%g` with 6 significant digits.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table whose first line is a `#` comment with the command, seed and
/// full resolved configuration.
pub fn write_csv<W: Write>(
    out: &mut W,
    command: &str,
    cfg: &ExperimentConfig,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), HarnessError> {
    writeln!(out, "# ndisc {command} seed={} {}", cfg.seed, cfg.render())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs a CSV-producing subcommand and returns the file contents.
pub fn run_command(command: &str, cfg: &ExperimentConfig) -> Result<Vec<u8>, HarnessError> {
    cfg.validate()?;
    let (header, rows): (&[&str], Vec<Vec<String>>) = match command {
        "sweep-snr" => (
            &["snr_db", "trials", "erasure_rate", "error_rate"],
            snr_sweep(cfg)?
                .iter()
                .map(|r| {
                    vec![
                        fmt_g(r.snr_db),
                        r.trials.to_string(),
                        fmt_g(r.erasure_rate),
                        fmt_g(r.error_rate),
                    ]
                })
                .collect(),
        ),
        "density-sweep" => (
            &["density", "nodes", "median_proposed", "median_baseline"],
            density_sweep(cfg)?
                .iter()
                .map(|r| {
                    vec![
                        fmt_g(r.density),
                        r.nodes.to_string(),
                        fmt_g(r.median_proposed),
                        fmt_g(r.median_baseline),
                    ]
                })
                .collect(),
        ),
        "baseline-curve" => (
            &["neighbors", "slots", "p", "p_discover", "p_discover_opt"],
            baseline_curve(cfg)
                .iter()
                .map(|r| {
                    vec![
                        r.neighbors.to_string(),
                        r.slots.to_string(),
                        fmt_g(r.p),
                        fmt_g(r.p_discover),
                        fmt_g(r.p_discover_opt),
                    ]
                })
                .collect(),
        ),
        other => {
            return Err(HarnessError::Runtime(format!(
                "unknown experiment `{other}`"
            )))
        }
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, command, cfg, header, &rows)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (1234567.0, "1.23457e+06"),
            (123456.0, "123456"),
            (0.000123456789, "0.000123457"),
            (0.0000123456, "1.23456e-05"),
            (-3.0, "-3"),
            (0.03874204890000001, "0.038742"),
            (999999.5, "1e+06"),
            (99999.95, "99999.9"),
            (1e-12, "1e-12"),
            (f64::NAN, "nan"),
        ];
        for (x, s) in cases {
            assert_eq!(fmt_g(x), s, "{x}");
        }
    }

    #[test]
    fn csv_starts_with_resolved_config() {
        let cfg = ExperimentConfig::default();
        let mut buf = Vec::new();
        write_csv(
            &mut buf,
            "x",
            &cfg,
            &["a", "b"],
            &[vec!["1".into(), "2".into()]],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# ndisc x seed=1 field.d=521 "));
        for k in ExperimentConfig::KEYS {
            assert!(first.contains(&format!(" {k}=")), "{k}");
        }
        assert_eq!(lines.collect::<Vec<_>>(), vec!["a,b", "1,2"]);
    }
}
