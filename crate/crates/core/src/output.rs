//! Result emission: `summary.json` plus one `hops_cdf.csv` / `snr_cdf.csv`
//! pair per policy, under `<out>/<label>/`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cdf::EmpiricalCdf;
use crate::config::ConfigFile;
use crate::error::{Error, Result};
use crate::simulate::{CampaignSummary, SimConfig};

pub const CSV_HEADER: &str = "value,cdf";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub code_version: String,
    pub master_seed: u64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfTable {
    pub label: String,
    /// `(hops, cdf)` steps over successful paths.
    pub hops: Vec<(f64, f64)>,
    /// `(bottleneck SNR dB, cdf)` steps over successful paths.
    pub bottleneck_snr_db: Vec<(f64, f64)>,
}

/// Everything a campaign produces, as written to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub metadata: RunMetadata,
    /// Explicit config document; parsing it reproduces the run.
    pub config: ConfigFile,
    pub summary: CampaignSummary,
    pub cdfs: Vec<CdfTable>,
}

impl ResultBundle {
    pub fn new(cfg: &SimConfig, summary: CampaignSummary) -> Self {
        let steps = |c: &Option<EmpiricalCdf<f64>>| c.as_ref().map(|c| c.steps()).unwrap_or_default();
        let cdfs = summary
            .policies
            .iter()
            .map(|p| CdfTable {
                label: p.label.clone(),
                hops: steps(&p.hop_cdf),
                bottleneck_snr_db: steps(&p.snr_cdf),
            })
            .collect();
        Self {
            metadata: RunMetadata {
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                master_seed: cfg.master_seed,
                repetitions: cfg.repetitions,
            },
            config: ConfigFile::echo(cfg),
            summary,
            cdfs,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::InvalidArgument(format!("serializing summary: {e}")))
    }
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros removed, scientific notation for very large or small magnitudes.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV body for one CDF: header, then `value,cdf` rows ascending by value.
pub fn cdf_csv(steps: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(16 * (steps.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (v, f) in steps {
        out.push_str(&format_significant(*v, 6));
        out.push(',');
        out.push_str(&format!("{f:.6}"));
        out.push('\n');
    }
    out
}

/// Parses a CSV written by [`cdf_csv`].
pub fn parse_cdf_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse(format!("missing `{CSV_HEADER}` header")));
    }
    lines
        .map(|l| {
            let (v, f) = l
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed row `{l}`")))?;
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
            Ok((parse(v)?, parse(f)?))
        })
        .collect()
}

/// Writes `summary.json` and per-policy CDF tables; returns the written paths.
pub fn write_results(bundle: &ResultBundle, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    let mut put = |path: PathBuf, body: String| -> Result<()> {
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };

    put(out_dir.join("summary.json"), bundle.to_json()?)?;
    for table in &bundle.cdfs {
        let dir = out_dir.join(&table.label);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        put(dir.join("hops_cdf.csv"), cdf_csv(&table.hops))?;
        put(dir.join("snr_cdf.csv"), cdf_csv(&table.bottleneck_snr_db))?;
    }
    Ok(written)
}
