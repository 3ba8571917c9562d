//! `iabsim`: runs a path-selection campaign and writes CDF tables.
//!
//! Exit codes: 0 success, 1 invalid configuration or arguments, 2 IO failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use iab_core::policy::WBF_PRESETS;
use iab_core::{
    parse_config_file, run_campaign, write_results, Error, PolicyKind, PolicySpec, ResultBundle,
    SimConfig, WbfConfig,
};

#[derive(Debug, Parser)]
#[command(name = "iabsim", version, about = "IAB backhaul path-selection Monte Carlo simulator")]
struct Cli {
    /// TOML experiment description (defaults apply when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overrides the config file
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo repetitions
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated policies (HQF, WF, PA, MLR); replaces the configured list
    #[arg(long, value_delimiter = ',')]
    policies: Option<Vec<String>>,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Run the widest-path benchmark and report the optimality gap
    #[arg(long)]
    oracle: bool,
    /// Apply a wired-bias preset to every policy
    #[arg(long)]
    preset_wbf: Option<String>,
}

fn build_config(cli: &Cli) -> Result<SimConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(reps) = cli.reps {
        cfg.repetitions = reps;
    }
    if cli.oracle {
        cfg.oracle_enabled = true;
    }
    let preset = cli
        .preset_wbf
        .as_deref()
        .map(WbfConfig::preset)
        .transpose()?;
    if let Some(names) = &cli.policies {
        let wbf = preset.unwrap_or_else(WbfConfig::none);
        cfg.policies = names
            .iter()
            .map(|n| n.parse::<PolicyKind>().map(|k| PolicySpec::new(k, wbf)))
            .collect::<Result<_, _>>()?;
    } else if let Some(wbf) = preset {
        cfg.policies = cfg.policies.iter().map(|p| PolicySpec::new(p.kind, wbf)).collect();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = build_config(cli)?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let start = Instant::now();
    let campaign = run_campaign::<f64>(&cfg, cli.workers)?;
    let bundle = ResultBundle::new(&cfg, campaign.summary);
    write_results(&bundle, &cli.out)?;

    println!(
        "{} repetitions, seed {}, {:.1} s -> {}",
        cfg.repetitions,
        cfg.master_seed,
        start.elapsed().as_secs_f64(),
        cli.out.display()
    );
    println!(
        "{:<24} {:>8} {:>9} {:>9} {:>11} {:>11} {:>9}",
        "policy", "P(fail)", "mean hop", "med hop", "mean SNR", "med SNR", "gap dB"
    );
    let opt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
    for p in &bundle.summary.policies {
        println!(
            "{:<24} {:>8.4} {:>9} {:>9} {:>11} {:>11} {:>9}",
            p.label,
            p.failure_probability,
            opt(p.hops.map(|h| h.mean), 3),
            opt(p.hops.map(|h| h.median), 0),
            opt(p.bottleneck_snr_db.map(|s| s.mean), 2),
            opt(p.bottleneck_snr_db.map(|s| s.median), 2),
            opt(p.mean_oracle_gap_db, 2),
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::InvalidConfig { key, .. } = &e {
                if key.ends_with("wbf") {
                    eprintln!("valid presets: {}", WBF_PRESETS.join(", "));
                }
            }
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
