//! Command-line driver: reads an experiment config, runs Monte Carlo
//! campaigns and writes plot-ready CSV plus a run manifest.

pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mspr_core::{run_campaign, CampaignConfig, CampaignResult};

pub use config::{load_config, ConfigFile};
pub use error::CliError;
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "mspr", version, about = "Capon vs. MSPR-Capon beamforming simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo SINR comparison; writes sinr_summary.csv and per_trial.csv.
    Simulate(CommonArgs),
    /// Trial-averaged beam patterns; writes pattern.csv.
    Pattern(CommonArgs),
    /// MSPR mean SINR for each γ; writes gamma_sweep.csv.
    SweepGamma {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated γ values, e.g. 0.1,0.5,1,2,10.
        #[arg(long = "gamma", value_name = "LIST")]
        gamma: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Experiment config (TOML) or a manifest from a previous run.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
}

impl CommonArgs {
    /// Loads the config and applies command-line overrides.
    pub fn load(&self) -> Result<ConfigFile, CliError> {
        let mut cfg = load_config(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.campaign.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            cfg.campaign.num_trials = trials;
        }
        Ok(cfg)
    }
}

pub fn parse_gamma_list(text: &str) -> Result<Vec<f64>, CliError> {
    let gammas = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|g| g.is_finite() && *g >= 0.0)
                .ok_or_else(|| CliError::Usage(format!("invalid gamma value `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if gammas.is_empty() {
        return Err(CliError::Usage("--gamma needs at least one value".into()));
    }
    Ok(gammas)
}

fn resolve(cfg: &ConfigFile) -> Result<CampaignConfig, CliError> {
    cfg.resolve()
        .map_err(|e| CliError::Usage(format!("invalid config: {e}")))
}

fn campaign(cfg: &CampaignConfig) -> Result<CampaignResult, CliError> {
    let result = run_campaign(cfg).map_err(|e| CliError::Runtime(format!("campaign failed: {e}")))?;
    if result.successful_trials() == 0 {
        let first = result
            .trials
            .iter()
            .find_map(|t| t.result.as_ref().err())
            .map(ToString::to_string)
            .unwrap_or_default();
        return Err(CliError::Runtime(format!(
            "all {} trials failed (first error: {first})",
            result.failed_trials
        )));
    }
    Ok(result)
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::Usage(format!("cannot create output directory {}: {e}", dir.display()))
    })
}

fn write(dir: &Path, name: &str, text: &str, manifest: &mut RunManifest) -> Result<(), CliError> {
    output::write_atomic(&dir.join(name), text.as_bytes())?;
    manifest.outputs.push(name.to_owned());
    Ok(())
}

pub fn cmd_simulate(args: &CommonArgs) -> Result<CampaignResult, CliError> {
    let started = manifest::unix_ms();
    let file = args.load()?;
    let cfg = resolve(&file)?;
    prepare_out(&args.out)?;
    let result = campaign(&cfg)?;
    let mut manifest = RunManifest::new("simulate", &file, started);
    write(&args.out, output::SUMMARY_FILE, &output::summary_csv(&result), &mut manifest)?;
    write(&args.out, output::PER_TRIAL_FILE, &output::per_trial_csv(&result), &mut manifest)?;
    manifest.write(&args.out)?;
    Ok(result)
}

pub fn cmd_pattern(args: &CommonArgs) -> Result<CampaignResult, CliError> {
    let started = manifest::unix_ms();
    let file = args.load()?;
    let cfg = resolve(&file)?;
    prepare_out(&args.out)?;
    let result = campaign(&cfg)?;
    let (Some(capon), Some(mspr)) = (&result.capon.mean_pattern, &result.mspr.mean_pattern) else {
        return Err(CliError::Runtime("no successful trials to average".into()));
    };
    let mut manifest = RunManifest::new("pattern", &file, started);
    write(&args.out, output::PATTERN_FILE, &output::pattern_csv(capon, mspr), &mut manifest)?;
    manifest.write(&args.out)?;
    Ok(result)
}

pub fn cmd_sweep_gamma(args: &CommonArgs, gammas: &[f64]) -> Result<Vec<(f64, f64)>, CliError> {
    let started = manifest::unix_ms();
    if gammas.is_empty() {
        return Err(CliError::Usage("--gamma needs at least one value".into()));
    }
    let file = args.load()?;
    let base = resolve(&file)?;
    prepare_out(&args.out)?;
    let mut rows = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let mut cfg = base.clone();
        cfg.mspr.gamma = gamma;
        let result = campaign(&cfg)?;
        rows.push((gamma, result.mspr.mean_sinr_db));
    }
    let mut manifest = RunManifest::new("sweep-gamma", &file, started);
    manifest.gammas = gammas.to_vec();
    write(&args.out, output::GAMMA_SWEEP_FILE, &output::gamma_sweep_csv(&rows), &mut manifest)?;
    manifest.write(&args.out)?;
    Ok(rows)
}

/// Dispatches a parsed command line and prints a short report to stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let result = cmd_simulate(&args)?;
            print!("{}", output::human_summary(&result));
        }
        Command::Pattern(args) => {
            let result = cmd_pattern(&args)?;
            println!(
                "wrote {} ({} trials averaged)",
                args.out.join(output::PATTERN_FILE).display(),
                result.successful_trials()
            );
        }
        Command::SweepGamma { common, gamma } => {
            let gammas = parse_gamma_list(&gamma)?;
            for (g, mean) in cmd_sweep_gamma(&common, &gammas)? {
                println!("gamma {g:<8} MSPR mean SINR {mean:.4} dB");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_lists() {
        assert_eq!(parse_gamma_list("0.1, 0.5,1,2,10").unwrap(), vec![0.1, 0.5, 1.0, 2.0, 10.0]);
        assert!(matches!(parse_gamma_list(""), Err(CliError::Usage(_))));
        assert!(matches!(parse_gamma_list(" , "), Err(CliError::Usage(_))));
        assert!(parse_gamma_list("1,x").is_err());
        assert!(parse_gamma_list("-1").is_err());
    }
}
