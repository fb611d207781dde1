use rayon::prelude::*;

use super::{beam_pattern, mean_and_std, raw_gains, sinr_db, BeamPattern, Sinr};
use crate::beamformers::{capon_weights, mspr_solve, MsprConfig};
use crate::error::{Error, Result};
use crate::manifold::{build_manifold, partition_manifold, AngleGrid, ArrayGeometry, Manifold, ManifoldPartition};
use crate::scene::{generate_snapshots, sample_covariance, Scene};

/// Everything needed to reproduce a Monte Carlo run.
///
/// `steer_angle_deg` may differ from the scene's SOI direction; both
/// beamformers are then constrained and partitioned around the steering
/// angle while the data and the SINR use the true direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub scene: Scene,
    pub geometry: ArrayGeometry,
    pub grid: AngleGrid,
    pub steer_angle_deg: f64,
    pub half_width_bins: usize,
    pub mspr: MsprConfig,
    pub num_trials: usize,
    pub master_seed: u64,
    /// Diagonal loading as a multiple of `trace(R̂)/M`; 0 disables it.
    pub loading_factor: f64,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_trials == 0 {
            return Err(Error::InvalidParameter {
                name: "num_trials",
                reason: "need at least one trial".into(),
            });
        }
        if !(self.loading_factor.is_finite() && self.loading_factor >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "loading_factor",
                reason: format!("must be nonnegative, got {}", self.loading_factor),
            });
        }
        self.mspr.validate()
    }
}

/// Seed of trial `trial` under `master_seed` (SplitMix64 finalizer over
/// both). Independent of execution order.
pub fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(master_seed ^ mix(trial as u64))
}

/// Per-trial measurements of a successful trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub capon_sinr: Sinr,
    pub mspr_sinr: Sinr,
    pub mspr_iterations: usize,
    pub mspr_converged: bool,
    pub capon_raw_gains: Vec<f64>,
    pub mspr_raw_gains: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub result: std::result::Result<TrialRecord, Error>,
}

/// Aggregate for one beamformer. `per_trial_sinr_db` has one entry per
/// trial, `None` where the trial failed.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub mean_sinr_db: f64,
    pub std_sinr_db: f64,
    pub per_trial_sinr_db: Vec<Option<f64>>,
    pub mean_pattern: Option<BeamPattern>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub capon: MethodSummary,
    pub mspr: MethodSummary,
    pub trials: Vec<TrialOutcome>,
    pub failed_trials: usize,
    /// Fraction of successful trials whose MSPR iteration converged.
    pub converged_fraction: f64,
    pub mean_iterations: f64,
}

impl CampaignResult {
    pub fn successful_trials(&self) -> usize {
        self.trials.len() - self.failed_trials
    }
}

struct Prepared {
    manifold: Manifold,
    partition: ManifoldPartition,
}

fn prepare(config: &CampaignConfig) -> Result<Prepared> {
    config.validate()?;
    let manifold = build_manifold(&config.geometry, &config.grid)?;
    let partition = partition_manifold(&manifold, config.steer_angle_deg, config.half_width_bins)?;
    Ok(Prepared {
        manifold,
        partition,
    })
}

fn run_trial(config: &CampaignConfig, prepared: &Prepared, seed: u64) -> Result<TrialRecord> {
    let batch = generate_snapshots(&config.scene, &config.geometry, seed)?;
    let mut r = sample_covariance(&batch, 0.0)?;
    if config.loading_factor > 0.0 {
        r = r.with_loading(r.trace_scaled_loading(config.loading_factor))?;
    }
    let a0 = prepared.partition.steering();
    let capon = capon_weights(r.matrix(), a0)?;
    let mspr = mspr_solve(r.matrix(), &prepared.partition, &config.mspr, a0, Some(&capon))?;
    Ok(TrialRecord {
        capon_sinr: sinr_db(capon.weights(), &config.scene, &config.geometry)?,
        mspr_sinr: sinr_db(mspr.weights.weights(), &config.scene, &config.geometry)?,
        mspr_iterations: mspr.iterations_used,
        mspr_converged: mspr.converged,
        capon_raw_gains: raw_gains(capon.weights(), &prepared.manifold)?,
        mspr_raw_gains: raw_gains(mspr.weights.weights(), &prepared.manifold)?,
    })
}

fn summarize(
    trials: &[TrialOutcome],
    grid: &AngleGrid,
    sinr: impl Fn(&TrialRecord) -> f64,
    gains: impl Fn(&TrialRecord) -> &[f64],
) -> Result<MethodSummary> {
    let per_trial: Vec<Option<f64>> = trials
        .iter()
        .map(|t| t.result.as_ref().ok().map(&sinr))
        .collect();
    let ok: Vec<f64> = per_trial.iter().flatten().copied().collect();
    let (mean, std) = mean_and_std(&ok);

    // Linear gains are summed in ascending trial order before normalizing.
    let mut sum = vec![0.0; grid.len()];
    for rec in trials.iter().filter_map(|t| t.result.as_ref().ok()) {
        for (s, g) in sum.iter_mut().zip(gains(rec)) {
            *s += g;
        }
    }
    let mean_pattern = if ok.is_empty() {
        None
    } else {
        let n = ok.len() as f64;
        Some(BeamPattern::from_raw_gains(
            grid.clone(),
            sum.into_iter().map(|s| s / n).collect(),
        )?)
    };
    Ok(MethodSummary {
        mean_sinr_db: mean,
        std_sinr_db: std,
        per_trial_sinr_db: per_trial,
        mean_pattern,
    })
}

/// Runs `num_trials` independent trials (in parallel) and aggregates them
/// in ascending trial order. Failed trials are kept in `trials` with their
/// error and counted in `failed_trials`.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    let prepared = prepare(config)?;
    let trials: Vec<TrialOutcome> = (0..config.num_trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(config.master_seed, trial);
            TrialOutcome {
                trial,
                seed,
                result: run_trial(config, &prepared, seed),
            }
        })
        .collect();

    let failed_trials = trials.iter().filter(|t| t.result.is_err()).count();
    let records: Vec<&TrialRecord> = trials.iter().filter_map(|t| t.result.as_ref().ok()).collect();
    let (converged_fraction, mean_iterations) = if records.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let n = records.len() as f64;
        (
            records.iter().filter(|r| r.mspr_converged).count() as f64 / n,
            records.iter().map(|r| r.mspr_iterations as f64).sum::<f64>() / n,
        )
    };

    Ok(CampaignResult {
        capon: summarize(&trials, &config.grid, |r| r.capon_sinr.db, |r| &r.capon_raw_gains)?,
        mspr: summarize(&trials, &config.grid, |r| r.mspr_sinr.db, |r| &r.mspr_raw_gains)?,
        failed_trials,
        converged_fraction,
        mean_iterations,
        trials,
    })
}

/// Beam patterns of a single trial, for quick inspection.
pub fn single_trial_patterns(config: &CampaignConfig, trial: usize) -> Result<(BeamPattern, BeamPattern)> {
    let prepared = prepare(config)?;
    let seed = trial_seed(config.master_seed, trial);
    let batch = generate_snapshots(&config.scene, &config.geometry, seed)?;
    let r = sample_covariance(&batch, 0.0)?;
    let a0 = prepared.partition.steering();
    let capon = capon_weights(r.matrix(), a0)?;
    let mspr = mspr_solve(r.matrix(), &prepared.partition, &config.mspr, a0, Some(&capon))?;
    Ok((
        beam_pattern(capon.weights(), &prepared.manifold)?,
        beam_pattern(mspr.weights.weights(), &prepared.manifold)?,
    ))
}
