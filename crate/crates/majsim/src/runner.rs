//! Parallel trial execution. Outcomes are merged in index order, so results
//! do not depend on the worker count.

use majsim_core::harness::{
    adversarial_report, summarize, validate_adversarial, AdversarialReport, Experiment,
    ExperimentConfig, HarnessError, SummaryStats, TrialOutcome,
};
use rayon::prelude::*;
use thiserror::Error;

pub const WORKERS_ENV: &str = "MAJSIM_WORKERS";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{WORKERS_ENV} must be a positive integer, got `{0}`")]
    BadWorkers(String),
    #[error("could not start the worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

/// Worker count from `MAJSIM_WORKERS`, else the available parallelism.
pub fn workers_from_env() -> Result<usize, RunError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(RunError::BadWorkers(v)),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs every trial on `workers` threads. On failure the lowest failing
/// trial index is reported.
pub fn run_trials(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<TrialOutcome>, RunError> {
    let exp = Experiment::new(config.clone())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let results: Vec<Result<TrialOutcome, HarnessError>> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| exp.run_trial(i))
            .collect()
    });
    let mut outcomes = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => {
                return Err(HarnessError::TrialFailed {
                    index: index as u64,
                    source: Box::new(e),
                }
                .into())
            }
        }
    }
    Ok(outcomes)
}

pub fn run_experiment_parallel(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(SummaryStats, Vec<TrialOutcome>), RunError> {
    let outcomes = run_trials(config, workers)?;
    Ok((summarize(config, &outcomes)?, outcomes))
}

pub fn run_adversarial_parallel(
    config: &ExperimentConfig,
    lambda_eff: f64,
    workers: usize,
) -> Result<(AdversarialReport, Vec<TrialOutcome>), RunError> {
    validate_adversarial(config, lambda_eff)?;
    let outcomes = run_trials(config, workers)?;
    Ok((adversarial_report(config, lambda_eff, &outcomes)?, outcomes))
}
