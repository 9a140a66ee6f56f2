//! Seeded Monte Carlo trials and their aggregation.
//!
//! Every trial is a pure function of `(config, trial_index)`: its seed is
//! derived statelessly from the master seed, and the graph and initial state
//! are drawn from independent sub-streams of that seed. Aggregation only ever
//! sees outcomes in index order, so any scheduler that runs
//! [`Experiment::run_trial`] for every index produces identical summaries.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::RngCore;
use thiserror::Error;

use crate::analysis::constants::{TheoremConstants, DEFAULT_BETA};
use crate::analysis::scaling::{scaling_diagnostic, ScalingReport};
use crate::analysis::{quantile_sorted, AnalysisError};
use crate::bits::BitVec;
use crate::dynamics::{
    run_dynamics_with, sgn, DynamicsError, KeepStates, Period, RunOptions, StateVector, Trajectory,
    DEFAULT_MAX_ROUNDS,
};
use crate::graph::{Graph, GraphError, GraphModel};
use crate::rng::{derive_trial_seed, mix64, SplitMix64};

/// Rejection-sampling budget for `BiasedAtLeast` initial states.
pub const BIAS_REJECTION_CAP: u64 = 1_000_000;

/// Default density knob: `d = λ_eff √n`.
pub const DEFAULT_LAMBDA_EFF: f64 = 3.0;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Rounds within which unanimity counts as "fast".
pub const FAST_ROUNDS: usize = 4;

const SHARED_GRAPH_KEY: u64 = 0x5348_4152_4544_4752;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("adversarial minority fraction must satisfy 0 <= delta < 1/10, got {0}")]
    DeltaOutOfRange(f64),
    #[error("bias target {target} exceeds the vertex count {n}")]
    InfeasibleBias { target: i64, n: usize },
    #[error("no initial state with |sum| >= {target} after {attempts} draws")]
    RejectionCapExceeded { target: i64, attempts: u64 },
    #[error("an experiment needs at least one trial")]
    ZeroTrials,
    #[error(
        "wilson interval needs 0 <= successes <= trials and trials >= 1 (got {successes}/{trials})"
    )]
    InvalidProportion { successes: u64, trials: u64 },
    #[error("mean degree {d} is below the required {required}")]
    DensityTooLow { d: f64, required: f64 },
    #[error("the two-round check needs init_mode=adversarial")]
    NotAdversarial,
    #[error("initial sum {got} differs from the bias target {expected}")]
    BiasInvariant { expected: i64, got: i64 },
    #[error("trial {index} failed: {source}")]
    TrialFailed {
        index: u64,
        #[source]
        source: Box<HarnessError>,
    },
}

/// How initial states are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitMode {
    /// Independent fair signs.
    Uniform,
    /// Uniform, conditioned on `|ΣS₀| >= φ(2c√n)` by rejection.
    BiasedAtLeast,
    /// Uniformly random assignment with `ΣS₀ = φ(2c√n)` exactly.
    ExactBias,
    /// `⌊δn⌋` uniformly chosen vertices at `-1`, the rest `+1`.
    Adversarial { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphResample {
    #[default]
    PerTrial,
    Shared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: GraphModel,
    pub init_mode: InitMode,
    pub eps: f64,
    pub beta: f64,
    pub trials: u64,
    pub max_rounds: usize,
    pub master_seed: u64,
    pub graph_resample: GraphResample,
}

impl ExperimentConfig {
    /// Defaults: uniform start, `eps = 1`, `beta = 100`, one trial, 50 rounds.
    pub fn new(model: GraphModel) -> Self {
        ExperimentConfig {
            model,
            init_mode: InitMode::Uniform,
            eps: 1.0,
            beta: DEFAULT_BETA,
            trials: 1,
            max_rounds: DEFAULT_MAX_ROUNDS,
            master_seed: 0,
            graph_resample: GraphResample::PerTrial,
        }
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn mean_degree(&self) -> f64 {
        self.model.mean_degree()
    }

    pub fn constants(&self) -> Result<TheoremConstants, HarnessError> {
        Ok(TheoremConstants::new(self.eps, self.beta)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.model.validate()?;
        let constants = self.constants()?;
        if self.trials == 0 {
            return Err(HarnessError::ZeroTrials);
        }
        match self.init_mode {
            InitMode::Adversarial { delta } if !(0.0..0.1).contains(&delta) => {
                Err(HarnessError::DeltaOutOfRange(delta))
            }
            InitMode::ExactBias | InitMode::BiasedAtLeast => {
                let target = constants.bias_target(self.n());
                if target > self.n() as i64 {
                    Err(HarnessError::InfeasibleBias {
                        target,
                        n: self.n(),
                    })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Draws an initial state; `c` is the bias constant used by the biased modes.
pub fn sample_initial_state<R: RngCore>(
    n: usize,
    mode: InitMode,
    c: f64,
    rng: &mut R,
) -> Result<StateVector, HarnessError> {
    let target = || crate::analysis::phi_parity_ceiling(2.0 * c * libm::sqrt(n as f64), n as i64);
    match mode {
        InitMode::Uniform => Ok(uniform_state(n, rng)),
        InitMode::BiasedAtLeast => {
            let target = target();
            if target > n as i64 {
                return Err(HarnessError::InfeasibleBias { target, n });
            }
            for _ in 0..BIAS_REJECTION_CAP {
                let s = uniform_state(n, rng);
                if s.signed_sum().abs() >= target {
                    return Ok(s);
                }
            }
            Err(HarnessError::RejectionCapExceeded {
                target,
                attempts: BIAS_REJECTION_CAP,
            })
        }
        InitMode::ExactBias => {
            let target = target();
            if target > n as i64 || target < -(n as i64) {
                return Err(HarnessError::InfeasibleBias { target, n });
            }
            let plus = ((n as i64 + target) / 2) as usize;
            Ok(random_subset_state(n, plus, 1, rng))
        }
        InitMode::Adversarial { delta } => {
            if !(0.0..0.1).contains(&delta) {
                return Err(HarnessError::DeltaOutOfRange(delta));
            }
            let minus = libm::floor(delta * n as f64) as usize;
            Ok(random_subset_state(n, minus, -1, rng))
        }
    }
}

fn uniform_state<R: RngCore>(n: usize, rng: &mut R) -> StateVector {
    let words = (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect();
    StateVector::from_bits(BitVec::from_words(n, words))
}

/// `size` uniformly chosen vertices get `spin`, the others `-spin`.
fn random_subset_state<R: RngCore>(n: usize, size: usize, spin: i8, rng: &mut R) -> StateVector {
    let mut s = StateVector::all(n, -spin);
    let mut idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = idx.partial_shuffle(rng, size);
    for &v in chosen.iter() {
        s.set_spin(v, spin);
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial_index: u64,
    pub derived_seed: u64,
    pub n: usize,
    pub d: f64,
    pub sum_s0: i64,
    /// Magnetizations, minority sizes and cycle information; full states are
    /// not retained.
    pub trajectory: Trajectory,
    pub winner: Option<i8>,
    /// `winner == sgn(ΣS₀)`; absent when the start is tied or no unanimity.
    pub agrees: Option<bool>,
    pub min_degree: usize,
}

impl TrialOutcome {
    pub fn unanimity_round(&self) -> Option<usize> {
        self.trajectory.unanimity_round
    }

    pub fn period(&self) -> Option<Period> {
        self.trajectory.period
    }

    pub fn minority_at(&self, round: usize) -> Option<usize> {
        self.trajectory.minority_at(round)
    }

    pub fn unanimous_within(&self, rounds: usize) -> bool {
        self.unanimity_round().is_some_and(|r| r <= rounds)
    }
}

/// A configured experiment, holding the shared graph when there is one.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    constants: TheoremConstants,
    shared_graph: Option<Graph>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let constants = config.constants()?;
        let shared_graph = match config.graph_resample {
            GraphResample::Shared => Some(
                config
                    .model
                    .sample(mix64(config.master_seed ^ SHARED_GRAPH_KEY))?,
            ),
            GraphResample::PerTrial => None,
        };
        Ok(Experiment {
            config,
            constants,
            shared_graph,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn bias_target(&self) -> i64 {
        self.constants.bias_target(self.config.n())
    }

    /// The graph trial `trial_index` runs on.
    pub fn trial_graph(&self, trial_index: u64) -> Result<Graph, HarnessError> {
        match &self.shared_graph {
            Some(g) => Ok(g.clone()),
            None => {
                let seed = derive_trial_seed(self.config.master_seed, trial_index);
                Ok(self.config.model.sample(derive_trial_seed(seed, 1))?)
            }
        }
    }

    pub fn run_trial(&self, trial_index: u64) -> Result<TrialOutcome, HarnessError> {
        self.run_trial_inner(trial_index)
            .map_err(|e| HarnessError::TrialFailed {
                index: trial_index,
                source: Box::new(e),
            })
    }

    fn run_trial_inner(&self, trial_index: u64) -> Result<TrialOutcome, HarnessError> {
        let cfg = &self.config;
        let seed = derive_trial_seed(cfg.master_seed, trial_index);
        let fresh;
        let graph = match &self.shared_graph {
            Some(g) => g,
            None => {
                fresh = cfg.model.sample(derive_trial_seed(seed, 1))?;
                &fresh
            }
        };
        let mut rng = SplitMix64::new(derive_trial_seed(seed, 2));
        let s0 = sample_initial_state(cfg.n(), cfg.init_mode, self.constants.c, &mut rng)?;
        let sum_s0 = s0.signed_sum();
        if cfg.init_mode == InitMode::ExactBias && sum_s0 != self.bias_target() {
            return Err(HarnessError::BiasInvariant {
                expected: self.bias_target(),
                got: sum_s0,
            });
        }
        let mut trajectory = run_dynamics_with(
            graph,
            &s0,
            &RunOptions {
                max_rounds: cfg.max_rounds,
                keep_states: KeepStates::Never,
            },
        )?;
        let winner = trajectory
            .unanimity_round
            .and_then(|_| trajectory.tail.last().and_then(StateVector::unanimous));
        trajectory.tail.clear();
        let agrees = match (winner, sgn(sum_s0)) {
            (Some(w), s) if s != 0 => Some(w == s),
            _ => None,
        };
        Ok(TrialOutcome {
            trial_index,
            derived_seed: seed,
            n: cfg.n(),
            d: cfg.mean_degree(),
            sum_s0,
            trajectory,
            winner,
            agrees,
            min_degree: graph.min_degree(),
        })
    }
}

pub fn run_trial(
    config: &ExperimentConfig,
    trial_index: u64,
) -> Result<TrialOutcome, HarnessError> {
    Experiment::new(config.clone())?.run_trial(trial_index)
}

/// Runs every trial in index order on the current thread.
pub fn run_experiment(
    config: &ExperimentConfig,
) -> Result<(SummaryStats, Vec<TrialOutcome>), HarnessError> {
    let exp = Experiment::new(config.clone())?;
    let outcomes = (0..config.trials)
        .map(|i| exp.run_trial(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((summarize(config, &outcomes)?, outcomes))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Result<(f64, f64), HarnessError> {
    if trials == 0 || successes > trials {
        return Err(HarnessError::InvalidProportion { successes, trials });
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * libm::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((lo, hi))
}

/// A proportion with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Result<Self, HarnessError> {
        let (lo, hi) = wilson_interval(successes, trials, Z_95)?;
        Ok(Estimate {
            successes,
            trials,
            value: successes as f64 / trials as f64,
            lo,
            hi,
        })
    }
}

/// Five-number summary of a per-round quantity across trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundQuantiles {
    pub round: usize,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl RoundQuantiles {
    fn from_values(round: usize, mut values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        Some(RoundQuantiles {
            round,
            count: values.len(),
            min: values[0],
            q1: quantile_sorted(&values, 0.25)?,
            median: quantile_sorted(&values, 0.5)?,
            q3: quantile_sorted(&values, 0.75)?,
            max: values[values.len() - 1],
        })
    }
}

/// Quantiles per round `0..=max_round` of `value(outcome, round)`.
pub fn per_round_quantiles(
    outcomes: &[TrialOutcome],
    max_round: usize,
    value: impl Fn(&TrialOutcome, usize) -> Option<f64>,
) -> Vec<RoundQuantiles> {
    (0..=max_round)
        .filter_map(|r| {
            let vals = outcomes.iter().filter_map(|o| value(o, r)).collect();
            RoundQuantiles::from_values(r, vals)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub trials: u64,
    pub n: usize,
    pub d: f64,
    pub bias_target: i64,
    pub count_unanimous_within_4: u64,
    pub count_unanimous_within_max: u64,
    /// Trials with a nonzero initial sum that reached unanimity.
    pub count_winner_defined: u64,
    pub count_winner_agrees: u64,
    pub count_winner_disagrees: u64,
    pub count_tied_start: u64,
    pub count_period_one: u64,
    pub count_period_two: u64,
    pub count_no_period: u64,
    pub count_min_degree_at_least_half_d: u64,
    pub unanimous_within_4: Estimate,
    pub unanimous_within_max: Estimate,
    pub winner_agrees: Option<Estimate>,
    /// Size of the set opposing the round-0 majority, per round.
    pub minority_quantiles: Vec<RoundQuantiles>,
    pub magnetization_quantiles: Vec<RoundQuantiles>,
    pub scaling: ScalingReport,
}

pub fn summarize(
    config: &ExperimentConfig,
    outcomes: &[TrialOutcome],
) -> Result<SummaryStats, HarnessError> {
    let trials = outcomes.len() as u64;
    if trials == 0 {
        return Err(HarnessError::ZeroTrials);
    }
    let d = config.mean_degree();
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let within_4 = count(&|o| o.unanimous_within(FAST_ROUNDS));
    let within_max = count(&|o| o.unanimity_round().is_some());
    let defined = count(&|o| o.agrees.is_some());
    let agrees = count(&|o| o.agrees == Some(true));
    let winner_agrees = if defined > 0 {
        Some(Estimate::new(agrees, defined)?)
    } else {
        None
    };
    let series: Vec<Vec<f64>> = outcomes
        .iter()
        .map(|o| o.trajectory.magnetization_values())
        .collect();
    let scaling = scaling_diagnostic(&series, if d > 0.0 { d } else { f64::MIN_POSITIVE })?;
    Ok(SummaryStats {
        trials,
        n: config.n(),
        d,
        bias_target: config.constants()?.bias_target(config.n()),
        count_unanimous_within_4: within_4,
        count_unanimous_within_max: within_max,
        count_winner_defined: defined,
        count_winner_agrees: agrees,
        count_winner_disagrees: defined - agrees,
        count_tied_start: count(&|o| o.sum_s0 == 0),
        count_period_one: count(&|o| o.period() == Some(Period::Fixed)),
        count_period_two: count(&|o| o.period() == Some(Period::Two)),
        count_no_period: count(&|o| o.period().is_none()),
        count_min_degree_at_least_half_d: count(&|o| 2.0 * o.min_degree as f64 >= d),
        unanimous_within_4: Estimate::new(within_4, trials)?,
        unanimous_within_max: Estimate::new(within_max, trials)?,
        winner_agrees,
        minority_quantiles: per_round_quantiles(outcomes, config.max_rounds, |o, r| {
            o.minority_at(r).map(|m| m as f64)
        }),
        magnetization_quantiles: per_round_quantiles(outcomes, config.max_rounds, |o, r| {
            o.trajectory.magnetization_at(r).map(|m| m.value())
        }),
        scaling,
    })
}

/// Rates for the two-round finish from a small minority.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialReport {
    pub lambda_eff: f64,
    pub d: f64,
    pub unanimous_within_2: Estimate,
    /// `|N₁| < d/10`.
    pub n1_below_d_over_10: Estimate,
    /// Minimum degree at least `d/2`.
    pub min_degree_at_least_half_d: Estimate,
    pub summary: SummaryStats,
}

/// Checks the hypotheses of the two-round finish: adversarial start with
/// `δ < 1/10` and `d >= λ_eff √n`.
pub fn validate_adversarial(
    config: &ExperimentConfig,
    lambda_eff: f64,
) -> Result<(), HarnessError> {
    match config.init_mode {
        InitMode::Adversarial { delta } if !(0.0..0.1).contains(&delta) => {
            return Err(HarnessError::DeltaOutOfRange(delta))
        }
        InitMode::Adversarial { .. } => {}
        _ => return Err(HarnessError::NotAdversarial),
    }
    let d = config.mean_degree();
    let required = lambda_eff * libm::sqrt(config.n() as f64);
    if d < required * (1.0 - 1e-9) {
        return Err(HarnessError::DensityTooLow { d, required });
    }
    config.validate()
}

pub fn adversarial_report(
    config: &ExperimentConfig,
    lambda_eff: f64,
    outcomes: &[TrialOutcome],
) -> Result<AdversarialReport, HarnessError> {
    let summary = summarize(config, outcomes)?;
    let d = config.mean_degree();
    let trials = outcomes.len() as u64;
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    Ok(AdversarialReport {
        lambda_eff,
        d,
        unanimous_within_2: Estimate::new(count(&|o| o.unanimous_within(2)), trials)?,
        n1_below_d_over_10: Estimate::new(
            count(&|o| o.minority_at(1).is_some_and(|m| (m as f64) < d / 10.0)),
            trials,
        )?,
        min_degree_at_least_half_d: Estimate::new(
            summary.count_min_degree_at_least_half_d,
            trials,
        )?,
        summary,
    })
}

/// Sequential two-round check.
pub fn adversarial_two_round_check(
    config: &ExperimentConfig,
    lambda_eff: f64,
) -> Result<AdversarialReport, HarnessError> {
    validate_adversarial(config, lambda_eff)?;
    let (_, outcomes) = run_experiment(config)?;
    adversarial_report(config, lambda_eff, &outcomes)
}
