//! Explicit constants, exact binomial oracles and the small-instance
//! enumerator used to check the probabilistic identities behind the
//! stabilisation result.

use alloc::string::String;

use thiserror::Error;

pub mod binomial;
pub mod constants;
pub mod enumerate;
pub mod heuristic;
pub mod llt;
pub mod scaling;
pub mod shift;

pub use binomial::{binom_pmf_exact, BinomialSpec};
pub use constants::{
    c_of_eps, lambda_of_eps, phi_parity_ceiling, variance_bound, TheoremConstants,
};
pub use enumerate::{
    enumerate_conditional, ConditionalDistribution, PairConditioning, TinyInstance,
};
pub use heuristic::{heuristic_step_probability, normal_cdf, HeuristicStep};
pub use llt::{llt_sup_gap, LltGap};
pub use scaling::{scaling_diagnostic, RoundRatios, ScalingReport};
pub use shift::{check_shift_inequality, ShiftCheck};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("eps must lie in (0, 1], got {0}")]
    EpsOutOfRange(f64),
    #[error("beta must be positive, got {0}")]
    BetaOutOfRange(f64),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("binomial with {k} trials and q = {q} has zero variance")]
    ZeroVariance { k: u64, q: f64 },
    #[error("index {i} outside 0..={k}")]
    IndexOutOfRange { i: u64, k: u64 },
    #[error("instance has {pairs} undetermined pairs; at most {cap} can be enumerated")]
    InstanceTooLarge { pairs: usize, cap: usize },
    #[error("invalid tiny instance: {0}")]
    InvalidInstance(String),
    #[error("index set of size {size} exceeds the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("no trajectories supplied")]
    EmptyInput,
    #[error("mean degree must be positive, got {0}")]
    NonPositiveDegree(f64),
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Linear-interpolation quantile (R type 7) of an ascending slice.
pub fn quantile_sorted(sorted: &[f64], prob: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}
