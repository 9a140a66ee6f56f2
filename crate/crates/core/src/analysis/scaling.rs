//! Growth of the squared magnetization from one round to the next.
//!
//! While `d μ_t² <= 1` the squared bias is expected to grow by roughly a
//! factor `d` per round. The report collects the observed ratios
//! `μ_{t+1}² / μ_t²` per round and checks the median against `[d/10, 10d]`.

use alloc::vec::Vec;

use super::{quantile_sorted, AnalysisError};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRatios {
    /// Ratio is `μ_{round+1}² / μ_round²`.
    pub round: usize,
    pub count: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub median_in_band: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub d: f64,
    pub band: (f64, f64),
    pub rounds: Vec<RoundRatios>,
}

impl ScalingReport {
    pub fn round(&self, t: usize) -> Option<&RoundRatios> {
        self.rounds.iter().find(|r| r.round == t)
    }

    pub fn has_valid_rounds(&self) -> bool {
        !self.rounds.is_empty()
    }
}

/// Builds the report from per-trial magnetization series `μ_0, μ_1, ...`.
/// A ratio at round `t` is used only when `μ_t != 0`, `d μ_t² <= 1` and
/// `μ_{t+1}` was recorded.
pub fn scaling_diagnostic<I, S>(series: I, d: f64) -> Result<ScalingReport, AnalysisError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[f64]>,
{
    if d.is_nan() || d <= 0.0 {
        return Err(AnalysisError::NonPositiveDegree(d));
    }
    let mut per_round: Vec<Vec<f64>> = Vec::new();
    let mut seen = 0usize;
    for s in series {
        seen += 1;
        let mu = s.as_ref();
        for t in 0..mu.len().saturating_sub(1) {
            let m2 = mu[t] * mu[t];
            if mu[t] == 0.0 || d * m2 > 1.0 {
                continue;
            }
            if per_round.len() <= t {
                per_round.resize_with(t + 1, Vec::new);
            }
            per_round[t].push(mu[t + 1] * mu[t + 1] / m2);
        }
    }
    if seen == 0 {
        return Err(AnalysisError::EmptyInput);
    }
    let band = (d / 10.0, 10.0 * d);
    let rounds = per_round
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(round, mut v)| {
            v.sort_by(f64::total_cmp);
            let median = quantile_sorted(&v, 0.5).unwrap_or(f64::NAN);
            RoundRatios {
                round,
                count: v.len(),
                q1: quantile_sorted(&v, 0.25).unwrap_or(f64::NAN),
                median,
                q3: quantile_sorted(&v, 0.75).unwrap_or(f64::NAN),
                median_in_band: band.0 <= median && median <= band.1,
            }
        })
        .collect();
    Ok(ScalingReport { d, band, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn unanimous_series_have_no_valid_rounds() {
        let series = vec![vec![1.0, 1.0], vec![-1.0]];
        let r = scaling_diagnostic(&series, 16.0).unwrap();
        assert!(!r.has_valid_rounds());
    }

    #[test]
    fn exact_geometric_growth() {
        let d: f64 = 25.0;
        let series: Vec<Vec<f64>> = (1..=9)
            .map(|k| {
                let m0 = k as f64 * 1e-3;
                vec![m0, m0 * d.sqrt(), m0 * d]
            })
            .collect();
        let r = scaling_diagnostic(&series, d).unwrap();
        let first = r.round(0).unwrap();
        assert_eq!(first.count, 9);
        assert!((first.median - d).abs() < 1e-9);
        assert!(first.median_in_band);
        assert!((r.round(1).unwrap().median - d).abs() < 1e-9);
    }

    #[test]
    fn zero_and_saturated_rounds_skipped() {
        let series = vec![vec![0.0, 0.1, 0.5, 0.9]];
        let r = scaling_diagnostic(&series, 10.0).unwrap();
        // μ0 = 0 skipped; μ1² d = 0.1 ok; μ2² d = 2.5 skipped.
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.rounds[0].round, 1);
        assert!((r.rounds[0].median - 25.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let empty: Vec<Vec<f64>> = Vec::new();
        assert_eq!(
            scaling_diagnostic(&empty, 3.0),
            Err(AnalysisError::EmptyInput)
        );
        assert!(scaling_diagnostic(&[vec![0.1]], 0.0).is_err());
    }
}
