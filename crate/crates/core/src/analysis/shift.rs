//! Shifting one side of a comparison between two independent binomial sums
//! by one unit changes the probability by at most the largest point mass.

use alloc::vec::Vec;

use super::binomial::BinomialSpec;
use super::AnalysisError;

/// Largest index-set size handled by exact convolution.
pub const SHIFT_SIZE_CAP: usize = 20;

/// Slack for rounding in the difference of two probabilities.
pub const SHIFT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCheck {
    /// `P(S + a + 1 >= S') - P(S + a >= S')`.
    pub lhs: f64,
    /// `max_j P(S' = j)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Exact check with `S ~ Bin(|I|, q)` and `S' ~ Bin(|I'|, q)` independent.
pub fn check_shift_inequality(
    size_i: usize,
    size_i_prime: usize,
    q: f64,
    a: i64,
) -> Result<ShiftCheck, AnalysisError> {
    for size in [size_i, size_i_prime] {
        if size > SHIFT_SIZE_CAP {
            return Err(AnalysisError::SizeCapExceeded {
                size,
                cap: SHIFT_SIZE_CAP,
            });
        }
    }
    let left = BinomialSpec::new(size_i as u64, q)?.pmf_table();
    let right = BinomialSpec::new(size_i_prime as u64, q)?.pmf_table();
    let prob_at_least = |offset: i64| -> f64 {
        let mut acc = super::Compensated::default();
        for (s, ps) in left.iter().enumerate() {
            for (t, pt) in right.iter().enumerate() {
                if s as i64 + offset >= t as i64 {
                    acc.add(ps * pt);
                }
            }
        }
        acc.value()
    };
    let lhs = prob_at_least(a + 1) - prob_at_least(a);
    let rhs = right.iter().copied().fold(0.0, f64::max);
    Ok(ShiftCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + SHIFT_TOLERANCE,
    })
}

/// `(|I|, |I'|, q, a, check)` for one grid point.
pub type ShiftPoint = (usize, usize, f64, i64, ShiftCheck);

/// Runs the check over a grid and returns the failing points.
pub fn shift_grid(
    sizes: &[usize],
    qs: &[f64],
    shifts: &[i64],
) -> Result<Vec<ShiftPoint>, AnalysisError> {
    let mut failures = Vec::new();
    for &si in sizes {
        for &sj in sizes {
            for &q in qs {
                for &a in shifts {
                    let c = check_shift_inequality(si, sj, q, a)?;
                    if !c.holds {
                        failures.push((si, sj, q, a, c));
                    }
                }
            }
        }
    }
    Ok(failures)
}
