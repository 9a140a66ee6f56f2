//! Binomial probabilities accurate to a few ulps.
//!
//! Uses the saddle-point expansion: the log-gamma remainder (Stirling error)
//! and the deviance term are evaluated separately so that no large
//! log-factorials cancel against each other.

use alloc::vec::Vec;

use super::AnalysisError;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialSpec {
    pub k: u64,
    pub q: f64,
}

impl BinomialSpec {
    pub fn new(k: u64, q: f64) -> Result<Self, AnalysisError> {
        if !(0.0..=1.0).contains(&q) {
            return Err(AnalysisError::InvalidProbability(q));
        }
        Ok(BinomialSpec { k, q })
    }

    pub fn mean(&self) -> f64 {
        self.k as f64 * self.q
    }

    pub fn variance(&self) -> f64 {
        self.k as f64 * self.q * (1.0 - self.q)
    }

    pub fn sigma(&self) -> f64 {
        libm::sqrt(self.variance())
    }

    /// `P(X = i)` for `0 <= i <= k`, unchecked.
    pub fn pmf(&self, i: u64) -> f64 {
        pmf_raw(i as f64, self.k as f64, self.q, 1.0 - self.q)
    }

    /// The whole mass function `P(X = 0), ..., P(X = k)`.
    pub fn pmf_table(&self) -> Vec<f64> {
        (0..=self.k).map(|i| self.pmf(i)).collect()
    }
}

/// `C(k, i) q^i (1-q)^(k-i)`.
pub fn binom_pmf_exact(spec: BinomialSpec, i: u64) -> Result<f64, AnalysisError> {
    if i > spec.k {
        return Err(AnalysisError::IndexOutOfRange { i, k: spec.k });
    }
    if !(0.0..=1.0).contains(&spec.q) {
        return Err(AnalysisError::InvalidProbability(spec.q));
    }
    Ok(spec.pmf(i))
}

/// `ln Γ(n+1) - [(n + 1/2) ln n - n + ln √(2π)]` for integer `n >= 0`.
fn stirling_error(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        if n == 0.0 {
            return LN_SQRT_2PI;
        }
        return libm::lgamma(n + 1.0) - (n + 0.5) * libm::log(n) + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance `x ln(x / np) + np - x`, by series when `x` is close to `np`.
fn deviance(x: f64, np: f64) -> f64 {
    if libm::fabs(x - np) < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * libm::log(x / np) + np - x
    }
}

fn pmf_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 1.0;
        }
        let lc = if p < 0.1 {
            -deviance(n, n * q) - n * p
        } else {
            n * libm::log(q)
        };
        return libm::exp(lc);
    }
    if x == n {
        let lc = if q < 0.1 {
            -deviance(n, n * p) - n * q
        } else {
            n * libm::log(p)
        };
        return libm::exp(lc);
    }
    let lc = stirling_error(n)
        - stirling_error(x)
        - stirling_error(n - x)
        - deviance(x, n * p)
        - deviance(n - x, n * q);
    let lf = LN_2PI + libm::log(x) + libm::log1p(-x / n);
    libm::exp(lc - 0.5 * lf)
}
