//! Uniform gap between the scaled binomial mass function and the Gaussian
//! density.

use super::binomial::BinomialSpec;
use super::constants::LLT_GAMMA;
use super::AnalysisError;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Gaussian terms below this are treated as zero outside `0..=k`.
pub const GAUSSIAN_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LltGap {
    pub sigma: f64,
    /// `sup_i |σ P(X=i) - exp(-(i-μ)²/2σ²)/√(2π)|`.
    pub sup_gap: f64,
    pub argmax_i: i64,
}

impl LltGap {
    pub fn sigma_times_gap(&self) -> f64 {
        self.sigma * self.sup_gap
    }

    /// `sup_gap <= γ/σ` with the explicit `γ = 50`.
    pub fn within_bound(&self) -> bool {
        self.sigma_times_gap() <= LLT_GAMMA
    }
}

/// Exact supremum over all integers `i`: the full support `0..=k` plus the
/// stretch on either side where the Gaussian term exceeds `1e-30` (there the
/// mass function is zero).
pub fn llt_sup_gap(spec: BinomialSpec) -> Result<LltGap, AnalysisError> {
    let var = spec.variance();
    if var.is_nan() || var <= 0.0 {
        return Err(AnalysisError::ZeroVariance {
            k: spec.k,
            q: spec.q,
        });
    }
    let sigma = libm::sqrt(var);
    let mu = spec.mean();
    let gauss = |i: i64| INV_SQRT_2PI * libm::exp(-(i as f64 - mu) * (i as f64 - mu) / (2.0 * var));

    let mut best = LltGap {
        sigma,
        sup_gap: f64::NEG_INFINITY,
        argmax_i: 0,
    };
    let mut consider = |i: i64, gap: f64| {
        if gap > best.sup_gap {
            best.sup_gap = gap;
            best.argmax_i = i;
        }
    };

    let mut lower = -1i64;
    while gauss(lower) > GAUSSIAN_FLOOR {
        lower -= 1;
    }
    for i in (lower + 1)..0 {
        consider(i, gauss(i));
    }
    for i in 0..=spec.k {
        let i = i as i64;
        consider(i, libm::fabs(sigma * spec.pmf(i as u64) - gauss(i)));
    }
    let mut i = spec.k as i64 + 1;
    loop {
        let g = gauss(i);
        if g <= GAUSSIAN_FLOOR {
            break;
        }
        consider(i, g);
        i += 1;
    }
    Ok(best)
}
