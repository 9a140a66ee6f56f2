//! Explicit constants of the stabilisation argument.

use super::AnalysisError;

/// Default for the free constant `beta`.
pub const DEFAULT_BETA: f64 = 100.0;

/// Explicit local-limit constant: `sup |σ P(X=i) - φ| <= 50/σ`.
pub const LLT_GAMMA: f64 = 50.0;

/// Bias constant `c(eps) = sqrt(2π) eps / 20`.
pub fn c_of_eps(eps: f64) -> Result<f64, AnalysisError> {
    check_eps(eps)?;
    Ok(libm::sqrt(2.0 * core::f64::consts::PI) * eps / 20.0)
}

/// Density constant `max(c(eps)^-2, beta^2)`.
pub fn lambda_of_eps(eps: f64, beta: f64) -> Result<f64, AnalysisError> {
    if beta.is_nan() || beta <= 0.0 || !beta.is_finite() {
        return Err(AnalysisError::BetaOutOfRange(beta));
    }
    let c = c_of_eps(eps)?;
    Ok((1.0 / (c * c)).max(beta * beta))
}

fn check_eps(eps: f64) -> Result<(), AnalysisError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::EpsOutOfRange(eps))
    }
}

/// Smallest integer `k >= x` with `k ≡ n (mod 2)`.
pub fn phi_parity_ceiling(x: f64, n: i64) -> i64 {
    let k = libm::ceil(x) as i64;
    if (k - n).rem_euclid(2) == 0 {
        k
    } else {
        k + 1
    }
}

/// Variance ceiling `(max(96 γ², 8) + 1) d` for the second-round count.
pub fn variance_bound(d: f64) -> f64 {
    ((96.0 * LLT_GAMMA * LLT_GAMMA).max(8.0) + 1.0) * d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremConstants {
    pub eps: f64,
    pub c: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma_llt: f64,
}

impl TheoremConstants {
    pub fn new(eps: f64, beta: f64) -> Result<Self, AnalysisError> {
        Ok(TheoremConstants {
            eps,
            c: c_of_eps(eps)?,
            beta,
            lambda: lambda_of_eps(eps, beta)?,
            gamma_llt: LLT_GAMMA,
        })
    }

    /// Signed-sum threshold `φ(2c√n)` for a graph of order `n`.
    pub fn bias_target(&self, n: usize) -> i64 {
        phi_parity_ceiling(2.0 * self.c * libm::sqrt(n as f64), n as i64)
    }
}
