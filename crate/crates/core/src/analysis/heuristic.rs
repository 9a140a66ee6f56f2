//! One-step heuristic for the probability of following the current bias.

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicStep {
    /// `Φ(√d μ)`.
    pub gaussian: f64,
    /// `1/2 + √(2/π) √d μ`, the linearisation as usually quoted for this heuristic.
    pub linear_sqrt_2_over_pi: f64,
    /// `1/2 + √d μ / √(2π)`, the first-order Taylor expansion of `Φ(√d μ)`.
    pub linear_first_order: f64,
}

/// Probability that a vertex with `d` neighbours of i.i.d. mean `mu` sees a
/// positive neighbour sum, with both linearisations for comparison.
pub fn heuristic_step_probability(mu: f64, d: f64) -> HeuristicStep {
    let x = libm::sqrt(d) * mu;
    HeuristicStep {
        gaussian: normal_cdf(x),
        linear_sqrt_2_over_pi: 0.5 + libm::sqrt(2.0 / core::f64::consts::PI) * x,
        linear_first_order: 0.5 + x / libm::sqrt(2.0 * core::f64::consts::PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_point() {
        let h = heuristic_step_probability(0.0, 50.0);
        assert_eq!(h.gaussian, 0.5);
        assert_eq!(h.linear_sqrt_2_over_pi, 0.5);
        assert_eq!(h.linear_first_order, 0.5);
    }

    #[test]
    fn reference_cdf_value() {
        let h = heuristic_step_probability(0.01, 100.0);
        assert!((h.gaussian - 0.539_827_837_277_029).abs() < 1e-14);
        // Linearisations: 0.5 + 0.0797.. and 0.5 + 0.0398..
        assert!(
            (h.linear_sqrt_2_over_pi - (0.5 + 0.1 * (2.0 / core::f64::consts::PI).sqrt())).abs()
                < 1e-15
        );
        assert!((h.linear_first_order - 0.539_894_228_040_143_3).abs() < 1e-15);
    }

    #[test]
    fn mirror_symmetry() {
        for &mu in &[0.001, 0.02, 0.3, 1.0] {
            for &d in &[1.0, 10.0, 400.0] {
                let s = heuristic_step_probability(mu, d).gaussian
                    + heuristic_step_probability(-mu, d).gaussian;
                assert!((s - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cdf_tail_values() {
        assert!((normal_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((normal_cdf(3.0) - 0.998_650_101_968_369_9).abs() < 1e-15);
        assert!((normal_cdf(-8.0) / 6.220_960_574_271_74e-16 - 1.0).abs() < 1e-12);
    }
}
