//! Tabulation of the local-limit gap `σ · sup_i |P(i) - φ_σ(i - μ)|`.

use std::fmt::Write as _;

use majsim_core::analysis::{llt_sup_gap, AnalysisError, BinomialSpec, LltGap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LltRow {
    pub k: u64,
    pub q: f64,
    pub gap: LltGap,
}

/// Rows for `k` in `2..=kmax` and each `q`, skipping degenerate variances.
pub fn llt_rows(kmax: u64, qs: &[f64]) -> Result<Vec<LltRow>, AnalysisError> {
    let mut rows = Vec::new();
    for k in 2..=kmax {
        for &q in qs {
            let spec = BinomialSpec::new(k, q)?;
            if spec.variance() <= 0.0 {
                continue;
            }
            rows.push(LltRow {
                k,
                q,
                gap: llt_sup_gap(spec)?,
            });
        }
    }
    Ok(rows)
}

pub fn llt_csv(rows: &[LltRow]) -> String {
    let mut out =
        String::from("k,q,sigma,sup_gap,argmax_i,sigma_times_gap,bound_50_over_sigma_satisfied\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.k,
            r.q,
            r.gap.sigma,
            r.gap.sup_gap,
            r.gap.argmax_i,
            r.gap.sigma_times_gap(),
            r.gap.within_bound()
        );
    }
    out
}
