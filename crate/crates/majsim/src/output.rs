//! Result files: `trials.csv`, `summary.json`, `magnetization.csv`.
//!
//! Floats use Rust's `Display`, the shortest decimal that reads back to the
//! same value. No field ever needs quoting.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use majsim_core::dynamics::Period;
use majsim_core::harness::{
    AdversarialReport, Estimate, RoundQuantiles, SummaryStats, TrialOutcome,
};
use serde_json::{json, Value};

use crate::config::{render_config, ConfigFile};

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MAGNETIZATION_FILE: &str = "magnetization.csv";

pub fn trials_header(max_rounds: usize) -> String {
    let mut h =
        String::from("trial_index,derived_seed,n,d,sum_s0,unanimity_round,winner,agrees,period");
    for t in 0..=max_rounds {
        let _ = write!(h, ",mu_{t}");
    }
    h.push_str(",n1_minority,n2_minority");
    h
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn trial_row(o: &TrialOutcome, max_rounds: usize) -> String {
    let winner = match o.winner {
        Some(1) => "+1",
        Some(_) => "-1",
        None => "",
    };
    let agrees = match o.agrees {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    };
    let period = match o.period() {
        Some(Period::Fixed) => "1",
        Some(Period::Two) => "2",
        None => "",
    };
    let mut row = format!(
        "{},{},{},{},{},{},{},{},{}",
        o.trial_index,
        o.derived_seed,
        o.n,
        o.d,
        o.sum_s0,
        opt(o.unanimity_round()),
        winner,
        agrees,
        period
    );
    let mags = &o.trajectory.magnetizations;
    for t in 0..=max_rounds {
        row.push(',');
        if let Some(m) = mags.get(t) {
            let _ = write!(row, "{}", m.value());
        }
    }
    let _ = write!(row, ",{},{}", opt(o.minority_at(1)), opt(o.minority_at(2)));
    row
}

pub fn trials_csv(outcomes: &[TrialOutcome], max_rounds: usize) -> String {
    let mut out = trials_header(max_rounds);
    out.push('\n');
    for o in outcomes {
        out.push_str(&trial_row(o, max_rounds));
        out.push('\n');
    }
    out
}

pub fn quantiles_csv(rows: &[RoundQuantiles]) -> String {
    let mut out = String::from("round,count,min,q1,median,q3,max\n");
    for q in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            q.round, q.count, q.min, q.q1, q.median, q.q3, q.max
        );
    }
    out
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "successes": e.successes,
        "trials": e.trials,
        "value": e.value,
        "wilson_lo": e.lo,
        "wilson_hi": e.hi,
    })
}

fn quantiles_json(rows: &[RoundQuantiles]) -> Value {
    rows.iter()
        .map(|q| {
            json!({
                "round": q.round, "count": q.count, "min": q.min, "q1": q.q1,
                "median": q.median, "q3": q.q3, "max": q.max,
            })
        })
        .collect()
}

pub fn summary_json(s: &SummaryStats) -> Value {
    json!({
        "trials": s.trials,
        "n": s.n,
        "d": s.d,
        "bias_target": s.bias_target,
        "count_unanimous_within_4": s.count_unanimous_within_4,
        "count_unanimous_within_max": s.count_unanimous_within_max,
        "count_winner_defined": s.count_winner_defined,
        "count_winner_agrees": s.count_winner_agrees,
        "count_winner_disagrees": s.count_winner_disagrees,
        "count_tied_start": s.count_tied_start,
        "count_period_one": s.count_period_one,
        "count_period_two": s.count_period_two,
        "count_no_period": s.count_no_period,
        "count_min_degree_at_least_half_d": s.count_min_degree_at_least_half_d,
        "unanimous_within_4": estimate_json(&s.unanimous_within_4),
        "unanimous_within_max": estimate_json(&s.unanimous_within_max),
        "winner_agrees": s.winner_agrees.as_ref().map(estimate_json),
        "minority_quantiles": quantiles_json(&s.minority_quantiles),
        "magnetization_quantiles": quantiles_json(&s.magnetization_quantiles),
        "scaling": {
            "d": s.scaling.d,
            "band": [s.scaling.band.0, s.scaling.band.1],
            "rounds": s.scaling.rounds.iter().map(|r| json!({
                "round": r.round, "count": r.count, "q1": r.q1,
                "median": r.median, "q3": r.q3, "median_in_band": r.median_in_band,
            })).collect::<Vec<_>>(),
        },
    })
}

pub fn adversarial_json(a: &AdversarialReport) -> Value {
    json!({
        "lambda_eff": a.lambda_eff,
        "d": a.d,
        "unanimous_within_2": estimate_json(&a.unanimous_within_2),
        "n1_below_d_over_10": estimate_json(&a.n1_below_d_over_10),
        "min_degree_at_least_half_d": estimate_json(&a.min_degree_at_least_half_d),
    })
}

/// Everything one experiment writes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultBundle {
    pub trials_csv: String,
    pub summary_json: String,
    pub magnetization_csv: String,
}

impl ResultBundle {
    pub fn new(
        config: &ConfigFile,
        summary: &SummaryStats,
        outcomes: &[TrialOutcome],
        adversarial: Option<&AdversarialReport>,
    ) -> Self {
        let mut doc = summary_json(summary);
        let config_text = render_config(&ConfigFile {
            output_dir: None,
            ..config.clone()
        });
        doc["config"] = Value::String(config_text);
        if let Some(a) = adversarial {
            doc["adversarial"] = adversarial_json(a);
        }
        let mut summary_text = serde_json::to_string_pretty(&doc).expect("json values serialise");
        summary_text.push('\n');
        ResultBundle {
            trials_csv: trials_csv(outcomes, config.experiment.max_rounds),
            summary_json: summary_text,
            magnetization_csv: quantiles_csv(&summary.magnetization_quantiles),
        }
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(TRIALS_FILE), &self.trials_csv)?;
        fs::write(dir.join(SUMMARY_FILE), &self.summary_json)?;
        fs::write(dir.join(MAGNETIZATION_FILE), &self.magnetization_csv)?;
        Ok(())
    }
}
