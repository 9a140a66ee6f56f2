//! Tiny-instance files for the exact conditional enumerator.
//!
//! ```text
//! states = + - + + - +
//! v = 0
//! gamma = 1, 3
//! p = 0.5
//! ```
//! `states` takes `+`/`-` (or `+1`/`-1`), vertex `i` being the `i`-th token.

use majsim_core::analysis::{
    enumerate_conditional, variance_bound, AnalysisError, ConditionalDistribution, TinyInstance,
};
use serde_json::{json, Value};
use thiserror::Error;

/// Absolute tolerance for the covariance factorisation.
pub const FACTORISATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TinyError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn tokens(v: &str) -> impl Iterator<Item = &str> {
    v.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

pub fn parse_tiny_instance(text: &str) -> Result<TinyInstance, TinyError> {
    let (mut states, mut v, mut gamma, mut p) = (None, None, None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |reason: String| TinyError::Parse { line, reason };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let value = value.trim();
        match key.trim() {
            "states" => {
                let s: Result<Vec<i8>, _> = tokens(value)
                    .map(|t| match t {
                        "+" | "+1" | "1" => Ok(1),
                        "-" | "-1" => Ok(-1),
                        other => Err(err(format!("state `{other}` is not + or -"))),
                    })
                    .collect();
                states = Some(s?);
            }
            "v" => {
                v = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad vertex `{value}`")))?,
                )
            }
            "gamma" => {
                let g: Result<Vec<usize>, _> = tokens(value)
                    .map(|t| t.parse().map_err(|_| err(format!("bad vertex `{t}`"))))
                    .collect();
                gamma = Some(g?);
            }
            "p" => {
                p = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| err(format!("bad probability `{value}`")))?,
                )
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    Ok(TinyInstance::new(
        states.ok_or(TinyError::Missing("states"))?,
        v.ok_or(TinyError::Missing("v"))?,
        gamma.ok_or(TinyError::Missing("gamma"))?,
        p.ok_or(TinyError::Missing("p"))?,
    )?)
}

/// Exact checks on one instance.
#[derive(Debug, Clone)]
pub struct TinyReport {
    pub instance: TinyInstance,
    pub dist: ConditionalDistribution,
    pub max_factorisation_error: f64,
    pub variance_bound: f64,
}

impl TinyReport {
    pub fn factorisation_holds(&self) -> bool {
        self.max_factorisation_error <= FACTORISATION_TOLERANCE
    }

    pub fn variance_bound_holds(&self) -> bool {
        self.dist.var_x2 <= self.variance_bound
    }

    pub fn to_json(&self) -> Value {
        let p = self.instance.p;
        let pairs: Vec<Value> = self
            .dist
            .pairs
            .iter()
            .map(|c| {
                json!({
                    "u": c.u, "u_prime": c.u_prime,
                    "a_u": c.a_u, "b_u": c.b_u,
                    "a_u_prime": c.a_u_prime, "b_u_prime": c.b_u_prime,
                    "covariance": c.covariance,
                    "factorised": c.factorised(p),
                    "abs_error": (c.covariance - c.factorised(p)).abs(),
                })
            })
            .collect();
        json!({
            "n": self.instance.n,
            "v": self.instance.v,
            "gamma": self.instance.gamma,
            "p": p,
            "undetermined_pairs": self.instance.undetermined_pairs(),
            "total_mass": self.dist.total_mass(),
            "marginals": self.dist.marginals,
            "x2_pmf": self.dist.x2_pmf,
            "mean_x2": self.dist.mean_x2,
            "var_x2": self.dist.var_x2,
            "variance_bound": self.variance_bound,
            "variance_bound_holds": self.variance_bound_holds(),
            "pairs": pairs,
            "max_factorisation_error": self.max_factorisation_error,
            "factorisation_holds": self.factorisation_holds(),
        })
    }
}

pub fn check_tiny_instance(instance: TinyInstance) -> Result<TinyReport, TinyError> {
    let dist = enumerate_conditional(&instance)?;
    let p = instance.p;
    let max_factorisation_error = dist
        .pairs
        .iter()
        .map(|c| (c.covariance - c.factorised(p)).abs())
        .fold(0.0, f64::max);
    let variance_bound = variance_bound(instance.mean_degree());
    Ok(TinyReport {
        instance,
        dist,
        max_factorisation_error,
        variance_bound,
    })
}
