//! Flat `key = value` experiment files.
//!
//! ```text
//! # comment
//! model = gnp
//! n = 1000
//! d_over_sqrt_n = 3
//! init_mode = uniform
//! trials = 10
//! master_seed = 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use majsim_core::graph::GraphModel;
use majsim_core::harness::{ExperimentConfig, GraphResample, HarnessError, InitMode};
use thiserror::Error;

pub const KEYS: [&str; 14] = [
    "model",
    "n",
    "p",
    "d_over_sqrt_n",
    "r",
    "init_mode",
    "eps",
    "beta",
    "delta",
    "trials",
    "max_rounds",
    "master_seed",
    "graph_resample",
    "output_dir",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("line {line}: key `{key}`: {reason}")]
    Domain {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("line {line}: keys `{first}` and `{second}` are mutually exclusive")]
    MutuallyExclusive {
        line: usize,
        first: String,
        second: String,
    },
    #[error("line {line}: key `{key}` does not apply to {context}")]
    NotApplicable {
        line: usize,
        key: String,
        context: String,
    },
}

/// How the graph density was written, kept so the file round-trips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    P(f64),
    DOverSqrtN(f64),
    Degree(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub experiment: ExperimentConfig,
    pub density: Density,
    pub output_dir: Option<PathBuf>,
}

/// Raw entries with the line each came from (0 for overrides).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

const DENSITY_KEYS: [&str; 3] = ["p", "d_over_sqrt_n", "r"];

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if entries.contains_key(key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            entries.insert(key.to_string(), (line, value.to_string()));
        }
        Ok(RawConfig { entries })
    }

    /// Replaces `key`; setting one density key drops the others.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line: 0,
                key: key.to_string(),
            });
        }
        if DENSITY_KEYS.contains(&key) {
            for k in DENSITY_KEYS {
                self.entries.remove(k);
            }
        }
        self.entries
            .insert(key.to_string(), (0, value.trim().to_string()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn build(&self) -> Result<ConfigFile, ConfigError> {
        let line_of = |key: &str| self.entries.get(key).map_or(0, |(l, _)| *l);
        let domain = |key: &str, reason: String| ConfigError::Domain {
            line: line_of(key),
            key: key.to_string(),
            reason,
        };
        let required = |key: &'static str| self.get(key).ok_or(ConfigError::MissingKey { key });
        let parse_u64 = |key: &str, v: &str| {
            v.parse::<u64>()
                .map_err(|_| domain(key, format!("`{v}` is not a non-negative integer")))
        };
        let parse_f64 = |key: &str, v: &str| match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(domain(key, format!("`{v}` is not a finite number"))),
        };
        let not_applicable = |key: &str, context: &str| ConfigError::NotApplicable {
            line: line_of(key),
            key: key.to_string(),
            context: context.to_string(),
        };

        let n = parse_u64("n", required("n")?)?;
        if n == 0 {
            return Err(domain("n", "the graph needs at least one vertex".into()));
        }
        let n = usize::try_from(n).map_err(|_| domain("n", "too large".into()))?;

        let model_name = required("model")?;
        let (model, density) = match model_name {
            "gnp" => {
                if self.get("r").is_some() {
                    return Err(not_applicable("r", "model = gnp"));
                }
                let density = match (self.get("p"), self.get("d_over_sqrt_n")) {
                    (Some(_), Some(_)) => {
                        let (a, b) = if line_of("p") <= line_of("d_over_sqrt_n") {
                            ("p", "d_over_sqrt_n")
                        } else {
                            ("d_over_sqrt_n", "p")
                        };
                        return Err(ConfigError::MutuallyExclusive {
                            line: line_of(b),
                            first: a.into(),
                            second: b.into(),
                        });
                    }
                    (Some(v), None) => Density::P(parse_f64("p", v)?),
                    (None, Some(v)) => Density::DOverSqrtN(parse_f64("d_over_sqrt_n", v)?),
                    (None, None) => return Err(ConfigError::MissingKey { key: "p" }),
                };
                let p = match density {
                    Density::P(p) => p,
                    Density::DOverSqrtN(x) => {
                        if x < 0.0 {
                            return Err(domain("d_over_sqrt_n", format!("{x} is negative")));
                        }
                        x / (n as f64).sqrt()
                    }
                    Density::Degree(_) => unreachable!(),
                };
                if !(0.0..=1.0).contains(&p) {
                    let key = match density {
                        Density::P(_) => "p",
                        _ => "d_over_sqrt_n",
                    };
                    return Err(domain(
                        key,
                        format!("edge probability {p} is outside [0, 1]"),
                    ));
                }
                (GraphModel::Gnp { n, p }, density)
            }
            "random_regular" => {
                for key in ["p", "d_over_sqrt_n"] {
                    if self.get(key).is_some() {
                        return Err(not_applicable(key, "model = random_regular"));
                    }
                }
                let r = parse_u64("r", required("r")?)?;
                let r = usize::try_from(r).map_err(|_| domain("r", "too large".into()))?;
                let model = GraphModel::RandomRegular { n, r };
                model.validate().map_err(|e| domain("r", e.to_string()))?;
                (model, Density::Degree(r))
            }
            other => {
                return Err(domain(
                    "model",
                    format!("`{other}` is not one of gnp, random_regular"),
                ))
            }
        };

        let init_mode = match required("init_mode")? {
            "uniform" => InitMode::Uniform,
            "biased_at_least" => InitMode::BiasedAtLeast,
            "exact_bias" => InitMode::ExactBias,
            "adversarial" => {
                let delta = parse_f64("delta", required("delta")?)?;
                if !(0.0..0.1).contains(&delta) {
                    return Err(domain(
                        "delta",
                        format!(
                            "{delta} violates the hypothesis delta < 1/10 of the two-round finish (need 0 <= delta < 0.1)"
                        ),
                    ));
                }
                InitMode::Adversarial { delta }
            }
            other => {
                return Err(domain(
                    "init_mode",
                    format!(
                        "`{other}` is not one of uniform, biased_at_least, exact_bias, adversarial"
                    ),
                ))
            }
        };
        if self.get("delta").is_some() && !matches!(init_mode, InitMode::Adversarial { .. }) {
            return Err(not_applicable("delta", "a non-adversarial init_mode"));
        }

        let mut experiment = ExperimentConfig::new(model);
        experiment.init_mode = init_mode;
        if let Some(v) = self.get("eps") {
            experiment.eps = parse_f64("eps", v)?;
        }
        if let Some(v) = self.get("beta") {
            experiment.beta = parse_f64("beta", v)?;
        }
        experiment.trials = parse_u64("trials", required("trials")?)?;
        if let Some(v) = self.get("max_rounds") {
            experiment.max_rounds = usize::try_from(parse_u64("max_rounds", v)?)
                .map_err(|_| domain("max_rounds", "too large".into()))?;
        }
        experiment.master_seed = parse_u64("master_seed", required("master_seed")?)?;
        if let Some(v) = self.get("graph_resample") {
            experiment.graph_resample = match v {
                "per_trial" => GraphResample::PerTrial,
                "shared" => GraphResample::Shared,
                other => {
                    return Err(domain(
                        "graph_resample",
                        format!("`{other}` is not one of per_trial, shared"),
                    ))
                }
            };
        }
        experiment.validate().map_err(|e| {
            let key = match e {
                HarnessError::ZeroTrials => "trials",
                HarnessError::InfeasibleBias { .. } => "n",
                HarnessError::Analysis(majsim_core::analysis::AnalysisError::BetaOutOfRange(_)) => {
                    "beta"
                }
                HarnessError::Analysis(_) => "eps",
                HarnessError::DeltaOutOfRange(_) => "delta",
                _ => "model",
            };
            domain(key, e.to_string())
        })?;

        let output_dir = self
            .get("output_dir")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        Ok(ConfigFile {
            experiment,
            density,
            output_dir,
        })
    }
}

/// Parses and validates a config file.
pub fn parse_config_file(text: &str) -> Result<ConfigFile, ConfigError> {
    RawConfig::parse(text)?.build()
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    Ok(parse_config_file(text)?.experiment)
}

/// Writes a config that parses back to the same value.
pub fn render_config(cfg: &ConfigFile) -> String {
    let e = &cfg.experiment;
    let mut out = String::new();
    let mut line = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k} = {v}");
    };
    match e.model {
        GraphModel::Gnp { .. } => line("model", &"gnp"),
        GraphModel::RandomRegular { .. } => line("model", &"random_regular"),
    }
    line("n", &e.n());
    match cfg.density {
        Density::P(p) => line("p", &p),
        Density::DOverSqrtN(x) => line("d_over_sqrt_n", &x),
        Density::Degree(r) => line("r", &r),
    }
    match e.init_mode {
        InitMode::Uniform => line("init_mode", &"uniform"),
        InitMode::BiasedAtLeast => line("init_mode", &"biased_at_least"),
        InitMode::ExactBias => line("init_mode", &"exact_bias"),
        InitMode::Adversarial { delta } => {
            line("init_mode", &"adversarial");
            line("delta", &delta);
        }
    }
    line("eps", &e.eps);
    line("beta", &e.beta);
    line("trials", &e.trials);
    line("max_rounds", &e.max_rounds);
    line("master_seed", &e.master_seed);
    match e.graph_resample {
        GraphResample::PerTrial => line("graph_resample", &"per_trial"),
        GraphResample::Shared => line("graph_resample", &"shared"),
    }
    if let Some(dir) = &cfg.output_dir {
        line("output_dir", &dir.display());
    }
    out
}
