//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use majsim_core::harness::{Experiment, DEFAULT_LAMBDA_EFF};

use crate::config::{ConfigFile, RawConfig};
use crate::graph_io::dump_graph;
use crate::llt_report::{llt_csv, llt_rows};
use crate::output::ResultBundle;
use crate::runner::{run_adversarial_parallel, run_experiment_parallel, workers_from_env};
use crate::tiny::{check_tiny_instance, parse_tiny_instance};

#[derive(Debug, Parser)]
#[command(name = "majsim", version, about = "Majority dynamics on random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the graph of this trial to `graph.txt`.
        #[arg(long, value_name = "TRIAL")]
        dump_graph: Option<u64>,
    },
    /// Run the cross product of key overrides, one subdirectory each.
    Sweep {
        config: PathBuf,
        /// `key=v1,v2,...`; repeat for more keys.
        #[arg(long, required = true)]
        grid: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the binomial local-limit gap.
    LltCheck {
        #[arg(long)]
        kmax: u64,
        /// Comma-separated success probabilities.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact conditional enumeration on a tiny instance.
    Enumerate { instance: PathBuf },
    /// Two-round finish from a small adversarial minority.
    Adversarial {
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LAMBDA_EFF)]
        lambda_eff: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (program name first), runs it, and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn read_config(path: &Path) -> Result<RawConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    RawConfig::parse(&text).with_context(|| path.display().to_string())
}

fn build(raw: &RawConfig, path: &Path) -> Result<ConfigFile> {
    raw.build().with_context(|| path.display().to_string())
}

fn output_dir(flag: Option<PathBuf>, cfg: &ConfigFile) -> Result<PathBuf> {
    flag.or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| anyhow!("no output directory: pass --out or set output_dir"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate {
            config,
            out: dir,
            dump_graph: dump,
        } => {
            let cfg = build(&read_config(&config)?, &config)?;
            let dir = output_dir(dir, &cfg)?;
            let summary = simulate(&cfg, &dir)?;
            if let Some(index) = dump {
                if index >= cfg.experiment.trials {
                    bail!(
                        "--dump-graph {index} is not a trial index (trials = {})",
                        cfg.experiment.trials
                    );
                }
                let g = Experiment::new(cfg.experiment.clone())?.trial_graph(index)?;
                std::fs::write(dir.join("graph.txt"), dump_graph(&g))
                    .with_context(|| format!("cannot write {}", dir.display()))?;
            }
            writeln!(out, "{summary}")?;
        }
        Command::Sweep {
            config,
            grid,
            out: dir,
        } => {
            let raw = read_config(&config)?;
            let base = build(&raw, &config)?;
            let dir = output_dir(dir, &base)?;
            let axes = parse_grid(&grid)?;
            let mut index = String::from("subdir");
            for (k, _) in &axes {
                index.push(',');
                index.push_str(k);
            }
            index.push_str(",trials,unanimous_within_4,unanimous_within_max\n");
            let mut seen = std::collections::BTreeSet::new();
            for combo in cross_product(&axes) {
                let mut raw = raw.clone();
                for (k, v) in &combo {
                    raw.set(k, v)?;
                }
                let name = subdir_name(&combo);
                if !seen.insert(name.clone()) {
                    bail!("grid values collide in directory name `{name}`");
                }
                let cfg = raw
                    .build()
                    .with_context(|| format!("{} with {name}", config.display()))?;
                let (summary, outcomes) =
                    run_experiment_parallel(&cfg.experiment, workers_from_env()?)?;
                ResultBundle::new(&cfg, &summary, &outcomes, None)
                    .write_to(&dir.join(&name))
                    .with_context(|| format!("cannot write {}", dir.join(&name).display()))?;
                index.push_str(&name);
                for (_, v) in &combo {
                    index.push(',');
                    index.push_str(v);
                }
                index.push_str(&format!(
                    ",{},{},{}\n",
                    summary.trials,
                    summary.unanimous_within_4.value,
                    summary.unanimous_within_max.value
                ));
                writeln!(
                    out,
                    "{name}: unanimous within 4 rounds {}/{}",
                    summary.count_unanimous_within_4, summary.trials
                )?;
            }
            std::fs::write(dir.join("sweep.csv"), index)
                .with_context(|| format!("cannot write {}", dir.display()))?;
        }
        Command::LltCheck { kmax, q, out: file } => {
            let rows = llt_rows(kmax, &q)?;
            let csv = llt_csv(&rows);
            match file {
                Some(path) => std::fs::write(&path, csv)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => out.write_all(csv.as_bytes())?,
            }
            let failures = rows.iter().filter(|r| !r.gap.within_bound()).count();
            if failures > 0 {
                bail!(
                    "sigma * sup_gap exceeds 50 in {failures} of {} rows",
                    rows.len()
                );
            }
        }
        Command::Enumerate { instance } => {
            let text = std::fs::read_to_string(&instance)
                .with_context(|| format!("cannot read {}", instance.display()))?;
            let inst =
                parse_tiny_instance(&text).with_context(|| instance.display().to_string())?;
            let report = check_tiny_instance(inst)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json())?)?;
            if !report.factorisation_holds() {
                bail!(
                    "covariance factorisation off by {}",
                    report.max_factorisation_error
                );
            }
        }
        Command::Adversarial {
            config,
            lambda_eff,
            out: dir,
        } => {
            let cfg = build(&read_config(&config)?, &config)?;
            let dir = output_dir(dir, &cfg)?;
            let (report, outcomes) =
                run_adversarial_parallel(&cfg.experiment, lambda_eff, workers_from_env()?)?;
            ResultBundle::new(&cfg, &report.summary, &outcomes, Some(&report))
                .write_to(&dir)
                .with_context(|| format!("cannot write {}", dir.display()))?;
            writeln!(
                out,
                "unanimous within 2 rounds {}/{}, |N1| < d/10 in {}/{}",
                report.unanimous_within_2.successes,
                report.unanimous_within_2.trials,
                report.n1_below_d_over_10.successes,
                report.n1_below_d_over_10.trials
            )?;
        }
    }
    Ok(())
}

/// Runs one experiment and writes its bundle to `dir`.
pub fn simulate(cfg: &ConfigFile, dir: &Path) -> Result<String> {
    let (summary, outcomes) = run_experiment_parallel(&cfg.experiment, workers_from_env()?)?;
    ResultBundle::new(cfg, &summary, &outcomes, None)
        .write_to(dir)
        .with_context(|| format!("cannot write {}", dir.display()))?;
    Ok(format!(
        "{} trials, unanimous within 4 rounds {}/{}",
        summary.trials, summary.count_unanimous_within_4, summary.trials
    ))
}

fn parse_grid(specs: &[String]) -> Result<Vec<(String, Vec<String>)>> {
    let mut axes: Vec<(String, Vec<String>)> = Vec::new();
    for spec in specs {
        let (key, values) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--grid expects key=v1,v2,..., got `{spec}`"))?;
        let key = key.trim();
        if axes.iter().any(|(k, _)| k == key) {
            bail!("--grid key `{key}` given twice");
        }
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            bail!("--grid `{key}` has an empty value");
        }
        axes.push((key.to_string(), values));
    }
    Ok(axes)
}

fn cross_product(axes: &[(String, Vec<String>)]) -> Vec<Vec<(String, String)>> {
    let mut combos = vec![Vec::new()];
    for (key, values) in axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    combos
}

fn subdir_name(combo: &[(String, String)]) -> String {
    combo
        .iter()
        .map(|(k, v)| {
            let v: String = v
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                        c
                    } else {
                        '_'
                    }
                })
                .collect();
            format!("{k}-{v}")
        })
        .collect::<Vec<_>>()
        .join("_")
}
