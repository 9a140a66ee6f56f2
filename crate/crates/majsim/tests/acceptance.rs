//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL ...` line
//! straight to stdout, so the lines show up even when output is captured.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use majsim::runner::{run_adversarial_parallel, run_trials, workers_from_env};
use majsim_core::analysis::shift::shift_grid;
use majsim_core::analysis::{
    c_of_eps, check_shift_inequality, enumerate_conditional, llt_sup_gap, phi_parity_ceiling,
    scaling_diagnostic, BinomialSpec, TinyInstance,
};
use majsim_core::dynamics::{majority_step, run_dynamics, sgn, Period, StateVector};
use majsim_core::graph::{sample_gnp, Graph, GraphModel, Representation};
use majsim_core::harness::{
    ExperimentConfig, InitMode, TrialOutcome, DEFAULT_LAMBDA_EFF, FAST_ROUNDS,
};
use majsim_core::rng::SplitMix64;
use rand::{Rng, RngCore};

fn report(criterion: u32, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {criterion}: {verdict} {detail}");
}

fn gnp_lambda(n: usize, lambda: f64) -> GraphModel {
    GraphModel::Gnp {
        n,
        p: lambda / (n as f64).sqrt(),
    }
}

struct FourRoundRun {
    config: ExperimentConfig,
    outcomes: Vec<TrialOutcome>,
    elapsed: Duration,
    workers: usize,
}

/// The dense uniform-start experiment shared by criteria 1, 2 and 12.
fn four_round_run() -> &'static FourRoundRun {
    static RUN: OnceLock<FourRoundRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut config = ExperimentConfig::new(gnp_lambda(2000, 3.0));
        config.trials = 400;
        config.master_seed = 20_240_601;
        config.max_rounds = 10;
        let workers = workers_from_env().unwrap();
        let start = Instant::now();
        let outcomes = run_trials(&config, workers).unwrap();
        FourRoundRun {
            config,
            outcomes,
            elapsed: start.elapsed(),
            workers,
        }
    })
}

#[test]
fn criterion_01_four_round_unanimity() {
    let run = four_round_run();
    let trials = run.outcomes.len();
    let fast = run
        .outcomes
        .iter()
        .filter(|o| o.unanimous_within(FAST_ROUNDS))
        .count();
    let rate = fast as f64 / trials as f64;
    let mut minority2: Vec<f64> = run
        .outcomes
        .iter()
        .filter_map(|o| o.minority_at(2).map(|m| m as f64 / o.n as f64))
        .collect();
    minority2.sort_by(f64::total_cmp);
    let median2 = minority2[minority2.len() / 2];
    let pass = rate >= 0.90;
    report(
        1,
        pass,
        format!("unanimous within 4 rounds {fast}/{trials} = {rate} (need >= 0.9); median |N2|/n = {median2}"),
    );
    assert!(pass);
    assert_eq!(trials, 400);
}

#[test]
fn criterion_02_winner_agreement() {
    let run = four_round_run();
    let n = run.config.n();
    let threshold = phi_parity_ceiling(2.0 * c_of_eps(1.0).unwrap() * (n as f64).sqrt(), n as i64);
    let mut eligible = 0;
    let mut agree = 0;
    let mut violations_all = 0;
    for o in &run.outcomes {
        if o.agrees == Some(false) {
            violations_all += 1;
        }
        let Some(w) = o.winner else { continue };
        if o.sum_s0 == 0 || o.sum_s0.abs() < threshold {
            continue;
        }
        eligible += 1;
        if w == sgn(o.sum_s0) {
            agree += 1;
        }
    }
    let rate = agree as f64 / eligible as f64;
    let pass = eligible > 0 && rate >= 0.99;
    report(
        2,
        pass,
        format!(
            "winner = sgn(sum) in {agree}/{eligible} = {rate} with |sum| >= {threshold} (need >= 0.99); \
             disagreements over all unanimous nonzero starts: {violations_all}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_two_round_finish() {
    let mut config = ExperimentConfig::new(gnp_lambda(5000, 3.0));
    config.init_mode = InitMode::Adversarial { delta: 0.09 };
    config.trials = 200;
    config.max_rounds = 4;
    config.master_seed = 4_101;
    let (rep, _) =
        run_adversarial_parallel(&config, DEFAULT_LAMBDA_EFF, workers_from_env().unwrap()).unwrap();
    let pass = rep.unanimous_within_2.value >= 0.99 && rep.n1_below_d_over_10.value >= 0.99;
    report(
        3,
        pass,
        format!(
            "unanimous within 2 rounds {}/{}, |N1| < d/10 in {}/{}, min degree >= d/2 in {}/{} (need >= 0.99 each)",
            rep.unanimous_within_2.successes,
            rep.unanimous_within_2.trials,
            rep.n1_below_d_over_10.successes,
            rep.n1_below_d_over_10.trials,
            rep.min_degree_at_least_half_d.successes,
            rep.min_degree_at_least_half_d.trials,
        ),
    );
    assert!(pass);
}

/// `C(k, i) q^i (1-q)^(k-i)` by the multiplicative formula in log space.
fn direct_pmf(k: u64, q: f64, i: u64) -> f64 {
    let mut log_c = 0.0;
    for j in 0..i {
        log_c += ((k - j) as f64).ln() - ((j + 1) as f64).ln();
    }
    (log_c + i as f64 * q.ln() + (k - i) as f64 * (1.0 - q).ln()).exp()
}

#[test]
fn criterion_04_llt_constant() {
    let qs = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
    let start = Instant::now();
    let mut worst = (0.0f64, 0u64, 0.0f64);
    let mut rows = 0;
    let mut failures = 0;
    for k in 2..=400u64 {
        for &q in &qs {
            let spec = BinomialSpec::new(k, q).unwrap();
            if spec.variance() <= 0.0 {
                continue;
            }
            let gap = llt_sup_gap(spec).unwrap();
            rows += 1;
            if gap.sigma_times_gap().is_nan() || gap.sigma_times_gap() > 50.0 {
                failures += 1;
            }
            if gap.sigma_times_gap() > worst.0 {
                worst = (gap.sigma_times_gap(), k, q);
            }
        }
    }
    let elapsed = start.elapsed();

    // Spot check the scaled gap |σ P(X=i) - φ((i-μ)/σ)| against a direct
    // pmf and a wide scan.
    for &(k, q) in &[(2u64, 0.5), (7, 0.3), (40, 0.01), (150, 0.9), (400, 0.99)] {
        let gap = llt_sup_gap(BinomialSpec::new(k, q).unwrap()).unwrap();
        let (mu, var) = (k as f64 * q, k as f64 * q * (1.0 - q));
        let sigma = var.sqrt();
        let mut sup = 0.0f64;
        for i in -200i64..=(k as i64 + 200) {
            let pmf = if (0..=k as i64).contains(&i) {
                direct_pmf(k, q, i as u64)
            } else {
                0.0
            };
            let x = i as f64 - mu;
            let dens = (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI).sqrt();
            sup = sup.max((sigma * pmf - dens).abs());
        }
        assert!(
            (sup - gap.sup_gap).abs() <= 1e-12 * sup.max(1e-300) + 1e-15,
            "k={k} q={q}"
        );
    }

    let pass = failures == 0 && elapsed <= Duration::from_secs(30);
    report(
        4,
        pass,
        format!(
            "{rows} (k, q) points, {failures} with sigma*gap > 50; max sigma*gap = {} at k={}, q={}; {:.2?} (need <= 30 s)",
            worst.0, worst.1, worst.2, elapsed
        ),
    );
    assert!(pass);
}

/// Brute force over every graph on the undetermined pairs: the first-round
/// indicators `I_u = [S_1(u) = +1]` for `u` in gamma, with ties keeping the
/// old state.
struct BruteForce {
    marginals: Vec<f64>,
    joint: Vec<Vec<f64>>,
    /// `[j][k][present]`: `P(I_{gamma[j]} = 1 | pair present or absent)`.
    cond: Vec<Vec<[f64; 2]>>,
}

fn brute_force(inst: &TinyInstance) -> BruteForce {
    let n = inst.n;
    let g = inst.gamma.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != inst.v && b != inst.v)
        .collect();
    let mut marginals = vec![0.0; g];
    let mut joint = vec![vec![0.0; g]; g];
    let mut cond_mass = vec![vec![[0.0f64; 2]; g]; g];
    let mut cond_hits = vec![vec![[0.0f64; 2]; g]; g];
    let mut adj = vec![vec![false; n]; n];
    for mask in 0u64..(1 << pairs.len()) {
        let e = mask.count_ones() as i32;
        let w = inst.p.powi(e) * (1.0 - inst.p).powi(pairs.len() as i32 - e);
        for row in adj.iter_mut() {
            row.iter_mut().for_each(|x| *x = false);
        }
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            let on = mask >> bit & 1 == 1;
            adj[a][b] = on;
            adj[b][a] = on;
        }
        for &u in &inst.gamma {
            adj[u][inst.v] = true;
            adj[inst.v][u] = true;
        }
        let ind: Vec<bool> = inst
            .gamma
            .iter()
            .map(|&u| {
                let sum: i32 = (0..n)
                    .filter(|&x| adj[u][x])
                    .map(|x| inst.states[x] as i32)
                    .sum();
                sum > 0 || (sum == 0 && inst.states[u] > 0)
            })
            .collect();
        for j in 0..g {
            if ind[j] {
                marginals[j] += w;
            }
            for k in 0..g {
                if ind[j] && ind[k] {
                    joint[j][k] += w;
                }
                let present = adj[inst.gamma[j]][inst.gamma[k]] as usize;
                cond_mass[j][k][present] += w;
                if ind[j] {
                    cond_hits[j][k][present] += w;
                }
            }
        }
    }
    let cond = (0..g)
        .map(|j| {
            (0..g)
                .map(|k| {
                    let r = |s: usize| cond_hits[j][k][s] / cond_mass[j][k][s];
                    [r(0), r(1)]
                })
                .collect()
        })
        .collect();
    BruteForce {
        marginals,
        joint,
        cond,
    }
}

#[test]
fn criterion_05_covariance_factorisation() {
    let mut rng = SplitMix64::new(0xC0FA);
    let mut worst_factorised = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut instances = 0;
    let mut pairs_checked = 0;
    while instances < 50 {
        let n = rng.random_range(3..=7usize);
        let states: Vec<i8> = (0..n)
            .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
            .collect();
        let v = rng.random_range(0..n);
        let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        let gamma: Vec<usize> = others
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.6))
            .collect();
        if gamma.len() < 2 {
            continue;
        }
        let p = rng.random_range(0.05..0.95);
        let inst = TinyInstance::new(states, v, gamma, p).unwrap();
        assert!(inst.undetermined_pairs() <= 30);
        let dist = enumerate_conditional(&inst).unwrap();
        let brute = brute_force(&inst);
        let g = inst.gamma.len();
        for pc in &dist.pairs {
            let j = inst.gamma.iter().position(|&x| x == pc.u).unwrap();
            let k = inst.gamma.iter().position(|&x| x == pc.u_prime).unwrap();
            worst_factorised = worst_factorised.max((pc.covariance - pc.factorised(p)).abs());
            let cov = brute.joint[j][k] - brute.marginals[j] * brute.marginals[k];
            let oracle_factorised = p
                * (1.0 - p)
                * (brute.cond[j][k][1] - brute.cond[j][k][0])
                * (brute.cond[k][j][1] - brute.cond[k][j][0]);
            for err in [
                pc.covariance - cov,
                pc.a_u - brute.cond[j][k][1],
                pc.b_u - brute.cond[j][k][0],
                pc.a_u_prime - brute.cond[k][j][1],
                pc.b_u_prime - brute.cond[k][j][0],
                cov - oracle_factorised,
            ] {
                worst_oracle = worst_oracle.max(err.abs());
            }
            pairs_checked += 1;
        }
        assert_eq!(dist.pairs.len(), g * (g - 1) / 2);
        instances += 1;
    }
    let pass = worst_factorised <= 1e-12 && worst_oracle <= 1e-12;
    report(
        5,
        pass,
        format!(
            "{instances} instances, {pairs_checked} pairs; max |Cov - p(1-p)(A-B)(A'-B')| = {worst_factorised:e}, \
             max deviation from brute force = {worst_oracle:e} (need <= 1e-12)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_06_shift_inequality() {
    let sizes: Vec<usize> = (1..=10).collect();
    let qs = [0.1, 0.5, 0.9];
    let shifts: Vec<i64> = (-3..=3).collect();
    let failures = shift_grid(&sizes, &qs, &shifts).unwrap();

    // The left side is P(S' - S = a + 1); recompute it from direct pmfs.
    let mut worst = 0.0f64;
    let mut tightest = f64::INFINITY;
    for &si in &sizes {
        for &sj in &sizes {
            for &q in &qs {
                for &a in &shifts {
                    let c = check_shift_inequality(si, sj, q, a).unwrap();
                    let mut direct = 0.0;
                    for s in 0..=si as i64 {
                        let t = s + a + 1;
                        if (0..=sj as i64).contains(&t) {
                            direct += direct_pmf(si as u64, q, s as u64)
                                * direct_pmf(sj as u64, q, t as u64);
                        }
                    }
                    let rhs = (0..=sj as u64)
                        .map(|t| direct_pmf(sj as u64, q, t))
                        .fold(0.0, f64::max);
                    worst = worst.max((c.lhs - direct).abs()).max((c.rhs - rhs).abs());
                    tightest = tightest.min(rhs - direct);
                }
            }
        }
    }
    let pass = failures.is_empty() && worst <= 1e-12 && tightest >= -1e-12;
    report(
        6,
        pass,
        format!(
            "{} grid points, {} failures; max deviation from direct convolution {worst:e}; min slack {tightest:e}",
            sizes.len() * sizes.len() * qs.len() * shifts.len(),
            failures.len()
        ),
    );
    assert!(pass);
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let edges = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e);
    Graph::from_edges(n, edges, Representation::Dense).unwrap()
}

fn state_from_mask(n: usize, mask: u64) -> StateVector {
    let spins: Vec<i8> = (0..n)
        .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
        .collect();
    StateVector::from_spins(&spins)
}

/// Cycle length found by remembering every visited state.
fn cycle_length(g: &Graph, s0: StateVector, horizon: usize) -> Option<usize> {
    let mut seen: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let mut s = s0;
    for t in 0..=horizon {
        if let Some(&first) = seen.get(s.bits().words()) {
            return Some(t - first);
        }
        seen.insert(s.bits().words().to_vec(), t);
        s = majority_step(g, &s).unwrap();
    }
    None
}

#[test]
fn criterion_07_period_at_most_two() {
    let mut exhaustive = 0u64;
    let mut bad = 0u64;
    let mut detector_mismatch = 0u64;
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        for gm in 0u64..(1 << pairs) {
            let g = graph_from_mask(n, gm);
            for sm in 0u64..(1 << n) {
                let s = state_from_mask(n, sm);
                let len = cycle_length(&g, s.clone(), 64);
                if !matches!(len, Some(1) | Some(2)) {
                    bad += 1;
                }
                let t = run_dynamics(&g, &s, 64).unwrap();
                if t.period.map(Period::length) != len {
                    detector_mismatch += 1;
                }
                exhaustive += 1;
            }
        }
    }
    let mut rng = SplitMix64::new(0x601E5);
    let mut random = 0u64;
    for n in 6..=12usize {
        for _ in 0..10_000 {
            let p = rng.random_range(0.05..0.95);
            let g = sample_gnp(n, p, rng.next_u64()).unwrap();
            let s = state_from_mask(n, rng.next_u64());
            let len = cycle_length(&g, s.clone(), 10_000);
            if !matches!(len, Some(1) | Some(2)) {
                bad += 1;
            }
            let t = run_dynamics(&g, &s, 10_000).unwrap();
            if t.period.map(Period::length) != len {
                detector_mismatch += 1;
            }
            random += 1;
        }
    }
    let pass = bad == 0 && detector_mismatch == 0;
    report(
        7,
        pass,
        format!(
            "{exhaustive} exhaustive and {random} random trajectories; {bad} with period > 2 or no cycle; \
             {detector_mismatch} period-detector disagreements"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_monotone_and_symmetric() {
    let mut order_violations = 0u64;
    let mut symmetry_violations = 0u64;
    let mut cases = 0u64;
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        let full = (1u64 << n) - 1;
        for gm in 0u64..(1 << pairs) {
            let g = graph_from_mask(n, gm);
            for lo in 0u64..=full {
                let s = state_from_mask(n, lo);
                let step = majority_step(&g, &s).unwrap();
                if majority_step(&g, &s.negated()).unwrap() != step.negated() {
                    symmetry_violations += 1;
                }
                // Every superset of the plus set of `lo`.
                let free = full & !lo;
                let mut extra = free;
                loop {
                    let hi = lo | extra;
                    let step_hi = majority_step(&g, &state_from_mask(n, hi)).unwrap();
                    if !step.le(&step_hi) {
                        order_violations += 1;
                    }
                    cases += 1;
                    if extra == 0 {
                        break;
                    }
                    extra = (extra - 1) & free;
                }
            }
        }
    }
    let mut rng = SplitMix64::new(0x0DE7);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=64usize);
        let g = sample_gnp(n, rng.random_range(0.0..1.0), rng.next_u64()).unwrap();
        let lo = rng.next_u64() & rng.next_u64();
        let hi = lo | rng.next_u64();
        let (s, t) = (state_from_mask(n, lo), state_from_mask(n, hi));
        let (ss, st) = (
            majority_step(&g, &s).unwrap(),
            majority_step(&g, &t).unwrap(),
        );
        if !ss.le(&st) {
            order_violations += 1;
        }
        if majority_step(&g, &s.negated()).unwrap() != ss.negated() {
            symmetry_violations += 1;
        }
        cases += 1;
    }
    let pass = order_violations == 0 && symmetry_violations == 0;
    report(
        8,
        pass,
        format!("{cases} ordered pairs; {order_violations} order violations; {symmetry_violations} symmetry violations"),
    );
    assert!(pass);
}

#[test]
fn criterion_09_scaling() {
    let mut config = ExperimentConfig::new(gnp_lambda(4000, 3.0));
    config.trials = 500;
    config.max_rounds = 1;
    config.master_seed = 9_009;
    let outcomes = run_trials(&config, workers_from_env().unwrap()).unwrap();
    let d = config.mean_degree();
    let series: Vec<Vec<f64>> = outcomes
        .iter()
        .map(|o| o.trajectory.magnetization_values())
        .collect();
    let rep = scaling_diagnostic(&series, d).unwrap();
    let pass = rep.round(0).is_some_and(|r| r.median_in_band);
    let detail = match rep.round(0) {
        Some(r) => format!(
            "median mu1^2/mu0^2 = {} over {} valid trials (q1 {}, q3 {}); band [{}, {}]",
            r.median, r.count, r.q1, r.q3, rep.band.0, rep.band.1
        ),
        None => "no valid trials".to_string(),
    };
    report(9, pass, detail);
    assert!(pass);
}

#[test]
fn criterion_10_sparse_non_unanimity() {
    let mut config = ExperimentConfig::new(GraphModel::RandomRegular { n: 1000, r: 4 });
    config.trials = 100;
    config.max_rounds = 50;
    config.master_seed = 1_004;
    let outcomes = run_trials(&config, workers_from_env().unwrap()).unwrap();
    let unanimous = outcomes
        .iter()
        .filter(|o| o.unanimity_round().is_some())
        .count();
    let rate = unanimous as f64 / outcomes.len() as f64;

    // |sum S_2t| / n at the first even round past the record; only for
    // trials whose cycle was detected.
    let mut limits: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.period().is_some())
        .filter_map(|o| {
            let last = o.trajectory.last_round();
            let even = last + last % 2;
            o.trajectory.magnetization_at(even).map(|m| m.value().abs())
        })
        .collect();
    limits.sort_by(f64::total_cmp);
    let q = |f: f64| limits[((limits.len() - 1) as f64 * f).round() as usize];
    let in_band = |eps: f64| {
        let (lo, hi) = ((1.0 - eps) / 2.0, (1.0 + eps) / 2.0);
        limits.iter().filter(|&&x| x >= lo && x <= hi).count()
    };
    let pass = rate <= 0.05;
    report(
        10,
        pass,
        format!(
            "unanimous {unanimous}/{} = {rate} (need <= 0.05); limiting |sum S_2t|/n over {} cycling trials: \
             min {} q1 {} median {} q3 {} max {}; inside [(1-eps)/2, (1+eps)/2]: eps=0.5 {}, eps=0.9 {}",
            outcomes.len(),
            limits.len(),
            q(0.0),
            q(0.25),
            q(0.5),
            q(0.75),
            q(1.0),
            in_band(0.5),
            in_band(0.9)
        ),
    );
    assert!(pass);
}

fn run_binary(config: &Path, out: &Path, workers: &str) -> (Vec<u8>, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_majsim"))
        .arg("simulate")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env("MAJSIM_WORKERS", workers)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    (
        std::fs::read(out.join("trials.csv")).unwrap(),
        std::fs::read(out.join("summary.json")).unwrap(),
    )
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("det.cfg");
    std::fs::write(
        &config,
        "model = gnp\nn = 600\nd_over_sqrt_n = 3\ninit_mode = uniform\ntrials = 48\nmaster_seed = 77\nmax_rounds = 8\n",
    )
    .unwrap();
    let mut runs = Vec::new();
    for rerun in 0..3 {
        for workers in ["1", "2", "8"] {
            let out = dir.path().join(format!("run-{rerun}-{workers}"));
            runs.push(run_binary(&config, &out, workers));
        }
    }
    let identical = runs.iter().all(|r| *r == runs[0]);
    let rows = runs[0].0.iter().filter(|&&b| b == b'\n').count();
    let pass = identical && rows == 49;
    report(
        11,
        pass,
        format!("{} runs (3 reruns x workers 1, 2, 8) byte-identical: {identical}; trials.csv lines {rows}", runs.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_12_performance() {
    let n = 16_384;
    let gen_start = Instant::now();
    let g = sample_gnp(n, 0.05, 12).unwrap();
    let gen = gen_start.elapsed();
    assert_eq!(g.representation(), Representation::Dense);
    let mut rng = SplitMix64::new(3);
    let spins: Vec<i8> = (0..n)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    let s = StateVector::from_spins(&spins);
    let step_start = Instant::now();
    let next = majority_step(&g, &s).unwrap();
    let step = step_start.elapsed();
    assert_eq!(next.n(), n);

    let run = four_round_run();
    let pass = step <= Duration::from_secs(1) && run.elapsed <= Duration::from_secs(120);
    report(
        12,
        pass,
        format!(
            "dense G(16384, 0.05): one step {step:.2?} (need <= 1 s), sampling {gen:.2?}; \
             criterion-1 experiment {:.2?} on {} worker(s) (target <= 120 s)",
            run.elapsed, run.workers
        ),
    );
    assert!(pass);
}
