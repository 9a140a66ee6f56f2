//! Synchronous majority dynamics with tie retention.
//!
//! Each round every vertex looks at its neighbours' current states; it takes
//! the strict majority, and keeps its own state on a tie. Rounds are double
//! buffered so no vertex ever sees a partially updated configuration.

use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::BitVec;
use crate::graph::Graph;

/// Rounds simulated when no explicit limit is given.
pub const DEFAULT_MAX_ROUNDS: usize = 50;

/// Trajectories keep every full state up to this order unless told otherwise.
pub const KEEP_STATES_MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("state has {state} entries but graph has {graph} vertices")]
    SizeMismatch { graph: usize, state: usize },
}

/// Sign of an integer: `-1`, `0` (a tie) or `+1`.
#[inline]
pub fn sgn(x: i64) -> i8 {
    match x {
        x if x < 0 => -1,
        0 => 0,
        _ => 1,
    }
}

/// Opinion assignment; bit `v` set means vertex `v` holds `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateVector {
    bits: BitVec,
}

impl StateVector {
    pub fn all(n: usize, spin: i8) -> Self {
        StateVector {
            bits: if spin > 0 {
                BitVec::ones(n)
            } else {
                BitVec::zeros(n)
            },
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        StateVector { bits }
    }

    /// From a slice of `+1` / `-1` values; anything positive counts as `+1`.
    pub fn from_spins(spins: &[i8]) -> Self {
        StateVector {
            bits: BitVec::from_fn(spins.len(), |i| spins[i] > 0),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    #[inline]
    pub fn spin(&self, v: usize) -> i8 {
        if self.bits.get(v) {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn set_spin(&mut self, v: usize, spin: i8) {
        self.bits.assign(v, spin > 0);
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.n()).map(|v| self.spin(v)).collect()
    }

    pub fn plus_count(&self) -> usize {
        self.bits.count_ones()
    }

    /// `n₊ - n₋`.
    pub fn signed_sum(&self) -> i64 {
        2 * self.plus_count() as i64 - self.n() as i64
    }

    /// Number of vertices holding `spin`.
    pub fn count_spin(&self, spin: i8) -> usize {
        if spin > 0 {
            self.plus_count()
        } else {
            self.n() - self.plus_count()
        }
    }

    /// The common state if all vertices agree.
    pub fn unanimous(&self) -> Option<i8> {
        if self.bits.all_ones() {
            Some(1)
        } else if self.bits.all_zero() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn negated(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.negate();
        StateVector { bits }
    }

    /// Coordinatewise `self <= other` with `-1 < +1`.
    pub fn le(&self, other: &StateVector) -> bool {
        self.bits.is_subset_of(&other.bits)
    }
}

/// Exact magnetization `(n₊ - n₋) / n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Magnetization {
    pub numerator: i64,
    pub denominator: u64,
}

impl Magnetization {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub fn magnetization(s: &StateVector) -> Magnetization {
    Magnetization {
        numerator: s.signed_sum(),
        denominator: s.n() as u64,
    }
}

/// Period of the cycle a trajectory settled into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Period {
    Fixed,
    Two,
}

impl Period {
    pub fn length(self) -> usize {
        match self {
            Period::Fixed => 1,
            Period::Two => 2,
        }
    }
}

/// One synchronous round.
pub fn majority_step(g: &Graph, s: &StateVector) -> Result<StateVector, DynamicsError> {
    let mut out = StateVector::all(s.n(), -1);
    majority_step_into(g, s, &mut out)?;
    Ok(out)
}

/// One synchronous round written into `out`, which must have the graph's order.
pub fn majority_step_into(
    g: &Graph,
    s: &StateVector,
    out: &mut StateVector,
) -> Result<(), DynamicsError> {
    let n = g.n();
    for len in [s.n(), out.n()] {
        if len != n {
            return Err(DynamicsError::SizeMismatch {
                graph: n,
                state: len,
            });
        }
    }
    let current = s.bits.words();
    let degrees = g.degrees();
    let words = out.bits.words_mut();
    match (g.dense_rows(), g.sparse_lists()) {
        (Some(rows), _) => {
            for (wi, word) in words.iter_mut().enumerate() {
                let base = wi * 64;
                let mut acc = 0u64;
                for (bit, v) in (base..n.min(base + 64)).enumerate() {
                    let plus = rows[v].and_count(&s.bits);
                    if decide(plus, degrees[v] as usize, current[wi] >> bit & 1 == 1) {
                        acc |= 1 << bit;
                    }
                }
                *word = acc;
            }
        }
        (None, Some(lists)) => {
            for (wi, word) in words.iter_mut().enumerate() {
                let base = wi * 64;
                let mut acc = 0u64;
                for (bit, v) in (base..n.min(base + 64)).enumerate() {
                    let plus = lists[v].iter().filter(|&&u| s.bits.get(u as usize)).count();
                    if decide(plus, degrees[v] as usize, current[wi] >> bit & 1 == 1) {
                        acc |= 1 << bit;
                    }
                }
                *word = acc;
            }
        }
        (None, None) => unreachable!("graph has exactly one representation"),
    }
    Ok(())
}

#[inline(always)]
fn decide(plus: usize, degree: usize, current: bool) -> bool {
    let twice = 2 * plus;
    if twice > degree {
        true
    } else if twice < degree {
        false
    } else {
        current
    }
}

/// Whether a trajectory keeps every intermediate state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KeepStates {
    /// Keep them when `n <= 4096`.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub max_rounds: usize,
    pub keep_states: KeepStates,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_rounds: DEFAULT_MAX_ROUNDS,
            keep_states: KeepStates::Auto,
        }
    }
}

/// Record of one run of the dynamics, rounds `0..=last_round()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub magnetizations: Vec<Magnetization>,
    /// Vertices opposing the round-0 majority (`+1` when round 0 is tied).
    pub minority_sizes: Vec<usize>,
    pub majority_sign: i8,
    pub unanimity_round: Option<usize>,
    pub period: Option<Period>,
    /// Every state, when kept.
    pub states: Option<Vec<StateVector>>,
    /// The last (up to) three states, oldest first.
    pub tail: Vec<StateVector>,
}

impl Trajectory {
    pub fn last_round(&self) -> usize {
        self.magnetizations.len() - 1
    }

    pub fn magnetization_values(&self) -> Vec<f64> {
        self.magnetizations
            .iter()
            .map(Magnetization::value)
            .collect()
    }

    /// Maps `round` onto a recorded round, following the detected cycle past
    /// the end of the record.
    fn resolve_round(&self, round: usize) -> Option<usize> {
        let last = self.last_round();
        if round <= last {
            return Some(round);
        }
        match self.period? {
            Period::Fixed => Some(last),
            Period::Two => Some(if (round - last).is_multiple_of(2) {
                last
            } else {
                last - 1
            }),
        }
    }

    pub fn minority_at(&self, round: usize) -> Option<usize> {
        self.resolve_round(round).map(|r| self.minority_sizes[r])
    }

    pub fn magnetization_at(&self, round: usize) -> Option<Magnetization> {
        self.resolve_round(round).map(|r| self.magnetizations[r])
    }
}

/// Runs the dynamics for at most `max_rounds` rounds.
pub fn run_dynamics(
    g: &Graph,
    s0: &StateVector,
    max_rounds: usize,
) -> Result<Trajectory, DynamicsError> {
    run_dynamics_with(
        g,
        s0,
        &RunOptions {
            max_rounds,
            ..RunOptions::default()
        },
    )
}

/// Runs the dynamics until unanimity, a cycle of period 1 or 2, or the round
/// limit. Only the last three states are needed for cycle detection.
pub fn run_dynamics_with(
    g: &Graph,
    s0: &StateVector,
    opts: &RunOptions,
) -> Result<Trajectory, DynamicsError> {
    if s0.n() != g.n() {
        return Err(DynamicsError::SizeMismatch {
            graph: g.n(),
            state: s0.n(),
        });
    }
    let keep = match opts.keep_states {
        KeepStates::Auto => g.n() <= KEEP_STATES_MAX_N,
        KeepStates::Always => true,
        KeepStates::Never => false,
    };
    let majority_sign = if s0.signed_sum() < 0 { -1 } else { 1 };
    let mut traj = Trajectory {
        magnetizations: Vec::with_capacity(opts.max_rounds + 1),
        minority_sizes: Vec::with_capacity(opts.max_rounds + 1),
        majority_sign,
        unanimity_round: None,
        period: None,
        states: keep.then(Vec::new),
        tail: Vec::with_capacity(3),
    };
    let record = |traj: &mut Trajectory, s: &StateVector| {
        traj.magnetizations.push(magnetization(s));
        traj.minority_sizes.push(s.count_spin(-majority_sign));
        if let Some(states) = traj.states.as_mut() {
            states.push(s.clone());
        }
        if traj.tail.len() == 3 {
            traj.tail.remove(0);
        }
        traj.tail.push(s.clone());
    };

    record(&mut traj, s0);
    if s0.unanimous().is_some() {
        traj.unanimity_round = Some(0);
        traj.period = Some(Period::Fixed);
        return Ok(traj);
    }
    let mut current = s0.clone();
    let mut next = StateVector::all(s0.n(), -1);
    for round in 1..=opts.max_rounds {
        majority_step_into(g, &current, &mut next)?;
        record(&mut traj, &next);
        if next.unanimous().is_some() {
            traj.unanimity_round = Some(round);
            traj.period = Some(Period::Fixed);
            break;
        }
        if next == current {
            traj.period = Some(Period::Fixed);
            break;
        }
        if traj.tail.len() == 3 && traj.tail[0] == next {
            traj.period = Some(Period::Two);
            break;
        }
        core::mem::swap(&mut current, &mut next);
    }
    Ok(traj)
}

/// Period read off the last states of a trajectory: 1 if the last two agree
/// (or the last is unanimous), 2 if the last equals the one two rounds back.
pub fn detect_period(t: &Trajectory) -> Option<Period> {
    let tail = &t.tail;
    let last = tail.last()?;
    if last.unanimous().is_some() {
        return Some(Period::Fixed);
    }
    let len = tail.len();
    if len >= 2 && tail[len - 2] == *last {
        Some(Period::Fixed)
    } else if len >= 3 && tail[len - 3] == *last {
        Some(Period::Two)
    } else {
        None
    }
}
