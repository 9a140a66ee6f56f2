//! Exact conditional distribution of first-round states around a vertex.
//!
//! Fix the initial states of all vertices and the neighbourhood `Γ` of a
//! distinguished vertex `v`; every other pair is an independent edge with
//! probability `p`. For `u ∈ Γ` let `I_u = 1(S_1(u) = +1)` and
//! `X_2(v) = Σ_u I_u`. Since `I_u` only depends on pairs touching `u`, only
//! pairs with an endpoint in `Γ` are enumerated; the rest integrate out.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{AnalysisError, Compensated};

/// Largest tiny-instance order.
pub const TINY_MAX_N: usize = 12;

/// Largest number of undetermined pairs accepted.
pub const PAIR_CAP: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct TinyInstance {
    pub n: usize,
    /// Initial states, `+1` or `-1`.
    pub states: Vec<i8>,
    pub v: usize,
    /// Neighbourhood of `v`, ascending.
    pub gamma: Vec<usize>,
    pub p: f64,
}

impl TinyInstance {
    pub fn new(
        states: Vec<i8>,
        v: usize,
        mut gamma: Vec<usize>,
        p: f64,
    ) -> Result<Self, AnalysisError> {
        let n = states.len();
        let bad = |msg: alloc::string::String| Err(AnalysisError::InvalidInstance(msg));
        if n == 0 || n > TINY_MAX_N {
            return bad(format!("order {n} outside 1..={TINY_MAX_N}"));
        }
        if let Some(s) = states.iter().find(|&&s| s != 1 && s != -1) {
            return bad(format!("state {s} is not +1 or -1"));
        }
        if v >= n {
            return bad(format!("distinguished vertex {v} out of range"));
        }
        gamma.sort_unstable();
        gamma.dedup();
        if let Some(&u) = gamma.iter().find(|&&u| u >= n || u == v) {
            return bad(format!("neighbour {u} is out of range or equals v"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(AnalysisError::InvalidProbability(p));
        }
        Ok(TinyInstance {
            n,
            states,
            v,
            gamma,
            p,
        })
    }

    /// Pairs not incident to `v`.
    pub fn undetermined_pairs(&self) -> usize {
        let m = self.n - 1;
        m * m.saturating_sub(1) / 2
    }

    pub fn mean_degree(&self) -> f64 {
        self.n as f64 * self.p
    }
}

/// Statistics of one pair `u, u' ∈ Γ`, conditioned on the pair `uu'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConditioning {
    pub u: usize,
    pub u_prime: usize,
    /// `P(I_u = 1 | uu' ∈ E)`.
    pub a_u: f64,
    /// `P(I_u = 1 | uu' ∉ E)`.
    pub b_u: f64,
    pub a_u_prime: f64,
    pub b_u_prime: f64,
    /// `Cov(I_u, I_u')` from the joint law.
    pub covariance: f64,
}

impl PairConditioning {
    /// `p(1-p)(A_u - B_u)(A_u' - B_u')`.
    pub fn factorised(&self, p: f64) -> f64 {
        p * (1.0 - p) * (self.a_u - self.b_u) * (self.a_u_prime - self.b_u_prime)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    pub gamma: Vec<usize>,
    /// Law of `(I_u)_{u∈Γ}`; bit `j` of the index is `I_{gamma[j]}`.
    pub joint: Vec<f64>,
    /// Law of `X_2(v)` on `0..=|Γ|`.
    pub x2_pmf: Vec<f64>,
    /// `P(I_u = 1)`, in `gamma` order.
    pub marginals: Vec<f64>,
    /// `P(I_u = 1, I_u' = 1)`; diagonal holds the marginals.
    pub pair_joint: Vec<Vec<f64>>,
    pub mean_x2: f64,
    pub var_x2: f64,
    /// One entry per unordered pair of `Γ`, lexicographic in `gamma` order.
    pub pairs: Vec<PairConditioning>,
}

impl ConditionalDistribution {
    pub fn covariance(&self, j: usize, k: usize) -> f64 {
        self.pair_joint[j][k] - self.marginals[j] * self.marginals[k]
    }

    pub fn total_mass(&self) -> f64 {
        super::compensated_sum(self.joint.iter().copied())
    }
}

/// Edge-subset weights `p^e (1-p)^(m-e)` indexed by `e`.
fn weight_table(p: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|e| {
            if p == 0.0 || p == 1.0 {
                libm::pow(p, e as f64) * libm::pow(1.0 - p, (m - e) as f64)
            } else {
                libm::exp(e as f64 * libm::log(p) + (m - e) as f64 * libm::log1p(-p))
            }
        })
        .collect()
}

pub fn enumerate_conditional(
    inst: &TinyInstance,
) -> Result<ConditionalDistribution, AnalysisError> {
    let pairs_total = inst.undetermined_pairs();
    if pairs_total > PAIR_CAP {
        return Err(AnalysisError::InstanceTooLarge {
            pairs: pairs_total,
            cap: PAIR_CAP,
        });
    }
    let n = inst.n;
    let g = inst.gamma.len();
    let mut slot = vec![usize::MAX; n];
    for (j, &u) in inst.gamma.iter().enumerate() {
        slot[u] = j;
    }

    // Pairs with at least one endpoint in Γ, none equal to v.
    let mut relevant: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if a != inst.v && b != inst.v && (slot[a] != usize::MAX || slot[b] != usize::MAX) {
                relevant.push((a, b));
            }
        }
    }
    let m = relevant.len();
    // incident[j]: (pair index, other endpoint) for gamma[j].
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g];
    let mut pair_index = vec![vec![usize::MAX; g]; g];
    for (idx, &(a, b)) in relevant.iter().enumerate() {
        if slot[a] != usize::MAX {
            incident[slot[a]].push((idx, b));
        }
        if slot[b] != usize::MAX {
            incident[slot[b]].push((idx, a));
        }
        if slot[a] != usize::MAX && slot[b] != usize::MAX {
            pair_index[slot[a]][slot[b]] = idx;
            pair_index[slot[b]][slot[a]] = idx;
        }
    }

    let weights = weight_table(inst.p, m);
    let weights_rest = weight_table(inst.p, m.saturating_sub(1));
    let v_plus = inst.states[inst.v] > 0;

    let mut joint = vec![Compensated::default(); 1 << g];
    // cond[j][k][present] accumulates (weight, weight * I_{gamma[j]}).
    let mut cond = vec![vec![[(Compensated::default(), Compensated::default()); 2]; g]; g];
    let mut indicators = vec![false; g];

    for mask in 0u64..(1u64 << m) {
        let edges = mask.count_ones() as usize;
        let w = weights[edges];
        let mut pattern = 0usize;
        for j in 0..g {
            let u = inst.gamma[j];
            let mut degree = 1usize;
            let mut plus = v_plus as usize;
            for &(idx, other) in &incident[j] {
                if mask >> idx & 1 == 1 {
                    degree += 1;
                    plus += (inst.states[other] > 0) as usize;
                }
            }
            let on = match (2 * plus).cmp(&degree) {
                core::cmp::Ordering::Greater => true,
                core::cmp::Ordering::Less => false,
                core::cmp::Ordering::Equal => inst.states[u] > 0,
            };
            indicators[j] = on;
            pattern |= (on as usize) << j;
        }
        joint[pattern].add(w);
        for j in 0..g {
            for k in 0..g {
                if j == k {
                    continue;
                }
                let idx = pair_index[j][k];
                let present = (mask >> idx & 1) as usize;
                let w_rest = weights_rest[edges - present];
                let cell = &mut cond[j][k][present];
                cell.0.add(w_rest);
                if indicators[j] {
                    cell.1.add(w_rest);
                }
            }
        }
    }

    let joint: Vec<f64> = joint.iter().map(Compensated::value).collect();
    let mut x2 = vec![Compensated::default(); g + 1];
    let mut marg = vec![Compensated::default(); g];
    let mut pj = vec![vec![Compensated::default(); g]; g];
    for (pattern, &w) in joint.iter().enumerate() {
        x2[pattern.count_ones() as usize].add(w);
        for j in 0..g {
            if pattern >> j & 1 == 1 {
                marg[j].add(w);
                for (k, cell) in pj[j].iter_mut().enumerate() {
                    if pattern >> k & 1 == 1 {
                        cell.add(w);
                    }
                }
            }
        }
    }
    let x2_pmf: Vec<f64> = x2.iter().map(Compensated::value).collect();
    let marginals: Vec<f64> = marg.iter().map(Compensated::value).collect();
    let pair_joint: Vec<Vec<f64>> = pj
        .iter()
        .map(|row| row.iter().map(Compensated::value).collect())
        .collect();
    let mean_x2 = super::compensated_sum(x2_pmf.iter().enumerate().map(|(x, &q)| x as f64 * q));
    let var_x2 = super::compensated_sum(
        x2_pmf
            .iter()
            .enumerate()
            .map(|(x, &q)| (x as f64 - mean_x2) * (x as f64 - mean_x2) * q),
    );

    let ratio = |cell: &(Compensated, Compensated)| cell.1.value() / cell.0.value();
    let mut pairs = Vec::new();
    for j in 0..g {
        for k in (j + 1)..g {
            pairs.push(PairConditioning {
                u: inst.gamma[j],
                u_prime: inst.gamma[k],
                a_u: ratio(&cond[j][k][1]),
                b_u: ratio(&cond[j][k][0]),
                a_u_prime: ratio(&cond[k][j][1]),
                b_u_prime: ratio(&cond[k][j][0]),
                covariance: pair_joint[j][k] - marginals[j] * marginals[k],
            });
        }
    }

    Ok(ConditionalDistribution {
        gamma: inst.gamma.clone(),
        joint,
        x2_pmf,
        marginals,
        pair_joint,
        mean_x2,
        var_x2,
        pairs,
    })
}
