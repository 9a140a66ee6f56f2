//! Random graph samplers and the dual dense/sparse representation.
//!
//! A [`Graph`] is immutable once built. Dense graphs keep one bit row per
//! vertex so that the majority kernel reduces to `popcount(row & state)`;
//! sparse graphs keep sorted neighbour lists.

use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::bits::BitVec;
use crate::rng::{CounterStream, SplitMix64};

/// Configuration-model attempts before giving up.
pub const REGULAR_ATTEMPT_CAP: usize = 1000;

/// Default memory budget for the dense representation: 1 GiB.
pub const DEFAULT_DENSE_BUDGET_BYTES: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("degree {r} with {n} vertices: n*r must be even")]
    OddDegreeSum { n: usize, r: usize },
    #[error("degree {r} must be smaller than the vertex count {n}")]
    DegreeTooLarge { n: usize, r: usize },
    #[error("no simple {r}-regular pairing found on {n} vertices after {attempts} attempts")]
    SamplingFailed { n: usize, r: usize, attempts: usize },
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("asymmetric adjacency between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("degree of vertex {vertex} recorded as {recorded}, actual {actual}")]
    DegreeMismatch {
        vertex: usize,
        recorded: usize,
        actual: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Dense,
    Sparse,
}

/// Chooses between dense rows and adjacency lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepresentationPolicy {
    pub dense_budget_bytes: u64,
}

impl Default for RepresentationPolicy {
    fn default() -> Self {
        RepresentationPolicy {
            dense_budget_bytes: DEFAULT_DENSE_BUDGET_BYTES,
        }
    }
}

impl RepresentationPolicy {
    /// Dense when the `n x n` bit matrix fits the budget and `p >= 1/sqrt(n)`.
    pub fn choose(&self, n: usize, p: f64) -> Representation {
        let bytes = (n as u64).saturating_mul(n as u64) / 8;
        if bytes <= self.dense_budget_bytes && p >= 1.0 / libm::sqrt(n as f64) {
            Representation::Dense
        } else {
            Representation::Sparse
        }
    }
}

#[derive(Debug, Clone)]
enum Adjacency {
    Dense(Vec<BitVec>),
    Sparse(Vec<Vec<u32>>),
}

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adjacency: Adjacency,
    degrees: Vec<u32>,
}

/// Random graph families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, r: usize },
}

impl GraphModel {
    pub fn n(&self) -> usize {
        match *self {
            GraphModel::Gnp { n, .. } | GraphModel::RandomRegular { n, .. } => n,
        }
    }

    /// Expected degree: `n p` for `G(n, p)`, `r` for regular graphs.
    pub fn mean_degree(&self) -> f64 {
        match *self {
            GraphModel::Gnp { n, p } => n as f64 * p,
            GraphModel::RandomRegular { r, .. } => r as f64,
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        match *self {
            GraphModel::Gnp { n, p } => {
                if n == 0 {
                    return Err(GraphError::Empty);
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(GraphError::InvalidProbability(p));
                }
            }
            GraphModel::RandomRegular { n, r } => {
                if n == 0 {
                    return Err(GraphError::Empty);
                }
                if r >= n && r > 0 {
                    return Err(GraphError::DegreeTooLarge { n, r });
                }
                if (n * r) % 2 == 1 {
                    return Err(GraphError::OddDegreeSum { n, r });
                }
            }
        }
        Ok(())
    }

    pub fn sample(&self, seed: u64) -> Result<Graph, GraphError> {
        match *self {
            GraphModel::Gnp { n, p } => sample_gnp(n, p, seed),
            GraphModel::RandomRegular { n, r } => sample_random_regular(n, r, seed),
        }
    }
}

/// Samples `G(n, p)` with the default representation policy.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    sample_gnp_with(n, p, seed, &RepresentationPolicy::default())
}

/// Samples `G(n, p)`. Pair `(u, v)`, `u < v`, is an edge iff draw number
/// `rank(u, v)` of the stream keyed by `seed` maps below `p`, where `rank` is
/// the pair's position in lexicographic order.
pub fn sample_gnp_with(
    n: usize,
    p: f64,
    seed: u64,
    policy: &RepresentationPolicy,
) -> Result<Graph, GraphError> {
    GraphModel::Gnp { n, p }.validate()?;
    // unit_f64(x) < p  <=>  (x >> 11) < ceil(p * 2^53).
    let threshold = libm::ceil(p * (1u64 << 53) as f64) as u64;
    let stream = CounterStream::new(seed);
    let is_edge = |rank: u64| (stream.draw(rank) >> 11) < threshold;
    match policy.choose(n, p) {
        Representation::Dense => {
            let words = n.div_ceil(64);
            let mut rows = vec![BitVec::zeros(n); n];
            if p > 0.0 {
                // Upper triangle row by row, then mirror with 64x64 block transposes.
                let mut rank = 0u64;
                for (u, row) in rows.iter_mut().enumerate() {
                    let w = row.words_mut();
                    for v in (u + 1)..n {
                        if is_edge(rank) {
                            w[v >> 6] |= 1 << (v & 63);
                        }
                        rank += 1;
                    }
                }
                let mut block = [0u64; 64];
                for bi in 0..words {
                    for bj in bi..words {
                        for (r, slot) in block.iter_mut().enumerate() {
                            let u = bi * 64 + r;
                            *slot = if u < n { rows[u].words()[bj] } else { 0 };
                        }
                        transpose64(&mut block);
                        for (c, &bits) in block.iter().enumerate() {
                            let v = bj * 64 + c;
                            if v < n && bits != 0 {
                                rows[v].words_mut()[bi] |= bits;
                            }
                        }
                    }
                }
            }
            Ok(Graph::from_rows_unchecked(n, rows))
        }
        Representation::Sparse => {
            let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
            if p > 0.0 {
                let mut rank = 0u64;
                for u in 0..n {
                    for v in (u + 1)..n {
                        if is_edge(rank) {
                            // Outer loop over u ascending keeps both lists sorted.
                            lists[u].push(v as u32);
                            lists[v].push(u as u32);
                        }
                        rank += 1;
                    }
                }
            }
            Ok(Graph::from_lists_unchecked(n, lists))
        }
    }
}

/// In-place transpose of a 64x64 bit matrix (row `r`, bit `c`).
fn transpose64(m: &mut [u64; 64]) {
    let mut width = 32;
    let mut mask: u64 = 0x0000_0000_FFFF_FFFF;
    while width != 0 {
        let mut k = 0;
        while k < 64 {
            let a = m[k];
            let b = m[k + width];
            let t = ((a >> width) ^ b) & mask;
            m[k] = a ^ (t << width);
            m[k + width] = b ^ t;
            k = (k + width + 1) & !width;
        }
        width >>= 1;
        mask ^= mask << width;
    }
}

/// Samples a uniform simple `r`-regular graph by configuration-model pairing,
/// rejecting whole pairings that contain a loop or a multi-edge.
pub fn sample_random_regular(n: usize, r: usize, seed: u64) -> Result<Graph, GraphError> {
    GraphModel::RandomRegular { n, r }.validate()?;
    let mut rng = SplitMix64::new(seed);
    let mut stubs: Vec<u32> = Vec::with_capacity(n * r);
    let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(r); n];
    for _ in 0..REGULAR_ATTEMPT_CAP {
        stubs.clear();
        for v in 0..n {
            stubs.extend(core::iter::repeat_n(v as u32, r));
        }
        stubs.shuffle(&mut rng);
        adj.iter_mut().for_each(Vec::clear);
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || adj[a as usize].contains(&b) {
                simple = false;
                break;
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        if simple {
            for list in &mut adj {
                list.sort_unstable();
            }
            let g = Graph::from_lists_unchecked(n, adj);
            let p = if n > 1 {
                r as f64 / (n - 1) as f64
            } else {
                0.0
            };
            return Ok(match RepresentationPolicy::default().choose(n, p) {
                Representation::Dense => g.to_dense(),
                Representation::Sparse => g,
            });
        }
    }
    Err(GraphError::SamplingFailed {
        n,
        r,
        attempts: REGULAR_ATTEMPT_CAP,
    })
}

impl Graph {
    fn from_rows_unchecked(n: usize, rows: Vec<BitVec>) -> Graph {
        let degrees = rows.iter().map(|r| r.count_ones() as u32).collect();
        Graph {
            n,
            adjacency: Adjacency::Dense(rows),
            degrees,
        }
    }

    fn from_lists_unchecked(n: usize, lists: Vec<Vec<u32>>) -> Graph {
        let degrees = lists.iter().map(|l| l.len() as u32).collect();
        Graph {
            n,
            adjacency: Adjacency::Sparse(lists),
            degrees,
        }
    }

    /// Builds a graph from an undirected edge list, rejecting loops,
    /// duplicates and out-of-range endpoints.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        repr: Representation,
    ) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut rows = vec![BitVec::zeros(n); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if rows[u].get(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            rows[u].set(v);
            rows[v].set(u);
        }
        let g = Graph::from_rows_unchecked(n, rows);
        Ok(match repr {
            Representation::Dense => g,
            Representation::Sparse => g.to_sparse(),
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_rows_unchecked(n, vec![BitVec::zeros(n); n])
    }

    pub fn complete(n: usize) -> Graph {
        let rows = (0..n)
            .map(|v| {
                let mut r = BitVec::ones(n);
                r.unset(v);
                r
            })
            .collect();
        Graph::from_rows_unchecked(n, rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn representation(&self) -> Representation {
        match self.adjacency {
            Adjacency::Dense(_) => Representation::Dense,
            Adjacency::Sparse(_) => Representation::Sparse,
        }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0) as usize
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).sum::<usize>() / 2
    }

    /// Dense rows, if this graph is stored densely.
    pub fn dense_rows(&self) -> Option<&[BitVec]> {
        match &self.adjacency {
            Adjacency::Dense(rows) => Some(rows),
            Adjacency::Sparse(_) => None,
        }
    }

    /// Sorted neighbour lists, if this graph is stored sparsely.
    pub fn sparse_lists(&self) -> Option<&[Vec<u32>]> {
        match &self.adjacency {
            Adjacency::Dense(_) => None,
            Adjacency::Sparse(lists) => Some(lists),
        }
    }

    /// Neighbour indicator of `v`; built on demand for sparse graphs.
    pub fn neighbour_row(&self, v: usize) -> Result<Cow<'_, BitVec>, GraphError> {
        self.check_vertex(v)?;
        Ok(match &self.adjacency {
            Adjacency::Dense(rows) => Cow::Borrowed(&rows[v]),
            Adjacency::Sparse(lists) => {
                let mut row = BitVec::zeros(self.n);
                for &u in &lists[v] {
                    row.set(u as usize);
                }
                Cow::Owned(row)
            }
        })
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbours(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        Ok(match &self.adjacency {
            Adjacency::Dense(rows) => rows[v].iter_ones().collect(),
            Adjacency::Sparse(lists) => lists[v].iter().map(|&u| u as usize).collect(),
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.adjacency {
            Adjacency::Dense(rows) => rows[u].get(v),
            Adjacency::Sparse(lists) => lists[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            match &self.adjacency {
                Adjacency::Dense(rows) => {
                    out.extend(rows[u].iter_ones().filter(|&v| v > u).map(|v| (u, v)))
                }
                Adjacency::Sparse(lists) => out.extend(
                    lists[u]
                        .iter()
                        .map(|&v| v as usize)
                        .filter(|&v| v > u)
                        .map(|v| (u, v)),
                ),
            }
        }
        out
    }

    pub fn to_dense(&self) -> Graph {
        match &self.adjacency {
            Adjacency::Dense(_) => self.clone(),
            Adjacency::Sparse(lists) => {
                let rows = lists
                    .iter()
                    .map(|l| {
                        let mut row = BitVec::zeros(self.n);
                        l.iter().for_each(|&u| row.set(u as usize));
                        row
                    })
                    .collect();
                Graph::from_rows_unchecked(self.n, rows)
            }
        }
    }

    pub fn to_sparse(&self) -> Graph {
        match &self.adjacency {
            Adjacency::Sparse(_) => self.clone(),
            Adjacency::Dense(rows) => {
                let lists = rows
                    .iter()
                    .map(|r| r.iter_ones().map(|u| u as u32).collect())
                    .collect();
                Graph::from_lists_unchecked(self.n, lists)
            }
        }
    }

    /// Checks symmetry, absence of self-loops and degree bookkeeping.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        for v in 0..self.n {
            let nbrs = self.neighbours(v)?;
            if nbrs.len() != self.degree(v) {
                return Err(GraphError::DegreeMismatch {
                    vertex: v,
                    recorded: self.degree(v),
                    actual: nbrs.len(),
                });
            }
            for &u in &nbrs {
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if u >= self.n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: u,
                        n: self.n,
                    });
                }
                if !self.has_edge(u, v) {
                    return Err(GraphError::Asymmetric(v, u));
                }
            }
            if let Adjacency::Sparse(lists) = &self.adjacency {
                if lists[v].windows(2).any(|w| w[0] >= w[1]) {
                    return Err(GraphError::DuplicateEdge(v, v));
                }
            }
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }
}

/// Equal when both graphs have the same order and edge set, regardless of
/// representation.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.degrees == other.degrees && self.edges() == other.edges()
    }
}

impl Eq for Graph {}
