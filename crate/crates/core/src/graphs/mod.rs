//! Graphs with given degrees: configuration-model sampling, exhaustive
//! enumeration and matrix-tree spanning-tree counts.

mod enumerate;
mod laplacian;
mod sample;

pub use enumerate::{enumerate_graphs, enumerate_graphs_with_cap, GraphEnumerationCap, GraphEnumerator};
pub use laplacian::{
    bareiss_determinant, modular_determinant, spanning_tree_count_with_threshold, SpanningTreeCount,
    DEFAULT_EXACT_BAREISS_MAX_N,
};
pub use sample::{configuration_sample, sample_simple_graph, sample_simple_graph_with_limit, DEFAULT_RETRY_LIMIT};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::degseq::{DegreeSequence, TreeDegreeSequence};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::trees::{enumerate_trees, normalize_edge, LabeledTree};

pub fn spanning_tree_count(g: &SimpleGraph) -> SpanningTreeCount {
    g.spanning_tree_count()
}

pub fn spanning_tree_count_log(g: &SimpleGraph) -> Result<f64> {
    g.spanning_tree_count_log()
}

pub fn contains_subgraph(g: &SimpleGraph, tree: &LabeledTree) -> bool {
    g.contains_subgraph(tree)
}

pub fn spanning_trees_by_degree(g: &SimpleGraph) -> Result<BTreeMap<TreeDegreeSequence, BigUint>> {
    g.spanning_trees_by_degree()
}

/// Largest `n` accepted by [`SimpleGraph::spanning_trees_by_degree`].
pub const DEFAULT_BY_DEGREE_MAX_N: usize = 10;

/// Multigraph on `0..n`; loops are `(v, v)` and add 2 to the degree of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| normalize_edge(u, v)).collect();
        if let Some(&(_, v)) = edges.iter().find(|&&(_, v)| v as usize >= n) {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
        }
        edges.sort_unstable();
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn is_simple(&self) -> bool {
        self.loop_count() == 0 && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    pub fn to_simple(&self) -> Option<SimpleGraph> {
        self.is_simple().then(|| SimpleGraph { n: self.n, edges: self.edges.clone() })
    }
}

/// Simple graph on `0..n`, stored as a sorted edge list with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| normalize_edge(u, v)).collect();
        for &(u, v) in &edges {
            if v as usize >= n {
                return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("repeated edge".into()));
        }
        Ok(Self { n, edges })
    }

    pub fn from_one_based(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if edges.iter().any(|&(u, v)| u == 0 || v == 0) {
            return Err(Error::InvalidGraph("one-based labels start at 1".into()));
        }
        Self::new(n, edges.iter().map(|&(u, v)| (u - 1, v - 1)))
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        Self { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        Self { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::new(n, (0..n as u32).map(|v| (v, (v + 1) % n as u32))).expect("cycle is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&normalize_edge(u, v)).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut dsu = DisjointSets::new(self.n);
        let mut parts = self.n;
        for &(u, v) in &self.edges {
            if dsu.union(u as usize, v as usize) {
                parts -= 1;
            }
        }
        parts == 1
    }

    /// True iff every edge of `tree` is an edge of `self`.
    pub fn contains_subgraph(&self, tree: &LabeledTree) -> bool {
        tree.n() == self.n && tree.edges().iter().all(|&(u, v)| self.has_edge(u, v))
    }

    /// Exact `τ(G)` via the reduced Laplacian.
    pub fn spanning_tree_count(&self) -> SpanningTreeCount {
        laplacian::spanning_tree_count(self)
    }

    /// `ln τ(G)` by pivoted floating-point elimination.
    pub fn spanning_tree_count_log(&self) -> Result<f64> {
        laplacian::spanning_tree_count_log(self)
    }

    /// Spanning trees of `G` grouped by their degree sequence (zero counts omitted).
    pub fn spanning_trees_by_degree(&self) -> Result<BTreeMap<TreeDegreeSequence, BigUint>> {
        self.spanning_trees_by_degree_with_cap(DEFAULT_BY_DEGREE_MAX_N)
    }

    pub fn spanning_trees_by_degree_with_cap(&self, max_n: usize) -> Result<BTreeMap<TreeDegreeSequence, BigUint>> {
        if self.n > max_n {
            return Err(Error::CapExceeded(format!("by-degree enumeration limited to n <= {max_n}")));
        }
        let mut out = BTreeMap::new();
        if self.n < 2 || !self.is_connected() {
            return Ok(out);
        }
        let d = DegreeSequence::new(self.degrees())?;
        for x in d.enumerate_suitable_with_cap(max_n)? {
            let mut count = BigUint::zero();
            for t in enumerate_trees(&x)? {
                if self.contains_subgraph(&t) {
                    count += 1u32;
                }
            }
            if !count.is_zero() {
                out.insert(x, count);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SimpleGraph {
    /// Edge-list text format: `n`, then `u v` per line, one-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}
