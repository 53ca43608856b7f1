//! Labelled trees with prescribed degrees.
//!
//! Vertices are `0..n` throughout the Rust API. The text formats and the CLI
//! use `1..=n`; see [`LabeledTree::from_one_based`] and [`crate::io`].

mod enumerate;
mod functional;
mod prufer;

pub use enumerate::{
    count_trees_with_degrees, enumerate_trees, enumerate_trees_with_cap, sample_tree, CodeEnumerator, DEFAULT_TREE_CAP,
};
pub use functional::{
    edge_adjacency_fraction, edge_functional, forest_containment_probability, mean_edge_functional, phi_seminorm,
};
pub use prufer::{prufer_decode, prufer_encode, PruferCode};

use std::fmt;

use crate::degseq::TreeDegreeSequence;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

pub(crate) fn normalize_edge(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Spanning tree on `0..n`, stored as a sorted list of `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl LabeledTree {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTree("a tree needs at least 2 vertices".into()));
        }
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| normalize_edge(u, v)).collect();
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges on {n} vertices", edges.len())));
        }
        let mut dsu = DisjointSets::new(n);
        for &(u, v) in &edges {
            if v as usize >= n {
                return Err(Error::InvalidTree(format!("vertex {v} out of range")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("loop at {u}")));
            }
            if !dsu.union(u as usize, v as usize) {
                return Err(Error::InvalidTree("edges contain a cycle".into()));
            }
        }
        edges.sort_unstable();
        Ok(Self { n, edges })
    }

    /// Builds a tree from `1..=n` labelled edges.
    pub fn from_one_based(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if edges.iter().any(|&(u, v)| u == 0 || v == 0) {
            return Err(Error::InvalidTree("one-based labels start at 1".into()));
        }
        Self::new(n, edges.iter().map(|&(u, v)| (u - 1, v - 1)))
    }

    /// Trusted constructor for edges already known to form a tree.
    pub(crate) fn from_edges_unchecked(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        for e in edges.iter_mut() {
            *e = normalize_edge(e.0, e.1);
        }
        edges.sort_unstable();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn one_based_edges(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn degree_sequence(&self) -> TreeDegreeSequence {
        TreeDegreeSequence::new(self.degrees()).expect("a tree's degrees form a tree degree sequence")
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&normalize_edge(u, v)).is_ok()
    }
}

impl fmt::Display for LabeledTree {
    /// The edge-list text format: `n`, then one `u v` per line, one-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

/// Acyclic edge set on `0..n`; every vertex belongs to exactly one component,
/// isolated vertices forming trivial ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    edges: Vec<(u32, u32)>,
    component: Vec<usize>,
    components: usize,
}

impl Forest {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| normalize_edge(u, v)).collect();
        let mut dsu = DisjointSets::new(n);
        for &(u, v) in &edges {
            if v as usize >= n {
                return Err(Error::InvalidTree(format!("vertex {v} out of range")));
            }
            if u == v || !dsu.union(u as usize, v as usize) {
                return Err(Error::InvalidTree("forest edges contain a cycle".into()));
            }
        }
        edges.sort_unstable();
        let (component, components) = dsu.labels();
        Ok(Self { n, edges, component, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Component index of every vertex.
    pub fn component_of(&self) -> &[usize] {
        &self.component
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_validation() {
        assert!(LabeledTree::new(3, [(0, 1), (1, 2)]).is_ok());
        assert!(LabeledTree::new(3, [(0, 1)]).is_err());
        assert!(LabeledTree::new(4, [(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(LabeledTree::new(3, [(0, 1), (1, 3)]).is_err());
        assert!(LabeledTree::new(1, []).is_err());
        assert!(LabeledTree::from_one_based(2, &[(0, 1)]).is_err());
    }

    #[test]
    fn tree_equality_is_edge_set_equality() {
        let a = LabeledTree::new(3, [(2, 1), (0, 1)]).unwrap();
        let b = LabeledTree::new(3, [(1, 0), (1, 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "3\n1 2\n2 3\n");
    }

    #[test]
    fn forest_components() {
        let f = Forest::new(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(f.component_count(), 3);
        assert_eq!(f.component_of(), &[0, 0, 1, 2, 2]);
        assert!(Forest::new(3, [(0, 1), (1, 2), (0, 2)]).is_err());
    }
}
