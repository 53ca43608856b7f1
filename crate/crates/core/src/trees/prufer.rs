use std::fmt;

use super::LabeledTree;
use crate::error::{Error, Result};

/// Prüfer code `b_1..b_{n−2}` of a tree on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PruferCode {
    n: usize,
    code: Vec<u32>,
}

impl PruferCode {
    pub fn new(n: usize, code: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCode("n must be at least 2".into()));
        }
        if code.len() != n - 2 {
            return Err(Error::InvalidCode(format!("length {} != n-2 = {}", code.len(), n - 2)));
        }
        if let Some(&b) = code.iter().find(|&&b| b as usize >= n) {
            return Err(Error::InvalidCode(format!("entry {b} out of range for n = {n}")));
        }
        Ok(Self { n, code })
    }

    /// Code written with `1..=n` labels; `n` is inferred as `len + 2`.
    pub fn from_one_based(code: &[u32]) -> Result<Self> {
        if code.contains(&0) {
            return Err(Error::InvalidCode("one-based entries start at 1".into()));
        }
        Self::new(code.len() + 2, code.iter().map(|&b| b - 1).collect())
    }

    pub(crate) fn from_vec_unchecked(n: usize, code: Vec<u32>) -> Self {
        Self { n, code }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.code
    }

    pub fn to_one_based(&self) -> Vec<u32> {
        self.code.iter().map(|&b| b + 1).collect()
    }

    /// Degree sequence of the encoded tree: vertex `j` occurs `x_j − 1` times.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![1u32; self.n];
        for &b in &self.code {
            deg[b as usize] += 1;
        }
        deg
    }
}

impl fmt::Display for PruferCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.code.iter().map(|b| (b + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Prüfer process: repeatedly record the neighbour of the lowest-labelled leaf and
/// delete that leaf, until a single edge remains.
pub fn prufer_encode(tree: &LabeledTree) -> PruferCode {
    let n = tree.n();
    if n == 2 {
        return PruferCode::from_vec_unchecked(2, Vec::new());
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in tree.edges() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    // Root at n−1: it is never the lowest leaf, so each deleted leaf's parent is
    // its unique remaining neighbour.
    let root = n - 1;
    let mut parent = vec![u32::MAX; n];
    let mut stack = vec![root];
    parent[root] = root as u32;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if parent[w as usize] == u32::MAX {
                parent[w as usize] = v as u32;
                stack.push(w as usize);
            }
        }
    }
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut code = Vec::with_capacity(n - 2);
    let mut ptr = degree.iter().position(|&d| d == 1).expect("trees have leaves");
    let mut leaf = ptr;
    for _ in 0..n - 2 {
        let next = parent[leaf] as usize;
        code.push(next as u32);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    PruferCode::from_vec_unchecked(n, code)
}

/// Inverse of [`prufer_encode`].
pub fn prufer_decode(code: &PruferCode) -> LabeledTree {
    let n = code.n();
    let mut degree = code.degrees();
    let mut edges = Vec::with_capacity(n - 1);
    if n == 2 {
        return LabeledTree::from_edges_unchecked(2, vec![(0, 1)]);
    }
    let mut ptr = degree.iter().position(|&d| d == 1).expect("codes leave at least two leaves");
    let mut leaf = ptr;
    for &b in code.as_slice() {
        let b = b as usize;
        edges.push((leaf as u32, b as u32));
        degree[b] -= 1;
        if degree[b] == 1 && b < ptr {
            leaf = b;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, (n - 1) as u32));
    LabeledTree::from_edges_unchecked(n, edges)
}
