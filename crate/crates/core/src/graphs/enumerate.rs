use super::SimpleGraph;
use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};

/// Size limits for [`enumerate_graphs_with_cap`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEnumerationCap {
    pub max_n: usize,
    pub max_m: u64,
}

impl Default for GraphEnumerationCap {
    fn default() -> Self {
        Self { max_n: 10, max_m: 15 }
    }
}

/// Streams every simple graph with degree sequence `d` exactly once, in
/// lexicographic order of edge-inclusion decisions.
pub fn enumerate_graphs(d: &DegreeSequence) -> Result<GraphEnumerator> {
    enumerate_graphs_with_cap(d, GraphEnumerationCap::default())
}

pub fn enumerate_graphs_with_cap(d: &DegreeSequence, cap: GraphEnumerationCap) -> Result<GraphEnumerator> {
    if d.n() > cap.max_n || d.edge_count() > cap.max_m {
        return Err(Error::CapExceeded(format!(
            "graph enumeration limited to n <= {} and m <= {} (got n = {}, m = {})",
            cap.max_n,
            cap.max_m,
            d.n(),
            d.edge_count()
        )));
    }
    Ok(GraphEnumerator::new(d))
}

/// Depth-first search over the vertex pairs `(i, j)`, `i < j`, in lexicographic
/// order. A pair may be excluded only while vertex `i` can still reach its
/// degree from the pairs after it.
pub struct GraphEnumerator {
    n: usize,
    pairs: Vec<(u32, u32)>,
    residual: Vec<u32>,
    included: Vec<bool>,
    exhausted: bool,
}

impl GraphEnumerator {
    fn new(d: &DegreeSequence) -> Self {
        let n = d.n();
        let pairs = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        Self { n, pairs, residual: d.degrees().to_vec(), included: Vec::new(), exhausted: false }
    }

    /// Vertices after `j` that can still take an edge from `i`.
    fn open_after(&self, j: u32) -> u32 {
        self.residual[j as usize + 1..].iter().filter(|&&r| r > 0).count() as u32
    }

    fn can_include(&self, depth: usize) -> bool {
        let (i, j) = self.pairs[depth];
        let (ri, rj) = (self.residual[i as usize], self.residual[j as usize]);
        ri > 0 && rj > 0 && ri - 1 <= self.open_after(j)
    }

    fn can_exclude(&self, depth: usize) -> bool {
        let (i, j) = self.pairs[depth];
        self.residual[i as usize] <= self.open_after(j)
    }

    fn apply(&mut self, depth: usize, delta: i32) {
        let (i, j) = self.pairs[depth];
        for v in [i, j] {
            self.residual[v as usize] = (self.residual[v as usize] as i32 + delta) as u32;
        }
    }

    /// Pops to the deepest include that can be flipped to an exclude.
    fn backtrack(&mut self) {
        while let Some(inc) = self.included.pop() {
            let depth = self.included.len();
            if inc {
                self.apply(depth, 1);
                if self.can_exclude(depth) {
                    self.included.push(false);
                    return;
                }
            }
        }
        self.exhausted = true;
    }

    fn current_graph(&self) -> SimpleGraph {
        let edges = self.pairs.iter().zip(&self.included).filter(|(_, &inc)| inc).map(|(&p, _)| p).collect();
        SimpleGraph::from_sorted_unchecked(self.n, edges)
    }
}

impl Iterator for GraphEnumerator {
    type Item = SimpleGraph;

    fn next(&mut self) -> Option<SimpleGraph> {
        while !self.exhausted {
            let depth = self.included.len();
            if depth == self.pairs.len() {
                let found = self.residual.iter().all(|&r| r == 0).then(|| self.current_graph());
                self.backtrack();
                if found.is_some() {
                    return found;
                }
            } else if self.can_include(depth) {
                self.apply(depth, -1);
                self.included.push(true);
            } else if self.can_exclude(depth) {
                self.included.push(false);
            } else {
                self.backtrack();
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ds(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    /// All subsets of the pair set with matching degrees.
    fn brute(d: &[u32]) -> BTreeSet<SimpleGraph> {
        let n = d.len();
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let g = SimpleGraph::new(n, (0..pairs.len()).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b])).unwrap();
            if g.degrees() == d {
                out.insert(g);
            }
        }
        out
    }

    #[test]
    fn small_examples() {
        let k4: Vec<_> = enumerate_graphs(&ds(&[3, 3, 3, 3])).unwrap().collect();
        assert_eq!(k4, vec![SimpleGraph::complete(4)]);
        assert_eq!(enumerate_graphs(&ds(&[2, 2, 2, 2])).unwrap().count(), 3);
        assert_eq!(enumerate_graphs(&ds(&[1, 1, 1, 1])).unwrap().count(), 3);
        assert_eq!(enumerate_graphs(&ds(&[2, 2, 2])).unwrap().count(), 1);
        assert_eq!(enumerate_graphs(&ds(&[3, 1])).unwrap().count(), 0);
    }

    #[test]
    fn agrees_with_subset_scan() {
        for d in [
            vec![2u32, 2, 2, 2, 2],
            vec![3, 2, 2, 2, 1],
            vec![3, 3, 2, 2, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
            vec![4, 2, 2, 2, 2, 2],
            vec![3, 3, 3, 3, 3, 3],
        ] {
            let got: Vec<_> = enumerate_graphs(&ds(&d)).unwrap().collect();
            let set: BTreeSet<_> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates for {d:?}");
            assert_eq!(set, brute(&d), "{d:?}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(enumerate_graphs(&DegreeSequence::regular(12, 2).unwrap()).is_err());
        assert!(enumerate_graphs(&DegreeSequence::regular(10, 4).unwrap()).is_err());
        let wide = GraphEnumerationCap { max_n: 12, max_m: 12 };
        assert!(enumerate_graphs_with_cap(&DegreeSequence::regular(12, 2).unwrap(), wide).is_ok());
    }
}
