use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{prufer_decode, LabeledTree, PruferCode};
use crate::degseq::TreeDegreeSequence;
use crate::error::{Error, Result};
use crate::numeric::factorial;

/// Default bound on `|T_x|` for exhaustive enumeration.
pub const DEFAULT_TREE_CAP: u64 = 10_000_000;

/// `|T_x| = (n−2)! / Π (x_j − 1)!`.
pub fn count_trees_with_degrees(x: &TreeDegreeSequence) -> BigUint {
    let n = x.n() as u64;
    let mut out = factorial(n - 2);
    for &v in x.as_slice() {
        out /= factorial(v as u64 - 1);
    }
    out
}

/// The sorted multiset code: vertex `j` repeated `x_j − 1` times.
fn base_code(x: &TreeDegreeSequence) -> Vec<u32> {
    x.as_slice().iter().enumerate().flat_map(|(j, &v)| std::iter::repeat_n(j as u32, v as usize - 1)).collect()
}

/// Uniform sample from `T_x`: shuffle the multiset code, then decode.
pub fn sample_tree<R: Rng + ?Sized>(x: &TreeDegreeSequence, rng: &mut R) -> LabeledTree {
    let mut code = base_code(x);
    code.shuffle(rng);
    prufer_decode(&PruferCode::from_vec_unchecked(x.n(), code))
}

/// Lexicographic multiset permutations of a Prüfer code, optionally with a fixed
/// first symbol so the code space can be split across workers.
pub struct CodeEnumerator {
    n: usize,
    current: Option<Vec<u32>>,
    fixed: usize,
    started: bool,
}

impl CodeEnumerator {
    pub fn new(x: &TreeDegreeSequence) -> Self {
        Self { n: x.n(), current: Some(base_code(x)), fixed: 0, started: false }
    }

    /// Only codes whose first entry is `first`; empty if `x_first == 1`.
    pub fn starting_with(x: &TreeDegreeSequence, first: u32) -> Self {
        let mut code = base_code(x);
        let current = code.iter().position(|&b| b == first).map(|pos| {
            code.remove(pos);
            code.insert(0, first);
            code
        });
        Self { n: x.n(), current, fixed: 1, started: false }
    }

    /// Distinct possible first symbols, i.e. vertices with `x_j ≥ 2`.
    pub fn first_symbols(x: &TreeDegreeSequence) -> Vec<u32> {
        x.as_slice().iter().enumerate().filter(|(_, &v)| v >= 2).map(|(j, _)| j as u32).collect()
    }

    fn next_permutation(tail: &mut [u32]) -> bool {
        if tail.len() < 2 {
            return false;
        }
        let mut i = tail.len() - 1;
        while i > 0 && tail[i - 1] >= tail[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = tail.len() - 1;
        while tail[j] <= tail[i - 1] {
            j -= 1;
        }
        tail.swap(i - 1, j);
        tail[i..].reverse();
        true
    }
}

impl Iterator for CodeEnumerator {
    type Item = PruferCode;

    fn next(&mut self) -> Option<PruferCode> {
        if !self.started {
            self.started = true;
        } else {
            let cur = self.current.as_mut()?;
            let fixed = self.fixed.min(cur.len());
            if !Self::next_permutation(&mut cur[fixed..]) {
                self.current = None;
            }
        }
        self.current.as_ref().map(|c| PruferCode::from_vec_unchecked(self.n, c.clone()))
    }
}

/// Streams every tree of `T_x` exactly once, refusing when `|T_x|` exceeds the default cap.
pub fn enumerate_trees(x: &TreeDegreeSequence) -> Result<impl Iterator<Item = LabeledTree>> {
    enumerate_trees_with_cap(x, DEFAULT_TREE_CAP)
}

pub fn enumerate_trees_with_cap(x: &TreeDegreeSequence, cap: u64) -> Result<impl Iterator<Item = LabeledTree>> {
    let count = count_trees_with_degrees(x);
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::CapExceeded(format!("|T_x| = {count} exceeds cap {cap}")));
    }
    Ok(CodeEnumerator::new(x).map(|c| prufer_decode(&c)))
}
