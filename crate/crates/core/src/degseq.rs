//! Degree sequences, their statistics, suitable tree-degree sequences and the
//! hypergeometric vector of suitable sequences.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{falling, rational_int, to_f64, ExactRational};

/// Default largest `n` for which suitable sequences are enumerated.
pub const DEFAULT_SUITABLE_CAP: usize = 12;

/// Degree sequence `d_1..d_n` of positive integers with even sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    sum: u64,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegrees("empty sequence".into()));
        }
        if let Some(j) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDegrees(format!("vertex {} has degree 0", j + 1)));
        }
        let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::InvalidDegrees(format!("degree sum {sum} is odd")));
        }
        Ok(Self { degrees, sum })
    }

    /// `d`-regular sequence on `n` vertices.
    pub fn regular(n: usize, d: u32) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_sum(&self) -> u64 {
        self.sum
    }

    /// Number of edges `m` of any graph realising the sequence.
    pub fn edge_count(&self) -> u64 {
        self.sum / 2
    }

    pub fn max_degree(&self) -> u32 {
        *self.degrees.iter().max().expect("non-empty")
    }

    /// Arithmetic mean `d̄`.
    pub fn mean(&self) -> BigRational {
        BigRational::new(BigInt::from(self.sum), BigInt::from(self.n()))
    }

    pub fn mean_f64(&self) -> f64 {
        self.sum as f64 / self.n() as f64
    }

    /// `R = (1/n) Σ (d_j − d̄)²`.
    pub fn variance(&self) -> BigRational {
        let n = BigInt::from(self.n());
        let sq: BigInt = self.degrees.iter().map(|&d| BigInt::from(d as u64 * d as u64)).sum();
        let s = BigInt::from(self.sum);
        // (n Σd² − (Σd)²) / n²
        BigRational::new(&n * sq - &s * &s, &n * &n)
    }

    /// `ln d̂ = (1/n) Σ ln d_j`.
    pub fn log_geometric_mean(&self) -> f64 {
        self.sum_ln_degrees() / self.n() as f64
    }

    /// `n ln d̂ = Σ ln d_j`.
    pub fn sum_ln_degrees(&self) -> f64 {
        let mut acc = crate::numeric::KahanSum::default();
        for &d in &self.degrees {
            acc.add((d as f64).ln());
        }
        acc.value()
    }

    /// `(d̄ − 2) n = 2m − 2n`, as a signed integer.
    pub fn excess(&self) -> i64 {
        self.sum as i64 - 2 * self.n() as i64
    }

    /// `(d̄ − 1) n = 2m − n`: size of the ground set partitioned into blocks of size `d_j − 1`.
    pub fn ground_set_size(&self) -> u64 {
        self.sum - self.n() as u64
    }

    pub fn stats(&self) -> DegreeStats {
        DegreeStats {
            d_bar: self.mean(),
            d_hat_log: self.log_geometric_mean(),
            r: self.variance(),
            d_max: self.max_degree(),
            m: self.edge_count(),
            n: self.n(),
        }
    }

    /// Erdős–Gallai test.
    pub fn is_graphical(&self) -> bool {
        let n = self.n() as u64;
        let mut d: Vec<u64> = self.degrees.iter().map(|&x| x as u64).collect();
        if d.iter().any(|&x| x >= n) {
            return false;
        }
        d.sort_unstable_by(|a, b| b.cmp(a));
        let mut left = 0u64;
        for k in 1..=d.len() {
            left += d[k - 1];
            let k64 = k as u64;
            let right: u64 = k64 * (k64 - 1) + d[k..].iter().map(|&x| x.min(k64)).sum::<u64>();
            if left > right {
                return false;
            }
        }
        true
    }

    /// `d_max⁴ ≤ (d̄ − 2) n`, evaluated exactly.
    pub fn excess_condition_holds(&self) -> bool {
        let dm = self.max_degree() as i128;
        dm.pow(4) <= self.excess() as i128
    }

    /// The three branches of the error quantity `η`.
    pub fn eta(&self) -> Result<Eta> {
        let excess = self.excess();
        if excess <= 0 {
            return Err(Error::Domain(format!("mean degree {} must exceed 2", self.mean())));
        }
        let n = self.n() as f64;
        let dm = self.max_degree() as f64;
        let dm2 = excess as f64 / n;
        Ok(Eta {
            quartic: dm.powi(4) / (dm2 * dm2 * n),
            logarithmic: dm.powi(3) * n.ln() / (dm2 * n),
            linear: dm * dm2,
        })
    }

    /// All suitable tree-degree sequences `x` (Σx = 2n−2, 1 ≤ x_j ≤ d_j), lexicographically.
    pub fn enumerate_suitable(&self) -> Result<SuitableSequences> {
        self.enumerate_suitable_with_cap(DEFAULT_SUITABLE_CAP)
    }

    pub fn enumerate_suitable_with_cap(&self, max_n: usize) -> Result<SuitableSequences> {
        if self.n() > max_n {
            return Err(Error::CapExceeded(format!(
                "suitable-sequence enumeration limited to n <= {max_n}, got n = {}",
                self.n()
            )));
        }
        Ok(SuitableSequences::new(&self.degrees))
    }

    /// Draws `X` with `X_j = |A_j ∩ B| + 1` for a uniform `(n−2)`-subset `B` of the ground
    /// set `{0..(d̄−1)n}`, partitioned contiguously into blocks `A_j` of size `d_j − 1`.
    pub fn sample_suitable_x<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TreeDegreeSequence> {
        let n = self.n();
        if n < 2 {
            return Err(Error::Domain("need at least 2 vertices".into()));
        }
        let ground = self.ground_set_size() as usize;
        let pick = n - 2;
        if ground < pick {
            return Err(Error::Domain(format!("ground set of size {ground} cannot hold an ({pick})-subset")));
        }
        // bounds[j] = first ground element of block j+1
        let mut bounds = Vec::with_capacity(n);
        let mut acc = 0usize;
        for &d in &self.degrees {
            acc += d as usize - 1;
            bounds.push(acc);
        }
        let mut x = vec![1u32; n];
        for e in rand::seq::index::sample(rng, ground, pick).into_iter() {
            let block = bounds.partition_point(|&b| b <= e);
            x[block] += 1;
        }
        Ok(TreeDegreeSequence { x })
    }

    /// `E[(X_i−1)_s (X_j−1)_t] = (d_i−1)_s (d_j−1)_t (n−2)_{s+t} / ((d̄−1)n)_{s+t}` for `i ≠ j`.
    pub fn joint_factorial_moment(&self, i: usize, j: usize, s: u64, t: u64) -> Result<ExactRational> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(Error::Domain(format!("index out of range for n = {n}")));
        }
        if i == j {
            return Err(Error::Domain("joint moment needs distinct indices".into()));
        }
        let di = self.degrees[i] as i64 - 1;
        let dj = self.degrees[j] as i64 - 1;
        let num = falling(di, s) * falling(dj, t) * falling(n as i64 - 2, s + t);
        let den = falling(self.ground_set_size() as i64, s + t);
        if den == BigInt::from(0) {
            // Only reachable when the numerator's (n−2)_{s+t} also vanishes.
            return Ok(rational_int(0));
        }
        Ok(BigRational::new(num, den))
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Summary statistics of a degree sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub d_bar: BigRational,
    pub d_hat_log: f64,
    pub r: BigRational,
    pub d_max: u32,
    pub m: u64,
    pub n: usize,
}

impl DegreeStats {
    pub fn report(&self) -> StatsReport {
        StatsReport {
            n: self.n,
            m: self.m,
            d_max: self.d_max,
            d_bar: self.d_bar.to_string(),
            d_bar_f64: to_f64(&self.d_bar),
            d_hat: self.d_hat_log.exp(),
            d_hat_log: self.d_hat_log,
            r: self.r.to_string(),
            r_f64: to_f64(&self.r),
        }
    }
}

/// Serialisable view of [`DegreeStats`] (rationals as `p/q` strings plus floats).
#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub n: usize,
    pub m: u64,
    pub d_max: u32,
    pub d_bar: String,
    pub d_bar_f64: f64,
    pub d_hat: f64,
    pub d_hat_log: f64,
    pub r: String,
    pub r_f64: f64,
}

/// Branches of `η = min{ d_max⁴/((d̄−2)²n), d_max³ ln n/((d̄−2)n), d_max(d̄−2) }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eta {
    pub quartic: f64,
    pub logarithmic: f64,
    pub linear: f64,
}

impl Eta {
    pub fn value(&self) -> f64 {
        self.quartic.min(self.logarithmic).min(self.linear)
    }
}

/// Positive integers `x_1..x_n` summing to `2n − 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeDegreeSequence {
    x: Vec<u32>,
}

impl TreeDegreeSequence {
    pub fn new(x: Vec<u32>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::InvalidTreeDegrees("need at least 2 vertices".into()));
        }
        if x.contains(&0) {
            return Err(Error::InvalidTreeDegrees("entries must be positive".into()));
        }
        let sum: u64 = x.iter().map(|&v| v as u64).sum();
        if sum != 2 * n as u64 - 2 {
            return Err(Error::InvalidTreeDegrees(format!("sum {sum} != 2n-2 = {}", 2 * n - 2)));
        }
        Ok(Self { x })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `x_j ≤ d_j` for all `j` (positivity and the sum are already guaranteed).
    pub fn is_suitable_for(&self, d: &DegreeSequence) -> bool {
        self.n() == d.n() && self.x.iter().zip(d.degrees()).all(|(&x, &d)| x <= d)
    }

    pub fn check_suitable(&self, d: &DegreeSequence) -> Result<()> {
        if self.n() != d.n() {
            return Err(Error::NotSuitable(format!("length {} vs {}", self.n(), d.n())));
        }
        if let Some(j) = self.x.iter().zip(d.degrees()).position(|(&x, &d)| x > d) {
            return Err(Error::NotSuitable(format!(
                "x_{} = {} exceeds d_{} = {}",
                j + 1,
                self.x[j],
                j + 1,
                d.degrees()[j]
            )));
        }
        Ok(())
    }
}

impl fmt::Display for TreeDegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Lexicographic stream of suitable sequences for a fixed `d`.
pub struct SuitableSequences {
    caps: Vec<u32>,
    // suffix_caps[i] = Σ_{k>=i} caps[k]
    suffix_caps: Vec<u64>,
    current: Option<Vec<u32>>,
    started: bool,
}

impl SuitableSequences {
    fn new(caps: &[u32]) -> Self {
        let n = caps.len();
        let mut suffix_caps = vec![0u64; n + 1];
        for i in (0..n).rev() {
            suffix_caps[i] = suffix_caps[i + 1] + caps[i] as u64;
        }
        Self { caps: caps.to_vec(), suffix_caps, current: None, started: false }
    }

    /// Lexicographically smallest fill of positions `from..` with total `rem`.
    fn fill_min(&self, x: &mut [u32], from: usize, mut rem: u64) -> bool {
        let n = self.caps.len();
        if rem < (n - from) as u64 || rem > self.suffix_caps[from] {
            return false;
        }
        for (k, slot) in x.iter_mut().enumerate().take(n).skip(from) {
            let later = self.suffix_caps[k + 1];
            let v = rem.saturating_sub(later).max(1);
            *slot = v as u32;
            rem -= v;
        }
        true
    }

    fn advance(&self, x: &mut [u32]) -> bool {
        let n = x.len();
        let mut prefix: u64 = x.iter().map(|&v| v as u64).sum();
        let total = 2 * n as u64 - 2;
        for i in (0..n).rev() {
            prefix -= x[i] as u64;
            let mut v = x[i] + 1;
            while v <= self.caps[i] {
                let used = prefix + v as u64;
                if used <= total && self.fill_min(x, i + 1, total - used) {
                    x[i] = v;
                    return true;
                }
                v += 1;
            }
        }
        false
    }
}

impl Iterator for SuitableSequences {
    type Item = TreeDegreeSequence;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.caps.len();
        if !self.started {
            self.started = true;
            if n < 2 {
                return None;
            }
            let mut x = vec![0u32; n];
            if self.fill_min(&mut x, 0, 2 * n as u64 - 2) {
                self.current = Some(x);
            }
        } else {
            let mut x = self.current.take()?;
            if self.advance(&mut x) {
                self.current = Some(x);
            }
        }
        self.current.clone().map(|x| TreeDegreeSequence { x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ds(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        assert!(DegreeSequence::new(vec![]).is_err());
        assert!(DegreeSequence::new(vec![1, 0, 1]).is_err());
        assert!(DegreeSequence::new(vec![1, 2]).is_err());
    }

    #[test]
    fn graphicality_examples() {
        assert!(ds(&[3, 3, 3, 3]).is_graphical());
        assert!(ds(&[3, 1, 1, 1]).is_graphical());
        assert!(!ds(&[5, 1, 1, 1]).is_graphical());
        assert!(!ds(&[3, 3, 1, 1]).is_graphical());
        assert!(ds(&[2, 2, 2]).is_graphical());
    }

    #[test]
    fn stats_examples() {
        let s = ds(&[3, 3, 3, 3]).stats();
        assert_eq!(s.d_bar, rational(3, 1));
        assert_eq!(s.r, rational(0, 1));
        assert_eq!(s.d_max, 3);
        assert_eq!(s.m, 6);

        let s = ds(&[5, 5, 1, 1]).stats();
        assert_eq!(s.d_bar, rational(3, 1));
        assert_eq!(s.r, rational(4, 1));

        let mut v = vec![5u32; 10];
        v.extend(vec![1u32; 10]);
        let s = ds(&v).stats();
        assert_eq!(s.d_bar, rational(3, 1));
        assert!((s.d_hat_log.exp() - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn geometric_mean_below_arithmetic() {
        let d = ds(&[7, 1, 2, 4, 4, 2]);
        assert!(d.log_geometric_mean() <= to_f64(&d.mean()).ln());
    }

    #[test]
    fn excess_condition_examples() {
        assert!(DegreeSequence::regular(100, 3).unwrap().excess_condition_holds());
        assert!(!DegreeSequence::regular(80, 3).unwrap().excess_condition_holds());
        assert!(!DegreeSequence::regular(1000, 2).unwrap().excess_condition_holds());
        assert!(!ds(&[2, 2, 1, 1]).excess_condition_holds());
    }

    #[test]
    fn eta_examples() {
        let e = DegreeSequence::regular(100, 3).unwrap().eta().unwrap();
        assert!((e.quartic - 0.81).abs() < 1e-12);
        assert!((e.logarithmic - 27.0 * 100f64.ln() / 100.0).abs() < 1e-12);
        assert_eq!(e.linear, 3.0);
        assert!((e.value() - 0.81).abs() < 1e-12);

        let e = DegreeSequence::regular(10_000, 4).unwrap().eta().unwrap();
        let expect = (256.0 / 40_000f64).min(64.0 * 10_000f64.ln() / 20_000.0).min(8.0);
        assert!((e.value() - expect).abs() < 1e-15);
        assert!((e.quartic - 256.0 / 40_000.0).abs() < 1e-15);

        assert!(ds(&[2, 2, 2]).eta().is_err());
    }

    #[test]
    fn eta_linear_branch_when_barely_above_two() {
        // one extra edge over a cycle-like sequence: d̄ - 2 = 2/n
        let mut v = vec![2u32; 1000];
        v[0] = 3;
        v[1] = 3;
        let e = ds(&v).eta().unwrap();
        assert_eq!(e.value(), e.linear);
    }

    #[test]
    fn suitable_for_k4_sequence() {
        let all: Vec<_> = ds(&[3, 3, 3, 3]).enumerate_suitable().unwrap().collect();
        assert_eq!(all.len(), 10);
        let stars = all.iter().filter(|x| x.as_slice().contains(&3)).count();
        assert_eq!(stars, 4);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all, "lexicographic order");
    }

    #[test]
    fn suitable_trivial_and_cap() {
        let all: Vec<_> = ds(&[1, 1]).enumerate_suitable().unwrap().collect();
        assert_eq!(all, vec![TreeDegreeSequence::new(vec![1, 1]).unwrap()]);
        assert!(DegreeSequence::regular(13, 2).unwrap().enumerate_suitable().is_err());
        assert!(DegreeSequence::regular(13, 2).unwrap().enumerate_suitable_with_cap(13).is_ok());
        // no suitable sequence: all ones on 4 vertices sum to 4 < 6
        assert_eq!(ds(&[1, 1, 1, 1]).enumerate_suitable().unwrap().count(), 0);
    }

    fn brute(caps: &[u32], prefix: &mut Vec<u32>, total: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == caps.len() {
            if prefix.iter().sum::<u32>() == total {
                out.push(prefix.clone());
            }
            return;
        }
        for v in 1..=caps[prefix.len()] {
            prefix.push(v);
            brute(caps, prefix, total, out);
            prefix.pop();
        }
    }

    #[test]
    fn suitable_matches_brute_force() {
        for d in [vec![2u32, 2, 1, 1], vec![4, 1, 3, 2, 2], vec![3, 3, 2, 2, 1, 1], vec![5, 1, 1, 1, 2]] {
            let d = ds(&d);
            let n = d.n();
            let got: Vec<Vec<u32>> = d.enumerate_suitable().unwrap().map(|x| x.as_slice().to_vec()).collect();
            let mut want = Vec::new();
            brute(d.degrees(), &mut Vec::new(), 2 * n as u32 - 2, &mut want);
            assert_eq!(got, want, "d = {d}");
        }
    }

    #[test]
    fn joint_moment_examples() {
        let d = ds(&[3, 3, 3, 3]);
        assert_eq!(d.joint_factorial_moment(0, 1, 1, 1).unwrap(), rational(1, 7));
        assert_eq!(d.joint_factorial_moment(0, 1, 0, 0).unwrap(), rational(1, 1));
        assert_eq!(d.joint_factorial_moment(0, 1, 3, 0).unwrap(), rational(0, 1));
        assert_eq!(d.joint_factorial_moment(0, 1, 1, 0).unwrap(), rational(1, 2));
        assert!(d.joint_factorial_moment(1, 1, 1, 1).is_err());
    }

    #[test]
    fn sampled_x_block_size_one() {
        let d = DegreeSequence::regular(9, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = d.sample_suitable_x(&mut rng).unwrap();
            assert!(x.as_slice().iter().all(|&v| v == 1 || v == 2));
            assert!(x.is_suitable_for(&d));
        }
    }

    #[test]
    fn sampled_x_mean_for_k4_sequence() {
        let d = ds(&[3, 3, 3, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..draws {
            let v = d.sample_suitable_x(&mut rng).unwrap().as_slice()[0] as f64 - 1.0;
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / draws as f64;
        let sd = (sumsq / draws as f64 - mean * mean).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sd / (draws as f64).sqrt());
    }
}
