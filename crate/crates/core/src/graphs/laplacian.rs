use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::SimpleGraph;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::numeric::ln_biguint;

/// Largest `n` whose exact count uses Bareiss elimination; above it the
/// multi-modular path is used. Both are exact.
pub const DEFAULT_EXACT_BAREISS_MAX_N: usize = 64;

/// Number of spanning trees `τ(G)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpanningTreeCount {
    #[serde(serialize_with = "serialize_decimal")]
    pub value: BigUint,
}

fn serialize_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SpanningTreeCount {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `ln τ`; `-inf` for a disconnected graph.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.value)
    }
}

fn reduced_laplacian(g: &SimpleGraph) -> Vec<Vec<i64>> {
    let k = g.n() - 1;
    let mut lap = vec![vec![0i64; k]; k];
    for &(u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        if u < k {
            lap[u][u] += 1;
        }
        if v < k {
            lap[v][v] += 1;
        }
        if u < k && v < k {
            lap[u][v] -= 1;
            lap[v][u] -= 1;
        }
    }
    lap
}

fn connected(g: &SimpleGraph) -> bool {
    let mut dsu = DisjointSets::new(g.n());
    let merged = g.edges().iter().filter(|&&(u, v)| dsu.union(u as usize, v as usize)).count();
    merged + 1 == g.n()
}

pub(super) fn spanning_tree_count(g: &SimpleGraph) -> SpanningTreeCount {
    spanning_tree_count_with_threshold(g, DEFAULT_EXACT_BAREISS_MAX_N)
}

/// Exact `τ(G)`: Bareiss for `n ≤ bareiss_max_n`, multi-modular CRT above.
pub fn spanning_tree_count_with_threshold(g: &SimpleGraph, bareiss_max_n: usize) -> SpanningTreeCount {
    let n = g.n();
    if n <= 1 {
        return SpanningTreeCount { value: BigUint::one() };
    }
    if !connected(g) {
        return SpanningTreeCount { value: BigUint::zero() };
    }
    let lap = reduced_laplacian(g);
    let det = if n <= bareiss_max_n {
        bareiss_determinant(lap.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    } else {
        modular_determinant(&lap)
    };
    SpanningTreeCount { value: det.to_biguint().expect("Laplacian cofactor is non-negative") }
}

pub(super) fn spanning_tree_count_log(g: &SimpleGraph) -> Result<f64> {
    let n = g.n();
    if n <= 1 {
        return Ok(0.0);
    }
    if !connected(g) {
        return Err(Error::Disconnected);
    }
    let mut a: Vec<Vec<f64>> =
        reduced_laplacian(g).into_iter().map(|r| r.into_iter().map(|v| v as f64).collect()).collect();
    let k = a.len();
    let mut log_det = 0.0;
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("non-empty range");
        a.swap(col, pivot);
        let p = a[col][col];
        if p == 0.0 {
            return Err(Error::Disconnected);
        }
        log_det += p.abs().ln();
        let (top, bottom) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in bottom.iter_mut() {
            let f = row[col] / p;
            if f != 0.0 {
                for c in col + 1..k {
                    row[c] -= f * prow[c];
                }
            }
        }
    }
    Ok(log_det)
}

/// Fraction-free Gaussian elimination; the last pivot is the determinant.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let k = a.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..k - 1 {
        if a[col][col].is_zero() {
            match (col + 1..k).find(|&r| !a[r][col].is_zero()) {
                Some(r) => {
                    a.swap(col, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in col + 1..k {
            for j in col + 1..k {
                let v = (&a[i][j] * &a[col][col] - &a[i][col] * &a[col][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[col][col].clone();
    }
    sign * a[k - 1][k - 1].clone()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Miller–Rabin with the first twelve primes as bases, deterministic below 2^64.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
fn primes_below_2_62() -> impl Iterator<Item = u64> {
    let mut c = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(c) {
            c -= 2;
        }
        let p = c;
        c -= 2;
        Some(p)
    })
}

fn det_mod_p(a: &[Vec<i64>], p: u64) -> u64 {
    let k = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()).collect();
    let mut det = 1u64;
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(col, pivot);
            det = p - det;
        }
        let pv = m[col][col];
        det = mul_mod(det, pv, p);
        let inv = pow_mod(pv, p - 2, p);
        let (top, bottom) = m.split_at_mut(col + 1);
        let prow = &top[col];
        for row in bottom.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let f = mul_mod(row[col], inv, p);
            for c in col + 1..k {
                let sub = mul_mod(f, prow[c], p);
                row[c] = if row[c] >= sub { row[c] - sub } else { row[c] + p - sub };
            }
        }
    }
    det % p
}

/// Exact determinant of an integer matrix by CRT over 62-bit primes, with enough
/// primes to exceed twice the Hadamard bound.
pub fn modular_determinant(a: &[Vec<i64>]) -> BigInt {
    if a.is_empty() {
        return BigInt::one();
    }
    let hadamard_bits: f64 =
        a.iter().map(|r| 0.5 * r.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().log2()).sum();
    if !hadamard_bits.is_finite() {
        return BigInt::zero();
    }
    let needed_bits = hadamard_bits.ceil() as u64 + 2;
    let mut residue = BigInt::zero();
    let mut modulus = BigInt::one();
    for p in primes_below_2_62() {
        let r = det_mod_p(a, p);
        let pb = BigInt::from(p);
        let cur = (&residue % &pb).to_u64().expect("reduced below p");
        let m_mod_p = (&modulus % &pb).to_u64().expect("reduced below p");
        let diff = (r + p - cur) % p;
        let t = mul_mod(diff, pow_mod(m_mod_p, p - 2, p), p);
        residue += &modulus * BigInt::from(t);
        modulus *= pb;
        if modulus.bits() > needed_bits {
            break;
        }
    }
    let half = &modulus >> 1usize;
    if residue > half {
        residue -= &modulus;
    }
    residue
}
