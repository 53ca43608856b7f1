use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};

use super::{Forest, LabeledTree};
use crate::degseq::TreeDegreeSequence;
use crate::error::{Error, Result};
use crate::numeric::{falling, rational, ExactRational};

/// Probability that a uniform tree of `T_x` contains every edge of the forest `S`.
///
/// For `r ≥ 2` components `S_1..S_r` with forest degrees `s_j` this is
/// `Π_i Σ_{j∈S_i}(x_j − s_j) / (n−2)_{n−r} · Π_j (x_j − 1)_{s_j − 1}`, where the
/// factor for `s_j = 0` is `1/x_j`. A spanning `S` (`r = 1`) is contained iff it
/// has degrees `x`.
pub fn forest_containment_probability(x: &TreeDegreeSequence, forest: &Forest) -> Result<ExactRational> {
    let n = x.n();
    if forest.n() != n {
        return Err(Error::Domain(format!("forest has {} vertices, x has {n}", forest.n())));
    }
    let s = forest.degrees();
    let xs = x.as_slice();
    let r = forest.component_count();
    if r == 1 {
        let inside = s.iter().zip(xs).all(|(a, b)| a == b);
        return Ok(if inside { BigRational::one() } else { BigRational::zero() });
    }
    if s.iter().zip(xs).any(|(&sj, &xj)| sj > xj) {
        return Ok(BigRational::zero());
    }
    let mut spare = vec![0i64; r];
    for (j, &c) in forest.component_of().iter().enumerate() {
        spare[c] += xs[j] as i64 - s[j] as i64;
    }
    if spare.contains(&0) {
        return Ok(BigRational::zero());
    }
    let mut num: BigInt = spare.iter().map(|&v| BigInt::from(v)).product();
    let mut den = falling(n as i64 - 2, (n - r) as u64);
    for (&sj, &xj) in s.iter().zip(xs) {
        if sj == 0 {
            den *= xj;
        } else {
            num *= falling(xj as i64 - 1, sj as u64 - 1);
        }
    }
    Ok(BigRational::new(num, den))
}

/// Fraction of trees in `T_x` in which `j` and `k` are adjacent: `(x_j + x_k − 2)/(n − 2)`.
pub fn edge_adjacency_fraction(x: &TreeDegreeSequence, j: usize, k: usize) -> Result<ExactRational> {
    let n = x.n();
    if j == k || j >= n || k >= n {
        return Err(Error::Domain(format!("need distinct vertices in 0..{n}, got {j}, {k}")));
    }
    if n < 3 {
        return Err(Error::Domain("needs n >= 3".into()));
    }
    let xs = x.as_slice();
    Ok(rational(xs[j] as i64 + xs[k] as i64 - 2, n as i64 - 2))
}

/// `F(T) = Σ_{{j,k} ∈ E(T)} φ(j) φ(k)`.
pub fn edge_functional<T>(tree: &LabeledTree, phi: &[T]) -> T
where
    T: Clone + Num,
{
    assert_eq!(phi.len(), tree.n(), "phi must have one value per vertex");
    tree.edges().iter().fold(T::zero(), |acc, &(u, v)| acc + phi[u as usize].clone() * phi[v as usize].clone())
}

/// Average of `F` over `T_x`:
/// `[(Σ_k φ(k)) (Σ_j (x_j−1) φ(j)) − Σ_j (x_j−1) φ(j)²] / (n − 2)`.
pub fn mean_edge_functional<T>(x: &TreeDegreeSequence, phi: &[T]) -> Result<T>
where
    T: Clone + Num + FromPrimitive,
{
    let n = x.n();
    if phi.len() != n {
        return Err(Error::Domain(format!("phi has {} values, x has {n}", phi.len())));
    }
    if n < 3 {
        return Err(Error::Domain("mean edge functional needs n >= 3".into()));
    }
    let mut total = T::zero();
    let mut weighted = T::zero();
    let mut weighted_sq = T::zero();
    for (p, &xj) in phi.iter().zip(x.as_slice()) {
        let w = T::from_u32(xj - 1).expect("small integers convert");
        total = total + p.clone();
        weighted = weighted + w.clone() * p.clone();
        weighted_sq = weighted_sq + w * p.clone() * p.clone();
    }
    let denom = T::from_usize(n - 2).expect("small integers convert");
    Ok((total * weighted - weighted_sq) / denom)
}

/// `‖φ‖_m = min_c Σ_j |φ(j) − c|`, attained at the lower median.
pub fn phi_seminorm(phi: &[f64]) -> f64 {
    if phi.is_empty() {
        return 0.0;
    }
    let mut sorted = phi.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let c = sorted[(sorted.len() - 1) / 2];
    sorted.iter().map(|v| (v - c).abs()).sum()
}
