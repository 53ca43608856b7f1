//! Exact `E g(X)` for `X_j − 1 = |A_j ∩ B|`, `B` a uniform `(n−2)`-subset of a ground
//! set of size `(d̄−1)n` split into blocks of size `d_j − 1`.
//!
//! Writing `Y_j = X_j − 1` and `a_j = d_j − 1`, each term of `g` is a polynomial of
//! degree at most 4 in one or two of the `Y_j`. Polynomials are converted to the
//! falling-factorial basis, where `E[(Y_j)_s] = (a_j)_s ρ(s)` and, for `j ≠ k`,
//! `E[(Y_j)_s (Y_k)_t] = (a_j)_s (a_k)_t ρ(s+t)` with `ρ(k) = (n−2)_k / ((d̄−1)n)_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{lambda0, residual_edges};
use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};
use crate::numeric::falling;

/// Coefficients in the monomial basis, lowest degree first.
type Poly = Vec<BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Stirling numbers of the second kind `S(k, i)` for `k ≤ 4`.
const STIRLING2: [[i64; 5]; 5] = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 1, 3, 1, 0], [0, 1, 7, 6, 1]];

/// `Y^k = Σ_i S(k, i) (Y)_i`.
fn to_falling(p: &Poly) -> Poly {
    assert!(p.len() <= 5, "degree at most 4");
    let mut out = vec![BigInt::zero(); p.len()];
    for (k, c) in p.iter().enumerate() {
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot += c * STIRLING2[k][i];
        }
    }
    out
}

struct Moments {
    a: Vec<i64>,
    rho: Vec<BigRational>,
}

impl Moments {
    fn new(d: &DegreeSequence, max_order: u64) -> Self {
        let r = d.n() as i64 - 2;
        let ground = d.ground_set_size() as i64;
        let rho = (0..=max_order)
            .map(|k| {
                let den = falling(ground, k);
                if den.is_zero() {
                    BigRational::zero()
                } else {
                    BigRational::new(falling(r, k), den)
                }
            })
            .collect();
        Self { a: d.degrees().iter().map(|&v| v as i64 - 1).collect(), rho }
    }

    /// `Σ_j c_{j,s} (a_j)_s` for each `s`, with `c_j` the falling coefficients of `poly(j)`.
    fn weighted(&self, coeffs: &[Poly]) -> Vec<BigInt> {
        let width = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); width];
        for (c, &a) in coeffs.iter().zip(&self.a) {
            for (s, cs) in c.iter().enumerate() {
                out[s] += cs * falling(a, s as u64);
            }
        }
        out
    }

    /// `Σ_j E F_j(Y_j)`.
    fn single(&self, f: &[Poly]) -> BigRational {
        let w = self.weighted(f);
        w.iter().enumerate().fold(BigRational::zero(), |acc, (s, c)| acc + &self.rho[s] * c)
    }

    /// `Σ_{j≠k} E F_j(Y_j) G_k(Y_k)`.
    fn pair(&self, f: &[Poly], g: &[Poly]) -> BigRational {
        let wf = self.weighted(f);
        let wg = self.weighted(g);
        let mut out = BigRational::zero();
        for (s, fs) in wf.iter().enumerate() {
            for (t, gt) in wg.iter().enumerate() {
                let mut diag = BigInt::zero();
                for ((fj, gj), &a) in f.iter().zip(g).zip(&self.a) {
                    if let (Some(x), Some(y)) = (fj.get(s), gj.get(t)) {
                        diag += x * y * falling(a, s as u64) * falling(a, t as u64);
                    }
                }
                out += &self.rho[s + t] * (fs * gt - diag);
            }
        }
        out
    }
}

/// Exact `E g(X) = λ₀ + λ₀² − E λ(X) − E λ(X)² − E μ̄(X)`.
pub fn expected_g_exact(d: &DegreeSequence) -> Result<BigRational> {
    let n = d.n();
    if n < 3 {
        return Err(Error::Domain("g needs n >= 3".into()));
    }
    let half = residual_edges(d);
    if half <= 0 {
        return Err(Error::Domain("needs m > n − 1".into()));
    }
    let mom = Moments::new(d, 4);
    let a: Vec<BigInt> = mom.a.iter().map(|&v| BigInt::from(v)).collect();
    let one = BigInt::one();

    // (d_j − X_j)_2 = (a − Y)(a − 1 − Y)
    let p: Vec<Poly> = a.iter().map(|a| vec![a * (a - &one), -(BigInt::from(2) * a - &one), one.clone()]).collect();
    let p_sq: Vec<Poly> = p.iter().map(|q| to_falling(&poly_mul(q, q))).collect();
    let p: Vec<Poly> = p.iter().map(to_falling).collect();
    // (X_j − 1)(d_j − X_j) = Y(a − Y) and d_k − X_k = a − Y
    let q: Vec<Poly> = a.iter().map(|a| to_falling(&vec![BigInt::zero(), a.clone(), -one.clone()])).collect();
    let r: Vec<Poly> = a.iter().map(|a| to_falling(&vec![a.clone(), -one.clone()])).collect();

    let d1 = BigRational::from_integer(BigInt::from(4 * half));
    let d2 = BigRational::from_integer(BigInt::from((n as i64 - 2) * 2 * half));
    let e_lambda = mom.single(&p) / &d1;
    let e_lambda_sq = (mom.single(&p_sq) + mom.pair(&p, &p)) / (&d1 * &d1);
    let e_mu_bar = mom.pair(&q, &r) / d2;
    let l0 = lambda0(d);
    Ok(&l0 + &l0 * &l0 - e_lambda - e_lambda_sq - e_mu_bar)
}
