//! Measured exponential moments and tails for two kinds of random variable:
//! edge functionals `F(T) = Σ_{{j,k}∈E(T)} φ(j)φ(k)` of a uniform tree in `T_x`,
//! and functions of a uniform `r`-subset of `{0, …, N−1}`.
//!
//! Both are compared against the bounds `0 ≤ K ≤ L/8` for
//! `E e^{ξF} = exp(ξ E F + K)` and `Pr(|F − E F| ≥ t) ≤ 2 exp(−2t²/L)`, where the
//! scale `L` is `L_φ` for trees and `min{r, N−r} α²` for subsets.

use itertools::Itertools;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::degseq::{DegreeSequence, TreeDegreeSequence};
use crate::error::{Error, Result};
use crate::numeric::{binomial, KahanSum, LogSumExp};
use crate::parallel::{fan_out, worker_rng};
use crate::trees::{
    count_trees_with_degrees, edge_functional, enumerate_trees, mean_edge_functional, phi_seminorm, sample_tree,
};

/// Largest `|T_x|` or `C(N, r)` evaluated exhaustively instead of by sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;
pub const TAIL_GRID_POINTS: usize = 20;
pub const LIPSCHITZ_SPOT_CHECKS: usize = 1000;

/// Slack for floating-point comparisons against bounds that hold exactly.
const EXACT_TOL: f64 = 1e-12;

/// Random stream reserved for the Lipschitz spot check, disjoint from worker streams.
const SPOT_CHECK_STREAM: u64 = u64::MAX;

/// A vertex function `φ` with a range `[a, b]` containing all its values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiSpec {
    values: Vec<f64>,
    a: f64,
    b: f64,
    seminorm: f64,
}

impl PhiSpec {
    pub fn new(values: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::Domain(format!("need finite a <= b, got [{a}, {b}]")));
        }
        if let Some(v) = values.iter().find(|v| !(a..=b).contains(*v)) {
            return Err(Error::Domain(format!("phi value {v} outside [{a}, {b}]")));
        }
        let seminorm = phi_seminorm(&values);
        Ok(Self { values, a, b, seminorm })
    }

    /// Range taken as `[min φ, max φ]`.
    pub fn tight(values: Vec<f64>) -> Result<Self> {
        let a = values.iter().copied().fold(f64::INFINITY, f64::min);
        let b = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if values.is_empty() {
            return Err(Error::Domain("phi needs at least one value".into()));
        }
        Self::new(values, a, b)
    }

    /// `φ(j) = (d_j − x_j)/√((d̄−2)n + 2)` on `[0, d_max/√((d̄−2)n + 2)]`, for which
    /// `F(T) = μ(T)`.
    pub fn tree_correction(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<Self> {
        x.check_suitable(d)?;
        let scale = d.excess() + 2;
        if scale <= 0 {
            return Err(Error::Domain("(d̄−2)n + 2 must be positive".into()));
        }
        let root = (scale as f64).sqrt();
        let values = d.degrees().iter().zip(x.as_slice()).map(|(&dj, &xj)| (dj - xj) as f64 / root).collect();
        Self::new(values, 0.0, d.max_degree() as f64 / root)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn seminorm(&self) -> f64 {
        self.seminorm
    }
}

/// `L_φ = (b−a)³ min{(b−a)n, ‖φ‖_m (ln n + 2)}`.
pub fn l_phi(phi: &PhiSpec, n: usize) -> f64 {
    let w = phi.b - phi.a;
    let n = n.max(1) as f64;
    w.powi(3) * (w * n).min(phi.seminorm * (n.ln() + 2.0))
}

/// Sign `ξ` of the exponent in `E e^{ξF}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Xi {
    Plus,
    Minus,
}

impl Xi {
    pub fn sign(self) -> f64 {
        match self {
            Xi::Plus => 1.0,
            Xi::Minus => -1.0,
        }
    }
}

impl TryFrom<i64> for Xi {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Xi::Plus),
            -1 => Ok(Xi::Minus),
            _ => Err(Error::Domain(format!("xi must be +1 or -1, got {v}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub t: f64,
    /// Fraction of outcomes with `|F − center| ≥ t`.
    pub empirical: f64,
    /// `2 exp(−2t²/L)`.
    pub bound: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    /// Every outcome was evaluated once, so all statistics are exact up to rounding.
    pub exhaustive: bool,
    pub samples: u64,
    pub xi: f64,
    pub empirical_mean: f64,
    /// Point the tails are measured from: the exact mean when known, else `empirical_mean`.
    pub center: f64,
    /// `ln` of the mean of `e^{ξF}`.
    pub exp_mean_log: f64,
    /// `exp_mean_log − ξ · empirical_mean`.
    pub k_hat: f64,
    pub l_phi: f64,
    /// `L/8`.
    pub k_bound: f64,
    pub tail_table: Vec<TailRow>,
    /// Some tail row exceeds its bound by more than three binomial standard errors
    /// (by more than rounding, in exhaustive mode).
    pub significant_violation: bool,
    /// The Lipschitz spot check passed; always true for tree experiments.
    pub valid: bool,
}

impl ConcentrationReport {
    /// `k_hat ∈ [−tol, L/8 + tol]`.
    pub fn k_within_bound(&self, tol: f64) -> bool {
        self.k_hat >= -tol && self.k_hat <= self.k_bound + tol
    }

    pub fn tail_csv(&self) -> String {
        let mut out = String::from("t,empirical,bound,violated\n");
        for row in &self.tail_table {
            out.push_str(&format!("{},{},{},{}\n", row.t, row.empirical, row.bound, row.violated));
        }
        out
    }
}

fn summarize(values: &[f64], center: Option<f64>, xi: Xi, scale: f64, exhaustive: bool) -> ConcentrationReport {
    let k = values.len() as f64;
    let mut sum = KahanSum::default();
    let mut exp_mean = LogSumExp::default();
    for &v in values {
        sum.add(v);
        exp_mean.push(xi.sign() * v);
    }
    let empirical_mean = sum.value() / k;
    let center = center.unwrap_or(empirical_mean);
    let exp_mean_log = exp_mean.ln_mean();

    let mut dev: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let top = dev.last().copied().unwrap_or(0.0);
    let t_max = if top > 0.0 {
        top
    } else if scale > 0.0 {
        scale.sqrt()
    } else {
        1.0
    };

    let mut significant_violation = false;
    let tail_table = (1..=TAIL_GRID_POINTS)
        .map(|i| {
            let t = t_max * i as f64 / TAIL_GRID_POINTS as f64;
            let below = dev.partition_point(|&v| v < t);
            let empirical = (dev.len() - below) as f64 / k;
            let bound = if scale > 0.0 { 2.0 * (-2.0 * t * t / scale).exp() } else { 0.0 };
            let slack = if exhaustive {
                EXACT_TOL
            } else {
                let p = bound.min(1.0);
                3.0 * (p * (1.0 - p) / k).sqrt() + EXACT_TOL
            };
            significant_violation |= empirical > bound + slack;
            TailRow { t, empirical, bound, violated: empirical > bound + EXACT_TOL }
        })
        .collect();

    ConcentrationReport {
        exhaustive,
        samples: values.len() as u64,
        xi: xi.sign(),
        empirical_mean,
        center,
        exp_mean_log,
        k_hat: exp_mean_log - xi.sign() * empirical_mean,
        l_phi: scale,
        k_bound: scale / 8.0,
        tail_table,
        significant_violation,
        valid: true,
    }
}

fn check_phi(x: &TreeDegreeSequence, phi: &PhiSpec) -> Result<()> {
    if phi.values.len() != x.n() {
        return Err(Error::Domain(format!("phi has {} values, x has {}", phi.values.len(), x.n())));
    }
    Ok(())
}

/// Exact mean of `F` over `T_x`, when `n ≥ 3`.
fn tree_center(x: &TreeDegreeSequence, phi: &PhiSpec) -> Option<f64> {
    mean_edge_functional(x, &phi.values).ok()
}

/// Evaluates `F` on every tree of `T_x`.
pub fn tree_concentration_exhaustive(x: &TreeDegreeSequence, phi: &PhiSpec, xi: Xi) -> Result<ConcentrationReport> {
    check_phi(x, phi)?;
    let values: Vec<f64> = enumerate_trees(x)?.map(|t| edge_functional(&t, &phi.values)).collect();
    let center = tree_center(x, phi);
    Ok(summarize(&values, center, xi, l_phi(phi, x.n()), true))
}

/// Evaluates `F` on `samples` uniform trees of `T_x`.
pub fn tree_concentration_sampled(
    x: &TreeDegreeSequence,
    phi: &PhiSpec,
    xi: Xi,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ConcentrationReport> {
    check_phi(x, phi)?;
    if samples == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let values: Vec<f64> = fan_out(samples, seed, workers, |rng, k| {
        (0..k).map(|_| edge_functional(&sample_tree(x, rng), &phi.values)).collect::<Vec<_>>()
    })
    .concat();
    let center = tree_center(x, phi);
    Ok(summarize(&values, center, xi, l_phi(phi, x.n()), false))
}

/// Exhaustive when `|T_x| ≤ EXHAUSTIVE_LIMIT`, otherwise sampled.
pub fn tree_concentration_experiment(
    x: &TreeDegreeSequence,
    phi: &PhiSpec,
    xi: Xi,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ConcentrationReport> {
    let size = count_trees_with_degrees(x);
    if size.to_u64().is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
        tree_concentration_exhaustive(x, phi, xi)
    } else {
        tree_concentration_sampled(x, phi, xi, samples, seed, workers)
    }
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, big_n: usize, r: usize) -> Vec<usize> {
    let mut a = index::sample(rng, big_n, r).into_vec();
    a.sort_unstable();
    a
}

/// Checks `|h(A) − h(A′)| ≤ α` on random pairs sharing `r − 1` elements.
fn lipschitz_spot_check<H>(big_n: usize, r: usize, h: &H, alpha: f64, seed: u64) -> bool
where
    H: Fn(&[usize]) -> f64,
{
    if r == 0 || r == big_n {
        return true;
    }
    let mut rng = worker_rng(seed, SPOT_CHECK_STREAM);
    let tol = EXACT_TOL * alpha.abs().max(1.0);
    (0..LIPSCHITZ_SPOT_CHECKS).all(|_| {
        let a = random_subset(&mut rng, big_n, r);
        let out = loop {
            let v = rng.gen_range(0..big_n);
            if a.binary_search(&v).is_err() {
                break v;
            }
        };
        let mut b = a.clone();
        b[rng.gen_range(0..r)] = out;
        b.sort_unstable();
        (h(&a) - h(&b)).abs() <= alpha + tol
    })
}

/// Measures `h(C)` for `C` a uniform `r`-subset of `{0, …, N−1}`, passed to `h` in
/// increasing order. Exhaustive when `C(N, r) ≤ EXHAUSTIVE_LIMIT`. The caller's
/// Lipschitz constant `α` is spot-checked, and `valid` is cleared if it fails.
pub fn subset_function_experiment<H>(
    big_n: usize,
    r: usize,
    h: H,
    alpha: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<ConcentrationReport>
where
    H: Fn(&[usize]) -> f64 + Sync,
{
    if r > big_n {
        return Err(Error::Domain(format!("subset size {r} exceeds ground set size {big_n}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Domain(format!("alpha must be a finite nonnegative number, got {alpha}")));
    }
    let valid = lipschitz_spot_check(big_n, r, &h, alpha, seed);
    let scale = r.min(big_n - r) as f64 * alpha * alpha;
    let total = binomial(big_n as u64, r as u64);
    let mut report = if total.to_u64().is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
        let values: Vec<f64> = (0..big_n).combinations(r).map(|a| h(&a)).collect();
        summarize(&values, None, Xi::Plus, scale, true)
    } else {
        if samples == 0 {
            return Err(Error::Domain("samples must be positive".into()));
        }
        let values: Vec<f64> = fan_out(samples, seed, workers, |rng, k| {
            (0..k).map(|_| h(&random_subset(rng, big_n, r))).collect::<Vec<_>>()
        })
        .concat();
        summarize(&values, None, Xi::Plus, scale, false)
    };
    report.valid = valid;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{beta_exact, expected_g_exact, g_of_x, mu_bar};
    use crate::numeric::to_f64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tds(v: &[u32]) -> TreeDegreeSequence {
        TreeDegreeSequence::new(v.to_vec()).unwrap()
    }

    fn ds(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn l_phi_examples() {
        assert_eq!(l_phi(&PhiSpec::tight(vec![0.5; 6]).unwrap(), 6), 0.0);
        let phi = PhiSpec::tight(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!(phi.seminorm(), 2.0);
        assert_eq!(l_phi(&phi, 4), 4.0);
        let wide = PhiSpec::new(vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], -1.0, 1.0).unwrap();
        assert!((l_phi(&wide, 10) - 8.0 * (10f64.ln() + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn phi_range_is_enforced() {
        assert!(PhiSpec::new(vec![0.0, 2.0], 0.0, 1.0).is_err());
        assert!(PhiSpec::new(vec![0.0], 1.0, 0.0).is_err());
        assert!(PhiSpec::tight(vec![]).is_err());
        assert!(Xi::try_from(0).is_err());
    }

    #[test]
    fn constant_functional_on_paths() {
        // Both trees of T_(2,2,1,1) give the same F when φ(2) = φ(3).
        let phi = PhiSpec::tight(vec![0.3, 0.7, 0.5, 0.5]).unwrap();
        let rep = tree_concentration_exhaustive(&tds(&[2, 2, 1, 1]), &phi, Xi::Plus).unwrap();
        assert_eq!(rep.samples, 2);
        assert!(rep.k_hat.abs() < 1e-15);
        assert!(rep.tail_table.iter().all(|r| r.empirical == 0.0));
    }

    #[test]
    fn exhaustive_battery_small_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=6u32 {
            let d = DegreeSequence::new(vec![n - 1; n as usize]).unwrap();
            for x in d.enumerate_suitable().unwrap() {
                for _ in 0..5 {
                    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
                    let phi = PhiSpec::new(values, -1.0, 2.0).unwrap();
                    for xi in [Xi::Plus, Xi::Minus] {
                        let rep = tree_concentration_exhaustive(&x, &phi, xi).unwrap();
                        assert!(rep.k_within_bound(1e-12), "{x}: {rep:?}");
                        assert!(!rep.significant_violation);
                        assert!((rep.center - rep.empirical_mean).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn correction_phi_reproduces_beta() {
        let d = ds(&[3, 3, 3, 2, 2, 1]);
        for x in d.enumerate_suitable().unwrap() {
            let phi = PhiSpec::tree_correction(&d, &x).unwrap();
            let rep = tree_concentration_exhaustive(&x, &phi, Xi::Minus).unwrap();
            let beta = beta_exact(&d, &x).unwrap();
            assert!((rep.exp_mean_log - beta.ln()).abs() < 1e-12);
            assert!((rep.center - to_f64(&mu_bar(&d, &x).unwrap())).abs() < 1e-12);
            let n = d.n() as f64;
            let root = ((d.excess() + 2) as f64).sqrt();
            let displayed =
                (d.max_degree() as f64).powi(3) * (phi.seminorm() + phi.b()) * (n.ln() + 2.0) / root.powi(3);
            assert!(rep.l_phi <= displayed + 1e-12);
        }
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let x = tds(&[4, 4, 3, 3, 3, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let phi = PhiSpec::tight((0..16).map(|j| (j % 5) as f64 / 4.0).collect()).unwrap();
        let a = tree_concentration_experiment(&x, &phi, Xi::Plus, 3000, 5, 3).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a, tree_concentration_experiment(&x, &phi, Xi::Plus, 3000, 5, 3).unwrap());
        let exact = mean_edge_functional(&x, phi.values()).unwrap();
        assert_eq!(a.center, exact);
        assert!(!a.significant_violation);
        assert!(a.k_within_bound(0.05));
    }

    #[test]
    fn hypergeometric_mean() {
        let w = [0usize, 3, 4, 9];
        let count = |a: &[usize]| a.iter().filter(|v| w.contains(v)).count() as f64;
        let rep = subset_function_experiment(12, 5, count, 1.0, 0, 1, 1).unwrap();
        assert!(rep.exhaustive && rep.valid);
        assert!((rep.empirical_mean - 5.0 * 4.0 / 12.0).abs() < 1e-12);
        assert!(rep.k_within_bound(1e-12));
        assert!(!rep.significant_violation);

        let scaled =
            subset_function_experiment(40, 20, |a: &[usize]| count(a) / 20.0, 1.0 / 20.0, 20_000, 2, 4).unwrap();
        assert!(!scaled.exhaustive && scaled.valid);
        assert!((scaled.empirical_mean - 4.0 / 40.0).abs() < 0.005);

        let bad = subset_function_experiment(12, 5, count, 0.5, 0, 1, 1).unwrap();
        assert!(!bad.valid);
    }

    #[test]
    fn constant_subset_function() {
        let rep = subset_function_experiment(10, 4, |_: &[usize]| 2.5, 0.0, 0, 0, 1).unwrap();
        assert_eq!(rep.k_hat, 0.0);
        assert!(rep.valid);
        assert!(rep.tail_table.iter().all(|r| r.empirical == 0.0 && r.bound == 0.0));
    }

    /// `h(B) = g(X(B))` with `α` the largest change over all adjacent suitable pairs.
    #[test]
    fn g_of_random_subset() {
        let d = ds(&[4, 3, 3, 3, 2, 2, 2, 1]);
        let owner: Vec<usize> =
            d.degrees().iter().enumerate().flat_map(|(j, &dj)| std::iter::repeat_n(j, dj as usize - 1)).collect();
        let n = d.n();
        let x_of = |b: &[usize]| {
            let mut x = vec![1u32; n];
            for &e in b {
                x[owner[e]] += 1;
            }
            tds(&x)
        };
        let h = |b: &[usize]| g_of_x(&d, &x_of(b)).unwrap();
        let big_n = owner.len();
        let mut alpha: f64 = 0.0;
        for a in (0..big_n).combinations(n - 2) {
            for out in (0..big_n).filter(|v| !a.contains(v)) {
                for pos in 0..a.len() {
                    let mut b = a.clone();
                    b[pos] = out;
                    b.sort_unstable();
                    alpha = alpha.max((h(&a) - h(&b)).abs());
                }
            }
        }
        let rep = subset_function_experiment(big_n, n - 2, h, alpha, 0, 3, 1).unwrap();
        assert!(rep.exhaustive && rep.valid);
        assert!(rep.k_within_bound(1e-12));
        assert!((rep.empirical_mean - to_f64(&expected_g_exact(&d).unwrap())).abs() < 1e-12);
    }
}
