//! Analytic quantities for graphs with given degrees: the correction parameters
//! `λ₀`, `λ(x)`, `μ(T)`, `μ̄(x)`, the exponents `f` and `g`, and log-space
//! estimates for `E τ_d`, `E τ_d(x)` and containment probabilities.
//!
//! Every estimate carries the magnitude of its error term with implied constant 1;
//! callers compare against `C · error_exponent`.

mod moments;

pub use moments::expected_g_exact;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::degseq::{DegreeSequence, TreeDegreeSequence};
use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;
use crate::numeric::{ln_binomial, ln_factorial, ln_falling, to_f64, KahanSum, LogSumExp};
use crate::trees::{enumerate_trees_with_cap, LabeledTree, DEFAULT_TREE_CAP};

/// Default multiplier applied to error exponents when judging agreement.
pub const DEFAULT_BAND_MULTIPLIER: f64 = 2.0;

/// Whether estimates refuse inputs outside the hypotheses of the asymptotic formulas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Permissive,
}

/// `ln` of an estimate, with the magnitude of its relative error exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub log_value: f64,
    pub error_exponent: f64,
    /// The hypotheses under which the error term is proved were met.
    pub condition_ok: bool,
}

impl AsymptoticEstimate {
    /// `exp(log_value)`; may overflow to infinity.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    /// `|truth_log − log_value| ≤ c · error_exponent`.
    pub fn within_band(&self, truth_log: f64, c: f64) -> bool {
        (truth_log - self.log_value).abs() <= c * self.error_exponent
    }
}

/// Parameters of a tree `T` with degrees `x` against `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeParameters {
    pub lambda0: BigRational,
    pub lambda_x: BigRational,
    pub mu_t: BigRational,
    pub mu_bar: BigRational,
    pub f: f64,
    pub g: f64,
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `(d̄ − 2)`, computed as `(2m − 2n)/n`; errors unless positive.
fn excess_per_vertex(d: &DegreeSequence) -> Result<f64> {
    let e = d.excess();
    if e <= 0 {
        return Err(Error::Domain(format!("mean degree {} must exceed 2", d.mean())));
    }
    Ok(e as f64 / d.n() as f64)
}

/// `m − n + 1 = ((d̄−2)n + 2)/2`, the edge count of a graph with degrees `d − x`.
fn residual_edges(d: &DegreeSequence) -> i64 {
    d.excess() / 2 + 1
}

fn check_x(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<()> {
    x.check_suitable(d)
}

/// `num / den`, where `den = 0` only when `d − x` has no edges and so `num = 0`.
fn residual_ratio(num: BigInt, den: i64) -> BigRational {
    if den == 0 {
        debug_assert!(num.is_zero());
        return BigRational::zero();
    }
    BigRational::new(num, big(den))
}

fn residual_ratio_f64(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `λ₀ = Σ (d_j)_2 / (2 d̄ n)`.
pub fn lambda0(d: &DegreeSequence) -> BigRational {
    let num: i64 = d.degrees().iter().map(|&v| v as i64 * (v as i64 - 1)).sum();
    BigRational::new(big(num), big(2 * d.degree_sum() as i64))
}

/// `λ(x) = Σ (d_j − x_j)_2 / (2(d̄−2)n + 4)`.
///
/// For suitable `x` the denominator is `4(m − n + 1) ≥ 0`; it vanishes only when
/// `x = d`, and then `λ(x) = 0`. The same convention applies to `μ(T)` and `μ̄(x)`.
pub fn lambda_x(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<BigRational> {
    check_x(d, x)?;
    Ok(residual_ratio(big(lambda_x_numerator(d, x)), 4 * residual_edges(d)))
}

fn lambda_x_numerator(d: &DegreeSequence, x: &TreeDegreeSequence) -> i64 {
    d.degrees()
        .iter()
        .zip(x.as_slice())
        .map(|(&dj, &xj)| {
            let g = dj as i64 - xj as i64;
            g * (g - 1)
        })
        .sum()
}

/// `μ(T) = Σ_{{i,j} ∈ E(T)} (d_i − x_i)(d_j − x_j) / ((d̄−2)n + 2)`, with `x` the degrees of `T`.
pub fn mu_tree(d: &DegreeSequence, t: &LabeledTree) -> Result<BigRational> {
    let x = t.degree_sequence();
    check_x(d, &x)?;
    Ok(residual_ratio(big(mu_tree_numerator(d, &x, t)), 2 * residual_edges(d)))
}

fn mu_tree_numerator(d: &DegreeSequence, x: &TreeDegreeSequence, t: &LabeledTree) -> i64 {
    let spare: Vec<i64> = d.degrees().iter().zip(x.as_slice()).map(|(&a, &b)| a as i64 - b as i64).collect();
    t.edges().iter().map(|&(u, v)| spare[u as usize] * spare[v as usize]).sum()
}

/// `Σ_{j≠k} (x_j−1)(d_j−x_j)(d_k−x_k)`.
fn mu_bar_numerator(d: &DegreeSequence, x: &TreeDegreeSequence) -> i128 {
    let spare: Vec<i128> = d.degrees().iter().zip(x.as_slice()).map(|(&a, &b)| a as i128 - b as i128).collect();
    let total: i128 = spare.iter().sum();
    x.as_slice().iter().zip(&spare).map(|(&xj, &s)| (xj as i128 - 1) * s * (total - s)).sum()
}

/// Mean of `μ(T)` over `T_x`:
/// `Σ_{j≠k} (x_j−1)(d_j−x_j)(d_k−x_k) / ((n−2)((d̄−2)n+2))`.
pub fn mu_bar(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<BigRational> {
    check_x(d, x)?;
    let n = d.n() as i64;
    if n < 3 {
        return Err(Error::Domain("mu_bar needs n >= 3".into()));
    }
    Ok(residual_ratio(BigInt::from(mu_bar_numerator(d, x)), (n - 2) * 2 * residual_edges(d)))
}

/// `(1/n) Σ (x_j−1)(d_j−x_j)`, the leading-order form of `μ̄(x)`.
pub fn mu_bar_approx(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<BigRational> {
    check_x(d, x)?;
    Ok(BigRational::new(big(mu_bar_approx_numerator(d, x)), big(d.n() as i64)))
}

fn mu_bar_approx_numerator(d: &DegreeSequence, x: &TreeDegreeSequence) -> i64 {
    d.degrees().iter().zip(x.as_slice()).map(|(&dj, &xj)| (xj as i64 - 1) * (dj as i64 - xj as i64)).sum()
}

/// `f(x) = λ₀ + λ₀² − λ(x) − λ(x)²`.
pub fn f_exact(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<BigRational> {
    let l0 = lambda0(d);
    let lx = lambda_x(d, x)?;
    Ok(&l0 + &l0 * &l0 - &lx - &lx * &lx)
}

/// `g(x) = f(x) − μ̄(x)`.
pub fn g_exact(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<BigRational> {
    Ok(f_exact(d, x)? - mu_bar(d, x)?)
}

pub fn f_of_x(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<f64> {
    check_x(d, x)?;
    let (l0, lx) = lambdas_f64(d, x);
    Ok(l0 + l0 * l0 - lx - lx * lx)
}

/// `g(x)` in floating point from exact integer numerators; for bulk evaluation.
pub fn g_of_x(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<f64> {
    let f = f_of_x(d, x)?;
    let n = d.n() as f64;
    if d.n() < 3 {
        return Err(Error::Domain("g needs n >= 3".into()));
    }
    let mu = residual_ratio_f64(mu_bar_numerator(d, x) as f64, (n - 2.0) * 2.0 * residual_edges(d) as f64);
    Ok(f - mu)
}

fn lambdas_f64(d: &DegreeSequence, x: &TreeDegreeSequence) -> (f64, f64) {
    let l0num: i64 = d.degrees().iter().map(|&v| v as i64 * (v as i64 - 1)).sum();
    let l0 = l0num as f64 / (2.0 * d.degree_sum() as f64);
    let lx = residual_ratio_f64(lambda_x_numerator(d, x) as f64, 4.0 * residual_edges(d) as f64);
    (l0, lx)
}

pub fn tree_parameters(d: &DegreeSequence, t: &LabeledTree) -> Result<TreeParameters> {
    let x = t.degree_sequence();
    let lambda0 = lambda0(d);
    let lambda_x = lambda_x(d, &x)?;
    let mu_t = mu_tree(d, t)?;
    let mu_bar = mu_bar(d, &x)?;
    let f = &lambda0 + &lambda0 * &lambda0 - &lambda_x - &lambda_x * &lambda_x;
    let g = &f - &mu_bar;
    Ok(TreeParameters { f: to_f64(&f), g: to_f64(&g), lambda0, lambda_x, mu_t, mu_bar })
}

/// `β(x)`, the mean of `e^{−μ(T)}` over `T_x`, by enumeration.
pub fn beta_exact(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<f64> {
    beta_exact_with_cap(d, x, DEFAULT_TREE_CAP)
}

pub fn beta_exact_with_cap(d: &DegreeSequence, x: &TreeDegreeSequence, cap: u64) -> Result<f64> {
    check_x(d, x)?;
    let den = 2.0 * residual_edges(d) as f64;
    let mut acc = LogSumExp::default();
    for t in enumerate_trees_with_cap(x, cap)? {
        acc.push(-residual_ratio_f64(mu_tree_numerator(d, x, &t) as f64, den));
    }
    Ok(acc.ln_mean().exp())
}

/// `β(x) ≈ e^{−μ̄(x)}`. The error exponent is the smaller of
/// `min{d_max⁴/((d̄−2)²n), d_max³ ln n/((d̄−2)n)}` and `d_max(d̄−2) + d_max²/((d̄−2)n)`.
pub fn beta_approx(d: &DegreeSequence, x: &TreeDegreeSequence) -> Result<AsymptoticEstimate> {
    let e = excess_per_vertex(d)?;
    let mb = to_f64(&mu_bar(d, x)?);
    let n = d.n() as f64;
    let dm = d.max_degree() as f64;
    let concentration = (dm.powi(4) / (e * e * n)).min(dm.powi(3) * n.ln() / (e * n));
    let sandwich = dm * e + dm * dm / (e * n);
    Ok(AsymptoticEstimate {
        log_value: -mb,
        error_exponent: concentration.min(sandwich),
        condition_ok: d.excess_condition_holds(),
    })
}

/// Estimate of the number of simple graphs with degrees `g` sharing no edge with `forbidden`:
/// `(2m)!/(m! 2^m Π g_i!) · exp(−λ − λ² − μ)` with `λ = Σ(g_i)_2/(4m)`,
/// `μ = Σ_{ij ∈ X} g_i g_j/(2m)`. Error exponent `Δ̂²/m` where
/// `Δ̂ = 2 + g_max(3g_max/2 + x_max + 1)`; `condition_ok` records `Δ̂ < 2m/3`.
pub fn estimate_simple_graph_count(g: &[u32], forbidden: &SimpleGraph) -> Result<AsymptoticEstimate> {
    if g.len() != forbidden.n() {
        return Err(Error::Domain(format!("g has {} entries, X has {} vertices", g.len(), forbidden.n())));
    }
    let sum: u64 = g.iter().map(|&v| v as u64).sum();
    if !sum.is_multiple_of(2) {
        return Err(Error::InvalidDegrees(format!("degree sum {sum} is odd")));
    }
    let g_max = g.iter().copied().max().unwrap_or(0) as f64;
    if g_max < 1.0 {
        return Err(Error::Domain("g_max must be at least 1".into()));
    }
    let m = sum / 2;
    let mf = m as f64;
    let x_max = forbidden.degrees().into_iter().max().unwrap_or(0) as f64;
    let delta_hat = 2.0 + g_max * (1.5 * g_max + x_max + 1.0);
    let lambda: f64 = g.iter().map(|&v| v as f64 * (v as f64 - 1.0)).sum::<f64>() / (4.0 * mf);
    let mu: f64 =
        forbidden.edges().iter().map(|&(u, v)| g[u as usize] as f64 * g[v as usize] as f64).sum::<f64>() / (2.0 * mf);
    let mut lead = KahanSum::default();
    lead.add(ln_factorial(sum));
    lead.add(-ln_factorial(m));
    lead.add(-mf * std::f64::consts::LN_2);
    for &v in g {
        lead.add(-ln_factorial(v as u64));
    }
    Ok(AsymptoticEstimate {
        log_value: lead.value() - lambda - lambda * lambda - mu,
        error_exponent: delta_hat * delta_hat / mf,
        condition_ok: 3.0 * delta_hat < 2.0 * mf,
    })
}

/// Estimate of `P(d, T)`, the probability that a uniform graph with degrees `d` contains `T`:
/// `(dn/2)_{n−1} 2^{n−1} / (dn)_{2n−2} · Π (d_j)_{x_j} · exp(f(x) − μ(T))`,
/// error exponent `d_max⁴/((d̄−2)n)`.
pub fn estimate_containment_probability(d: &DegreeSequence, t: &LabeledTree) -> Result<AsymptoticEstimate> {
    let e = excess_per_vertex(d)?;
    let x = t.degree_sequence();
    check_x(d, &x)?;
    let n = d.n() as u64;
    let m = d.edge_count();
    let mut acc = KahanSum::default();
    acc.add(ln_falling(m, n - 1));
    acc.add((n - 1) as f64 * std::f64::consts::LN_2);
    acc.add(-ln_falling(2 * m, 2 * n - 2));
    for (&dj, &xj) in d.degrees().iter().zip(x.as_slice()) {
        acc.add(ln_falling(dj as u64, xj as u64));
    }
    let f = f_of_x(d, &x)?;
    let mu = to_f64(&mu_tree(d, t)?);
    let dm = d.max_degree() as f64;
    Ok(AsymptoticEstimate {
        log_value: acc.value() + f - mu,
        error_exponent: dm.powi(4) / (e * d.n() as f64),
        condition_ok: d.excess_condition_holds(),
    })
}

/// `ln H_d` for
/// `H_d = (d̄−1)^{1/2} / ((d̄−2)^{3/2} n) · ( d̂ (d̄−1)^{d̄−1} / (d̄^{d̄/2} (d̄−2)^{d̄/2−1}) )^n`.
pub fn h_d_log(d: &DegreeSequence) -> Result<f64> {
    h_d_log_with_floor(d, 0.0)
}

/// As [`h_d_log`], refusing `d̄ − 2 ≤ floor`.
pub fn h_d_log_with_floor(d: &DegreeSequence, floor: f64) -> Result<f64> {
    let e = excess_per_vertex(d)?;
    if e <= floor {
        return Err(Error::Domain(format!("d̄ − 2 = {e} is at or below the floor {floor}")));
    }
    let n = d.n() as f64;
    let db = d.mean_f64();
    let per_vertex =
        d.log_geometric_mean() + (db - 1.0) * (db - 1.0).ln() - 0.5 * db * db.ln() - (0.5 * db - 1.0) * e.ln();
    Ok(0.5 * (db - 1.0).ln() - 1.5 * e.ln() - n.ln() + n * per_vertex)
}

/// `(6d̄²−14d̄+7)/(4(d̄−1)²) + R/(2(d̄−1)³) + (2d̄²−4d̄+1)R²/(4(d̄−1)⁴d̄²)`.
pub fn correction_exponent(d_bar: f64, r: f64) -> f64 {
    let c = d_bar - 1.0;
    (6.0 * d_bar * d_bar - 14.0 * d_bar + 7.0) / (4.0 * c * c)
        + r / (2.0 * c.powi(3))
        + (2.0 * d_bar * d_bar - 4.0 * d_bar + 1.0) * r * r / (4.0 * c.powi(4) * d_bar * d_bar)
}

/// Closed form for `E g(X)`. Here `log_value` holds `E g(X)` itself (the log of
/// `e^{E g(X)}`); the error exponent is `d_max³/(d̄n)`.
pub fn expected_g_closed_form(d: &DegreeSequence) -> Result<AsymptoticEstimate> {
    excess_per_vertex(d)?;
    let db = d.mean_f64();
    let r = to_f64(&d.variance());
    let dm = d.max_degree() as f64;
    Ok(AsymptoticEstimate {
        log_value: correction_exponent(db, r),
        error_exponent: dm.powi(3) / (db * d.n() as f64),
        condition_ok: d.excess_condition_holds(),
    })
}

fn check_mode(d: &DegreeSequence, mode: Mode) -> Result<bool> {
    excess_per_vertex(d)?;
    let ok = d.excess_condition_holds();
    if !ok && mode == Mode::Strict {
        return Err(Error::Precondition(format!(
            "d_max^4 = {} exceeds (d̄−2)n = {}",
            (d.max_degree() as u64).pow(4),
            d.excess()
        )));
    }
    Ok(ok)
}

/// `d_max⁴/((d̄−2)n) + η`.
fn main_error(d: &DegreeSequence) -> Result<f64> {
    let dm = d.max_degree() as f64;
    Ok(dm.powi(4) / d.excess() as f64 + d.eta()?.value())
}

/// `ln E τ_d ≈ ln H_d + correction_exponent(d̄, R)`.
pub fn expected_tau_asymptotic(d: &DegreeSequence, mode: Mode) -> Result<AsymptoticEstimate> {
    let condition_ok = check_mode(d, mode)?;
    let r = to_f64(&d.variance());
    Ok(AsymptoticEstimate {
        log_value: h_d_log(d)? + correction_exponent(d.mean_f64(), r),
        error_exponent: main_error(d)?,
        condition_ok,
    })
}

/// `ln E τ_d(x) ≈ ln H_d − ln C((d̄−1)n, n−2) + Σ ln C(d_j−1, x_j−1) + λ₀ + λ₀² − λ(x) − λ(x)²
/// − (1/n)Σ(x_j−1)(d_j−x_j)`.
pub fn expected_tau_for_tree_degrees(
    d: &DegreeSequence,
    x: &TreeDegreeSequence,
    mode: Mode,
) -> Result<AsymptoticEstimate> {
    let condition_ok = check_mode(d, mode)?;
    check_x(d, x)?;
    let n = d.n() as u64;
    let mut acc = KahanSum::default();
    acc.add(h_d_log(d)?);
    acc.add(-ln_binomial(d.ground_set_size(), n - 2));
    for (&dj, &xj) in d.degrees().iter().zip(x.as_slice()) {
        acc.add(ln_binomial(dj as u64 - 1, xj as u64 - 1));
    }
    acc.add(f_of_x(d, x)?);
    acc.add(-(mu_bar_approx_numerator(d, x) as f64) / n as f64);
    Ok(AsymptoticEstimate { log_value: acc.value(), error_exponent: main_error(d)?, condition_ok })
}

/// Estimate for `d̄ = 2 + 2x/n`, i.e. `x = m − n`:
/// `ln E τ_d ≈ −ln n + x(1 − ln 2) + (3/2 + x) ln(n/(2x)) + n ln(d̂/2) + (6+R)(2+R)/16 + 3x²/(2n)`,
/// error exponent `d_max⁴/x + x³/n²`. The hypotheses are `d_max⁴/2 ≤ x ≤ √n`.
pub fn expected_tau_near_two(d: &DegreeSequence, x_param: f64, mode: Mode) -> Result<AsymptoticEstimate> {
    let n = d.n() as f64;
    let x_true = d.edge_count() as f64 - n;
    if !(x_param.is_finite() && (x_param - x_true).abs() <= 1e-9 * x_true.abs().max(1.0)) {
        return Err(Error::Domain(format!("x = {x_param} is inconsistent with m − n = {x_true}")));
    }
    if x_true <= 0.0 {
        return Err(Error::Domain(format!("mean degree {} must exceed 2", d.mean())));
    }
    let x = x_true;
    let dm = d.max_degree() as f64;
    let condition_ok = dm.powi(4) / 2.0 <= x && x <= n.sqrt();
    if !condition_ok && mode == Mode::Strict {
        return Err(Error::Precondition(format!("need d_max^4/2 <= x <= sqrt(n); x = {x}, n = {n}")));
    }
    let r = to_f64(&d.variance());
    let log_value = -n.ln()
        + x * (1.0 - std::f64::consts::LN_2)
        + (1.5 + x) * (n / (2.0 * x)).ln()
        + n * (d.log_geometric_mean() - std::f64::consts::LN_2)
        + (6.0 + r) * (2.0 + r) / 16.0
        + 1.5 * x * x / n;
    Ok(AsymptoticEstimate { log_value, error_exponent: dm.powi(4) / x + x.powi(3) / (n * n), condition_ok })
}

/// Exact `Σ_x P(X = x) g(x)` by enumerating suitable `x`; oracle for [`expected_g_exact`].
pub fn expected_g_by_enumeration(d: &DegreeSequence) -> Result<BigRational> {
    use crate::numeric::binomial;
    let total = binomial(d.ground_set_size(), d.n() as u64 - 2);
    let mut acc = BigRational::zero();
    for x in d.enumerate_suitable()? {
        let mut w = num_bigint::BigUint::from(1u32);
        for (&dj, &xj) in d.degrees().iter().zip(x.as_slice()) {
            w *= binomial(dj as u64 - 1, xj as u64 - 1);
        }
        acc += BigRational::from_integer(w.into()) * g_exact(d, &x)?;
    }
    Ok(acc / BigRational::from_integer(total.into()))
}

#[cfg(test)]
mod tests;
