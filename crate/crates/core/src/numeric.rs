//! Exact and log-space arithmetic shared by the rest of the crate.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational used for every closed-form combinatorial quantity.
pub type ExactRational = BigRational;

/// Exact nonnegative integer count.
pub type BigCount = BigUint;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerator or denominator: go through logs.
    let sign = if q.numer().sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
    let ln = ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude());
    sign * ln.exp()
}

/// Falling factorial `(a)_k = a (a-1) ... (a-k+1)`, with `(a)_0 = 1`.
///
/// For `a >= 0` and `k > a` the product passes through zero, so the result is 0.
pub fn falling(a: i64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        let f = a - i as i64;
        if f == 0 {
            return BigInt::zero();
        }
        acc *= f;
    }
    acc
}

pub fn falling_rational(a: i64, k: u64) -> BigRational {
    BigRational::from_integer(falling(a, k))
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of a big unsigned integer; `-inf` for zero.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

const LN_FACT_TABLE: usize = 512;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = KahanSum::default();
        out.push(0.0);
        for k in 1..LN_FACT_TABLE {
            acc.add((k as f64).ln());
            out.push(acc.value());
        }
        out
    })
}

/// `ln Γ(x)` for `x >= 1` via the Stirling series; accurate to a few ulps once x > 10.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 15.0 {
        // Shift up with the recurrence Γ(x+1) = x Γ(x).
        let mut prod = 1.0;
        let mut y = x;
        while y < 15.0 {
            prod *= y;
            y += 1.0;
        }
        return ln_gamma(y) - prod.ln();
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

pub fn ln_factorial(k: u64) -> f64 {
    if (k as usize) < LN_FACT_TABLE {
        ln_fact_table()[k as usize]
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

/// `ln (a)_k` for `a >= k`. Short products are summed directly with compensation.
pub fn ln_falling(a: u64, k: u64) -> f64 {
    assert!(k <= a, "ln_falling needs k <= a ({k} > {a})");
    if k <= 64 {
        let mut acc = KahanSum::default();
        for i in 0..k {
            acc.add(((a - i) as f64).ln());
        }
        acc.value()
    } else {
        ln_factorial(a) - ln_factorial(a - k)
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Compensated (Kahan–Babuška) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Streaming `ln Σ exp(v_i)` with a running shift. Mergeable, so workers can
/// reduce independently and combine in a fixed order.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    shift: f64,
    scaled: f64,
    count: u64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self { shift: f64::NEG_INFINITY, scaled: 0.0, count: 0 }
    }
}

impl LogSumExp {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.shift {
            self.scaled = self.scaled * (self.shift - v).exp() + 1.0;
            self.shift = v;
        } else {
            self.scaled += (v - self.shift).exp();
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        self.count += other.count;
        if other.shift == f64::NEG_INFINITY {
            return;
        }
        if other.shift > self.shift {
            self.scaled = self.scaled * (self.shift - other.shift).exp() + other.scaled;
            self.shift = other.shift;
        } else {
            self.scaled += other.scaled * (other.shift - self.shift).exp();
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// `ln Σ exp(v_i)`.
    pub fn ln_sum(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.shift + self.scaled.ln()
        }
    }

    /// `ln( (1/k) Σ exp(v_i) )`.
    pub fn ln_mean(&self) -> f64 {
        self.ln_sum() - (self.count as f64).ln()
    }
}

pub fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = LogSumExp::default();
    for v in values {
        acc.push(v);
    }
    acc.ln_sum()
}
