//! Special functions needed by the counting-statistics code.

/// Table size for exact `ln k!` by summation.
const LN_FACT_TABLE: usize = 256;

/// `ln(k!)`.
///
/// Exact summation below 256, Stirling series (to x^-7) above, where the
/// truncation error is far below f64 resolution.
pub fn ln_factorial(k: u64) -> f64 {
    if (k as usize) < LN_FACT_TABLE {
        (2..=k).map(|i| (i as f64).ln()).sum()
    } else {
        ln_gamma_plus_one(k as f64)
    }
}

/// `ln Γ(x + 1)` for real `x ≥ 10` via the Stirling series.
pub(crate) fn ln_gamma_plus_one(x: f64) -> f64 {
    debug_assert!(x >= 10.0);
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Binomial probability `C(n,k) p^k (1-p)^(n-k)` with exact handling of
/// `p ∈ {0, 1}`.
pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    (ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
