//! Small numerical kernels shared by the estimators and metrics.

use num_rational::Ratio;

/// Largest `n` for which binomial coefficients are evaluated in exact
/// integer arithmetic. `C(64, 32)` is below `u64::MAX`, so every
/// intermediate in [`binomial`] fits comfortably in `u128`.
pub const EXACT_BINOMIAL_LIMIT: u64 = 64;

/// `ln(mean_i exp(x_i))`, shifted by the maximum and evaluated through
/// `expm1`/`ln_1p` so that nearly-equal inputs keep full relative precision.
///
/// Returns `None` for an empty slice.
pub fn log_mean_exp(xs: &[f64]) -> Option<f64> {
    let m = max_of(xs)?;
    let n = xs.len() as f64;
    let s: f64 = xs.iter().map(|&x| (x - m).exp_m1()).sum::<f64>() / n;
    Some(m + s.ln_1p())
}

/// `ln(sum_i w_i exp(x_i))` for a probability vector `w`.
///
/// Uses the same shifted `expm1`/`ln_1p` form as [`log_mean_exp`], which
/// relies on `sum_i w_i = 1`.
pub fn weighted_log_mean_exp(weights: &[f64], xs: &[f64]) -> Option<f64> {
    debug_assert_eq!(weights.len(), xs.len());
    let m = max_of(xs)?;
    let s: f64 = weights
        .iter()
        .zip(xs)
        .map(|(&w, &x)| w * (x - m).exp_m1())
        .sum();
    Some(m + s.ln_1p())
}

fn max_of(xs: &[f64]) -> Option<f64> {
    xs.iter().copied().reduce(f64::max)
}

/// Exact `C(n, k)` for `n <= 64`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    assert!(
        n <= EXACT_BINOMIAL_LIMIT,
        "exact binomial limited to n <= 64"
    );
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `C(a, b) / C(n, b)` with the convention `C(a, b) = 0` for `a < b`.
///
/// Exact integer arithmetic for `n <= 64`, converting only the final
/// reduced ratio; otherwise a running floating product.
pub fn binomial_ratio(a: u64, n: u64, b: u64) -> f64 {
    debug_assert!(a <= n);
    if a < b {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        ratio_to_f64(&Ratio::new(binomial(a, b), binomial(n, b)))
    } else {
        (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (n - i) as f64)
    }
}

/// Nearest-ish `f64` to a non-negative rational: a single rounding when
/// both parts fit the 53-bit mantissa, otherwise quotient plus remainder.
pub fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    let (n, d) = (*r.numer(), *r.denom());
    if n < (1 << 53) && d < (1 << 53) {
        n as f64 / d as f64
    } else {
        (n / d) as f64 + (n % d) as f64 / d as f64
    }
}
