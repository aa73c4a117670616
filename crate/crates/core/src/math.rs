//! Thin wrappers over `libm` plus a few cancellation-free special forms.

pub use libm::{exp, expm1, lgamma, log, log1p, pow, sqrt};

/// `e^x - 1 - x` without cancellation near zero.
pub fn exp_m1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // x^2/2! + x^3/3! + ...; |x| < 0.5 converges below 1e-17 in 20 terms.
        let mut term = x * x / 2.0;
        let mut sum = term;
        let mut k = 3.0;
        while k < 24.0 {
            term *= x / k;
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        expm1(x) - x
    }
}

/// `x^n` for a non-negative integer exponent with `0^0 = 1`.
pub fn powi(x: f64, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut base = x;
    let mut exp = n;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Binomial coefficient by cumulative multiplication; exact for `n` up to ~50.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for j in 0..k {
        c = c * f64::from(n - j) / f64::from(j + 1);
    }
    c
}

/// `C(n, k) p^k (1-p)^(n-k)`, switching to log space once the coefficient
/// could overflow.
pub fn binomial_pmf(n: u32, k: u32, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if n <= 60 {
        return binomial(n, k) * powi(p, k) * powi(1.0 - p, n - k);
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let ln_c = lgamma(nf + 1.0) - lgamma(kf + 1.0) - lgamma(nf - kf + 1.0);
    exp(ln_c + kf * log(p) + (nf - kf) * log1p(-p))
}
