//! Small numeric helpers: standard normal density/CDF, summary statistics
//! and the Kolmogorov-Smirnov distance used by the normality diagnostic.

use std::f64::consts::PI;

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Second derivative of the standard normal density, `phi(x) (x^2 - 1)`.
pub fn std_normal_pdf_dd(x: f64) -> f64 {
    std_normal_pdf(x) * (x * x - 1.0)
}

/// Standard normal CDF via the error function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (normalized by the number of samples).
pub fn population_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (normalized by n - 1).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Kolmogorov-Smirnov distance between the empirical distribution of `xs`
/// and the standard normal.
pub fn ks_distance_to_std_normal(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample"));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let cdf = std_normal_cdf(*x);
        let lower = i as f64 / n;
        let upper = (i + 1) as f64 / n;
        sup = sup.max((cdf - lower).abs()).max((upper - cdf).abs());
    }
    sup
}

/// Least-squares slope of `ys` against `xs`.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
