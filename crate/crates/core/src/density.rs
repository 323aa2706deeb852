//! The two-step error-density estimator and its oracle counterpart.
//!
//! The feasible estimator smooths estimated residuals from the regression
//! step; the oracle estimator applies the same construction to the true
//! errors and is available only in simulations. Both normalize by the
//! count of observations that enter the sum, so each curve is a proper
//! density.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::regression::LooFit;

/// A density estimate evaluated on a point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub b1: f64,
    /// Number of observations entering the sum (trimmed-in and, for the
    /// feasible estimator, with a defined fit).
    pub n_used: usize,
}

impl DensityCurve {
    /// Trapezoid integral over the stored grid.
    pub fn trapezoid_integral(&self) -> f64 {
        let mut total = 0.0;
        for w in self.grid.windows(2).zip(self.values.windows(2)) {
            let (g, v) = w;
            total += 0.5 * (g[1] - g[0]) * (v[0] + v[1]);
        }
        total
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Feasible two-step estimator: kernel density of the estimated residuals
/// over trimmed-in observations with a defined fit.
///
/// `f_hat(e) = sum_i K1((r_i - e)/b1) / (b1 * count)` with i running over
/// usable observations in ascending order.
pub fn feasible_density(
    fit: &LooFit,
    mask: &[bool],
    e_points: &[f64],
    b1: f64,
    k1: &KernelSpec,
) -> Result<DensityCurve> {
    if mask.len() != fit.residuals.len() {
        return Err(Error::DimensionMismatch {
            expected: fit.residuals.len(),
            got: mask.len(),
        });
    }
    let usable: Vec<f64> = fit
        .residuals
        .iter()
        .zip(mask.iter().zip(&fit.defined))
        .filter(|(_, (m, def))| **m && **def)
        .map(|(r, _)| *r)
        .collect();
    kde_curve(&usable, e_points, b1, k1)
}

/// Oracle estimator: the same construction on the true errors, with no
/// defined-fit restriction.
pub fn oracle_density(
    errors: &[f64],
    mask: &[bool],
    e_points: &[f64],
    b1: f64,
    k1: &KernelSpec,
) -> Result<DensityCurve> {
    if mask.len() != errors.len() {
        return Err(Error::DimensionMismatch {
            expected: errors.len(),
            got: mask.len(),
        });
    }
    let usable: Vec<f64> = errors
        .iter()
        .zip(mask)
        .filter(|(_, m)| **m)
        .map(|(e, _)| *e)
        .collect();
    kde_curve(&usable, e_points, b1, k1)
}

fn kde_curve(usable: &[f64], e_points: &[f64], b1: f64, k1: &KernelSpec) -> Result<DensityCurve> {
    if !b1.is_finite() || b1 <= 0.0 {
        return Err(Error::NonPositiveBandwidth(b1));
    }
    if usable.is_empty() {
        return Err(Error::EmptyTrimSet);
    }
    if e_points.is_empty() {
        return Err(Error::EmptyInput("evaluation points"));
    }
    let count = usable.len() as f64;
    let values = e_points
        .iter()
        .map(|&e| {
            let mut sum = 0.0;
            for &r in usable {
                sum += k1.eval((r - e) / b1);
            }
            sum / (b1 * count)
        })
        .collect();
    Ok(DensityCurve {
        grid: e_points.to_vec(),
        values,
        b1,
        n_used: usable.len(),
    })
}

/// Equispaced grid of `m` points covering the full support of a kernel
/// density estimate built from `values` at bandwidth `b1`.
pub fn default_grid(values: &[f64], b1: f64, k1: &KernelSpec, m: usize) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("residuals for grid construction"));
    }
    if m < 2 {
        return Err(Error::EmptyInput("grid size must be at least 2"));
    }
    let reach = b1 * k1.support_radius();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - reach;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + reach;
    let step = (hi - lo) / (m - 1) as f64;
    Ok((0..m).map(|i| lo + step * i as f64).collect())
}

/// Asymptotic centering and variance of the feasible estimator at a point.
///
/// Given the true density `f`, its second derivative `f2` and the
/// probability `p_x0` of falling in the trim region, returns
/// `(f(e) + b1^2/2 * f''(e) * moment_v2, f(e) * l2_norm / p_x0)`; the
/// variance is that of `sqrt(n b1) (f_hat(e) - center)`.
pub fn asymptotic_center_and_variance<F, G>(
    f: F,
    f2: G,
    e: f64,
    b1: f64,
    p_x0: f64,
    k1: &KernelSpec,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !p_x0.is_finite() || p_x0 <= 0.0 || p_x0 > 1.0 {
        return Err(Error::InvalidTrimProbability(p_x0));
    }
    if b1.is_nan() || b1 < 0.0 {
        return Err(Error::NonPositiveBandwidth(b1));
    }
    let fe = f(e);
    let center = fe + 0.5 * b1 * b1 * f2(e) * k1.moment_v2();
    let variance = fe * k1.l2_norm() / p_x0;
    Ok((center, variance))
}
