//! Two-step kernel estimation of the density of regression errors.
//!
//! Given a sample from `Y = m(X) + e` with unknown smooth `m`, the pipeline
//! estimates the density of `e` in two steps: a leave-one-out
//! Nadaraya-Watson fit produces estimated residuals, and a kernel density
//! estimate over the residuals of trimmed-in observations produces the
//! error density. The crate also provides the bandwidth formulas the
//! procedure calls for, rate and assumption diagnostics, and a seeded
//! Monte Carlo harness that measures both the feasible estimator and its
//! oracle counterpart built from the true errors.
//!
//! The underlying theory assumes smoothness and moment conditions on the
//! population objects — a twice-differentiable regression function and
//! covariate density, errors independent of the covariates with finite
//! sixth moments, a twice-differentiable error density. Those are
//! properties of the data-generating process and are not machine-checked;
//! the bandwidth growth conditions, which are checkable at a given sample
//! size, are surfaced by [`bandwidth::assumption_diagnostics`].
//!
//! ```
//! use resdens::{
//!     default_grid, feasible_density, loo_nadaraya_watson, trim_mask,
//!     BandwidthPlan, KernelSpec, SampleSet, TrimBox,
//! };
//!
//! let x = vec![0.05, 0.15, 0.3, 0.45, 0.55, 0.7, 0.85, 0.95];
//! let y = vec![1.1, 1.6, 2.0, 2.1, 1.9, 1.7, 1.4, 0.9];
//! let data = SampleSet::univariate(x, y)?;
//!
//! let k = KernelSpec::biweight();
//! let plan = BandwidthPlan::explicit(0.3, 0.4)?;
//! let fit = loo_nadaraya_watson(&data, plan.b0, &k)?;
//! let mask = trim_mask(&data, &TrimBox::unit_margin(1, 0.001)?)?;
//!
//! let grid = default_grid(&fit.residuals, plan.b1, &k, 128)?;
//! let curve = feasible_density(&fit, &mask, &grid, plan.b1, &k)?;
//! assert!((curve.trapezoid_integral() - 1.0).abs() < 1e-3);
//! # Ok::<(), resdens::Error>(())
//! ```

pub mod bandwidth;
pub mod density;
pub mod error;
pub mod kernel;
pub mod quad;
pub mod regression;
pub mod simulation;
pub mod stat;

/// Library version, reported by consumers for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use bandwidth::{
    amse_proxy, assumption_diagnostics, optimal_b0, rate_regime, rn_remainder, silverman_b1,
    AssumptionFlags, B0Branch, BandwidthPlan, BandwidthRule, RateRegime,
};
pub use density::{
    asymptotic_center_and_variance, default_grid, feasible_density, oracle_density, DensityCurve,
};
pub use error::{Error, Result};
pub use kernel::{KernelFamily, KernelSpec, MomentReport};
pub use regression::{loo_nadaraya_watson, trim_mask, LooFit, SampleSet, TrimBox};
pub use simulation::{
    emit_density_curves, generate, normality_diagnostic, run_monte_carlo, run_monte_carlo_with,
    CurveSet, DiagnosticReport, EstimatorKind, GeneratedSample, McReport, McRow, Model,
    RegressionMode, SigmaSource,
};
