//! Data generators and a seeded Monte Carlo harness.
//!
//! Two data-generating models are built in: a univariate sine regression
//! and a trivariate model mixing linear, quadratic and sine components,
//! both with standard normal errors and uniform designs. The harness runs
//! seeded replicates in parallel, producing bias/variance/MSE tables and
//! mean density curves for the feasible and oracle estimators, plus a
//! standardized-statistic diagnostic for the asymptotic-normality regime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bandwidth::{optimal_b0, silverman_b1};
use crate::density::{asymptotic_center_and_variance, feasible_density, oracle_density};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::regression::{loo_nadaraya_watson, trim_mask, LooFit, SampleSet, TrimBox};
use crate::stat::{
    ks_distance_to_std_normal, mean, population_variance, sample_sd, std_normal_pdf,
    std_normal_pdf_dd,
};

/// Trim margin used by the simulation models on the unit cube.
pub const TRIM_DELTA: f64 = 0.001;

/// Built-in data-generating models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `Y = 1 + sin(pi X) + e`, X ~ U[0,1], e ~ N(0,1).
    Sine1d,
    /// `Y = 1 + X1 + X2^2 + sin(pi X3) + e`, X ~ U[0,1]^3, e ~ N(0,1).
    Trivariate,
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Sine1d => 1,
            Model::Trivariate => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Sine1d => "sine1d",
            Model::Trivariate => "trivariate",
        }
    }

    /// The true regression function.
    pub fn regression(&self, x: &[f64]) -> f64 {
        match self {
            Model::Sine1d => 1.0 + (std::f64::consts::PI * x[0]).sin(),
            Model::Trivariate => 1.0 + x[0] + x[1] * x[1] + (std::f64::consts::PI * x[2]).sin(),
        }
    }

    /// Exact probability of the uniform design falling in the trim box.
    pub fn trim_probability(&self) -> f64 {
        (1.0 - 2.0 * TRIM_DELTA).powi(self.dim() as i32)
    }
}

/// A generated sample together with the realized errors.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSample {
    pub data: SampleSet,
    pub true_errors: Vec<f64>,
}

/// Draw a sample of size `n` from the model.
///
/// The stored errors are the realized `Y - m(X)`, recomputed after
/// rounding, so an oracle run and a true-regression run see bit-identical
/// inputs.
pub fn generate<R: Rng>(model: Model, n: usize, rng: &mut R) -> Result<GeneratedSample> {
    if n < 2 {
        return Err(Error::TooFewObservations { min: 2, got: n });
    }
    let d = model.dim();
    let mut x = Vec::with_capacity(n * d);
    let mut y = Vec::with_capacity(n);
    let mut true_errors = Vec::with_capacity(n);
    for _ in 0..n {
        let row_start = x.len();
        for _ in 0..d {
            x.push(rng.random::<f64>());
        }
        let m = model.regression(&x[row_start..]);
        let eps: f64 = rng.sample(StandardNormal);
        let yi = m + eps;
        y.push(yi);
        true_errors.push(yi - m);
    }
    Ok(GeneratedSample {
        data: SampleSet::new(x, d, y)?,
        true_errors,
    })
}

/// Whether replicates fit the regression or use the true function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionMode {
    /// Leave-one-out Nadaraya-Watson fit (the estimator under study).
    Standard,
    /// Substitute the true regression function; the feasible and oracle
    /// estimators then coincide exactly.
    OracleRegression,
}

/// Which sigma feeds the rule-of-thumb density bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSource {
    /// Sample SD of the generated errors (simulation default).
    TrueErrors,
    /// Sample SD of the usable estimated residuals from a pilot fit.
    Residuals,
}

/// Which estimator a Monte Carlo row refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Feasible,
    Oracle,
}

/// Bias/variance/MSE of one estimator at one evaluation point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    pub e: f64,
    pub estimator: EstimatorKind,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
}

/// Aggregated Monte Carlo results.
///
/// `variance` uses the population convention (divide by the replicate
/// count) so `mse = bias^2 + variance` holds as an identity row by row.
/// `b0_used`/`b1_used` are replicate averages: the bandwidths vary with
/// each replicate's error SD.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub model: &'static str,
    pub n: usize,
    pub reps: usize,
    pub c0: f64,
    pub seed: u64,
    pub mode: RegressionMode,
    pub rows: Vec<McRow>,
    pub b0_used: f64,
    pub b1_used: f64,
    pub excluded_replicates: usize,
}

impl McReport {
    pub fn row(&self, e: f64, estimator: EstimatorKind) -> Option<&McRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.e == e)
    }
}

/// Per-replicate RNG stream: one seed, replicate index as stream id.
fn replicate_rng(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

struct ReplicateOutcome {
    feasible: Vec<f64>,
    oracle: Vec<f64>,
    b0: f64,
    b1: f64,
}

/// Fraction of replicates that may fail with an empty usable set before
/// the whole run errors out.
const EXCLUSION_LIMIT: f64 = 0.10;

#[derive(Clone, Copy)]
struct ReplicateSettings {
    model: Model,
    n: usize,
    c0: f64,
    seed: u64,
    mode: RegressionMode,
    sigma_source: SigmaSource,
}

fn run_replicate(
    settings: &ReplicateSettings,
    rep: usize,
    e_points: &[f64],
    k: &KernelSpec,
) -> Result<Option<ReplicateOutcome>> {
    let ReplicateSettings {
        model,
        n,
        c0,
        seed,
        mode,
        sigma_source,
    } = *settings;
    let mut rng = replicate_rng(seed, rep);
    let sample = generate(model, n, &mut rng)?;
    let d = model.dim();

    let sigma = match sigma_source {
        SigmaSource::TrueErrors => sample_sd(&sample.true_errors),
        SigmaSource::Residuals => {
            // pilot fit at the usual regression-optimal order
            let pilot_b0 = (n as f64).powf(-1.0 / (d as f64 + 4.0));
            let pilot = loo_nadaraya_watson(&sample.data, pilot_b0, k)?;
            let usable: Vec<f64> = pilot
                .residuals
                .iter()
                .zip(&pilot.defined)
                .filter(|(_, def)| **def)
                .map(|(r, _)| *r)
                .collect();
            if usable.len() < 2 {
                return Ok(None);
            }
            sample_sd(&usable)
        }
    };
    if !sigma.is_finite() || sigma <= 0.0 {
        return Ok(None);
    }
    let b1 = silverman_b1(sigma, n)?;
    let (b0, _) = optimal_b0(n, d, b1, c0)?;

    let fit = match mode {
        RegressionMode::Standard => loo_nadaraya_watson(&sample.data, b0, k)?,
        RegressionMode::OracleRegression => {
            let m_hat: Vec<f64> = (0..n)
                .map(|i| model.regression(sample.data.row(i)))
                .collect();
            let residuals: Vec<f64> = sample
                .data
                .y()
                .iter()
                .zip(&m_hat)
                .map(|(y, m)| y - m)
                .collect();
            LooFit {
                m_hat,
                residuals,
                defined: vec![true; n],
                b0,
            }
        }
    };
    let bx = TrimBox::unit_margin(d, TRIM_DELTA)?;
    let mask = trim_mask(&sample.data, &bx)?;

    let feasible = match feasible_density(&fit, &mask, e_points, b1, k) {
        Ok(curve) => curve.values,
        Err(Error::EmptyTrimSet) => return Ok(None),
        Err(e) => return Err(e),
    };
    let oracle = match oracle_density(&sample.true_errors, &mask, e_points, b1, k) {
        Ok(curve) => curve.values,
        Err(Error::EmptyTrimSet) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(ReplicateOutcome {
        feasible,
        oracle,
        b0,
        b1,
    }))
}

/// Run seeded Monte Carlo replicates and aggregate bias, variance and MSE
/// of both estimators at each evaluation point.
///
/// Per replicate: generate data, pick b1 by the rule of thumb from the
/// replicate's error SD, pick b0 by the formula with the given `c0`, fit,
/// and evaluate both density estimators. Bias is measured against the
/// standard normal density. Replicates with an empty usable set are
/// excluded; more than 10% exclusions is an error.
///
/// Identical `(seed, settings)` produce bit-identical reports regardless
/// of thread count: replicates use independent RNG streams and are folded
/// in replicate order.
pub fn run_monte_carlo(
    model: Model,
    n: usize,
    reps: usize,
    c0: f64,
    e_points: &[f64],
    seed: u64,
    mode: RegressionMode,
) -> Result<McReport> {
    run_monte_carlo_with(
        model,
        n,
        reps,
        c0,
        e_points,
        seed,
        mode,
        SigmaSource::TrueErrors,
    )
}

/// As [`run_monte_carlo`], with an explicit choice of the sigma feeding
/// the rule-of-thumb bandwidth.
#[allow(clippy::too_many_arguments)]
pub fn run_monte_carlo_with(
    model: Model,
    n: usize,
    reps: usize,
    c0: f64,
    e_points: &[f64],
    seed: u64,
    mode: RegressionMode,
    sigma_source: SigmaSource,
) -> Result<McReport> {
    if reps < 2 {
        return Err(Error::TooFewReplicates { min: 2, got: reps });
    }
    if e_points.is_empty() {
        return Err(Error::EmptyInput("evaluation points"));
    }
    let k = KernelSpec::biweight();
    let settings = ReplicateSettings {
        model,
        n,
        c0,
        seed,
        mode,
        sigma_source,
    };

    let outcomes: Vec<Result<Option<ReplicateOutcome>>> = (0..reps)
        .into_par_iter()
        .map(|rep| run_replicate(&settings, rep, e_points, &k))
        .collect();

    let mut kept = Vec::with_capacity(reps);
    for outcome in outcomes {
        if let Some(o) = outcome? {
            kept.push(o);
        }
    }
    let excluded = reps - kept.len();
    let limit = (EXCLUSION_LIMIT * reps as f64).floor() as usize;
    if excluded > limit {
        return Err(Error::TooManyExcludedReplicates {
            excluded,
            reps,
            limit,
        });
    }

    let mut rows = Vec::with_capacity(2 * e_points.len());
    for (pi, &e) in e_points.iter().enumerate() {
        let truth = std_normal_pdf(e);
        for estimator in [EstimatorKind::Feasible, EstimatorKind::Oracle] {
            let values: Vec<f64> = kept
                .iter()
                .map(|o| match estimator {
                    EstimatorKind::Feasible => o.feasible[pi],
                    EstimatorKind::Oracle => o.oracle[pi],
                })
                .collect();
            let bias = mean(&values) - truth;
            let variance = population_variance(&values);
            let mse = values
                .iter()
                .map(|v| (v - truth) * (v - truth))
                .sum::<f64>()
                / values.len() as f64;
            rows.push(McRow {
                e,
                estimator,
                bias,
                variance,
                mse,
            });
        }
    }

    let b0_used = mean(&kept.iter().map(|o| o.b0).collect::<Vec<_>>());
    let b1_used = mean(&kept.iter().map(|o| o.b1).collect::<Vec<_>>());

    Ok(McReport {
        model: model.name(),
        n,
        reps,
        c0,
        seed,
        mode,
        rows,
        b0_used,
        b1_used,
        excluded_replicates: excluded,
    })
}

/// Pointwise Monte Carlo mean curves of both estimators plus the true
/// density, for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSet {
    pub grid: Vec<f64>,
    pub mean_feasible: Vec<f64>,
    pub mean_oracle: Vec<f64>,
    pub true_density: Vec<f64>,
    pub reps: usize,
    pub excluded_replicates: usize,
    pub b0_used: f64,
    pub b1_used: f64,
}

/// Mean feasible and oracle curves over seeded replicates, with the
/// standard normal density alongside.
pub fn emit_density_curves(
    model: Model,
    n: usize,
    reps: usize,
    c0: f64,
    grid: &[f64],
    seed: u64,
) -> Result<CurveSet> {
    if reps < 1 {
        return Err(Error::TooFewReplicates { min: 1, got: reps });
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput("curve grid"));
    }
    let k = KernelSpec::biweight();
    let settings = ReplicateSettings {
        model,
        n,
        c0,
        seed,
        mode: RegressionMode::Standard,
        sigma_source: SigmaSource::TrueErrors,
    };
    let outcomes: Vec<Result<Option<ReplicateOutcome>>> = (0..reps)
        .into_par_iter()
        .map(|rep| run_replicate(&settings, rep, grid, &k))
        .collect();
    let mut kept = Vec::with_capacity(reps);
    for outcome in outcomes {
        if let Some(o) = outcome? {
            kept.push(o);
        }
    }
    let excluded = reps - kept.len();
    let limit = (EXCLUSION_LIMIT * reps as f64).floor() as usize;
    if excluded > limit || kept.is_empty() {
        return Err(Error::TooManyExcludedReplicates {
            excluded,
            reps,
            limit,
        });
    }

    let count = kept.len() as f64;
    let mut mean_feasible = vec![0.0; grid.len()];
    let mut mean_oracle = vec![0.0; grid.len()];
    for o in &kept {
        for (acc, v) in mean_feasible.iter_mut().zip(&o.feasible) {
            *acc += v;
        }
        for (acc, v) in mean_oracle.iter_mut().zip(&o.oracle) {
            *acc += v;
        }
    }
    for v in &mut mean_feasible {
        *v /= count;
    }
    for v in &mut mean_oracle {
        *v /= count;
    }

    Ok(CurveSet {
        grid: grid.to_vec(),
        mean_feasible,
        mean_oracle,
        true_density: grid.iter().map(|&e| std_normal_pdf(e)).collect(),
        reps,
        excluded_replicates: excluded,
        b0_used: mean(&kept.iter().map(|o| o.b0).collect::<Vec<_>>()),
        b1_used: mean(&kept.iter().map(|o| o.b1).collect::<Vec<_>>()),
    })
}

/// Distribution summary of the standardized statistics
/// `sqrt(n b1) (f_hat(e) - center) / sqrt(V)` across replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub e: f64,
    pub n: usize,
    pub reps: usize,
    pub b0: f64,
    pub b1: f64,
    /// Asymptotic centering used for the standardization.
    pub center: f64,
    /// Asymptotic variance used for the standardization.
    pub variance: f64,
    pub z_mean: f64,
    pub z_sd: f64,
    /// Kolmogorov-Smirnov distance of the standardized statistics to the
    /// standard normal.
    pub ks_distance: f64,
    pub excluded_replicates: usize,
}

/// Monte Carlo check of the asymptotic-normality regime at a point.
///
/// Standardizes each replicate's feasible estimate by the known-density
/// centering and variance (exact trim probability for the uniform
/// designs), then summarizes the replicate distribution.
pub fn normality_diagnostic(
    model: Model,
    n: usize,
    reps: usize,
    e: f64,
    b0: f64,
    b1: f64,
    seed: u64,
) -> Result<DiagnosticReport> {
    if reps < 100 {
        return Err(Error::TooFewReplicates {
            min: 100,
            got: reps,
        });
    }
    if !b0.is_finite() || b0 <= 0.0 {
        return Err(Error::NonPositiveBandwidth(b0));
    }
    if !b1.is_finite() || b1 <= 0.0 {
        return Err(Error::NonPositiveBandwidth(b1));
    }
    let k = KernelSpec::biweight();
    let (center, variance) = asymptotic_center_and_variance(
        std_normal_pdf,
        std_normal_pdf_dd,
        e,
        b1,
        model.trim_probability(),
        &k,
    )?;
    let scale = ((n as f64) * b1).sqrt() / variance.sqrt();

    let d = model.dim();
    let estimates: Vec<Result<Option<f64>>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, rep);
            let sample = generate(model, n, &mut rng)?;
            let fit = loo_nadaraya_watson(&sample.data, b0, &k)?;
            let bx = TrimBox::unit_margin(d, TRIM_DELTA)?;
            let mask = trim_mask(&sample.data, &bx)?;
            match feasible_density(&fit, &mask, &[e], b1, &k) {
                Ok(curve) => Ok(Some(curve.values[0])),
                Err(Error::EmptyTrimSet) => Ok(None),
                Err(err) => Err(err),
            }
        })
        .collect();

    let mut z = Vec::with_capacity(reps);
    for est in estimates {
        if let Some(f_hat) = est? {
            z.push(scale * (f_hat - center));
        }
    }
    let excluded = reps - z.len();
    let limit = (EXCLUSION_LIMIT * reps as f64).floor() as usize;
    if excluded > limit {
        return Err(Error::TooManyExcludedReplicates {
            excluded,
            reps,
            limit,
        });
    }

    Ok(DiagnosticReport {
        e,
        n,
        reps,
        b0,
        b1,
        center,
        variance,
        z_mean: mean(&z),
        z_sd: sample_sd(&z),
        ks_distance: ks_distance_to_std_normal(&z),
        excluded_replicates: excluded,
    })
}
