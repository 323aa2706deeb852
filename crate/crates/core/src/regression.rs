//! Leave-one-out Nadaraya-Watson regression, residual extraction and
//! trimming masks.
//!
//! The regression step produces, for each observation i, the kernel-weighted
//! mean of the other responses. Subtracting it from `Y_i` yields the
//! estimated residual that feeds the error-density step. Observations whose
//! covariate falls outside an inner trim box are kept here but excluded
//! later by the density estimator, where boundary bias would dominate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

/// Observed covariates (n x d, row-major) and responses (n).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    x: Vec<f64>,
    y: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleSet {
    /// Build a sample from a row-major covariate matrix and responses.
    ///
    /// Requires `n >= 2`, `d >= 1`, matching lengths and finite entries.
    pub fn new(x: Vec<f64>, d: usize, y: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let n = y.len();
        if n < 2 {
            return Err(Error::TooFewObservations { min: 2, got: n });
        }
        if x.len() != n * d {
            return Err(Error::DimensionMismatch {
                expected: n * d,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "covariate matrix",
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "response vector",
            });
        }
        Ok(Self { x, y, n, d })
    }

    /// Convenience constructor for a single covariate.
    pub fn univariate(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::new(x, 1, y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

/// Axis-aligned inner region; observations outside it are trimmed away by
/// the density step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TrimBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidTrimBox {
                    index: i,
                    lower: *lo,
                    upper: *hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[delta, 1 - delta]^d`, the margin box for unit-cube designs.
    pub fn unit_margin(d: usize, delta: f64) -> Result<Self> {
        Self::new(vec![delta; d], vec![1.0 - delta; d])
    }

    /// Shrink the empirical per-coordinate range of `data` by a relative
    /// margin `delta` on each side; for designs with unknown support.
    pub fn from_data_margin(data: &SampleSet, delta: f64) -> Result<Self> {
        let d = data.dim();
        let mut lower = vec![f64::INFINITY; d];
        let mut upper = vec![f64::NEG_INFINITY; d];
        for i in 0..data.n() {
            for (j, v) in data.row(i).iter().enumerate() {
                lower[j] = lower[j].min(*v);
                upper[j] = upper[j].max(*v);
            }
        }
        for j in 0..d {
            let span = upper[j] - lower[j];
            lower[j] += delta * span;
            upper[j] -= delta * span;
        }
        Self::new(lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Closed-box membership test.
    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Leave-one-out fits and residuals.
///
/// Where no other observation carries positive kernel weight the fit is
/// undefined: `m_hat` and `residuals` hold NaN there and `defined` is false.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooFit {
    pub m_hat: Vec<f64>,
    pub residuals: Vec<f64>,
    pub defined: Vec<bool>,
    pub b0: f64,
}

impl LooFit {
    /// Number of observations with a defined fit.
    pub fn defined_count(&self) -> usize {
        self.defined.iter().filter(|d| **d).count()
    }
}

/// Leave-one-out Nadaraya-Watson estimate of the regression function at
/// each sample point, with residuals `Y_i - m_hat_i`.
///
/// For each i the weighted sums run over j != i in ascending order, using
/// the product kernel `K0((X_j - X_i) / b0)`. Cost is O(n^2 d); exact
/// enough to serve as its own reference at small n.
pub fn loo_nadaraya_watson(data: &SampleSet, b0: f64, k0: &KernelSpec) -> Result<LooFit> {
    if !b0.is_finite() || b0 <= 0.0 {
        return Err(Error::NonPositiveBandwidth(b0));
    }
    let n = data.n();
    let d = data.dim();
    let mut m_hat = vec![f64::NAN; n];
    let mut residuals = vec![f64::NAN; n];
    let mut defined = vec![false; n];
    let mut z = vec![0.0; d];

    for i in 0..n {
        let xi = data.row(i);
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let xj = data.row(j);
            for (zk, (a, b)) in z.iter_mut().zip(xj.iter().zip(xi)) {
                *zk = (a - b) / b0;
            }
            let w = k0.eval_product(&z)?;
            num += data.y()[j] * w;
            den += w;
        }
        if den > 0.0 {
            m_hat[i] = num / den;
            residuals[i] = data.y()[i] - m_hat[i];
            defined[i] = true;
        }
    }

    Ok(LooFit {
        m_hat,
        residuals,
        defined,
        b0,
    })
}

/// Membership of each observation's covariate in the trim box.
pub fn trim_mask(data: &SampleSet, bx: &TrimBox) -> Result<Vec<bool>> {
    if bx.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: bx.dim(),
        });
    }
    Ok((0..data.n()).map(|i| bx.contains(data.row(i))).collect())
}
