//! Kernel functions with closed-form derivatives, product extension for
//! multivariate arguments, and quadrature-based verification of the moment
//! conditions the estimation theory relies on.
//!
//! The default (and currently only) family is the biweight kernel
//! `K(u) = (15/16)(1 - u^2)^2` on [-1, 1], the kernel used for both the
//! regression and the density smoothing steps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Kernel families with closed-form derivatives up to order 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// `(15/16)(1 - u^2)^2` on [-1, 1]; also called quartic.
    Biweight,
}

/// A univariate kernel together with its analytic constants.
///
/// `eval` and `eval_derivative` return exactly 0 at and outside the support
/// boundary; the one-sided polynomial limits at the boundary are only used
/// internally for the distributional moment corrections in
/// [`KernelSpec::verify_moments`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelSpec {
    family: KernelFamily,
}

impl KernelSpec {
    pub const fn biweight() -> Self {
        Self {
            family: KernelFamily::Biweight,
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    /// Half-width of the support interval.
    pub fn support_radius(&self) -> f64 {
        match self.family {
            KernelFamily::Biweight => 1.0,
        }
    }

    /// Highest derivative order available from `eval_derivative`.
    pub fn eval_order(&self) -> u32 {
        match self.family {
            KernelFamily::Biweight => 3,
        }
    }

    /// Second moment `∫ v² K(v) dv`.
    pub fn moment_v2(&self) -> f64 {
        match self.family {
            KernelFamily::Biweight => 1.0 / 7.0,
        }
    }

    /// Squared L2 norm `∫ K(v)² dv`.
    pub fn l2_norm(&self) -> f64 {
        match self.family {
            KernelFamily::Biweight => 5.0 / 7.0,
        }
    }

    /// Evaluate the kernel; 0 outside the support.
    pub fn eval(&self, u: f64) -> f64 {
        if u.abs() >= self.support_radius() {
            return 0.0;
        }
        match self.family {
            KernelFamily::Biweight => {
                let t = 1.0 - u * u;
                (15.0 / 16.0) * t * t
            }
        }
    }

    /// Evaluate the closed-form derivative of the given order (1..=3).
    ///
    /// Outside the open support the derivatives are defined as exactly 0,
    /// including at the boundary points where one-sided limits differ.
    pub fn eval_derivative(&self, order: u32, u: f64) -> Result<f64> {
        if order == 0 || order > self.eval_order() {
            return Err(Error::UnsupportedDerivativeOrder(order));
        }
        if u.abs() >= self.support_radius() {
            return Ok(0.0);
        }
        Ok(self.derivative_unclamped(order, u))
    }

    /// Product kernel `∏_j K(z_j)` for a d-dimensional argument.
    pub fn eval_product(&self, z: &[f64]) -> Result<f64> {
        if z.is_empty() {
            return Err(Error::EmptyInput("product kernel argument"));
        }
        let mut out = 1.0;
        for &zj in z {
            let k = self.eval(zj);
            if k == 0.0 {
                return Ok(0.0);
            }
            out *= k;
        }
        Ok(out)
    }

    /// Polynomial derivative formulas valid on the closed support.
    fn derivative_unclamped(&self, order: u32, u: f64) -> f64 {
        match self.family {
            KernelFamily::Biweight => match order {
                1 => -(15.0 / 4.0) * u * (1.0 - u * u),
                2 => -(15.0 / 4.0) * (1.0 - 3.0 * u * u),
                3 => (45.0 / 2.0) * u,
                _ => unreachable!("order validated by caller"),
            },
        }
    }

    /// Jump of the order-`j` derivative at a support endpoint `s` (the
    /// inside limit minus the outside value 0, signed by approach side).
    ///
    /// The biweight and its first derivative are continuous across the
    /// boundary; the second derivative jumps.
    fn boundary_jump(&self, order: u32, s: f64) -> f64 {
        let r = self.support_radius();
        let inside = if order == 0 {
            let t = 1.0 - s * s;
            match self.family {
                KernelFamily::Biweight => (15.0 / 16.0) * t * t,
            }
        } else {
            self.derivative_unclamped(order, s)
        };
        // At the left endpoint the function jumps up from 0 to the inside
        // limit; at the right endpoint it drops back to 0.
        if s == -r {
            inside
        } else {
            -inside
        }
    }

    /// Numerically verify the moment conditions required of the
    /// density-step kernel: unit mass, vanishing first moment, the stored
    /// second moment and L2 norm, and vanishing moments of the derivatives.
    ///
    /// The derivative moments are evaluated in the distributional sense:
    /// interior Gauss-Legendre quadrature plus boundary-jump corrections.
    /// This matches the integration-by-parts identities the conditions
    /// stand for; a kernel that is not smooth at its support boundary (the
    /// biweight's second derivative jumps at ±1) still satisfies them.
    pub fn verify_moments(&self, tol: f64) -> Result<MomentReport> {
        assert!(tol > 0.0, "tolerance must be positive");
        let r = self.support_radius();
        let rule = GaussLegendre::new(128);
        let check_rule = GaussLegendre::new(64);

        let mut checks = Vec::with_capacity(9);
        let mut residual: f64 = 0.0;
        let mut push = |name: &'static str, value: f64, expected: f64| {
            checks.push(MomentCheck {
                name,
                value,
                expected,
                pass: (value - expected).abs() <= tol,
            });
        };

        // Plain moments of the kernel itself.
        let mut moment = |f: &dyn Fn(f64) -> f64| -> f64 {
            let fine = rule.integrate(-r, r, f);
            let coarse = check_rule.integrate(-r, r, f);
            residual = residual.max((fine - coarse).abs());
            fine
        };
        let mass = moment(&|v| self.eval(v));
        let first = moment(&|v| v * self.eval(v));
        let second = moment(&|v| v * v * self.eval(v));
        let l2 = moment(&|v| self.eval(v) * self.eval(v));

        // Distributional moments of the derivatives: quadrature of the
        // interior polynomial part plus delta corrections from boundary
        // jumps of the lower-order derivatives.
        let mut derivative_moment = |order: u32, poly_degree: u32| -> f64 {
            let phi = |v: f64| match poly_degree {
                0 => 1.0,
                1 => v,
                _ => unreachable!(),
            };
            let f = |v: f64| phi(v) * self.derivative_unclamped(order, v);
            let fine = rule.integrate(-r, r, f);
            let coarse = check_rule.integrate(-r, r, f);
            residual = residual.max((fine - coarse).abs());
            let mut total = fine;
            // K^(order) picks up J_j(s) * delta^(order-1-j)(v - s) for each
            // jump of the order-j derivative at the endpoints s = ±r;
            // ∫ phi * delta^(m)(v - s) = (-1)^m phi^(m)(s).
            for j in 0..order {
                let m = order - 1 - j;
                let phi_m = |s: f64| match (poly_degree, m) {
                    (0, 0) => 1.0,
                    (1, 0) => s,
                    (1, 1) => 1.0,
                    _ => 0.0,
                };
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                for s in [-r, r] {
                    total += sign * self.boundary_jump(j, s) * phi_m(s);
                }
            }
            total
        };

        let d1 = derivative_moment(1, 0);
        let d2 = derivative_moment(2, 0);
        let d3 = derivative_moment(3, 0);
        let vd2 = derivative_moment(2, 1);
        let vd3 = derivative_moment(3, 1);

        if residual > 1e-12 {
            return Err(Error::QuadratureNotConverged { residual });
        }

        push("integral of K", mass, 1.0);
        push("integral of v K", first, 0.0);
        push("integral of v^2 K", second, self.moment_v2());
        push("integral of K^2", l2, self.l2_norm());
        push("integral of K'", d1, 0.0);
        push("integral of K''", d2, 0.0);
        push("integral of K'''", d3, 0.0);
        push("integral of v K''", vd2, 0.0);
        push("integral of v K'''", vd3, 0.0);

        Ok(MomentReport {
            tol,
            checks,
            quadrature_residual: residual,
        })
    }
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self::biweight()
    }
}

/// One verified moment identity.
#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub pass: bool,
}

/// Outcome of [`KernelSpec::verify_moments`].
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub tol: f64,
    pub checks: Vec<MomentCheck>,
    pub quadrature_residual: f64,
}

impl MomentReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
