//! Fixed-order Gauss-Legendre quadrature.
//!
//! Nodes and weights on [-1, 1] are computed by Newton iteration on the
//! Legendre recurrence. An n-point rule integrates polynomials of degree
//! up to 2n-1 exactly, so the kernel moment checks (polynomial integrands)
//! are exact to rounding.

/// Gauss-Legendre rule with precomputed nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build an `n`-point rule.
    ///
    /// Panics if `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots come in symmetric pairs; solve the first half only.
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-like initial guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }
}

/// Evaluate P_n(x) and its derivative via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_nodes_match_reference() {
        let rule = GaussLegendre::new(5);
        let expected = [
            -0.906179845938664,
            -0.5384693101056831,
            0.0,
            0.5384693101056831,
            0.906179845938664,
        ];
        let expected_w = [
            0.2369268850561891,
            0.4786286704993665,
            0.5688888888888889,
            0.4786286704993665,
            0.2369268850561891,
        ];
        for i in 0..5 {
            assert!((rule.nodes[i] - expected[i]).abs() < 1e-14);
            assert!((rule.weights[i] - expected_w[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // degree 15 is the highest exact degree for 8 points
        let got = rule.integrate(0.0, 2.0, |x| x.powi(15));
        let exact = 2f64.powi(16) / 16.0;
        assert!((got - exact).abs() < 1e-9 * exact);

        let got = rule.integrate(-3.0, 4.0, |x| x * x * x + x * x + x + 1.0);
        let exact = (64.0 + 64.0 / 3.0 + 8.0 + 4.0) - (81.0 / 4.0 - 9.0 + 4.5 - 3.0);
        assert!((got - exact).abs() < 1e-10);
    }

    #[test]
    fn high_order_rule_is_consistent() {
        let coarse = GaussLegendre::new(64);
        let fine = GaussLegendre::new(128);
        let f = |x: f64| (1.0 - x * x).powi(2) * (15.0 / 16.0);
        let a = coarse.integrate(-1.0, 1.0, f);
        let b = fine.integrate(-1.0, 1.0, f);
        assert!((a - b).abs() < 1e-14);
        assert!((b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 3, 7, 32, 128] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}: {total}");
        }
    }
}
