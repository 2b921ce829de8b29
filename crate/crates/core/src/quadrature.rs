//! Gauss–Legendre quadrature on `[0, 1]`.

use std::f64::consts::PI;

use crate::error::{Result, SivfieError};

const MAX_NEWTON_STEPS: usize = 100;

/// Nodes and weights of a quadrature rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n_f = n as f64;
    let dp = n_f * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `q`-point Gauss–Legendre rule mapped to `[0, 1]`.
///
/// Roots of `P_q` are found by Newton iteration from the Chebyshev-like
/// initial guess `cos(π(k − 1/4)/(q + 1/2))`; weights are
/// `2/((1 − x²) P_q'(x)²)` on `[−1, 1]`, halved by the map.
pub fn gauss_legendre_rule(q: usize) -> Result<QuadratureRule> {
    if q == 0 {
        return Err(SivfieError::InvalidQuadratureOrder(q));
    }
    if q == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.5],
            weights: vec![1.0],
        });
    }
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let half = q.div_ceil(2);
    for k in 0..half {
        let mut x = (PI * (k as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..MAX_NEWTON_STEPS {
            let (p, dp) = legendre_with_derivative(q, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SivfieError::QuadratureNonConvergence { order: q, index: k });
        }
        let (_, dp) = legendre_with_derivative(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the k-th largest root; mirror it onto the symmetric partner.
        nodes[q - 1 - k] = 0.5 * (1.0 + x);
        nodes[k] = 0.5 * (1.0 - x);
        weights[q - 1 - k] = 0.5 * w;
        weights[k] = 0.5 * w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.5;
    }
    Ok(QuadratureRule { nodes, weights })
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Default per-axis order for projections of degree-`N` expansions.
    pub fn default_for_degree(degree: usize) -> Result<Self> {
        gauss_legendre_rule(2 * degree + 4)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Same rule affinely mapped onto `[a, b]`.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let len = b - a;
        len * self.integrate(|x| f(a + len * x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn midpoint_rule() {
        let r = gauss_legendre_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.5]);
        assert_eq!(r.weights, vec![1.0]);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre_rule(2).unwrap();
        let off = 1.0 / (2.0 * 3f64.sqrt());
        assert_abs_diff_eq!(r.nodes[0], 0.5 - off, epsilon = 1e-15);
        assert_abs_diff_eq!(r.nodes[1], 0.5 + off, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn five_point_integrates_ninth_power() {
        let r = gauss_legendre_rule(5).unwrap();
        assert_abs_diff_eq!(r.integrate(|x| x.powi(9)), 0.1, epsilon = 1e-13);
    }

    #[test]
    fn weights_sum_to_one_and_nodes_inside() {
        for q in 1..=40 {
            let r = gauss_legendre_rule(q).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-13);
            assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_degree_two_q_minus_one() {
        for q in 1..=20 {
            let r = gauss_legendre_rule(q).unwrap();
            for k in 0..2 * q {
                let exact = 1.0 / (k as f64 + 1.0);
                let approx = r.integrate(|x| x.powi(k as i32));
                assert!(
                    ((approx - exact) / exact).abs() < 1e-12,
                    "q={q} k={k}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(
            gauss_legendre_rule(0),
            Err(SivfieError::InvalidQuadratureOrder(0))
        ));
    }

    #[test]
    fn mapped_interval() {
        let r = gauss_legendre_rule(4).unwrap();
        assert_abs_diff_eq!(
            r.integrate_on(0.2, 0.7, |x| x * x),
            (0.343 - 0.008) / 3.0,
            epsilon = 1e-15
        );
    }
}
