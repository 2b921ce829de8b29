//! Orthogonal projection of functions and kernels onto the 2-D basis.
//!
//! All integrals are tensor-product quadratures with the supplied rule;
//! kernels are sampled pointwise on the full 4-D grid.

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::quadrature::QuadratureRule;

/// Coefficients `W*` of a 2-D expansion, Kronecker order.
pub type CoefficientVector2D = DVector<f64>;

/// Kernel matrix `K` with `κ(u,v,s,t) ≈ Ψᵀ(u,v)·K·Ψ(s,t)`.
pub type KernelMatrix = DMatrix<f64>;

/// Basis values at the rule nodes scaled by the weights (`q × (N+1)`).
fn weighted_values(basis: &Basis, rule: &QuadratureRule) -> DMatrix<f64> {
    let mut v = basis.values_at(&rule.nodes);
    for (mut row, &w) in v.row_iter_mut().zip(&rule.weights) {
        row *= w;
    }
    v
}

/// `w*_ij = ∫∫ ψ*_i(s) y(s,t) ψ*_j(t) dt ds`.
pub fn project_function_2d<F>(y: F, basis: &Basis, rule: &QuadratureRule) -> CoefficientVector2D
where
    F: Fn(f64, f64) -> f64,
{
    let wv = weighted_values(basis, rule);
    let q = rule.order();
    let samples = DMatrix::from_fn(q, q, |a, b| y(rule.nodes[a], rule.nodes[b]));
    let coeffs = wv.transpose() * samples * &wv;
    // nalgebra is column-major; the Kronecker order wants row-major.
    DVector::from_iterator(coeffs.len(), coeffs.transpose().iter().copied())
}

/// 1-D projection `∫ ψ*_i(s) y(s) ds`.
pub fn project_function_1d<F>(y: F, basis: &Basis, rule: &QuadratureRule) -> DVector<f64>
where
    F: Fn(f64) -> f64,
{
    let wv = weighted_values(basis, rule);
    let samples = DVector::from_iterator(rule.order(), rule.nodes.iter().map(|&x| y(x)));
    wv.transpose() * samples
}

/// Four-fold quadrature of
/// `K = ∫∫ Ψ(u,v) (∫∫ κ(u,v,s,t) Ψᵀ(s,t) dt ds) dv du`.
pub fn project_kernel_4d<F>(kappa: F, basis: &Basis, rule: &QuadratureRule) -> KernelMatrix
where
    F: Fn(f64, f64, f64, f64) -> f64,
{
    let wv = weighted_values(basis, rule);
    let q = rule.order();
    let x = &rule.nodes;
    let grid = DMatrix::from_fn(q * q, q * q, |r, c| kappa(x[r / q], x[r % q], x[c / q], x[c % q]));
    let wv2 = wv.kronecker(&wv);
    wv2.transpose() * grid * &wv2
}

/// `W*ᵀ Ψ(u, v)`.
pub fn evaluate_expansion(coeffs: &DVector<f64>, basis: &Basis, u: f64, v: f64) -> f64 {
    coeffs.dot(&basis.eval_2d(u, v).values)
}
