//! Stochastic operational matrices `Φ_s`, `Q_s = H Φ_s H⁻¹` and
//! `Q̂_s = Q_s ⊗ Q_s`.
//!
//! `Φ_s` freezes the Brownian factors of the Simpson-rule Itô moments at
//! `B(0.5)` and `B(0.25)`. The approximation is kept as is; the pathwise
//! oracles in [`super::ito`] measure what it costs.

use nalgebra::DMatrix;

use super::BrownianPath;
use crate::basis::Basis;

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticOMSet {
    pub phi_s: DMatrix<f64>,
    pub q_s: DMatrix<f64>,
    pub q_s_hat: DMatrix<f64>,
}

/// Diagonal entry `d_i = (1 − i/6)·B(0.5) − i/(3·2^{i−2})·B(0.25)`.
///
/// For `i ≥ 7` the first factor turns negative; no guard is applied.
pub fn phi_coefficient(i: usize, b_half: f64, b_quarter: f64) -> f64 {
    let i_f = i as f64;
    (1.0 - i_f / 6.0) * b_half - i_f / (3.0 * 2f64.powi(i as i32 - 2)) * b_quarter
}

/// `Φ_s` for degree `N`, reading `B(0.5)` and `B(0.25)` from the path.
pub fn phi_s_matrix(degree: usize, path: &BrownianPath) -> DMatrix<f64> {
    let b_half = path.value_unchecked(0.5);
    let b_quarter = path.value_unchecked(0.25);
    DMatrix::from_fn(degree + 1, degree + 1, |r, c| {
        if r == c {
            phi_coefficient(r, b_half, b_quarter)
        } else {
            0.0
        }
    })
}

pub fn stochastic_om(basis: &Basis, path: &BrownianPath) -> StochasticOMSet {
    let phi_s = phi_s_matrix(basis.degree(), path);
    let q_s = basis.h() * &phi_s * basis.h_inv();
    let q_s_hat = q_s.kronecker(&q_s);
    StochasticOMSet { phi_s, q_s, q_s_hat }
}
