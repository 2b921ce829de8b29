//! Collocation solver.
//!
//! With `f ≈ Ψᵀ F` the discretized equation at a point `p = (u, v)` reads
//!
//! ```text
//! Ψᵀ(p) F = Ψᵀ(p) G + Ψᵀ(p) K₁ Î F + Ψᵀ(p) K₂ F̂(F) P̂_I Ψ(p) + Ψᵀ(p) K₃ F̂(F) Q̂_s Ψ(p)
//! ```
//!
//! `F̂` is linear in its argument and multiplication operators commute, so
//! `F̂(F)·w = F̂(w)·F`. Each collocation row is therefore linear in `F` and
//! the whole system is assembled once and solved directly.

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Result, SivfieError};
use crate::linalg::LuFactors;
use crate::opmat::{product_om, OperationalMatrixSet};
use crate::problems::{ItoCoupling, ProblemSpec};
use crate::projection::{evaluate_expansion, project_function_2d, project_kernel_4d, KernelMatrix};
use crate::quadrature::QuadratureRule;
use crate::stochastic::{stochastic_om, BrownianPath, StochasticOMSet};

/// Successful solves must satisfy `max |A F − rhs| < RESIDUAL_LIMIT`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// Midpoint nodes `(2i − 1) / (2(N + 1))`, `i = 1..=N+1`.
pub fn newton_cotes_nodes(degree: usize) -> Vec<f64> {
    let denom = 2.0 * (degree as f64 + 1.0);
    (1..=degree + 1).map(|i| (2 * i - 1) as f64 / denom).collect()
}

/// Full tensor grid of collocation points, `u` outer.
pub fn collocation_points(degree: usize) -> Vec<(f64, f64)> {
    let nodes = newton_cotes_nodes(degree);
    nodes.iter().flat_map(|&u| nodes.iter().map(move |&v| (u, v))).collect()
}

#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub a: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub nodes: Vec<(f64, f64)>,
}

/// Projected problem data for one basis.
#[derive(Debug, Clone)]
pub struct KernelSet {
    pub k1: KernelMatrix,
    pub k2: KernelMatrix,
    pub k3: KernelMatrix,
}

fn check_dims(expected: usize, m: &DMatrix<f64>, context: &'static str) -> Result<()> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(SivfieError::DimensionMismatch {
            expected,
            actual: m.nrows().max(m.ncols()),
            context,
        });
    }
    Ok(())
}

/// Assembles `A F = rhs` at the tensor Newton–Cotes points.
///
/// Under [`ItoCoupling::KernelOnly`] the Itô term `Ψᵀ K₃ Q̂_s Ψ` carries no
/// unknown and is moved to the right-hand side.
pub fn assemble_system(
    g: &DVector<f64>,
    kernels: &KernelSet,
    omset: &OperationalMatrixSet,
    stochset: &StochasticOMSet,
    basis: &Basis,
    coupling: ItoCoupling,
) -> Result<CollocationSystem> {
    let n2 = basis.dim_2d();
    if g.len() != n2 {
        return Err(SivfieError::DimensionMismatch {
            expected: n2,
            actual: g.len(),
            context: "forcing coefficients",
        });
    }
    check_dims(n2, &kernels.k1, "K1")?;
    check_dims(n2, &kernels.k2, "K2")?;
    check_dims(n2, &kernels.k3, "K3")?;
    check_dims(n2, &omset.i_hat, "I_hat")?;
    check_dims(n2, &omset.p_i_hat, "P_I_hat")?;
    check_dims(n2, &stochset.q_s_hat, "Q_s_hat")?;

    let fredholm = DMatrix::<f64>::identity(n2, n2) - &kernels.k1 * &omset.i_hat;
    let nodes = collocation_points(basis.degree());
    let mut a = DMatrix::zeros(n2, n2);
    let mut rhs = DVector::zeros(n2);
    for (row, &(u, v)) in nodes.iter().enumerate() {
        let psi = basis.eval_2d(u, v).into_inner();
        let psi_t = psi.transpose();

        let volterra = product_om(&(&omset.p_i_hat * &psi), &omset.tensor)?;
        let mut coeffs = &psi_t * &fredholm - (&psi_t * &kernels.k2) * volterra;
        let mut forcing = psi.dot(g);

        let ito_weights = &stochset.q_s_hat * &psi;
        match coupling {
            ItoCoupling::Solution => {
                let ito = product_om(&ito_weights, &omset.tensor)?;
                coeffs -= (&psi_t * &kernels.k3) * ito;
            }
            ItoCoupling::KernelOnly => {
                forcing += (&psi_t * &kernels.k3).dot(&ito_weights.transpose());
            }
        }
        a.row_mut(row).copy_from(&coeffs);
        rhs[row] = forcing;
    }
    Ok(CollocationSystem { a, rhs, nodes })
}

#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub coeffs: DVector<f64>,
    pub residual_norm: f64,
    pub condition_estimate: f64,
}

/// Dense LU solve with partial pivoting; records the max row residual.
pub fn solve_linear(system: &CollocationSystem) -> Result<LinearSolution> {
    let lu = LuFactors::new(&system.a)?;
    let coeffs = lu.solve(&system.rhs);
    let residual_norm = (&system.a * &coeffs - &system.rhs).abs().max();
    Ok(LinearSolution {
        coeffs,
        residual_norm,
        condition_estimate: lu.condition_estimate(),
    })
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coeffs: DVector<f64>,
    pub residual_norm: f64,
    pub basis: Basis,
    pub seed: u64,
    pub problem: String,
}

impl SolveResult {
    /// `f_N(u, v) = Ψᵀ(u, v) F`.
    pub fn evaluate(&self, u: f64, v: f64) -> f64 {
        evaluate_expansion(&self.coeffs, &self.basis, u, v)
    }
}

/// Path-independent part of a discretized problem: basis, rule, projected
/// kernels and deterministic operational matrices. Reusable across trials.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub problem: ProblemSpec,
    pub basis: Basis,
    pub rule: QuadratureRule,
    pub kernels: KernelSet,
    pub omset: OperationalMatrixSet,
}

impl Discretization {
    pub fn new(problem: &ProblemSpec, basis: &Basis, rule: &QuadratureRule) -> Result<Self> {
        let kernels = KernelSet {
            k1: project_kernel_4d(&*problem.kappa1, basis, rule),
            k2: project_kernel_4d(&*problem.kappa2, basis, rule),
            k3: project_kernel_4d(&*problem.kappa3, basis, rule),
        };
        Ok(Discretization {
            problem: problem.clone(),
            basis: basis.clone(),
            rule: rule.clone(),
            omset: OperationalMatrixSet::build(basis, rule)?,
            kernels,
        })
    }

    pub fn assemble(&self, path: &BrownianPath) -> Result<CollocationSystem> {
        let g = &self.problem.g;
        let g_coeffs = project_function_2d(|u, v| g(u, v, path), &self.basis, &self.rule);
        let stochset = stochastic_om(&self.basis, path);
        assemble_system(
            &g_coeffs,
            &self.kernels,
            &self.omset,
            &stochset,
            &self.basis,
            self.problem.ito_coupling,
        )
    }

    pub fn solve(&self, path: &BrownianPath) -> Result<SolveResult> {
        let system = self.assemble(path)?;
        let sol = solve_linear(&system)?;
        if sol.residual_norm.is_nan() || sol.residual_norm >= RESIDUAL_LIMIT {
            return Err(SivfieError::ResidualTooLarge(sol.residual_norm));
        }
        Ok(SolveResult {
            coeffs: sol.coeffs,
            residual_norm: sol.residual_norm,
            basis: self.basis.clone(),
            seed: path.seed(),
            problem: self.problem.name.clone(),
        })
    }
}

/// End-to-end solve of one problem on one path.
pub fn solve_sivfie(
    problem: &ProblemSpec,
    basis: &Basis,
    path: &BrownianPath,
    rule: &QuadratureRule,
) -> Result<SolveResult> {
    Discretization::new(problem, basis, rule)?.solve(path)
}
