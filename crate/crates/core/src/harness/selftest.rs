//! Invariant suite behind the `selftest` subcommand.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::{build_basis, BasisKind};
use crate::error::Result;
use crate::opmat::{gram_matrix, integral_om_1d, OperationalMatrixSet};
use crate::problems::custom_problem;
use crate::projection::project_function_2d;
use crate::quadrature::{gauss_legendre_rule, QuadratureRule};
use crate::solver::solve_sivfie;
use crate::stochastic::{ito_integral_oracle, sample_brownian_path, stochastic_om, BrownianPath};

type Integrand = (&'static str, fn(f64) -> f64, f64);
type Check = (&'static str, fn() -> Result<CheckOutcome>);

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, value: f64, limit: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: value < limit,
        detail: format!("{value:.3e} < {limit:.0e}"),
    }
}

fn orthonormality() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for kind in [BasisKind::Chelyshkov, BasisKind::ShiftedLegendre] {
        for n in 0..=8 {
            let b = build_basis(kind, n)?;
            let g = gram_matrix(&b, &QuadratureRule::default_for_degree(n)?);
            let d = g.nrows();
            worst = worst.max((g - DMatrix::<f64>::identity(d, d)).abs().max());
        }
    }
    Ok(outcome("orthonormality (N <= 8)", worst, 1e-10))
}

/// Direct 2-D quadrature of the double-integration matrix against `P_I ⊗ P_I`.
fn integral_kronecker() -> Result<CheckOutcome> {
    let n = 3;
    let b = build_basis(BasisKind::Chelyshkov, n)?;
    let rule = QuadratureRule::default_for_degree(n)?;
    let inner = gauss_legendre_rule(n + 2)?;
    let p = integral_om_1d(&b, &rule);
    let kron = p.kronecker(&p);
    let dim = b.dim();
    let mut worst = 0.0f64;
    for a in 0..dim {
        for c in 0..dim {
            let target = |u: f64, v: f64| {
                inner.integrate_on(0.0, u, |s| b.eval(s)[a]) * inner.integrate_on(0.0, v, |t| b.eval(t)[c])
            };
            let row = project_function_2d(target, &b, &rule);
            for (k, val) in row.iter().enumerate() {
                worst = worst.max((val - kron[(a * dim + c, k)]).abs());
            }
        }
    }
    Ok(outcome("integration matrix Kronecker factorization", worst, 1e-10))
}

fn stochastic_kronecker() -> Result<CheckOutcome> {
    let b = build_basis(BasisKind::Chelyshkov, 4)?;
    let path = sample_brownian_path(1 << 10, 7)?;
    let om = stochastic_om(&b, &path);
    let back = b.h() * &om.phi_s * b.h_inv();
    let dev = (&om.q_s - back).abs().max() + (&om.q_s_hat - om.q_s.kronecker(&om.q_s)).abs().max();
    Ok(outcome("stochastic matrix reconstruction", dev, 1e-12))
}

fn ito_isometry() -> Result<Vec<CheckOutcome>> {
    let paths = 10_000;
    let grid = 1 << 12;
    let integrands: [Integrand; 3] = [
        ("Ito isometry h = 1", |_| 1.0, 1.0),
        ("Ito isometry h = s", |s| s, 1.0 / 3.0),
        ("Ito isometry h = s^2", |s| s * s, 1.0 / 5.0),
    ];
    let samples: Vec<[f64; 3]> = (0..paths as u64)
        .into_par_iter()
        .map(|seed| {
            let p = sample_brownian_path(grid, 1_000_000 + seed)?;
            let mut out = [0.0; 3];
            for (slot, (_, h, _)) in out.iter_mut().zip(&integrands) {
                *slot = ito_integral_oracle(h, &p, 0.0, 1.0)?.powi(2);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(integrands
        .iter()
        .enumerate()
        .map(|(k, (name, _, expected))| {
            let xs: Vec<f64> = samples.iter().map(|s| s[k]).collect();
            let m = super::stats::mean(&xs);
            let se = super::stats::sample_sd(&xs) / (paths as f64).sqrt();
            CheckOutcome {
                name,
                passed: (m - expected).abs() < 3.0 * se,
                detail: format!("mean {m:.5} vs {expected:.5} (3 SE = {:.5})", 3.0 * se),
            }
        })
        .collect())
}

fn fredholm_exactness() -> Result<CheckOutcome> {
    let p = custom_problem(
        "uv",
        |u, v, _: &BrownianPath| 8.0 / 9.0 * u * v,
        |u, v, s, t| u * v * s * t,
        |_, _, _, _| 0.0,
        |_, _, _, _| 0.0,
        Some(Arc::new(|u, v| u * v)),
    );
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let b = build_basis(BasisKind::Chelyshkov, n)?;
        let rule = QuadratureRule::default_for_degree(n)?;
        let res = solve_sivfie(&p, &b, &sample_brownian_path(256, 1)?, &rule)?;
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            worst = worst.max((res.evaluate(x, 1.0 - x) - x * (1.0 - x)).abs());
        }
    }
    Ok(outcome("Fredholm exactness (uv problem)", worst, 1e-9))
}

fn identity_operators() -> Result<CheckOutcome> {
    let b = build_basis(BasisKind::Chelyshkov, 5)?;
    let rule = QuadratureRule::default_for_degree(5)?;
    let set = OperationalMatrixSet::build(&b, &rule)?;
    let d = set.i_hat.nrows();
    let dev = (&set.i_hat - DMatrix::<f64>::identity(d, d)).abs().max();
    Ok(outcome("Fredholm Gram matrix is identity", dev, 1e-10))
}

/// Runs every check; a check that errors counts as a failure.
pub fn run_selftest() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let singles: [Check; 5] = [
        ("orthonormality", orthonormality),
        ("integration Kronecker", integral_kronecker),
        ("stochastic Kronecker", stochastic_kronecker),
        ("Gram identity", identity_operators),
        ("Fredholm exactness", fredholm_exactness),
    ];
    for (name, check) in singles {
        out.push(check().unwrap_or_else(|e| CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        }));
    }
    match ito_isometry() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(CheckOutcome {
            name: "Ito isometry",
            passed: false,
            detail: e.to_string(),
        }),
    }
    out
}
