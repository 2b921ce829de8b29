use serde::{Deserialize, Serialize};

use crate::error::{Result, SivfieError};
use crate::problems::ProblemSpec;
use crate::solver::SolveResult;

/// `ζ = η ∈ {0.05, 0.15, …, 0.95}`.
pub fn diagonal_points() -> Vec<(f64, f64)> {
    (0..10)
        .map(|k| {
            let x = (2 * k + 1) as f64 / 20.0;
            (x, x)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub zeta: f64,
    pub eta: f64,
    pub approx: f64,
    pub exact: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn mean_abs_error(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_error).sum::<f64>() / self.rows.len() as f64
    }

    pub fn max_abs_error(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_error).fold(0.0, f64::max)
    }
}

pub fn absolute_errors(result: &SolveResult, problem: &ProblemSpec, points: &[(f64, f64)]) -> Result<ErrorTable> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| SivfieError::MissingExact(problem.name.clone()))?;
    let rows = points
        .iter()
        .map(|&(zeta, eta)| {
            let approx = result.evaluate(zeta, eta);
            let e = exact(zeta, eta);
            ErrorRow {
                zeta,
                eta,
                approx,
                exact: e,
                abs_error: (approx - e).abs(),
            }
        })
        .collect();
    Ok(ErrorTable { rows })
}
