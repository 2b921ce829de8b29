use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::TrialStatistics;
use super::table::{absolute_errors, diagonal_points, ErrorTable};
use crate::basis::{build_basis, BasisKind};
use crate::error::{Result, SivfieError};
use crate::problems::ProblemSpec;
use crate::quadrature::QuadratureRule;
use crate::solver::Discretization;
use crate::stochastic::sample_brownian_path;

/// Knobs shared by every trial of a run.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub basis: BasisKind,
    pub degree: usize,
    pub grid: usize,
    /// Per-axis quadrature rule; `None` selects the default for the degree.
    pub rule: Option<QuadratureRule>,
}

impl TrialConfig {
    pub fn new(basis: BasisKind, degree: usize, grid: usize) -> Self {
        TrialConfig {
            basis,
            degree,
            grid,
            rule: None,
        }
    }

    pub fn discretize(&self, problem: &ProblemSpec) -> Result<Discretization> {
        let basis = build_basis(self.basis, self.degree)?;
        let rule = match &self.rule {
            Some(r) => r.clone(),
            None => QuadratureRule::default_for_degree(self.degree)?,
        };
        Discretization::new(problem, &basis, &rule)
    }
}

/// Solves one trial and tabulates the diagonal-point errors.
pub fn run_single(disc: &Discretization, grid: usize, seed: u64) -> Result<ErrorTable> {
    let wrap = |e: SivfieError| SivfieError::TrialFailed {
        seed,
        source: Box::new(e),
    };
    let path = sample_brownian_path(grid, seed).map_err(wrap)?;
    let result = disc.solve(&path).map_err(wrap)?;
    absolute_errors(&result, &disc.problem, &diagonal_points())
}

/// Trial seeds `seed0, seed0 + 1, …`.
pub fn trial_seeds(seed0: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| seed0.wrapping_add(i)).collect()
}

/// Monte-Carlo run: trial `i` uses seed `seed0 + i`; the per-trial error is
/// the mean absolute error over the ten diagonal points.
///
/// Trials run in parallel; results are aggregated in index order.
pub fn run_trials(problem: &ProblemSpec, config: &TrialConfig, n: usize, seed0: u64) -> Result<TrialStatistics> {
    if n < 2 {
        return Err(SivfieError::TooFewSamples(n));
    }
    let disc = config.discretize(problem)?;
    let seeds = trial_seeds(seed0, n);
    let maes = seeds
        .par_iter()
        .map(|&seed| run_single(&disc, config.grid, seed).map(|t| t.mean_abs_error()))
        .collect::<Result<Vec<f64>>>()?;
    TrialStatistics::from_samples(config.degree, maes, seeds)
}

/// Side-by-side error tables for two bases on the same path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisComparison {
    #[serde(rename = "N")]
    pub degree: usize,
    pub seed: u64,
    pub left_basis: BasisKind,
    pub right_basis: BasisKind,
    pub left: ErrorTable,
    pub right: ErrorTable,
}

pub fn compare_bases_with(
    problem: &ProblemSpec,
    degree: usize,
    seed: u64,
    grid: usize,
    left: BasisKind,
    right: BasisKind,
) -> Result<BasisComparison> {
    let solve = |kind| {
        let disc = TrialConfig::new(kind, degree, grid).discretize(problem)?;
        run_single(&disc, grid, seed)
    };
    Ok(BasisComparison {
        degree,
        seed,
        left_basis: left,
        right_basis: right,
        left: solve(left)?,
        right: solve(right)?,
    })
}

/// Chelyshkov versus shifted Legendre on one shared path.
pub fn compare_bases(problem: &ProblemSpec, degree: usize, seed: u64, grid: usize) -> Result<BasisComparison> {
    compare_bases_with(
        problem,
        degree,
        seed,
        grid,
        BasisKind::Chelyshkov,
        BasisKind::ShiftedLegendre,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{custom_problem, problem1};
    use crate::stochastic::BrownianPath;
    use std::sync::Arc;

    fn zero4(_: f64, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }

    #[test]
    fn seeds_are_consecutive() {
        assert_eq!(trial_seeds(10, 3), vec![10, 11, 12]);
        assert_eq!(trial_seeds(u64::MAX, 2), vec![u64::MAX, 0]);
    }

    #[test]
    fn widening_n_appends() {
        let p = problem1();
        let cfg = TrialConfig::new(BasisKind::Chelyshkov, 2, 256);
        let short = run_trials(&p, &cfg, 3, 40).unwrap();
        let long = run_trials(&p, &cfg, 5, 40).unwrap();
        assert_eq!(&long.per_trial_mae[..3], &short.per_trial_mae[..]);
        assert_eq!(&long.seeds[..3], &short.seeds[..]);
    }

    #[test]
    fn rejects_single_trial() {
        let cfg = TrialConfig::new(BasisKind::Chelyshkov, 2, 256);
        assert!(matches!(
            run_trials(&problem1(), &cfg, 1, 0),
            Err(SivfieError::TooFewSamples(1))
        ));
    }

    #[test]
    fn exact_problem_on_both_bases() {
        let p = custom_problem(
            "poly",
            |u, v, _: &BrownianPath| 2.0 * u - v * v,
            zero4,
            zero4,
            zero4,
            Some(Arc::new(|u, v| 2.0 * u - v * v)),
        );
        let cmp = compare_bases(&p, 2, 5, 64).unwrap();
        assert!(cmp.left.max_abs_error() < 1e-10);
        assert!(cmp.right.max_abs_error() < 1e-10);
    }

    #[test]
    fn identical_bases_give_identical_tables() {
        let p = problem1();
        let cmp = compare_bases_with(&p, 2, 8, 256, BasisKind::Chelyshkov, BasisKind::Chelyshkov).unwrap();
        assert_eq!(cmp.left, cmp.right);
    }
}
