//! Benchmark problems and the general problem container.
//!
//! A problem is `f(u,v) = g(u,v) + ∫∫_{[0,1]²} κ₁ f + ∫₀ᵘ∫₀ᵛ κ₂ f
//! + ∫₀ᵘ∫₀ᵛ κ₃ f dB(t) dB(s)`, where `g` may read the Brownian path.

mod forms;

use std::fmt;
use std::sync::Arc;

pub use forms::{CustomProblemConfig, ForcingForm, KernelForm, KernelTerm, PlaneTerm};

use crate::error::Result;
use crate::quadrature::gauss_legendre_rule;
use crate::stochastic::{weighted_path_integral, BrownianPath};

pub type Kernel = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;
pub type Forcing = Arc<dyn Fn(f64, f64, &BrownianPath) -> f64 + Send + Sync>;
pub type PlaneFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// How the Itô term couples to the unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItoCoupling {
    /// `∫∫ κ₃ f dB dB`, as in the general equation.
    #[default]
    Solution,
    /// `∫∫ κ₃ dB dB` with no unknown inside; acts as extra forcing.
    KernelOnly,
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub g: Forcing,
    pub kappa1: Kernel,
    pub kappa2: Kernel,
    pub kappa3: Kernel,
    pub ito_coupling: ItoCoupling,
    pub exact: Option<PlaneFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("ito_coupling", &self.ito_coupling)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

/// `∫₀ˣ s^k B(s) ds`; the domain is guaranteed by callers.
fn path_moment(path: &BrownianPath, k: u32, x: f64) -> f64 {
    weighted_path_integral(path, k, 0.0, x.clamp(0.0, 1.0)).unwrap_or(0.0)
}

fn b_at(path: &BrownianPath, x: f64) -> f64 {
    path.value(x.clamp(0.0, 1.0)).unwrap_or(0.0)
}

/// Forcing of the first benchmark, term by term, including
/// the unweighted `∫₀^ζ B(e) de` inside the first Brownian factor.
fn problem1_g(z: f64, e: f64, path: &BrownianPath) -> f64 {
    let poly = -7.0 / 6.0 - z * e * (5.0 * z * z + 9.0 * z * e + 5.0 * e * e) / 6.0;
    let left = z * z * b_at(path, z) - 2.0 * path_moment(path, 0, z);
    let right = e * b_at(path, e) - path_moment(path, 0, e);
    poly - 2.0 * z * e * left * right
}

/// Forcing of the second benchmark.
fn problem2_g(z: f64, e: f64, path: &BrownianPath) -> f64 {
    let det = z * e
        + ((e + 1.0).cos() + e.sin() - (1.0 + e).sin()) / 3.0
        + z.powi(4) * (e * (2.0 * e).cos() + e.sin() - (2.0 * e).sin()) / 3.0;
    let (bz, be) = (b_at(path, z), b_at(path, e));
    let c = (z * e).cos();
    let t1 = (z * z * bz - 2.0 * path_moment(path, 1, z)) * (e * be - path_moment(path, 0, e));
    let t2 = (e * e * be - 2.0 * path_moment(path, 1, e)) * (z * bz - path_moment(path, 0, z));
    det - c * t1 - c * t2
}

/// First benchmark: polynomial kernels, exact solution `ζ + η`.
pub fn problem1() -> ProblemSpec {
    let sum: Kernel = Arc::new(|z, e, s, t| z + e + s + t);
    ProblemSpec {
        name: "problem1".into(),
        g: Arc::new(problem1_g),
        kappa1: sum.clone(),
        kappa2: sum,
        kappa3: Arc::new(|z, e, s, t| z * e * s * t),
        ito_coupling: ItoCoupling::Solution,
        exact: Some(Arc::new(|z, e| z + e)),
    }
}

/// Second benchmark: trigonometric kernels, exact solution `ζη`.
///
/// Its Itô term has no unknown inside the integral, so it is
/// modelled with [`ItoCoupling::KernelOnly`].
pub fn problem2() -> ProblemSpec {
    let k: Kernel = Arc::new(|z, e, s, t| z * s * (t + e).sin());
    ProblemSpec {
        name: "problem2".into(),
        g: Arc::new(problem2_g),
        kappa1: k.clone(),
        kappa2: k,
        kappa3: Arc::new(|z, e, s, t| (s + t) * (z * e).cos()),
        ito_coupling: ItoCoupling::KernelOnly,
        exact: Some(Arc::new(|z, e| z * e)),
    }
}

/// Looks up a built-in problem by CLI name (`1`, `2`, `problem1`, …).
pub fn builtin(name: &str) -> Option<ProblemSpec> {
    match name.trim().to_ascii_lowercase().as_str() {
        "1" | "problem1" | "p1" => Some(problem1()),
        "2" | "problem2" | "p2" => Some(problem2()),
        _ => None,
    }
}

/// Problem with deterministic forcing and the standard Itô coupling.
pub fn custom_problem<G, K1, K2, K3>(
    name: &str,
    g: G,
    kappa1: K1,
    kappa2: K2,
    kappa3: K3,
    exact: Option<PlaneFn>,
) -> ProblemSpec
where
    G: Fn(f64, f64, &BrownianPath) -> f64 + Send + Sync + 'static,
    K1: Fn(f64, f64, f64, f64) -> f64 + Send + Sync + 'static,
    K2: Fn(f64, f64, f64, f64) -> f64 + Send + Sync + 'static,
    K3: Fn(f64, f64, f64, f64) -> f64 + Send + Sync + 'static,
{
    ProblemSpec {
        name: name.to_string(),
        g: Arc::new(g),
        kappa1: Arc::new(kappa1),
        kappa2: Arc::new(kappa2),
        kappa3: Arc::new(kappa3),
        ito_coupling: ItoCoupling::Solution,
        exact,
    }
}

/// Double left-point sum `Σ_k Σ_l h(s_k, t_l) ΔB_k ΔB_l` over the grid
/// cells of `[0,u] × [0,v]`.
pub fn double_ito_oracle<H>(h: H, path: &BrownianPath, u: f64, v: f64) -> f64
where
    H: Fn(f64, f64) -> f64,
{
    let cells = |x: f64| -> Vec<(f64, f64)> {
        let knots = path.knots(0.0, x);
        knots
            .windows(2)
            .map(|w| (w[0], path.value_unchecked(w[1]) - path.value_unchecked(w[0])))
            .collect()
    };
    let (su, tv) = (cells(u), cells(v));
    su.iter()
        .map(|&(s, db_s)| db_s * tv.iter().map(|&(t, db_t)| h(s, t) * db_t).sum::<f64>())
        .sum()
}

/// Residual `g + I₁f + I₂f + I₃f − f` of the exact solution at `(u, v)`,
/// with the Itô term evaluated by the pathwise oracle instead of the
/// operational matrix. Zero up to discretization error when `g` is
/// consistent with the kernels and the exact solution.
pub fn exact_residual(problem: &ProblemSpec, path: &BrownianPath, u: f64, v: f64) -> Result<Option<f64>> {
    let Some(exact) = problem.exact.as_ref() else {
        return Ok(None);
    };
    let rule = gauss_legendre_rule(16)?;
    let fredholm = rule.integrate(|s| rule.integrate(|t| (problem.kappa1)(u, v, s, t) * exact(s, t)));
    let volterra = rule.integrate_on(0.0, u, |s| {
        rule.integrate_on(0.0, v, |t| (problem.kappa2)(u, v, s, t) * exact(s, t))
    });
    let ito = match problem.ito_coupling {
        ItoCoupling::Solution => double_ito_oracle(|s, t| (problem.kappa3)(u, v, s, t) * exact(s, t), path, u, v),
        ItoCoupling::KernelOnly => double_ito_oracle(|s, t| (problem.kappa3)(u, v, s, t), path, u, v),
    };
    Ok(Some((problem.g)(u, v, path) + fredholm + volterra + ito - exact(u, v)))
}
