//! Operational-matrix collocation solver for two-dimensional stochastic
//! Itô–Volterra–Fredholm integral equations
//!
//! ```text
//! f(u,v) = g(u,v) + ∫₀¹∫₀¹ κ₁ f dt ds + ∫₀ᵘ∫₀ᵛ κ₂ f dt ds + ∫₀ᵘ∫₀ᵛ κ₃ f dB(t) dB(s)
//! ```
//!
//! on `[0,1]²`, using orthonormal Chelyshkov polynomials (or shifted
//! Legendre polynomials for comparison), plus a Monte-Carlo harness for
//! error statistics over Brownian realizations.

pub mod basis;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod opmat;
pub mod problems;
pub mod projection;
pub mod quadrature;
pub mod solver;
pub mod stochastic;

pub use basis::{build_basis, Basis, BasisKind};
pub use error::{Result, SivfieError};
pub use problems::{problem1, problem2, ProblemSpec};
pub use quadrature::{gauss_legendre_rule, QuadratureRule};
pub use solver::{solve_sivfie, Discretization, SolveResult};
pub use stochastic::{sample_brownian_path, BrownianPath};
