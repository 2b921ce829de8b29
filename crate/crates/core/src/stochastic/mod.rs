//! Brownian paths, reference Itô integrals, and the stochastic
//! operational matrices.

mod ito;
mod om;
mod path;

pub use ito::{ito_integral_indexed, ito_integral_oracle, weighted_path_integral};
pub use om::{phi_coefficient, phi_s_matrix, stochastic_om, StochasticOMSet};
pub use path::{sample_brownian_path, BrownianPath};

/// Grid size used for solving.
pub const DEFAULT_SOLVE_GRID: usize = 1 << 12;

/// Grid size used for oracle convergence checks.
pub const DEFAULT_ORACLE_GRID: usize = 1 << 14;
