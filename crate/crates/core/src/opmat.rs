//! Deterministic operational matrices: the Fredholm Gram matrix `Î`, the
//! double-integration matrix `P̂_I`, and the product operator `F̂`.

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Result, SivfieError};
use crate::quadrature::{gauss_legendre_rule, QuadratureRule};

/// `T[a][b][c] = ∫₀¹ ψ*_a ψ*_b ψ*_c ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleProductTensor {
    dim: usize,
    data: Vec<f64>,
}

impl TripleProductTensor {
    /// Builds the tensor with a rule exact for degree-`3N` integrands.
    pub fn new(basis: &Basis) -> Result<Self> {
        let n = basis.degree();
        let q = (3 * n + 1).div_ceil(2) + 1;
        let rule = gauss_legendre_rule(q)?;
        Ok(Self::with_rule(basis, &rule))
    }

    pub fn with_rule(basis: &Basis, rule: &QuadratureRule) -> Self {
        let dim = basis.dim();
        let values = basis.values_at(&rule.nodes);
        let mut data = vec![0.0; dim * dim * dim];
        for a in 0..dim {
            for b in a..dim {
                for c in b..dim {
                    let v: f64 = (0..rule.order())
                        .map(|k| rule.weights[k] * values[(k, a)] * values[(k, b)] * values[(k, c)])
                        .sum();
                    for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        data[(x * dim + y) * dim + z] = v;
                    }
                }
            }
        }
        TripleProductTensor { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }
}

/// `Î`, `P̂_I` and the triple-product tensor for one basis.
#[derive(Debug, Clone)]
pub struct OperationalMatrixSet {
    pub i_hat: DMatrix<f64>,
    pub p_i: DMatrix<f64>,
    pub p_i_hat: DMatrix<f64>,
    pub tensor: TripleProductTensor,
}

impl OperationalMatrixSet {
    pub fn build(basis: &Basis, rule: &QuadratureRule) -> Result<Self> {
        let p_i = integral_om_1d(basis, rule);
        Ok(OperationalMatrixSet {
            i_hat: gram_matrix(basis, rule),
            p_i_hat: p_i.kronecker(&p_i),
            p_i,
            tensor: TripleProductTensor::new(basis)?,
        })
    }
}

/// `Î = ∫∫ Ψ(s,t) Ψᵀ(s,t) dt ds`, as computed by the rule.
pub fn gram_matrix(basis: &Basis, rule: &QuadratureRule) -> DMatrix<f64> {
    let values = basis.values_at(&rule.nodes);
    let mut weighted = values.clone();
    for (mut row, &w) in weighted.row_iter_mut().zip(&rule.weights) {
        row *= w;
    }
    let g1 = values.transpose() * weighted;
    g1.kronecker(&g1)
}

/// 1-D integration matrix: row `i` is the projection of `u ↦ ∫₀ᵘ ψ*_i`.
///
/// The antiderivatives are taken exactly from the monomial coefficients in
/// `H`, so only the outer projection is quadrature.
pub fn integral_om_1d(basis: &Basis, rule: &QuadratureRule) -> DMatrix<f64> {
    let dim = basis.dim();
    let h = basis.h();
    let values = basis.values_at(&rule.nodes);
    DMatrix::from_fn(dim, dim, |i, k| {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .enumerate()
            .map(|(node, (&u, &w))| {
                let mut anti = 0.0;
                let mut p = u;
                for m in 0..dim {
                    anti += h[(i, m)] * p / (m as f64 + 1.0);
                    p *= u;
                }
                w * anti * values[(node, k)]
            })
            .sum()
    })
}

/// `P̂_I = P_I ⊗ P_I`.
pub fn integral_om(basis: &Basis, rule: &QuadratureRule) -> DMatrix<f64> {
    let p = integral_om_1d(basis, rule);
    p.kronecker(&p)
}

/// Product operational matrix:
/// `F̂[(a,b)][(c,d)] = Σ_{(i,j)} F[(i,j)]·T[a][c][i]·T[b][d][j]`.
pub fn product_om(f: &DVector<f64>, tensor: &TripleProductTensor) -> Result<DMatrix<f64>> {
    let dim = tensor.dim();
    let n2 = dim * dim;
    if f.len() != n2 {
        return Err(SivfieError::DimensionMismatch {
            expected: n2,
            actual: f.len(),
            context: "product_om coefficient vector",
        });
    }
    // Contract the second axis first: half[a][c][j] = Σ_i F[(i,j)] T[a][c][i].
    let mut half = vec![0.0; dim * dim * dim];
    for a in 0..dim {
        for c in 0..dim {
            for j in 0..dim {
                half[(a * dim + c) * dim + j] = (0..dim).map(|i| f[i * dim + j] * tensor.get(a, c, i)).sum();
            }
        }
    }
    let mut out = DMatrix::zeros(n2, n2);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    out[(a * dim + b, c * dim + d)] = (0..dim)
                        .map(|j| half[(a * dim + c) * dim + j] * tensor.get(b, d, j))
                        .sum();
                }
            }
        }
    }
    Ok(out)
}
