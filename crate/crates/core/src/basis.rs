//! Orthonormal polynomial bases on `[0, 1]`.
//!
//! A basis of degree `N` is carried by its monomial transform `H`, the
//! `(N+1)×(N+1)` triangular matrix with `Ψ(s) = H·(1, s, …, s^N)ᵀ`.
//! Coefficients are first assembled as exact integers (the unnormalized
//! polynomial coefficients) and only then scaled by `√(2i+1)` in `f64`.
//!
//! Two-dimensional vectors use the Kronecker order `(i, j) ↦ i·(N+1) + j`
//! everywhere in the crate.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SivfieError};

/// Largest integer magnitude that converts to `f64` without rounding.
const F64_EXACT_LIMIT: u64 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Orthonormal Chelyshkov polynomials.
    Chelyshkov,
    /// Orthonormal shifted Legendre polynomials `√(2i+1)·P_i(2s−1)`.
    #[serde(rename = "slp")]
    ShiftedLegendre,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Chelyshkov => f.write_str("chelyshkov"),
            BasisKind::ShiftedLegendre => f.write_str("slp"),
        }
    }
}

impl FromStr for BasisKind {
    type Err = SivfieError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chelyshkov" | "ocp" => Ok(BasisKind::Chelyshkov),
            "slp" | "legendre" | "shifted-legendre" => Ok(BasisKind::ShiftedLegendre),
            other => Err(SivfieError::InvalidConfig(format!(
                "unknown basis '{other}' (expected chelyshkov or slp)"
            ))),
        }
    }
}

/// An orthonormal polynomial basis of degree `N` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    kind: BasisKind,
    degree: usize,
    integer_rows: Vec<Vec<i64>>,
    h: DMatrix<f64>,
    h_inv: DMatrix<f64>,
}

/// A 2-D basis evaluation `Ψ(s) ⊗ Ψ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector2D {
    pub values: DVector<f64>,
    dim: usize,
}

impl BasisVector2D {
    /// Component `ψ_i(s)·ψ_j(t)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.values
    }
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for step in 1..=k as u128 {
        // acc * (n - k + step) / step stays integral at every step.
        acc = acc.checked_mul(n as u128 - k as u128 + step)? / step;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn overflow(degree: usize, detail: impl Into<String>) -> SivfieError {
    SivfieError::DegreeOverflow {
        degree,
        detail: detail.into(),
    }
}

/// Unnormalized Chelyshkov coefficients: row `i` holds
/// `Σ_k (−1)^k C(N−i, k) C(N+k+i+1, N−i) s^{k+i}`.
fn chelyshkov_rows(n: usize) -> Result<Vec<Vec<i64>>> {
    let mut rows = vec![vec![0i64; n + 1]; n + 1];
    for (i, row) in rows.iter_mut().enumerate() {
        let m = (n - i) as u64;
        for k in 0..=(n - i) {
            let a = binomial(m, k as u64).ok_or_else(|| overflow(n, format!("C({m}, {k})")))?;
            let top = (n + k + i + 1) as u64;
            let b = binomial(top, m).ok_or_else(|| overflow(n, format!("C({top}, {m})")))?;
            let mag = a
                .checked_mul(b)
                .filter(|&v| v <= F64_EXACT_LIMIT)
                .ok_or_else(|| overflow(n, format!("coefficient of s^{} in row {i}", k + i)))?;
            let mag = mag as i64;
            row[k + i] = if k % 2 == 0 { mag } else { -mag };
        }
    }
    Ok(rows)
}

/// Unnormalized shifted Legendre coefficients from
/// `(n+1) P_{n+1} = (2n+1)(2s−1) P_n − n P_{n−1}`.
fn shifted_legendre_rows(n: usize) -> Result<Vec<Vec<i64>>> {
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
    rows.push({
        let mut r = vec![0i64; n + 1];
        r[0] = 1;
        r
    });
    if n >= 1 {
        let mut r = vec![0i64; n + 1];
        r[0] = -1;
        r[1] = 2;
        rows.push(r);
    }
    for deg in 1..n {
        let (prev, cur) = (&rows[deg - 1], &rows[deg]);
        let mut next = vec![0i64; n + 1];
        let a = 2 * deg as i64 + 1;
        let b = deg as i64;
        let d = deg as i64 + 1;
        for m in 0..=deg + 1 {
            // (2s − 1)·P_n contributes 2·c[m−1] − c[m] to s^m.
            let shifted = if m > 0 { cur[m - 1].checked_mul(2) } else { Some(0) };
            let term = shifted
                .and_then(|x| x.checked_sub(cur[m]))
                .and_then(|x| x.checked_mul(a))
                .and_then(|x| x.checked_sub(b.checked_mul(prev[m])?))
                .ok_or_else(|| overflow(n, format!("Legendre recurrence at degree {}", deg + 1)))?;
            if term % d != 0 {
                return Err(overflow(n, "inexact Legendre recurrence division"));
            }
            let value = term / d;
            if value.unsigned_abs() > F64_EXACT_LIMIT {
                return Err(overflow(n, format!("coefficient of s^{m} in row {}", deg + 1)));
            }
            next[m] = value;
        }
        rows.push(next);
    }
    Ok(rows)
}

/// Exact inverse of the (triangular) integer coefficient matrix, rounded once
/// to `f64`.
fn exact_inverse(rows: &[Vec<i64>]) -> DMatrix<f64> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                let di = &factor * &inv[col][j];
                a[row][j] -= da;
                inv[row][j] -= di;
            }
        }
    }
    DMatrix::from_fn(n, n, |i, j| inv[i][j].to_f64().unwrap_or(f64::NAN))
}

/// Builds the orthonormal basis of the given kind and degree.
pub fn build_basis(kind: BasisKind, degree: usize) -> Result<Basis> {
    let integer_rows = match kind {
        BasisKind::Chelyshkov => chelyshkov_rows(degree)?,
        BasisKind::ShiftedLegendre => shifted_legendre_rows(degree)?,
    };
    let dim = degree + 1;
    let h = DMatrix::from_fn(dim, dim, |i, m| ((2 * i + 1) as f64).sqrt() * integer_rows[i][m] as f64);
    let mut h_inv = exact_inverse(&integer_rows);
    for (j, mut col) in h_inv.column_iter_mut().enumerate() {
        col /= ((2 * j + 1) as f64).sqrt();
    }
    Ok(Basis {
        kind,
        degree,
        integer_rows,
        h,
        h_inv,
    })
}

/// `(1, s, …, s^n)`.
pub fn monomials(degree: usize, s: f64) -> DVector<f64> {
    let mut out = DVector::zeros(degree + 1);
    let mut p = 1.0;
    for k in 0..=degree {
        out[k] = p;
        p *= s;
    }
    out
}

impl Basis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Polynomial degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of 1-D basis functions, `N + 1`.
    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// Number of 2-D basis functions, `(N + 1)²`.
    pub fn dim_2d(&self) -> usize {
        self.dim() * self.dim()
    }

    /// Monomial transform `H` (row `i` = coefficients of `ψ*_i`).
    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn h_inv(&self) -> &DMatrix<f64> {
        &self.h_inv
    }

    /// Exact integer coefficients before the `√(2i+1)` normalization.
    pub fn integer_rows(&self) -> &[Vec<i64>] {
        &self.integer_rows
    }

    /// `Ψ(s) = H·T_N(s)`.
    pub fn eval(&self, s: f64) -> DVector<f64> {
        &self.h * monomials(self.degree, s)
    }

    /// `Ψ(s) ⊗ Ψ(t)`.
    pub fn eval_2d(&self, s: f64, t: f64) -> BasisVector2D {
        let a = self.eval(s);
        let b = self.eval(t);
        BasisVector2D {
            values: a.kronecker(&b),
            dim: self.dim(),
        }
    }

    /// Basis values at each node, one row per node.
    pub fn values_at(&self, nodes: &[f64]) -> DMatrix<f64> {
        let dim = self.dim();
        let mut out = DMatrix::zeros(nodes.len(), dim);
        for (r, &x) in nodes.iter().enumerate() {
            let v = self.eval(x);
            out.row_mut(r).copy_from(&v.transpose());
        }
        out
    }
}

/// Jacobi polynomial `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn jacobi_polynomial(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if n == 0 {
        return p_prev;
    }
    let mut p = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + alpha + beta;
        let a1 = 2.0 * k * (k + alpha + beta) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    p
}

/// Unnormalized Chelyshkov polynomial `ψ_i(s)` through its Jacobi form
/// `(−1)^{N−i} s^i P_{N−i}^{(0, 2i+1)}(2s − 1)`.
///
/// Independent of `H`; multiply by `√(2i+1)` to compare with [`Basis::eval`].
pub fn jacobi_crosscheck(basis: &Basis, i: usize, s: f64) -> f64 {
    debug_assert_eq!(basis.kind(), BasisKind::Chelyshkov);
    let n = basis.degree();
    assert!(i <= n, "index {i} exceeds degree {n}");
    let sign = if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * s.powi(i as i32) * jacobi_polynomial(n - i, 0.0, (2 * i + 1) as f64, 2.0 * s - 1.0)
}
