//! Dense LU factorization with partial pivoting.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SivfieError};

/// Relative pivot threshold below which a system is declared singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
    min_pivot: f64,
    norm: f64,
}

/// Infinity norm (largest absolute row sum).
pub fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl LuFactors {
    /// Factorizes `PA = LU`; fails when a pivot drops below
    /// `SINGULAR_PIVOT_RATIO · ‖A‖∞`.
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(SivfieError::DimensionMismatch {
                expected: n,
                actual: a.ncols(),
                context: "LU requires a square matrix",
            });
        }
        let norm = inf_norm(a);
        let threshold = SINGULAR_PIVOT_RATIO * norm;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let (offset, pivot) =
                lu.view((col, col), (n - col, 1))
                    .iter()
                    .enumerate()
                    .fold(
                        (0, 0.0f64),
                        |best, (i, &v)| if v.abs() > best.1 { (i, v.abs()) } else { best },
                    );
            let p = col + offset;
            min_pivot = min_pivot.min(pivot);
            if pivot <= threshold || pivot == 0.0 {
                return Err(SivfieError::SingularSystem {
                    column: col,
                    pivot,
                    condition: if pivot > 0.0 { norm / pivot } else { f64::INFINITY },
                });
            }
            if p != col {
                lu.swap_rows(p, col);
                perm.swap(p, col);
            }
            let diag = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / diag;
                lu[(r, col)] = factor;
                if factor != 0.0 {
                    for c in col + 1..n {
                        lu[(r, c)] -= factor * lu[(col, c)];
                    }
                }
            }
        }
        Ok(LuFactors {
            lu,
            perm,
            min_pivot,
            norm,
        })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.lu.nrows();
        let mut x = DVector::from_iterator(n, self.perm.iter().map(|&p| b[p]));
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.lu[(r, c)] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc -= self.lu[(r, c)] * x[c];
            }
            x[r] = acc / self.lu[(r, r)];
        }
        x
    }

    /// Crude conditioning indicator `‖A‖∞ / min |pivot|`.
    pub fn condition_estimate(&self) -> f64 {
        self.norm / self.min_pivot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity() {
        let a = DMatrix::<f64>::identity(4, 4);
        let b = DVector::from_vec(vec![1.0, -2.0, 3.5, 0.0]);
        assert_eq!(LuFactors::new(&a).unwrap().solve(&b), b);
    }

    #[test]
    fn needs_pivoting() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 0.0]);
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let b = &a * &x;
        let sol = LuFactors::new(&a).unwrap().solve(&b);
        for i in 0..3 {
            assert_abs_diff_eq!(sol[i], x[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn duplicate_rows_are_singular() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 1.0, 2.0, 3.0]);
        let err = LuFactors::new(&a).unwrap_err();
        assert!(err.is_singular());
        assert!(matches!(err, SivfieError::SingularSystem { condition, .. } if condition > 1e12));
    }

    #[test]
    fn rejects_non_square() {
        assert!(LuFactors::new(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn condition_of_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-3]));
        assert_abs_diff_eq!(LuFactors::new(&a).unwrap().condition_estimate(), 1e3, epsilon = 1e-9);
    }
}
