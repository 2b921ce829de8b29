//! Reference pathwise integrals on a sampled Brownian path.

use super::BrownianPath;
use crate::error::{Result, SivfieError};

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(SivfieError::InvalidInterval { a, b });
    }
    Ok(())
}

/// Trapezoidal `∫ₐᵇ s^k B(s) ds` on the path grid; partial end cells use
/// the interpolated path value.
pub fn weighted_path_integral(path: &BrownianPath, k: u32, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    let knots = path.knots(a, b);
    let f = |s: f64| s.powi(k as i32) * path.value_unchecked(s);
    let mut acc = 0.0;
    let mut prev = (knots[0], f(knots[0]));
    for &s in &knots[1..] {
        let cur = (s, f(s));
        acc += 0.5 * (cur.0 - prev.0) * (cur.1 + prev.1);
        prev = cur;
    }
    Ok(acc)
}

/// Left-point Itô sum `Σ h(t_k)(B(t_{k+1}) − B(t_k))` over the grid cells
/// of `[a, b]`.
pub fn ito_integral_oracle<H>(h: H, path: &BrownianPath, a: f64, b: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    check_interval(a, b)?;
    let knots = path.knots(a, b);
    let mut acc = 0.0;
    let mut prev_t = knots[0];
    let mut prev_b = path.value_unchecked(prev_t);
    for &t in &knots[1..] {
        let cur_b = path.value_unchecked(t);
        acc += h(prev_t) * (cur_b - prev_b);
        prev_t = t;
        prev_b = cur_b;
    }
    Ok(acc)
}

/// Left-point sum with an integrand given per grid index, for pathwise
/// integrands such as `B` itself.
pub fn ito_integral_indexed<H>(h: H, path: &BrownianPath) -> f64
where
    H: Fn(usize) -> f64,
{
    path.values()
        .windows(2)
        .enumerate()
        .map(|(k, w)| h(k) * (w[1] - w[0]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::sample_brownian_path;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_interval_is_zero() {
        let p = sample_brownian_path(64, 3).unwrap();
        assert_eq!(weighted_path_integral(&p, 2, 0.3, 0.3).unwrap(), 0.0);
        assert_eq!(ito_integral_oracle(|_| 1.0, &p, 0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn zero_path() {
        let p = BrownianPath::zero(64).unwrap();
        assert_eq!(weighted_path_integral(&p, 0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(weighted_path_integral(&p, 3, 0.1, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn linear_path_is_integrated_exactly() {
        let p = BrownianPath::from_fn(64, |t| t).unwrap();
        assert_abs_diff_eq!(weighted_path_integral(&p, 0, 0.0, 1.0).unwrap(), 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(
            weighted_path_integral(&p, 0, 0.13, 0.61).unwrap(),
            0.5 * (0.61f64.powi(2) - 0.13f64.powi(2)),
            epsilon = 1e-12
        );
    }

    #[test]
    fn weighted_integral_converges_for_smooth_path() {
        // B(t) = t² gives ∫₀¹ s·s² ds = 1/4, trapezoid error O(Δt²).
        let p = BrownianPath::from_fn(1024, |t| t * t).unwrap();
        assert_abs_diff_eq!(weighted_path_integral(&p, 1, 0.0, 1.0).unwrap(), 0.25, epsilon = 1e-6);
    }

    #[test]
    fn constant_integrand_telescopes() {
        let p = sample_brownian_path(256, 11).unwrap();
        for k in [1, 17, 128, 256] {
            let u = p.time(k);
            let v = ito_integral_oracle(|_| 1.0, &p, 0.0, u).unwrap();
            assert_abs_diff_eq!(v, p.values()[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_intervals() {
        let p = BrownianPath::zero(8).unwrap();
        assert!(weighted_path_integral(&p, 0, 0.6, 0.2).is_err());
        assert!(ito_integral_oracle(|_| 1.0, &p, -0.1, 0.2).is_err());
        assert!(ito_integral_oracle(|_| 1.0, &p, 0.0, 1.2).is_err());
    }

    #[test]
    fn b_db_matches_ito_formula_pathwise() {
        // Left sum of B dB equals (B(1)² − Σ(ΔB)²)/2 exactly.
        let p = sample_brownian_path(1 << 10, 5).unwrap();
        let vals = p.values();
        let left = ito_integral_indexed(|k| vals[k], &p);
        let qv: f64 = vals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        assert_abs_diff_eq!(left, 0.5 * (vals[1 << 10].powi(2) - qv), epsilon = 1e-12);
        let via_closure = ito_integral_oracle(|t| p.value_unchecked(t), &p, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(left, via_closure, epsilon = 1e-12);
    }
}
