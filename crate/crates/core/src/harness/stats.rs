use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Result, SivfieError};

/// Per-trial errors of a Monte-Carlo run and their summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStatistics {
    pub n: usize,
    #[serde(rename = "N")]
    pub degree: usize,
    pub per_trial_mae: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seeds: Vec<u64>,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n − 1` denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

/// Two-sided Student-t quantile `t_{p, dof}`.
pub fn student_t_quantile(p: f64, dof: f64) -> f64 {
    // Location 0, scale 1 and a positive dof are always accepted.
    let dist = StudentsT::new(0.0, 1.0, dof).expect("valid Student-t parameters");
    dist.inverse_cdf(p)
}

/// `mean ∓ t_{(1+level)/2, n−1} · sd / √n`.
pub fn confidence_interval(mean: f64, sd: f64, n: usize, level: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(SivfieError::TooFewSamples(n));
    }
    if sd == 0.0 {
        return Ok((mean, mean));
    }
    let t = student_t_quantile(0.5 * (1.0 + level), (n - 1) as f64);
    let half = t * sd / (n as f64).sqrt();
    Ok((mean - half, mean + half))
}

impl TrialStatistics {
    pub fn from_samples(degree: usize, per_trial_mae: Vec<f64>, seeds: Vec<u64>) -> Result<Self> {
        let n = per_trial_mae.len();
        if n < 2 {
            return Err(SivfieError::TooFewSamples(n));
        }
        let m = mean(&per_trial_mae);
        let sd = sample_sd(&per_trial_mae);
        let (ci_lo, ci_hi) = confidence_interval(m, sd, n, 0.95)?;
        Ok(TrialStatistics {
            n,
            degree,
            per_trial_mae,
            mean: m,
            sd,
            ci_lo,
            ci_hi,
            seeds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn t_quantiles() {
        assert_abs_diff_eq!(student_t_quantile(0.975, 9.0), 2.262_157_162_798_205, epsilon = 1e-9);
        assert_abs_diff_eq!(student_t_quantile(0.975, 19.0), 2.093_024_054_408_263, epsilon = 1e-9);
        assert_abs_diff_eq!(student_t_quantile(0.975, 1.0), 12.706_204_736_174_7, epsilon = 1e-8);
    }

    #[test]
    fn reference_intervals() {
        let (lo, hi) = confidence_interval(8.20046e-3, 1.5009e-3, 10, 0.95).unwrap();
        assert_abs_diff_eq!(lo, 7.12685e-3, epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 9.27406e-3, epsilon = 1e-6);
        let (lo, _) = confidence_interval(4.80034e-2, 1.44572e-2, 10, 0.95).unwrap();
        assert_abs_diff_eq!(lo, 3.7662e-2, epsilon = 1e-5);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(confidence_interval(0.3, 0.0, 5, 0.95).unwrap(), (0.3, 0.3));
        assert!(matches!(
            confidence_interval(0.3, 0.1, 1, 0.95),
            Err(SivfieError::TooFewSamples(1))
        ));
        let s = TrialStatistics::from_samples(2, vec![0.5, 0.5], vec![1, 1]).unwrap();
        assert_eq!(s.sd, 0.0);
        assert_eq!((s.ci_lo, s.ci_hi), (0.5, 0.5));
    }

    #[test]
    fn summary_matches_definitions() {
        let xs = vec![1.0, 2.0, 4.0, 7.0];
        let s = TrialStatistics::from_samples(3, xs.clone(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(s.mean, 3.5);
        assert_abs_diff_eq!(s.sd, (7.0f64).sqrt(), epsilon = 1e-14);
        let half = student_t_quantile(0.975, 3.0) * s.sd / 2.0;
        assert_abs_diff_eq!(s.ci_hi - s.mean, half, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mean - s.ci_lo, half, epsilon = 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let s = TrialStatistics::from_samples(2, vec![0.1, 0.2 / 3.0, 1e-7], vec![5, 6, 7]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"N\":2"));
        let back: TrialStatistics = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
