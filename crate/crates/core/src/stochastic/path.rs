use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SivfieError};

/// One realization of `B(t)` on the uniform grid `k/M`, `k = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    grid_size: usize,
    values: Vec<f64>,
    seed: u64,
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return Err(SivfieError::InvalidGrid(m));
    }
    Ok(())
}

/// Samples a path with `M` steps.
///
/// The generator is ChaCha20 seeded through `SeedableRng::seed_from_u64`,
/// and increments are `√Δt·Z` with `Z` drawn from `rand_distr::StandardNormal`
/// (ziggurat method), so equal `(M, seed)` replay bit-identically.
pub fn sample_brownian_path(grid_size: usize, seed: u64) -> Result<BrownianPath> {
    check_grid(grid_size)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = (1.0 / grid_size as f64).sqrt();
    let mut values = Vec::with_capacity(grid_size + 1);
    let mut acc = 0.0;
    values.push(acc);
    for _ in 0..grid_size {
        let z: f64 = rng.sample(StandardNormal);
        acc += scale * z;
        values.push(acc);
    }
    Ok(BrownianPath {
        grid_size,
        values,
        seed,
    })
}

impl BrownianPath {
    /// Wraps explicit grid values, e.g. a replayed or synthetic path.
    pub fn from_values(values: Vec<f64>, seed: u64) -> Result<Self> {
        let m = values.len().saturating_sub(1);
        check_grid(m)?;
        if values[0] != 0.0 {
            return Err(SivfieError::InvalidConfig(format!(
                "Brownian path must start at 0, got {}",
                values[0]
            )));
        }
        Ok(BrownianPath {
            grid_size: m,
            values,
            seed,
        })
    }

    /// The identically zero path.
    pub fn zero(grid_size: usize) -> Result<Self> {
        Self::from_values(vec![0.0; grid_size + 1], 0)
    }

    /// Path sampled from a deterministic function of `t` on the grid.
    pub fn from_fn<F: Fn(f64) -> f64>(grid_size: usize, f: F) -> Result<Self> {
        check_grid(grid_size)?;
        let values = (0..=grid_size)
            .map(|k| if k == 0 { 0.0 } else { f(k as f64 / grid_size as f64) })
            .collect();
        Self::from_values(values, 0)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn step(&self) -> f64 {
        1.0 / self.grid_size as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Grid time of index `k`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.grid_size as f64
    }

    /// `B(t)` by linear interpolation; exact at grid points.
    pub fn value(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SivfieError::OutOfDomain(t));
        }
        Ok(self.value_unchecked(t))
    }

    pub(crate) fn value_unchecked(&self, t: f64) -> f64 {
        let x = t * self.grid_size as f64;
        let idx = x.floor() as usize;
        if idx >= self.grid_size {
            return self.values[self.grid_size];
        }
        let frac = x - idx as f64;
        if frac == 0.0 {
            return self.values[idx];
        }
        let (lo, hi) = (self.values[idx], self.values[idx + 1]);
        lo + frac * (hi - lo)
    }

    /// Knots `a`, interior grid points, `b` (deduplicated at grid points).
    pub(crate) fn knots(&self, a: f64, b: f64) -> Vec<f64> {
        let m = self.grid_size as f64;
        let mut out = vec![a];
        let first = (a * m).floor() as usize + 1;
        let mut k = first;
        while k < self.grid_size && self.time(k) < b {
            out.push(self.time(k));
            k += 1;
        }
        if b > a {
            out.push(b);
        }
        out
    }

    /// Writes `t,B` rows preceded by a `# seed=` comment.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed={}", self.seed);
        out.push_str("t,B\n");
        for (k, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.time(k), v);
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| SivfieError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        let parse_err = |message: String| SivfieError::Parse {
            path: origin.to_string(),
            message,
        };
        let mut seed = 0u64;
        let mut values = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# seed=") {
                seed = rest
                    .parse()
                    .map_err(|e| parse_err(format!("line {}: bad seed: {e}", lineno + 1)))?;
                continue;
            }
            if !saw_header {
                if line != "t,B" {
                    return Err(parse_err(format!("expected header 't,B', found '{line}'")));
                }
                saw_header = true;
                continue;
            }
            let (_, b) = line
                .split_once(',')
                .ok_or_else(|| parse_err(format!("line {}: expected two columns", lineno + 1)))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("line {}: {e}", lineno + 1)))?;
            values.push(b);
        }
        Self::from_values(values, seed)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| SivfieError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_csv_str(&text, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn starts_at_zero_and_replays() {
        for seed in [0, 1, 42, u64::MAX] {
            let p = sample_brownian_path(64, seed).unwrap();
            assert_eq!(p.values()[0], 0.0);
            assert_eq!(p.values().len(), 65);
            assert_eq!(p, sample_brownian_path(64, seed).unwrap());
        }
        assert_ne!(
            sample_brownian_path(64, 1).unwrap().values(),
            sample_brownian_path(64, 2).unwrap().values()
        );
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(sample_brownian_path(1, 0), Err(SivfieError::InvalidGrid(1))));
        assert!(matches!(sample_brownian_path(12, 0), Err(SivfieError::InvalidGrid(12))));
        assert!(BrownianPath::from_values(vec![0.0, 1.0, 2.0, 3.0], 0).is_err());
        assert!(BrownianPath::from_values(vec![1.0, 1.0, 2.0], 0).is_err());
    }

    #[test]
    fn interpolation() {
        let p = sample_brownian_path(16, 7).unwrap();
        assert_eq!(p.value(0.0).unwrap(), 0.0);
        for k in 0..=16 {
            assert_eq!(p.value(k as f64 / 16.0).unwrap(), p.values()[k]);
        }
        let mid = p.value(3.5 / 16.0).unwrap();
        assert_abs_diff_eq!(mid, 0.5 * (p.values()[3] + p.values()[4]), epsilon = 1e-15);
        assert!(matches!(p.value(1.5), Err(SivfieError::OutOfDomain(_))));
        assert!(p.value(-0.1).is_err());
    }

    #[test]
    fn knots_cover_interval() {
        let p = BrownianPath::zero(8).unwrap();
        assert_eq!(p.knots(0.0, 1.0).len(), 9);
        assert_eq!(p.knots(0.1, 0.3), vec![0.1, 0.125, 0.25, 0.3]);
        assert_eq!(p.knots(0.25, 0.5), vec![0.25, 0.375, 0.5]);
        assert_eq!(p.knots(0.4, 0.4), vec![0.4]);
    }

    #[test]
    fn csv_round_trip() {
        let p = sample_brownian_path(32, 99).unwrap();
        let text = p.to_csv_string();
        assert!(text.lines().nth(1) == Some("t,B"));
        let back = BrownianPath::from_csv_str(&text, "mem").unwrap();
        assert_eq!(back, p);

        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("path.csv");
        p.save_csv(&file).unwrap();
        assert_eq!(BrownianPath::load_csv(&file).unwrap(), p);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(BrownianPath::from_csv_str("x,y\n0,0\n", "mem").is_err());
        assert!(BrownianPath::from_csv_str("t,B\n0,0\n0.5,abc\n1,0\n", "mem").is_err());
    }
}
