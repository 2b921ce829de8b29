use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::stats::TrialStatistics;
use super::table::ErrorTable;
use super::trials::BasisComparison;
use crate::error::{Result, SivfieError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = SivfieError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(SivfieError::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

/// Anything the harness can write out.
pub trait Report: Serialize {
    fn to_csv(&self) -> String;

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

impl Report for TrialStatistics {
    fn to_csv(&self) -> String {
        format!(
            "n,N,mean,sd,ci_lo,ci_hi\n{},{},{},{},{},{}\n",
            self.n, self.degree, self.mean, self.sd, self.ci_lo, self.ci_hi
        )
    }
}

impl Report for ErrorTable {
    fn to_csv(&self) -> String {
        let mut out = String::from("zeta,eta,approx,exact,abs_error\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.zeta, r.eta, r.approx, r.exact, r.abs_error);
        }
        out
    }
}

impl Report for BasisComparison {
    fn to_csv(&self) -> String {
        let (l, r) = (self.left_basis, self.right_basis);
        let mut out = format!("zeta,eta,exact,{l}_approx,{l}_abs_error,{r}_approx,{r}_abs_error\n");
        for (a, b) in self.left.rows.iter().zip(&self.right.rows) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                a.zeta, a.eta, a.exact, a.approx, a.abs_error, b.approx, b.abs_error
            );
        }
        out
    }
}

/// Writes the report to `destination`.
pub fn emit_report<R: Report>(report: &R, format: Format, destination: &Path) -> Result<()> {
    std::fs::write(destination, report.render(format)).map_err(|source| SivfieError::Io {
        path: destination.display().to_string(),
        source,
    })
}
