//! Declarative kernel and forcing forms for problems read from config files.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{builtin, ItoCoupling, Kernel, PlaneFn, ProblemSpec};
use crate::error::{Result, SivfieError};

const MAX_POWER: u32 = 32;

/// `coef · u^p₀ v^p₁ s^p₂ t^p₃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTerm {
    pub coef: f64,
    pub powers: [u32; 4],
}

/// `coef · u^p₀ v^p₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneTerm {
    pub coef: f64,
    pub powers: [u32; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Sin,
    Cos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum KernelForm {
    Zero,
    Polynomial {
        terms: Vec<KernelTerm>,
    },
    /// `coef · u^p₀ v^p₁ s^p₂ t^p₃ · trig(w₀u + w₁v + w₂s + w₃t)`.
    MonomialTrig {
        coef: f64,
        powers: [u32; 4],
        func: Trig,
        weights: [f64; 4],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ForcingForm {
    Zero,
    Polynomial {
        terms: Vec<PlaneTerm>,
    },
    /// The path-dependent forcing of a built-in problem.
    Builtin {
        problem: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomProblemConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub g: ForcingForm,
    pub kappa1: KernelForm,
    pub kappa2: KernelForm,
    pub kappa3: KernelForm,
    #[serde(default)]
    pub ito_coupling: ItoCoupling,
    #[serde(default)]
    pub exact: Option<Vec<PlaneTerm>>,
}

fn default_name() -> String {
    "custom".into()
}

fn check_coef(c: f64) -> Result<()> {
    if !c.is_finite() {
        return Err(SivfieError::InvalidConfig(format!("non-finite coefficient {c}")));
    }
    Ok(())
}

fn check_powers(p: &[u32]) -> Result<()> {
    if let Some(&bad) = p.iter().find(|&&x| x > MAX_POWER) {
        return Err(SivfieError::InvalidConfig(format!(
            "power {bad} exceeds the limit {MAX_POWER}"
        )));
    }
    Ok(())
}

fn plane_poly(terms: &[PlaneTerm]) -> Result<PlaneFn> {
    for t in terms {
        check_coef(t.coef)?;
        check_powers(&t.powers)?;
    }
    let terms = terms.to_vec();
    Ok(Arc::new(move |u, v| {
        terms
            .iter()
            .map(|t| t.coef * u.powi(t.powers[0] as i32) * v.powi(t.powers[1] as i32))
            .sum()
    }))
}

fn monomial(p: &[u32; 4], x: [f64; 4]) -> f64 {
    p.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product()
}

impl KernelForm {
    pub fn build(&self) -> Result<Kernel> {
        match self {
            KernelForm::Zero => Ok(Arc::new(|_, _, _, _| 0.0)),
            KernelForm::Polynomial { terms } => {
                for t in terms {
                    check_coef(t.coef)?;
                    check_powers(&t.powers)?;
                }
                let terms = terms.clone();
                Ok(Arc::new(move |u, v, s, t| {
                    terms
                        .iter()
                        .map(|term| term.coef * monomial(&term.powers, [u, v, s, t]))
                        .sum()
                }))
            }
            KernelForm::MonomialTrig {
                coef,
                powers,
                func,
                weights,
            } => {
                check_coef(*coef)?;
                check_powers(powers)?;
                for &w in weights {
                    check_coef(w)?;
                }
                let (coef, powers, func, w) = (*coef, *powers, *func, *weights);
                Ok(Arc::new(move |u, v, s, t| {
                    let arg = w[0] * u + w[1] * v + w[2] * s + w[3] * t;
                    let trig = match func {
                        Trig::Sin => arg.sin(),
                        Trig::Cos => arg.cos(),
                    };
                    coef * monomial(&powers, [u, v, s, t]) * trig
                }))
            }
        }
    }
}

impl CustomProblemConfig {
    pub fn build(&self) -> Result<ProblemSpec> {
        let g: super::Forcing = match &self.g {
            ForcingForm::Zero => Arc::new(|_, _, _| 0.0),
            ForcingForm::Polynomial { terms } => {
                let f = plane_poly(terms)?;
                Arc::new(move |u, v, _| f(u, v))
            }
            ForcingForm::Builtin { problem } => {
                builtin(problem)
                    .ok_or_else(|| SivfieError::InvalidConfig(format!("unknown built-in problem '{problem}'")))?
                    .g
            }
        };
        let exact = self.exact.as_deref().map(plane_poly).transpose()?;
        Ok(ProblemSpec {
            name: self.name.clone(),
            g,
            kappa1: self.kappa1.build()?,
            kappa2: self.kappa2.build()?,
            kappa3: self.kappa3.build()?,
            ito_coupling: self.ito_coupling,
            exact,
        })
    }
}
