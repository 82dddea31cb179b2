use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HppError, Result};

/// Exponential family with dispersion fixed at one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlmFamily {
    Gaussian,
    Poisson,
    Logistic,
}

impl GlmFamily {
    /// Cumulant `A(η)`. Poisson returns `+∞` on overflow; callers decide
    /// whether that is an error.
    pub fn cumulant(self, eta: f64) -> f64 {
        match self {
            GlmFamily::Gaussian => 0.5 * eta * eta,
            GlmFamily::Poisson => eta.exp(),
            GlmFamily::Logistic => {
                if eta > 30.0 {
                    eta + (-eta).exp().ln_1p()
                } else {
                    eta.exp().ln_1p()
                }
            }
        }
    }

    /// Mean function `Ȧ(η)`.
    pub fn mean(self, eta: f64) -> f64 {
        match self {
            GlmFamily::Gaussian => eta,
            GlmFamily::Poisson => eta.exp(),
            GlmFamily::Logistic => {
                if eta >= 0.0 {
                    1.0 / (1.0 + (-eta).exp())
                } else {
                    let e = eta.exp();
                    e / (1.0 + e)
                }
            }
        }
    }

    /// Variance function `Ä(η) >= 0`.
    pub fn variance(self, eta: f64) -> f64 {
        match self {
            GlmFamily::Gaussian => 1.0,
            GlmFamily::Poisson => eta.exp(),
            GlmFamily::Logistic => {
                let m = self.mean(eta);
                m * (1.0 - m)
            }
        }
    }

    pub fn dispersion(self) -> f64 {
        1.0
    }

    pub fn name(self) -> &'static str {
        match self {
            GlmFamily::Gaussian => "gaussian",
            GlmFamily::Poisson => "poisson",
            GlmFamily::Logistic => "logistic",
        }
    }

    /// Checks the response support: `{0, 1}` for logistic, nonnegative
    /// integers for Poisson.
    pub fn check_response(self, y: &[f64]) -> Result<()> {
        for (i, &v) in y.iter().enumerate() {
            let ok = v.is_finite()
                && match self {
                    GlmFamily::Gaussian => true,
                    GlmFamily::Poisson => v >= 0.0 && v.fract() == 0.0,
                    GlmFamily::Logistic => v == 0.0 || v == 1.0,
                };
            if !ok {
                return Err(HppError::arg(format!(
                    "response {i} = {v} is outside the {} family's support",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GlmFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GlmFamily {
    type Err = HppError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(GlmFamily::Gaussian),
            "poisson" => Ok(GlmFamily::Poisson),
            "logistic" | "binomial" => Ok(GlmFamily::Logistic),
            other => Err(HppError::arg(format!("unknown family '{other}'"))),
        }
    }
}
