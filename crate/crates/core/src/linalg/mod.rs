//! Dense square-matrix primitives shared by every other module.

mod det;
mod eigen;
mod json;
mod matrix;
mod scalar;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{domain, Result};

pub use eigen::{collatz_wielandt_ratio, eigenvalues, spectral_abscissa, spectral_radius, Complex64};
pub use json::{matrices_from_json, matrices_to_json, AnyMatrix};
pub use matrix::{linear_combination, Matrix};
pub use scalar::{parse_rational, Rational, Scalar};

/// Environment variable that overrides [`Tolerance::DEFAULT`] in the CLI.
pub const TOLERANCE_ENV: &str = "MPOLY_TOL";

/// Absolute tolerance for float boundary comparisons.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Self(eps))
        } else {
            Err(domain(format!("tolerance must be positive and finite, got {eps}")))
        }
    }

    /// Reads `MPOLY_TOL`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(text) => {
                let eps = text.trim().parse::<f64>().map_err(|e| domain(format!("{TOLERANCE_ENV}: {e}")))?;
                Self::new(eps)
            }
            Err(_) => Ok(Self::DEFAULT),
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Yes,
    No,
    Marginal,
}

/// Outcome of one decision, with the signed distance to its boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Serialized as `null` when infinite (a vacuous condition).
    #[serde(deserialize_with = "margin_or_infinity")]
    pub margin: f64,
}

fn margin_or_infinity<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl Verdict {
    /// Sharp decision, used by the exact backing.
    pub fn sharp(pass: bool, margin: f64) -> Self {
        Self { status: if pass { Status::Yes } else { Status::No }, margin }
    }

    /// `YES` above `tol`, `NO` below `-tol`, `MARGINAL` in between.
    pub fn banded(margin: f64, tol: Tolerance) -> Self {
        let status = if margin > tol.value() {
            Status::Yes
        } else if margin < -tol.value() || margin.is_nan() {
            Status::No
        } else {
            Status::Marginal
        };
        Self { status, margin }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }
}
