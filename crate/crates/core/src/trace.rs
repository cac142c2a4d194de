//! Per-index records and invariant verdicts for density experiments.

use serde::{Deserialize, Serialize};

/// Absolute tolerance for algebraic identities (interpolation, recentering).
pub const IDENTITY_TOL: f64 = 1e-12;
/// Absolute tolerance for inequality certificates involving powers and logs.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Cone,
    Bernstein,
    Fejer,
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Construction::Cone => "cone",
            Construction::Bernstein => "bernstein",
            Construction::Fejer => "fejer",
        })
    }
}

/// One approximant in a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// Sequence index: cone step, Bernstein degree or Fejér order.
    pub n: usize,
    /// Net size for the cone construction, the degree/order otherwise.
    pub size: usize,
    /// Lipschitz constant of the approximant in the Hölder metric `d^alpha`.
    pub lip_alpha: f64,
    /// Lipschitz constant of the approximant in the base metric `d`.
    pub lip_base: f64,
    /// Uniform error against the target on the sample points.
    pub sup_error: f64,
    /// Certified upper bound for `sup_error`, where one exists.
    pub bound: Option<f64>,
    /// Cone only: net radius in `d^alpha` units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Cone only: the normalizer `r_n = max{1, Lip(h_n)}` actually applied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<f64>,
    /// Cone only: uniform error of the normalized approximant `h_n / r_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_error: Option<f64>,
}

/// A single invariant evaluation: `measured <= limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub invariant: String,
    /// Sequence index the check belongs to; `None` for whole-trace checks.
    pub index: Option<usize>,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(invariant: &str, index: Option<usize>, measured: f64, limit: f64) -> Self {
        Check { invariant: invariant.to_owned(), index, measured, limit, passed: measured <= limit }
    }

    /// `limit - measured`; negative when the check failed.
    pub fn slack(&self) -> f64 {
        self.limit - self.measured
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub construction: Construction,
    pub alpha: f64,
    pub rows: Vec<TraceRow>,
    pub checks: Vec<Check>,
}

impl ConvergenceTrace {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether every check attached to index `n` (and every whole-trace
    /// check) passed.
    pub fn row_passed(&self, n: usize) -> bool {
        self.checks.iter().filter(|c| c.index.is_none_or(|i| i == n)).all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
