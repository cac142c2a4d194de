//! Bernstein polynomial approximants on `[0,1]`.
//!
//! `B_n(f, x) = Σ_k f(k/n) C(n,k) x^k (1-x)^(n-k)` is evaluated with the
//! de Casteljau recurrence, which only forms convex combinations and so
//! never overflows the binomials. A log-space direct sum is kept for
//! cross-checking.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lip::{lip_constant_with, SampledFunction};
use crate::metric::uniform_interval;
use crate::par::{self, Execution};
use crate::trace::{Check, Construction, ConvergenceTrace, TraceRow, CERTIFICATE_TOL, IDENTITY_TOL};

/// Smallest evaluation grid the density check accepts.
pub const MIN_GRID: usize = 8;
pub const DEFAULT_GRID: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinApproximant {
    degree: usize,
    /// `f(k/n)` for `k = 0..=n`.
    coefficients: Vec<f64>,
}

impl BernsteinApproximant {
    /// Samples `f` at `k/n`.
    pub fn build(f: impl Fn(f64) -> f64, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroIndex);
        }
        let coefficients = (0..=degree).map(|k| f(k as f64 / degree as f64)).collect();
        Ok(BernsteinApproximant { degree, coefficients })
    }

    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::ZeroIndex);
        }
        Ok(BernsteinApproximant { degree: coefficients.len() - 1, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutsideInterval(x));
        }
        let mut scratch = self.coefficients.clone();
        Ok(de_casteljau(&mut scratch, x))
    }

    /// Evaluates at many points, reusing one scratch buffer.
    pub fn eval_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut scratch = vec![0.0; self.coefficients.len()];
        xs.iter()
            .map(|&x| {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::OutsideInterval(x));
                }
                scratch.copy_from_slice(&self.coefficients);
                Ok(de_casteljau(&mut scratch, x))
            })
            .collect()
    }

    /// The defining sum with binomials and powers taken in log space.
    /// Less stable than [`eval`](Self::eval); meant for cross-checks.
    pub fn eval_direct(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutsideInterval(x));
        }
        let n = self.degree;
        if x == 0.0 {
            return Ok(self.coefficients[0]);
        }
        if x == 1.0 {
            return Ok(self.coefficients[n]);
        }
        let (lx, l1x) = (x.ln(), (-x).ln_1p());
        let mut log_binom = 0.0f64;
        let mut sum = 0.0;
        for (k, c) in self.coefficients.iter().enumerate() {
            if k > 0 {
                log_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
            }
            sum += c * (log_binom + k as f64 * lx + (n - k) as f64 * l1x).exp();
        }
        Ok(sum)
    }
}

fn de_casteljau(b: &mut [f64], x: f64) -> f64 {
    let n = b.len() - 1;
    let y = 1.0 - x;
    for r in 1..=n {
        for k in 0..=(n - r) {
            b[k] = y * b[k] + x * b[k + 1];
        }
    }
    b[0]
}

/// Test functions on `[0,1]` vanishing at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalFunction {
    Zero,
    Identity,
    /// `x^p`, `p > 0`.
    Power(f64),
    /// Unit-slope tent `max{0, c - |x - c|}` peaking at `c`.
    Hat(f64),
}

impl IntervalFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            IntervalFunction::Zero => 0.0,
            IntervalFunction::Identity => x,
            IntervalFunction::Power(p) => x.powf(p),
            IntervalFunction::Hat(c) => (c - (x - c).abs()).max(0.0),
        }
    }
}

impl FromStr for IntervalFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let param = |what: &str| -> std::result::Result<f64, String> {
            let a = arg.ok_or_else(|| format!("{name} needs a parameter, e.g. {name}:0.5"))?;
            let v: f64 = a.parse().map_err(|_| format!("bad {what} {a:?} in {s:?}"))?;
            Ok(v)
        };
        match name {
            "zero" if arg.is_none() => Ok(IntervalFunction::Zero),
            "identity" if arg.is_none() => Ok(IntervalFunction::Identity),
            "power" => {
                let p = param("exponent")?;
                if !(p > 0.0 && p.is_finite()) {
                    return Err(format!("power exponent must be positive, got {p}"));
                }
                Ok(IntervalFunction::Power(p))
            }
            "hat" => {
                let c = param("peak")?;
                if !(c > 0.0 && c <= 1.0) {
                    return Err(format!("hat peak must lie in (0,1], got {c}"));
                }
                Ok(IntervalFunction::Hat(c))
            }
            _ => Err(format!("unknown interval function {s:?} (expected zero, identity, power:p, hat:c)")),
        }
    }
}

/// Uniform grid `k/(size-1)`, `k = 0..size`.
pub fn interval_grid(size: usize) -> Vec<f64> {
    (0..size).map(|k| k as f64 / (size - 1) as f64).collect()
}

pub fn bernstein_density_check(
    f: &(dyn Fn(f64) -> f64 + Sync),
    alpha: f64,
    grid_size: usize,
    degrees: &[usize],
) -> Result<ConvergenceTrace> {
    bernstein_density_check_with(f, alpha, grid_size, degrees, Execution::default())
}

/// Samples `B_n f` on a uniform grid for every degree and records its Hölder
/// and Lipschitz constants and its uniform error.
pub fn bernstein_density_check_with(
    f: &(dyn Fn(f64) -> f64 + Sync),
    alpha: f64,
    grid_size: usize,
    degrees: &[usize],
    exec: Execution,
) -> Result<ConvergenceTrace> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange { alpha, allowed: "(0,1)" });
    }
    if grid_size < MIN_GRID {
        return Err(Error::GridTooCoarse { size: grid_size, min: MIN_GRID });
    }
    if degrees.contains(&0) {
        return Err(Error::ZeroIndex);
    }
    let grid = interval_grid(grid_size);
    let space = uniform_interval(grid_size)?;
    let holder = space.snowflake(alpha)?;
    let target = SampledFunction::new(&space, grid.iter().map(|&x| f(x)).collect())?;
    let target_lip = lip_constant_with(&holder, target.values(), exec);
    if target_lip > 1.0 + CERTIFICATE_TOL {
        return Err(Error::OutsideUnitBall { lip: target_lip });
    }

    let per_degree = par::map_indices(exec, degrees.len(), |k| -> Result<_> {
        let n = degrees[k];
        let b = BernsteinApproximant::build(f, n)?;
        let values = b.eval_many(&grid)?;
        let seq = Execution::Sequential;
        let row = TraceRow {
            n,
            size: n,
            lip_alpha: lip_constant_with(&holder, &values, seq),
            lip_base: lip_constant_with(&space, &values, seq),
            sup_error: max_abs_diff(target.values(), &values),
            bound: None,
            radius: None,
            normalizer: None,
            normalized_error: None,
        };
        let endpoints = (values[0] - f(0.0)).abs().max((values[grid_size - 1] - f(1.0)).abs());
        Ok((row, endpoints))
    });

    let mut rows = Vec::with_capacity(degrees.len());
    let mut checks = Vec::new();
    for r in per_degree {
        let (row, endpoints) = r?;
        let at = Some(row.n);
        checks.push(Check::at_most("holder-ball", at, row.lip_alpha, 1.0 + CERTIFICATE_TOL));
        checks.push(Check::at_most("endpoint-interpolation", at, endpoints, IDENTITY_TOL));
        rows.push(row);
    }
    if let Some(check) = decrease_check(&rows) {
        checks.push(check);
    }
    Ok(ConvergenceTrace { construction: Construction::Bernstein, alpha, rows, checks })
}

/// Error at the last index must undercut the error at the first, strictly,
/// unless the first is already at rounding level.
pub(crate) fn decrease_check(rows: &[TraceRow]) -> Option<Check> {
    let (first, last) = (rows.first()?, rows.last()?);
    if rows.len() < 2 {
        return None;
    }
    let limit = if first.sup_error > IDENTITY_TOL {
        first.sup_error.next_down()
    } else {
        IDENTITY_TOL
    };
    Some(Check::at_most("uniform-convergence", None, last.sup_error, limit))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
