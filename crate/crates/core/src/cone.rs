//! Cone-max interpolation into little-Hölder functions.
//!
//! Given `f` on a finite space with base metric `d`, a center set `F` and a
//! target Hölder exponent `alpha`, the interpolant is
//!
//! ```text
//! h(x) = max_j max{ f̃(x_j) - rho * d(x_j, x)^gamma, 0 } - shift
//! ```
//!
//! where `f̃ = f + shift` is made nonnegative by `shift = sup|f|`, the
//! exponent `gamma` sits strictly above `alpha` but close enough that
//! `Lip_{d^alpha}(h) <= (1 + 1/n) Lip_{d^alpha}(f)`, and `rho` is the largest
//! `d^gamma` quotient of `f̃` over `F`. Each cone is `rho`-Lipschitz in
//! `d^gamma`, which is the computable form of `h` being little-Hölder of
//! order `alpha`.
//!
//! [`little_approx_sequence`] runs the construction over nets of radius
//! `1/n` in `d^alpha` and normalizes each `h_n` into the unit ball.

use std::collections::HashSet;
use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lip::{lip_constant, lip_constant_with, SampledFunction};
use crate::metric::PointedMetricSpace;
use crate::par::{self, Execution};
use crate::trace::{Check, Construction, ConvergenceTrace, TraceRow, CERTIFICATE_TOL, IDENTITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub alpha: f64,
    pub n: usize,
    pub gamma: f64,
    pub rho: f64,
    pub shift: f64,
}

fn check_alpha_open(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha, allowed: "(0,1)" })
    }
}

/// Removes duplicates (keeping first occurrences) and range-checks indices.
fn normalize_centers(centers: &[usize], len: usize) -> Result<Vec<usize>> {
    if centers.is_empty() {
        return Err(Error::EmptyCenters);
    }
    let mut seen = HashSet::with_capacity(centers.len());
    let mut out = Vec::with_capacity(centers.len());
    for &c in centers {
        if c >= len {
            return Err(Error::IndexOutOfRange { index: c, len });
        }
        if seen.insert(c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Exponent and slope for the cones over `centers`; `f` carries the base
/// metric `d`.
pub fn cone_params(
    f: &SampledFunction<'_>,
    centers: &[usize],
    alpha: f64,
    n: usize,
) -> Result<ConeParams> {
    let space = f.space();
    let centers = normalize_centers(centers, space.len())?;
    params_for(space, f.values(), &centers, alpha, n)
}

fn params_for(
    space: &PointedMetricSpace,
    values: &[f64],
    centers: &[usize],
    alpha: f64,
    n: usize,
) -> Result<ConeParams> {
    check_alpha_open(alpha)?;
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let diam = space.diameter();
    if diam == 0.0 {
        return Err(Error::SingletonSpace);
    }
    let shift = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let slope = E * (1.0 / n as f64).ln_1p() / diam;

    let mut gamma = 1.0f64;
    for (a, &j) in centers.iter().enumerate() {
        for &k in &centers[a + 1..] {
            gamma = gamma.min(alpha + slope * space.d(j, k));
        }
    }
    let mut rho = 0.0f64;
    for (a, &j) in centers.iter().enumerate() {
        let fj = values[j] + shift;
        for &k in &centers[a + 1..] {
            let fk = values[k] + shift;
            rho = rho.max((fk - fj).abs() / space.d(j, k).powf(gamma));
        }
    }
    Ok(ConeParams { alpha, n, gamma, rho, shift })
}

/// The interpolant `h`, stored by its centers and shifted center values.
///
/// Serializes as `{centers, center_values, gamma, rho, shift, alpha, n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeApproximant {
    pub centers: Vec<usize>,
    /// `f̃(x_j) = f(x_j) + shift` for each center.
    pub center_values: Vec<f64>,
    #[serde(flatten)]
    pub params: ConeParams,
}

impl ConeApproximant {
    /// Evaluates `h` at a point given its base-metric distances to the
    /// centers, in center order. Works for points outside the sample too.
    pub fn eval_with_distances(&self, distances: &[f64]) -> f64 {
        assert_eq!(distances.len(), self.centers.len(), "one distance per center");
        let ConeParams { gamma, rho, shift, .. } = self.params;
        let lifted = self
            .center_values
            .iter()
            .zip(distances)
            .fold(0.0f64, |m, (&v, &d)| m.max(v - rho * d.powf(gamma)));
        lifted - shift
    }

    /// Raw max-formula value at sample point `x`.
    pub fn eval_at(&self, space: &PointedMetricSpace, x: usize) -> f64 {
        let row = space.row(x);
        let distances: Vec<f64> = self.centers.iter().map(|&c| row[c]).collect();
        self.eval_with_distances(&distances)
    }

    /// Values of `h` on every sample point.
    ///
    /// At a center the formula equals `f̃(x_j)`; that value is returned as is,
    /// so competing cones cannot perturb it by rounding and `h(0) = 0`
    /// holds exactly whenever the base point is a center.
    pub fn sample(&self, space: &PointedMetricSpace) -> Vec<f64> {
        self.sample_with(space, Execution::default())
    }

    pub fn sample_with(&self, space: &PointedMetricSpace, exec: Execution) -> Vec<f64> {
        par::map_indices(exec, space.len(), |x| {
            match self.centers.iter().position(|&c| c == x) {
                Some(j) => self.center_values[j] - self.params.shift,
                None => self.eval_at(space, x),
            }
        })
    }

    /// The single cone `g_j(x) = max{f̃(x_j) - rho d(x_j,x)^gamma, 0}` on
    /// every sample point (unshifted).
    pub fn cone_values(&self, space: &PointedMetricSpace, j: usize) -> Vec<f64> {
        let c = self.centers[j];
        let v = self.center_values[j];
        let ConeParams { gamma, rho, .. } = self.params;
        space.row(c).iter().map(|&d| (v - rho * d.powf(gamma)).max(0.0)).collect()
    }
}

/// Builds the cone-max interpolant of `f` on `centers`.
pub fn cone_interpolant(
    f: &SampledFunction<'_>,
    centers: &[usize],
    alpha: f64,
    n: usize,
) -> Result<ConeApproximant> {
    let space = f.space();
    let centers = normalize_centers(centers, space.len())?;
    let params = params_for(space, f.values(), &centers, alpha, n)?;
    let center_values = centers.iter().map(|&c| f.values()[c] + params.shift).collect();
    Ok(ConeApproximant { centers, center_values, params })
}

/// Minimizer and minimum of `t -> (t/D)^(t e ln(1+1/n) / D)` on `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaMinimum {
    pub argmin: f64,
    pub value: f64,
}

/// Closed form: writing `u = t/D`, the exponent is `e ln(1+1/n) u ln u`,
/// minimized at `u = 1/e` with value `-ln(1+1/n)`.
pub fn min_value_lemma(diameter: f64, n: usize) -> LemmaMinimum {
    LemmaMinimum { argmin: diameter / E, value: 1.0 / (1.0 + 1.0 / n as f64) }
}

/// The map whose minimum [`min_value_lemma`] reports.
pub fn lemma_map(diameter: f64, n: usize, t: f64) -> f64 {
    let c = E * (1.0 / n as f64).ln_1p() / diameter;
    (t / diameter).powf(t * c)
}

/// Per-step detail beyond the trace row.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeStep {
    pub n: usize,
    pub approximant: ConeApproximant,
    /// `h_n` on the sample points.
    pub interpolant: Vec<f64>,
    /// `f_n = h_n / r_n`.
    pub normalized: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ApproxSequence {
    pub trace: ConvergenceTrace,
    pub steps: Vec<ConeStep>,
    /// `Lip_{d^alpha}(f)` of the input; certificates scale by `max{1, this}`.
    pub input_lip_alpha: f64,
}

impl ApproxSequence {
    /// The normalized approximants `f_n` as functions on `space`.
    pub fn functions<'a>(&self, space: &'a PointedMetricSpace) -> Result<Vec<SampledFunction<'a>>> {
        self.steps.iter().map(|s| SampledFunction::new(space, s.normalized.clone())).collect()
    }
}

/// Runs the construction for `n = 1..=max_n`.
pub fn little_approx_sequence(
    f: &SampledFunction<'_>,
    alpha: f64,
    max_n: usize,
) -> Result<ApproxSequence> {
    if max_n == 0 {
        return Err(Error::ZeroIndex);
    }
    let indices: Vec<usize> = (1..=max_n).collect();
    little_approx_sequence_at(f, alpha, &indices, Execution::default())
}

/// Runs the construction at the given indices; `f` carries the base metric.
pub fn little_approx_sequence_at(
    f: &SampledFunction<'_>,
    alpha: f64,
    indices: &[usize],
    exec: Execution,
) -> Result<ApproxSequence> {
    check_alpha_open(alpha)?;
    let space = f.space();
    if space.len() < 2 {
        return Err(Error::SingletonSpace);
    }
    if indices.contains(&0) {
        return Err(Error::ZeroIndex);
    }
    let holder = space.snowflake(alpha)?;
    let input_lip_alpha = lip_constant_with(&holder, f.values(), exec);
    let scale = input_lip_alpha.max(1.0);

    // Steps are independent; parallelism lives at this level, kernels inside
    // run sequentially.
    let results = par::map_indices(exec, indices.len(), |k| {
        run_step(f, &holder, alpha, indices[k], scale)
    });
    let mut rows = Vec::with_capacity(indices.len());
    let mut checks = Vec::new();
    let mut steps = Vec::with_capacity(indices.len());
    for r in results {
        let (row, step_checks, step) = r?;
        rows.push(row);
        checks.extend(step_checks);
        steps.push(step);
    }
    let trace = ConvergenceTrace { construction: Construction::Cone, alpha, rows, checks };
    Ok(ApproxSequence { trace, steps, input_lip_alpha })
}

fn run_step(
    f: &SampledFunction<'_>,
    holder: &PointedMetricSpace,
    alpha: f64,
    n: usize,
    scale: f64,
) -> Result<(TraceRow, Vec<Check>, ConeStep)> {
    let seq = Execution::Sequential;
    let space = f.space();
    let values = f.values();
    let radius = 1.0 / n as f64;
    let net = holder.greedy_net(radius)?;
    let approximant = cone_interpolant(f, net.centers(), alpha, n)?;
    let mut h = approximant.sample_with(space, seq);
    // h interpolates f on the net; drop the shift round-trip residue there
    for &c in &approximant.centers {
        h[c] = values[c];
    }

    let lip_alpha = lip_constant_with(holder, &h, seq);
    let lip_base = lip_constant_with(space, &h, seq);
    let sup_error = max_abs_diff(values, &h);
    let bound = scale * (2.0 + radius) * radius;

    let interp_residue = approximant
        .centers
        .iter()
        .map(|&c| (approximant.eval_at(space, c) - values[c]).abs())
        .fold(0.0, f64::max);
    let gamma_space = space.snowflake(approximant.params.gamma)?;
    let lip_gamma = lip_constant_with(&gamma_space, &h, seq);

    let mut normalizer = lip_alpha.max(1.0);
    let normalized = loop {
        let candidate: Vec<f64> = h.iter().map(|v| v / normalizer).collect();
        // guard against a last-ulp overshoot from the division
        if lip_constant_with(holder, &candidate, seq) <= 1.0 {
            break candidate;
        }
        normalizer = normalizer.next_up();
    };
    let lip_normalized = lip_constant_with(holder, &normalized, seq);
    let normalized_error = max_abs_diff(values, &normalized);

    let at = Some(n);
    let checks = vec![
        Check::at_most("interpolation", at, interp_residue, IDENTITY_TOL),
        Check::at_most(
            "certified-constant",
            at,
            lip_alpha,
            (1.0 + radius) * scale + CERTIFICATE_TOL,
        ),
        Check::at_most("error-bound", at, sup_error, bound + CERTIFICATE_TOL),
        Check::at_most(
            "gamma-flatness",
            at,
            lip_gamma,
            approximant.params.rho + CERTIFICATE_TOL,
        ),
        Check::at_most("unit-ball", at, lip_normalized, 1.0),
        Check::at_most("base-point", at, normalized[space.base()].abs(), 0.0),
    ];
    let row = TraceRow {
        n,
        size: net.len(),
        lip_alpha,
        lip_base,
        sup_error,
        bound: Some(bound),
        radius: Some(radius),
        normalizer: Some(normalizer),
        normalized_error: Some(normalized_error),
    };
    Ok((row, checks, ConeStep { n, approximant, interpolant: h, normalized }))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// `Lip_{d^alpha}` of `values` on `space`, for callers holding only the base
/// metric.
pub fn holder_constant(space: &PointedMetricSpace, values: &[f64], alpha: f64) -> Result<f64> {
    Ok(lip_constant(&space.snowflake(alpha)?, values))
}
