//! Fejér kernel and Fejér means on the circle `T = R / 2πZ`.
//!
//! Functions on `T` are sampled on the uniform grid `t_k = 2πk/N`. Fourier
//! coefficients are the discrete sums `(1/N) Σ_k f(t_k) e^{-ij t_k}`, and the
//! Fejér mean `σ_n f = Σ_{|j|<=n} (1 - |j|/(n+1)) f̂(j) e^{ijt}` is evaluated
//! either from those coefficients or as the discrete convolution with the
//! kernel `K_n`. On grid nodes the two routes agree exactly in exact
//! arithmetic, which the density check uses as a cross-check.

use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lip::{lip_constant_with, SampledFunction};
use crate::metric::{canonical_angle, torus_distance, uniform_torus, PointedMetricSpace};
use crate::par::{self, Execution};
use crate::trace::{Check, Construction, ConvergenceTrace, TraceRow, CERTIFICATE_TOL, IDENTITY_TOL};

/// Largest imaginary part tolerated when projecting a mean of real data.
pub const IMAGINARY_TOL: f64 = 1e-10;
/// Required agreement between the coefficient and convolution routes.
pub const DUALITY_TOL: f64 = 1e-8;
/// Required closeness of the kernel's discrete mean to 1.
pub const KERNEL_MEAN_TOL: f64 = 1e-10;

/// Uniform grid of `size` nodes on the circle; node 0 is the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    size: usize,
}

impl TorusGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(TorusGrid { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn node(&self, k: usize) -> f64 {
        TAU * k as f64 / self.size as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.size).map(|k| self.node(k)).collect()
    }

    /// The grid as a pointed metric space under the torus distance.
    pub fn space(&self) -> Result<PointedMetricSpace> {
        uniform_torus(self.size)
    }

    /// `e^{-2πi m/N}` for `m = 0..N`, mirrored so that entry `N-m` is the
    /// exact conjugate of entry `m`.
    fn twiddles(&self) -> Vec<Complex64> {
        let n = self.size;
        let mut tw = vec![Complex64::new(1.0, 0.0); n];
        for m in 1..=n / 2 {
            let theta = TAU * m as f64 / n as f64;
            tw[m] = Complex64::new(theta.cos(), -theta.sin());
            tw[n - m] = tw[m].conj();
        }
        if n.is_multiple_of(2) && n > 0 {
            tw[n / 2] = Complex64::new(-1.0, 0.0);
        }
        tw
    }
}

/// `K_n(t)` by the closed form `(1/(n+1)) (sin((n+1)t/2) / sin(t/2))^2`,
/// falling back to the cosine sum next to the removable singularity.
pub fn fejer_kernel(n: usize, t: f64) -> f64 {
    // symmetric representative keeps sin(u/2) accurate near 2π
    let t = canonical_angle(t);
    let u = if t > PI { t - TAU } else { t };
    if u == 0.0 {
        return (n + 1) as f64;
    }
    let half = (0.5 * u).sin();
    if half.abs() < 1e-6 {
        return fejer_kernel_sum(n, u);
    }
    let m = (n + 1) as f64;
    let ratio = (0.5 * m * u).sin() / half;
    ratio * ratio / m
}

/// `K_n(t) = Σ_{|j|<=n} (1 - |j|/(n+1)) e^{ijt}`, summed as cosines.
pub fn fejer_kernel_sum(n: usize, t: f64) -> f64 {
    let m = (n + 1) as f64;
    1.0 + 2.0 * (1..=n).map(|j| (1.0 - j as f64 / m) * (j as f64 * t).cos()).sum::<f64>()
}

fn weight(j: usize, n: usize) -> f64 {
    1.0 - j as f64 / (n + 1) as f64
}

/// Smallest grid accepted for order `n`: every frequency `|j| <= n` must be
/// distinct modulo `N` up to the self-conjugate Nyquist pair.
pub fn min_grid_for_order(n: usize) -> usize {
    (2 * n).max(1)
}

/// Discrete Fourier coefficients `f̂(j)` for `j = -n..=n`, stored at index
/// `j + n`.
pub fn fourier_coeffs(samples: &[f64], n: usize) -> Result<Vec<Complex64>> {
    let grid = TorusGrid::new(samples.len())?;
    let required = min_grid_for_order(n);
    if grid.size() < required {
        return Err(Error::AliasingGuard { grid: grid.size(), order: n, required });
    }
    let tw = grid.twiddles();
    Ok(coeffs_with(samples, n, &tw, Execution::default()))
}

fn coeffs_with(samples: &[f64], n: usize, tw: &[Complex64], exec: Execution) -> Vec<Complex64> {
    let size = samples.len() as i64;
    let scale = 1.0 / size as f64;
    par::map_indices(exec, 2 * n + 1, |idx| {
        let j = idx as i64 - n as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &s) in samples.iter().enumerate() {
            acc += tw[(j * k as i64).rem_euclid(size) as usize] * s;
        }
        acc * scale
    })
}

/// A Fejér mean `σ_n f`, or its recentering `β_n = σ_n f - σ_n f(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FejerMean {
    n: usize,
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
    recentered: bool,
    /// `σ_n f(0)`.
    offset: f64,
}

impl FejerMean {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_recentered(&self) -> bool {
        self.recentered
    }

    /// `f̂(j)` for `j = -n..=n`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `σ_n f(0)`, subtracted when recentered.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn coeff(&self, j: i64) -> Complex64 {
        self.coeffs[(j + self.n as i64) as usize]
    }

    /// Sum over frequencies in ascending `|j|`, pairing `±j`; `phase(j)` is
    /// `e^{ijt}` for `j >= 1`.
    fn sum_with(&self, phase: impl Fn(usize) -> Complex64) -> Complex64 {
        let mut acc = self.coeff(0);
        for j in 1..=self.n {
            let e = phase(j);
            let pair = self.coeff(j as i64) * e + self.coeff(-(j as i64)) * e.conj();
            acc += pair * weight(j, self.n);
        }
        acc
    }

    fn project(z: Complex64) -> Result<f64> {
        if z.im.abs() > IMAGINARY_TOL {
            return Err(Error::ImaginaryResidue(z.im.abs()));
        }
        Ok(z.re)
    }

    /// Unrecentered `σ_n f(t)`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let t = canonical_angle(t);
        Self::project(self.sum_with(|j| Complex64::from_polar(1.0, j as f64 * t)))
    }

    /// `σ_n f(t)`, minus `σ_n f(0)` when recentered.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = self.sigma(t)?;
        Ok(if self.recentered { v - self.offset } else { v })
    }

    /// Unrecentered values on the grid nodes.
    pub fn sigma_on_grid(&self) -> Result<Vec<f64>> {
        self.sigma_on_grid_with(Execution::default())
    }

    fn sigma_on_grid_with(&self, exec: Execution) -> Result<Vec<f64>> {
        let tw = self.grid.twiddles();
        let size = self.grid.size();
        par::map_indices(exec, size, |k| {
            Self::project(self.sum_with(|j| tw[(j * k) % size].conj()))
        })
        .into_iter()
        .collect()
    }

    /// Values on the grid nodes, recentered if requested.
    pub fn grid_values(&self) -> Result<Vec<f64>> {
        let sigma = self.sigma_on_grid()?;
        Ok(self.recenter(sigma))
    }

    fn recenter(&self, sigma: Vec<f64>) -> Vec<f64> {
        if self.recentered {
            sigma.iter().map(|v| v - self.offset).collect()
        } else {
            sigma
        }
    }
}

/// Builds `σ_n` (or `β_n` when `recenter`) from samples on a uniform grid.
pub fn fejer_mean(samples: &[f64], n: usize, recenter: bool) -> Result<FejerMean> {
    fejer_mean_with(samples, n, recenter, Execution::default())
}

fn fejer_mean_with(samples: &[f64], n: usize, recenter: bool, exec: Execution) -> Result<FejerMean> {
    let grid = TorusGrid::new(samples.len())?;
    let required = min_grid_for_order(n);
    if grid.size() < required {
        return Err(Error::AliasingGuard { grid: grid.size(), order: n, required });
    }
    let coeffs = coeffs_with(samples, n, &grid.twiddles(), exec);
    let mut mean = FejerMean { n, grid, coeffs, recentered: recenter, offset: 0.0 };
    // node 0 has phase exactly 1, so this matches the grid evaluation bit for bit
    mean.offset = FejerMean::project(mean.sum_with(|_| Complex64::new(1.0, 0.0)))?;
    Ok(mean)
}

/// `(K_n * f)(t_k) = (1/N) Σ_m K_n(t_m) f(t_k - t_m)` on every node.
pub fn fejer_convolution(samples: &[f64], n: usize) -> Result<Vec<f64>> {
    fejer_convolution_with(samples, n, Execution::default())
}

fn fejer_convolution_with(samples: &[f64], n: usize, exec: Execution) -> Result<Vec<f64>> {
    let grid = TorusGrid::new(samples.len())?;
    let size = grid.size();
    let kernel: Vec<f64> = (0..size).map(|m| fejer_kernel(n, grid.node(m))).collect();
    let scale = 1.0 / size as f64;
    Ok(par::map_indices(exec, size, |k| {
        let acc: f64 = kernel
            .iter()
            .enumerate()
            .map(|(m, kv)| kv * samples[(k + size - m) % size])
            .sum();
        acc * scale
    }))
}

/// Test functions on the circle vanishing at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorusFunction {
    Zero,
    Sin,
    /// `d(t, 0)^a`.
    DistToZero(f64),
    /// Takagi-type zigzag `Σ_k 2^{-ka} d(2^k t, 0)`, Hölder of order `a`.
    SawtoothHolder(f64),
}

/// Terms kept in the zigzag sum; `2^-k` wavelengths below any practical grid.
const ZIGZAG_TERMS: i32 = 24;

impl TorusFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TorusFunction::Zero => 0.0,
            TorusFunction::Sin => canonical_angle(t).sin(),
            TorusFunction::DistToZero(a) => torus_distance(t, 0.0).powf(a),
            TorusFunction::SawtoothHolder(a) => {
                let t = canonical_angle(t);
                (0..ZIGZAG_TERMS)
                    .map(|k| 2f64.powi(k).powf(-a) * torus_distance(t * 2f64.powi(k), 0.0))
                    .sum()
            }
        }
    }

    /// Samples on the grid, rescaled into the `d^alpha` unit ball when the
    /// grid Hölder constant exceeds 1.
    pub fn sample_unit_ball(&self, grid: TorusGrid, alpha: f64) -> Result<Vec<f64>> {
        let raw: Vec<f64> = grid.nodes().iter().map(|&t| self.eval(t)).collect();
        let holder = grid.space()?.snowflake(alpha)?;
        let lip = lip_constant_with(&holder, &raw, Execution::default());
        Ok(if lip > 1.0 { raw.iter().map(|v| v / lip).collect() } else { raw })
    }
}

impl FromStr for TorusFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let exponent = || -> std::result::Result<f64, String> {
            let a = arg.ok_or_else(|| format!("{name} needs an exponent, e.g. {name}:0.5"))?;
            let v: f64 = a.parse().map_err(|_| format!("bad exponent {a:?} in {s:?}"))?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(format!("exponent must lie in (0,1], got {v}"));
            }
            Ok(v)
        };
        match name {
            "zero" if arg.is_none() => Ok(TorusFunction::Zero),
            "sin" if arg.is_none() => Ok(TorusFunction::Sin),
            "dist-to-zero" => Ok(TorusFunction::DistToZero(exponent()?)),
            "sawtooth-holder" => Ok(TorusFunction::SawtoothHolder(exponent()?)),
            _ => Err(format!(
                "unknown torus function {s:?} (expected zero, sin, dist-to-zero:a, sawtooth-holder:a)"
            )),
        }
    }
}

pub fn fejer_density_check(samples: &[f64], alpha: f64, orders: &[usize]) -> Result<ConvergenceTrace> {
    fejer_density_check_with(samples, alpha, orders, Execution::default())
}

/// Per order: Hölder and Lipschitz constants of `σ_n f`, uniform error of
/// `β_n` against `f`, and the kernel/duality checks.
pub fn fejer_density_check_with(
    samples: &[f64],
    alpha: f64,
    orders: &[usize],
    exec: Execution,
) -> Result<ConvergenceTrace> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange { alpha, allowed: "(0,1)" });
    }
    if orders.contains(&0) {
        return Err(Error::ZeroIndex);
    }
    let grid = TorusGrid::new(samples.len())?;
    for &n in orders {
        let required = min_grid_for_order(n);
        if grid.size() < required {
            return Err(Error::AliasingGuard { grid: grid.size(), order: n, required });
        }
    }
    let space = grid.space()?;
    let holder = space.snowflake(alpha)?;
    let target = SampledFunction::new(&space, samples.to_vec())?;
    let target_lip = lip_constant_with(&holder, target.values(), exec);
    if target_lip > 1.0 + CERTIFICATE_TOL {
        return Err(Error::OutsideUnitBall { lip: target_lip });
    }

    let per_order = par::map_indices(exec, orders.len(), |k| -> Result<_> {
        let n = orders[k];
        let seq = Execution::Sequential;
        let mean = fejer_mean_with(samples, n, true, seq)?;
        let sigma = mean.sigma_on_grid_with(seq)?;
        let beta = mean.recenter(sigma.clone());
        let conv = fejer_convolution_with(samples, n, seq)?;

        let lip_alpha = lip_constant_with(&holder, &sigma, seq);
        let lip_beta = lip_constant_with(&holder, &beta, seq);
        let kernel: Vec<f64> = grid.nodes().iter().map(|&t| fejer_kernel(n, t)).collect();
        let kernel_min = kernel.iter().copied().fold(f64::INFINITY, f64::min);
        let kernel_mean = kernel.iter().sum::<f64>() / grid.size() as f64;

        let row = TraceRow {
            n,
            size: n,
            lip_alpha,
            lip_base: lip_constant_with(&space, &sigma, seq),
            sup_error: max_abs_diff(&beta, samples),
            bound: None,
            radius: None,
            normalizer: None,
            normalized_error: None,
        };
        let at = Some(n);
        let checks = vec![
            Check::at_most("contraction", at, lip_alpha, target_lip + CERTIFICATE_TOL),
            Check::at_most("recentering", at, beta[0].abs(), 0.0),
            Check::at_most("shift-invariance", at, (lip_beta - lip_alpha).abs(), IDENTITY_TOL),
            Check::at_most("kernel-nonnegative", at, (-kernel_min).max(0.0), 0.0),
            Check::at_most("kernel-mean", at, (kernel_mean - 1.0).abs(), KERNEL_MEAN_TOL),
            Check::at_most("convolution-duality", at, max_abs_diff(&sigma, &conv), DUALITY_TOL),
        ];
        Ok((row, checks))
    });

    let mut rows = Vec::with_capacity(orders.len());
    let mut checks = Vec::new();
    for r in per_order {
        let (row, c) = r?;
        rows.push(row);
        checks.extend(c);
    }
    if let Some(check) = crate::bernstein::decrease_check(&rows) {
        checks.push(Check { invariant: "pointwise-convergence".into(), ..check });
    }
    Ok(ConvergenceTrace { construction: Construction::Fejer, alpha, rows, checks })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
