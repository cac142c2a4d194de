//! Finite pointed metric spaces.
//!
//! A [`PointedMetricSpace`] is a validated distance matrix over labelled
//! points with one distinguished base point. Construction checks every metric
//! axiom exhaustively (the triangle inequality over all ordered triples), so
//! downstream code can rely on them without re-checking.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Relative slack accepted on the triangle inequality, scaled by the largest
/// matrix entry. Absorbs ulp-level noise from `powf` and coordinate metrics.
pub const TRIANGLE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PointedMetricSpace {
    labels: Vec<String>,
    /// Row-major `len * len` matrix.
    dist: Vec<f64>,
    base: usize,
}

impl PointedMetricSpace {
    /// Validates `dist` and builds the space.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>, base: usize) -> Result<Self> {
        Self::new_with(labels, dist, base, Execution::default())
    }

    pub fn new_with(
        labels: Vec<String>,
        dist: Vec<Vec<f64>>,
        base: usize,
        exec: Execution,
    ) -> Result<Self> {
        let len = dist.len();
        if len == 0 {
            return Err(Error::EmptySpace);
        }
        if labels.len() != len {
            return Err(Error::LabelCount { labels: labels.len(), rows: len });
        }
        let mut seen = HashSet::with_capacity(len);
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut flat = Vec::with_capacity(len * len);
        for (row, entries) in dist.iter().enumerate() {
            if entries.len() != len {
                return Err(Error::NotSquare { row, len: entries.len(), expected: len });
            }
            flat.extend_from_slice(entries);
        }
        if base >= len {
            return Err(Error::BaseOutOfRange { base, len });
        }
        let space = PointedMetricSpace { labels, dist: flat, base };
        space.check_axioms(exec)?;
        Ok(space)
    }

    fn check_axioms(&self, exec: Execution) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let v = self.d(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if v < 0.0 {
                    return Err(Error::Negative { i, j, value: v });
                }
            }
        }
        for i in 0..n {
            let v = self.d(i, i);
            if v != 0.0 {
                return Err(Error::NonzeroDiagonal { i, value: v });
            }
            for j in (i + 1)..n {
                if self.d(i, j) != self.d(j, i) {
                    return Err(Error::Asymmetric { i, j });
                }
                if self.d(i, j) == 0.0 {
                    return Err(Error::ZeroDistance { i, j });
                }
            }
        }
        if let Some((i, j, k)) = self.first_triangle_violation(exec) {
            return Err(Error::Triangle {
                i,
                j,
                k,
                direct: self.d(i, k),
                via: self.d(i, j) + self.d(j, k),
            });
        }
        Ok(())
    }

    /// Lexicographically smallest `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k)`
    /// beyond the tolerance.
    fn first_triangle_violation(&self, exec: Execution) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let tol = TRIANGLE_RTOL * self.diameter_with(exec);
        // With an exactly symmetric matrix, (i,j,k) violates iff (k,j,i) does,
        // so the first violation has i < k; j = i or j = k never violates.
        par::find_first(exec, n, |i| {
            let row_i = &self.row(i)[i + 1..];
            for j in 0..n {
                let row_j = &self.row(j)[i + 1..];
                let via = self.d(i, j);
                // branch-free scan so the hot loop vectorizes; locate k only on a hit
                let hit = row_i.iter().zip(row_j).fold(false, |acc, (&a, &b)| acc | (a > via + b + tol));
                if hit {
                    let k = (0..row_i.len()).find(|&k| row_i[k] > via + row_j[k] + tol).expect("hit");
                    return Some((i, j, i + 1 + k));
                }
            }
            None
        })
    }

    /// Single-point space `{0}`.
    pub fn singleton(label: impl Into<String>) -> Self {
        PointedMetricSpace { labels: vec![label.into()], dist: vec![0.0], base: 0 }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest pairwise distance; 0 for a singleton.
    pub fn diameter(&self) -> f64 {
        self.diameter_with(Execution::default())
    }

    pub fn diameter_with(&self, exec: Execution) -> f64 {
        let n = self.len();
        par::max_over(exec, n, 0.0, |i| self.row(i)[i + 1..].iter().copied().fold(0.0, f64::max))
    }

    /// Smallest distance between distinct points; `None` for a singleton.
    pub fn min_separation(&self) -> Option<f64> {
        let n = self.len();
        (0..n)
            .flat_map(|i| self.row(i)[i + 1..].iter().copied())
            .min_by(f64::total_cmp)
    }

    /// The Hölder metric `d^alpha` on the same points and base.
    pub fn snowflake(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::AlphaOutOfRange { alpha, allowed: "(0,1]" });
        }
        if alpha == 1.0 {
            return Ok(self.clone());
        }
        let dist = self.dist.iter().map(|d| d.powf(alpha)).collect();
        let space = PointedMetricSpace { labels: self.labels.clone(), dist, base: self.base };
        space.check_axioms(Execution::default())?;
        Ok(space)
    }

    /// Indices `y` with `d(center, y) < radius`.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        self.row(center)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d < radius)
            .map(|(i, _)| i)
            .collect()
    }

    /// Deterministic greedy cover by open balls of the given radius.
    ///
    /// Centers start at `{base}`; the lowest-index uncovered point is added
    /// until every point is strictly within `radius` of some center.
    pub fn greedy_net(&self, radius: f64) -> Result<NetCover<'_>> {
        if radius.is_nan() || radius <= 0.0 || radius.is_infinite() {
            return Err(Error::InvalidRadius(radius));
        }
        let n = self.len();
        let mut covered = vec![false; n];
        let mut centers = Vec::new();
        let mut next = Some(self.base);
        while let Some(c) = next {
            centers.push(c);
            for (flag, &d) in covered.iter_mut().zip(self.row(c)) {
                if d < radius {
                    *flag = true;
                }
            }
            next = covered.iter().position(|&c| !c);
        }
        Ok(NetCover { space: self, centers, radius })
    }

    /// Serializable form using the `dist` variant of the input format.
    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            labels: self.labels.clone(),
            base: self.labels[self.base].clone(),
            source: SpaceSource::Dist { dist: self.matrix() },
        }
    }
}

/// A finite set of centers whose open balls cover the space.
#[derive(Debug, Clone)]
pub struct NetCover<'a> {
    space: &'a PointedMetricSpace,
    centers: Vec<usize>,
    radius: f64,
}

impl<'a> NetCover<'a> {
    pub fn space(&self) -> &'a PointedMetricSpace {
        self.space
    }

    /// Centers in insertion order; the base point is always first.
    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Index of the first center covering `point`, if any.
    pub fn covering_center(&self, point: usize) -> Option<usize> {
        self.centers.iter().copied().find(|&c| self.space.d(point, c) < self.radius)
    }
}

/// Torus distance on `R / 2πZ`: `min{|t−s|, |t−s−2π|, |t−s+2π|}` after
/// canonicalizing both angles into `[0, 2π)`.
pub fn torus_distance(t: f64, s: f64) -> f64 {
    let diff = canonical_angle(t) - canonical_angle(s);
    diff.abs().min((diff - TAU).abs()).min((diff + TAU).abs())
}

/// Representative of `t + 2πZ` in `[0, 2π)`.
pub fn canonical_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// On-disk description of a space: either an explicit matrix or
/// coordinates plus a named metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub labels: Vec<String>,
    pub base: String,
    #[serde(flatten)]
    pub source: SpaceSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSource {
    Dist { dist: Vec<Vec<f64>> },
    Coords { coords: Vec<Vec<f64>>, metric: CoordMetric },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordMetric {
    Euclidean,
    /// Angles on `R / 2πZ`, one coordinate per point.
    Torus,
    /// Points of `[0,1]`, one coordinate per point, usual metric.
    Interval,
}

impl SpaceFile {
    pub fn into_space(self) -> Result<PointedMetricSpace> {
        let base = self
            .labels
            .iter()
            .position(|l| *l == self.base)
            .ok_or_else(|| Error::UnknownLabel(self.base.clone()))?;
        let dist = match self.source {
            SpaceSource::Dist { dist } => dist,
            SpaceSource::Coords { coords, metric } => coordinate_matrix(&coords, metric)?,
        };
        PointedMetricSpace::new(self.labels, dist, base)
    }
}

/// Distance matrix for points given by coordinates.
pub fn coordinate_matrix(coords: &[Vec<f64>], metric: CoordMetric) -> Result<Vec<Vec<f64>>> {
    let n = coords.len();
    let dim = coords.first().map_or(0, Vec::len);
    for (row, c) in coords.iter().enumerate() {
        let expected = match metric {
            CoordMetric::Euclidean => dim,
            CoordMetric::Torus | CoordMetric::Interval => 1,
        };
        if c.len() != expected {
            return Err(Error::NotSquare { row, len: c.len(), expected });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { i: row, j: row });
        }
        if metric == CoordMetric::Interval && !(0.0..=1.0).contains(&c[0]) {
            return Err(Error::OutsideInterval(c[0]));
        }
    }
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match metric {
                CoordMetric::Euclidean => coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt(),
                CoordMetric::Torus => torus_distance(coords[i][0], coords[j][0]),
                CoordMetric::Interval => (coords[i][0] - coords[j][0]).abs(),
            };
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    Ok(dist)
}

/// `n` evenly spaced points `k/(n-1)` of `[0,1]` with base point 0.
pub fn uniform_interval(n: usize) -> Result<PointedMetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if n == 1 {
        return Ok(PointedMetricSpace::singleton("x0"));
    }
    let coords: Vec<Vec<f64>> = (0..n).map(|k| vec![k as f64 / (n - 1) as f64]).collect();
    let labels = (0..n).map(|k| format!("x{k}")).collect();
    PointedMetricSpace::new(labels, coordinate_matrix(&coords, CoordMetric::Interval)?, 0)
}

/// Nodes `2πk/n` of the torus with base node 0.
pub fn uniform_torus(n: usize) -> Result<PointedMetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let coords: Vec<Vec<f64>> = (0..n).map(|k| vec![2.0 * PI * k as f64 / n as f64]).collect();
    let labels = (0..n).map(|k| format!("t{k}")).collect();
    PointedMetricSpace::new(labels, coordinate_matrix(&coords, CoordMetric::Torus)?, 0)
}
