//! Lipschitz constants of sampled functions.
//!
//! On a finite space the supremum in `Lip_d(f) = sup |f(x)-f(y)| / d(x,y)`
//! is a maximum over pairs, computed exactly by scanning all of them. The
//! De Leeuw transform exposes the individual difference quotients, and the
//! flatness profile restricts the scan to pairs closer than a threshold,
//! which is how "little Lipschitz" behaviour is measured on samples.

use crate::error::{Error, Result};
use crate::metric::PointedMetricSpace;
use crate::par::{self, Execution};

/// Largest space the exact pair scans accept from external input.
pub const MAX_EXACT_POINTS: usize = 4096;

/// Real values on the points of a space, vanishing at the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<'a> {
    space: &'a PointedMetricSpace,
    values: Vec<f64>,
}

impl<'a> SampledFunction<'a> {
    pub fn new(space: &'a PointedMetricSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), found: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        let at_base = values[space.base()];
        if at_base != 0.0 {
            return Err(Error::BaseValueNonzero(at_base));
        }
        Ok(SampledFunction { space, values })
    }

    pub fn zero(space: &'a PointedMetricSpace) -> Self {
        SampledFunction { space, values: vec![0.0; space.len()] }
    }

    /// Samples `f` at every point index.
    pub fn from_fn(space: &'a PointedMetricSpace, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new(space, (0..space.len()).map(f).collect())
    }

    pub fn space(&self) -> &'a PointedMetricSpace {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// The same values viewed on another metric over the same points, e.g.
    /// the snowflake of the original space.
    pub fn on<'b>(&self, other: &'b PointedMetricSpace) -> Result<SampledFunction<'b>> {
        if other.len() != self.space.len() || other.base() != self.space.base() {
            return Err(Error::SpaceMismatch);
        }
        Ok(SampledFunction { space: other, values: self.values.clone() })
    }

    pub fn scaled(&self, c: f64) -> Self {
        SampledFunction { space: self.space, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn add(&self, other: &SampledFunction<'_>) -> Result<Self> {
        same_space(self.space, other.space)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(SampledFunction { space: self.space, values })
    }

    /// `Lip_d(f)` in the function's own metric.
    pub fn lip_constant(&self) -> f64 {
        lip_constant_with(self.space, &self.values, Execution::default())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn same_space(a: &PointedMetricSpace, b: &PointedMetricSpace) -> Result<()> {
    if std::ptr::eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Exact Lipschitz constant of `values` with respect to `space`.
///
/// Any value vector of the right length is accepted, so this also serves
/// approximants that are not (yet) normalized at the base point.
pub fn lip_constant(space: &PointedMetricSpace, values: &[f64]) -> f64 {
    lip_constant_with(space, values, Execution::default())
}

pub fn lip_constant_with(space: &PointedMetricSpace, values: &[f64], exec: Execution) -> f64 {
    assert_eq!(values.len(), space.len(), "value vector does not match the space");
    let n = space.len();
    par::max_over(exec, n, 0.0, |i| {
        let row = space.row(i);
        let vi = values[i];
        ((i + 1)..n).fold(0.0, |m, j| m.max((vi - values[j]).abs() / row[j]))
    })
}

/// Difference quotients `(f(x)-f(y)) / d(x,y)` on all ordered pairs of
/// distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct DeLeeuwTransform {
    n: usize,
    /// Row-major; diagonal entries are unused and stored as 0.
    quotients: Vec<f64>,
}

impl DeLeeuwTransform {
    /// `None` on the diagonal, where the transform is undefined.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        (i != j).then(|| self.quotients[i * self.n + j])
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// `((i, j), Φ(f)(i, j))` for every ordered pair with `i != j`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n).filter(move |&j| j != i).map(move |j| ((i, j), self.quotients[i * n + j]))
        })
    }

    /// Uniform norm of the transform; equals the Lipschitz constant.
    pub fn sup_norm(&self) -> f64 {
        self.iter().fold(0.0, |m, (_, q)| m.max(q.abs()))
    }
}

pub fn de_leeuw(f: &SampledFunction<'_>) -> DeLeeuwTransform {
    let space = f.space();
    let v = f.values();
    let n = space.len();
    let rows = par::map_indices(Execution::default(), n, |i| {
        let row = space.row(i);
        (0..n)
            .map(|j| if i == j { 0.0 } else { (v[i] - v[j]) / row[j] })
            .collect::<Vec<_>>()
    });
    DeLeeuwTransform { n, quotients: rows.concat() }
}

/// Restricted difference-quotient suprema at a ladder of scales.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessProfile {
    pub thresholds: Vec<f64>,
    /// `sups[k]` is the largest quotient over pairs with `0 < d < thresholds[k]`.
    pub sups: Vec<f64>,
}

pub fn flatness_profile(f: &SampledFunction<'_>, thresholds: &[f64]) -> Result<FlatnessProfile> {
    flatness_profile_of(f.space(), f.values(), thresholds)
}

pub fn flatness_profile_of(
    space: &PointedMetricSpace,
    values: &[f64],
    thresholds: &[f64],
) -> Result<FlatnessProfile> {
    if thresholds.is_empty() {
        return Err(Error::EmptyThresholds);
    }
    for (k, t) in thresholds.iter().enumerate() {
        let ascending = k == 0 || *t > thresholds[k - 1];
        if t.is_nan() || *t <= 0.0 || !ascending {
            return Err(Error::BadThresholds(k));
        }
    }
    let n = space.len();
    let mut pairs: Vec<(f64, f64)> = par::map_indices(Execution::default(), n, |i| {
        let row = space.row(i);
        ((i + 1)..n).map(|j| (row[j], (values[i] - values[j]).abs() / row[j])).collect::<Vec<_>>()
    })
    .concat();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // running maximum of quotients over pairs sorted by distance
    let mut prefix = Vec::with_capacity(pairs.len());
    let mut running = 0.0f64;
    for &(_, q) in &pairs {
        running = running.max(q);
        prefix.push(running);
    }
    let sups = thresholds
        .iter()
        .map(|&t| {
            let count = pairs.partition_point(|&(d, _)| d < t);
            if count == 0 {
                0.0
            } else {
                prefix[count - 1]
            }
        })
        .collect();
    Ok(FlatnessProfile { thresholds: thresholds.to_vec(), sups })
}

/// `max_x |f(x) - g(x)|`.
pub fn sup_distance(f: &SampledFunction<'_>, g: &SampledFunction<'_>) -> Result<f64> {
    same_space(f.space(), g.space())?;
    Ok(f.values().iter().zip(g.values()).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}
