//! Where spaces and functions come from: JSON/CSV files, seeded random
//! generators and the built-in function catalogs.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lipdense::bernstein::IntervalFunction;
use lipdense::fejer::TorusFunction;
use lipdense::lip::{lip_constant, MAX_EXACT_POINTS};
use lipdense::metric::{coordinate_matrix, uniform_interval, uniform_torus, CoordMetric, SpaceSource};
use lipdense::{PointedMetricSpace, SpaceFile};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// Resampling attempts before a random generator gives up.
pub const GENERATOR_RETRIES: usize = 16;

/// A space argument: a JSON file or a generator name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SpaceSpec {
    File(PathBuf),
    /// `euclidean:k:N`: `N` uniform points of `[0,1]^k`.
    Euclidean { dim: usize, points: usize },
    /// `ultrametric:N`: random merge tree with uniform merge heights in `(0,1]`.
    Ultrametric { points: usize },
    /// `interval:N`: evenly spaced points of `[0,1]`.
    Interval { points: usize },
    /// `torus:N`: evenly spaced angles `2πk/N`.
    Torus { points: usize },
}

/// A loaded space, with coordinates when the source had them.
#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub space: PointedMetricSpace,
    pub coords: Option<Vec<Vec<f64>>>,
}

impl SpaceSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, SpaceSpec::Euclidean { .. } | SpaceSpec::Ultrametric { .. })
    }

    /// Builds the space. Random generators need `seed`; every generated
    /// space passes full metric validation, resampling on failure.
    pub fn load(&self, seed: Option<u64>) -> Result<LoadedSpace, HarnessError> {
        let need_seed = || seed.ok_or_else(|| HarnessError::MissingSeed(self.to_string()));
        let loaded = match *self {
            SpaceSpec::File(ref path) => load_space_file(path)?,
            SpaceSpec::Euclidean { dim, points } => {
                let mut rng = ChaCha8Rng::seed_from_u64(need_seed()?);
                retry(self, || {
                    let coords: Vec<Vec<f64>> =
                        (0..points).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
                    let dist = coordinate_matrix(&coords, CoordMetric::Euclidean)?;
                    let space = PointedMetricSpace::new(point_labels("p", points), dist, 0)?;
                    Ok(LoadedSpace { space, coords: Some(coords) })
                })?
            }
            SpaceSpec::Ultrametric { points } => {
                let mut rng = ChaCha8Rng::seed_from_u64(need_seed()?);
                retry(self, || {
                    let dist = ultrametric_matrix(&mut rng, points);
                    let space = PointedMetricSpace::new(point_labels("u", points), dist, 0)?;
                    Ok(LoadedSpace { space, coords: None })
                })?
            }
            SpaceSpec::Interval { points } => {
                let space = uniform_interval(points)?;
                let coords = (0..points).map(|k| vec![k as f64 / (points.max(2) - 1) as f64]).collect();
                LoadedSpace { space, coords: Some(coords) }
            }
            SpaceSpec::Torus { points } => {
                let space = uniform_torus(points)?;
                let coords = (0..points).map(|k| vec![std::f64::consts::TAU * k as f64 / points as f64]).collect();
                LoadedSpace { space, coords: Some(coords) }
            }
        };
        if loaded.space.len() > MAX_EXACT_POINTS {
            return Err(HarnessError::TooManyPoints { points: loaded.space.len(), max: MAX_EXACT_POINTS });
        }
        Ok(loaded)
    }
}

fn retry(
    spec: &SpaceSpec,
    mut attempt: impl FnMut() -> Result<LoadedSpace, lipdense::Error>,
) -> Result<LoadedSpace, HarnessError> {
    let mut last = None;
    for _ in 0..GENERATOR_RETRIES {
        match attempt() {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(HarnessError::GeneratorExhausted {
        generator: spec.to_string(),
        attempts: GENERATOR_RETRIES,
        last: last.expect("at least one attempt"),
    })
}

fn point_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Distances of a random binary merge tree: two random clusters merge at each
/// of `n - 1` sorted heights, and points in different clusters sit at the
/// height where their clusters joined.
fn ultrametric_matrix(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    let mut heights: Vec<f64> = (1..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    heights.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut dist = vec![vec![0.0; n]; n];
    for h in heights {
        let a = rng.gen_range(0..clusters.len());
        let mut b = rng.gen_range(0..clusters.len() - 1);
        if b >= a {
            b += 1;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let right = clusters.swap_remove(hi);
        for &i in &clusters[lo] {
            for &j in &right {
                dist[i][j] = h;
                dist[j][i] = h;
            }
        }
        clusters[lo].extend(right);
    }
    dist
}

fn load_space_file(path: &Path) -> Result<LoadedSpace, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let file: SpaceFile =
        serde_json::from_str(&text).map_err(|e| HarnessError::Parse { path: path.to_owned(), message: e.to_string() })?;
    let coords = match &file.source {
        SpaceSource::Coords { coords, .. } => Some(coords.clone()),
        SpaceSource::Dist { .. } => None,
    };
    Ok(LoadedSpace { space: file.into_space()?, coords })
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::File(p) => write!(f, "{}", p.display()),
            SpaceSpec::Euclidean { dim, points } => write!(f, "euclidean:{dim}:{points}"),
            SpaceSpec::Ultrametric { points } => write!(f, "ultrametric:{points}"),
            SpaceSpec::Interval { points } => write!(f, "interval:{points}"),
            SpaceSpec::Torus { points } => write!(f, "torus:{points}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let count = |v: &str| -> Result<usize, HarnessError> {
            match v.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(HarnessError::BadSpec { spec: s.to_owned(), reason: format!("{v:?} is not a positive count") }),
            }
        };
        match parts.as_slice() {
            ["euclidean", k, n] => Ok(SpaceSpec::Euclidean { dim: count(k)?, points: count(n)? }),
            ["ultrametric", n] => Ok(SpaceSpec::Ultrametric { points: count(n)? }),
            ["interval", n] => Ok(SpaceSpec::Interval { points: count(n)? }),
            ["torus", n] => Ok(SpaceSpec::Torus { points: count(n)? }),
            [name, ..] if matches!(*name, "euclidean" | "ultrametric" | "interval" | "torus") => {
                Err(HarnessError::BadSpec {
                    spec: s.to_owned(),
                    reason: "expected euclidean:k:N, ultrametric:N, interval:N or torus:N".into(),
                })
            }
            _ => Ok(SpaceSpec::File(PathBuf::from(s))),
        }
    }
}

impl From<SpaceSpec> for String {
    fn from(s: SpaceSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SpaceSpec {
    type Error = HarnessError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Functions on a general pointed space, for the cone construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeFunction {
    Zero,
    /// `d(x, 0)^alpha`, inside the unit ball of `d^alpha`.
    DistToBase,
    /// First coordinate minus that of the base point; needs coordinates.
    Identity,
    /// Uniform values in `[-1,1]` rescaled into the unit ball of `d^alpha`.
    Random,
    Csv(PathBuf),
}

impl FromStr for ConeFunction {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "zero" => ConeFunction::Zero,
            "dist-to-base" => ConeFunction::DistToBase,
            "identity" => ConeFunction::Identity,
            "random" => ConeFunction::Random,
            path => ConeFunction::Csv(PathBuf::from(path)),
        })
    }
}

impl ConeFunction {
    pub fn is_random(&self) -> bool {
        *self == ConeFunction::Random
    }

    /// Samples on `loaded`. `seed` drives `random` on a stream separate from
    /// the space generators.
    pub fn sample(&self, loaded: &LoadedSpace, alpha: f64, seed: Option<u64>) -> Result<Vec<f64>, HarnessError> {
        let space = &loaded.space;
        let base = space.base();
        match self {
            ConeFunction::Zero => Ok(vec![0.0; space.len()]),
            ConeFunction::DistToBase => Ok(space.row(base).iter().map(|d| d.powf(alpha)).collect()),
            ConeFunction::Identity => {
                let coords = loaded.coords.as_ref().ok_or(HarnessError::NoCoordinates)?;
                let origin = coords[base][0];
                Ok(coords.iter().map(|c| c[0] - origin).collect())
            }
            ConeFunction::Random => {
                let seed = seed.ok_or_else(|| HarnessError::MissingSeed("random".into()))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(1);
                let raw: Vec<f64> =
                    (0..space.len()).map(|i| if i == base { 0.0 } else { rng.gen_range(-1.0..=1.0) }).collect();
                let holder = space.snowflake(alpha)?;
                Ok(into_unit_ball(&holder, raw))
            }
            ConeFunction::Csv(path) => {
                let pairs = read_labeled_values(path)?;
                let values = values_on(space, &pairs, path)?;
                if values[base] != 0.0 {
                    return Err(lipdense::Error::BaseValueNonzero(values[base]).into());
                }
                Ok(values)
            }
        }
    }
}

impl fmt::Display for ConeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeFunction::Zero => f.write_str("zero"),
            ConeFunction::DistToBase => f.write_str("dist-to-base"),
            ConeFunction::Identity => f.write_str("identity"),
            ConeFunction::Random => f.write_str("random"),
            ConeFunction::Csv(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Divides by the Lipschitz constant, then shrinks by ulps until the
/// recomputed constant is at most 1.
pub fn into_unit_ball(space: &PointedMetricSpace, values: Vec<f64>) -> Vec<f64> {
    let lip = lip_constant(space, &values);
    if lip <= 1.0 {
        return values;
    }
    let mut v: Vec<f64> = values.iter().map(|x| x / lip).collect();
    while lip_constant(space, &v) > 1.0 {
        v.iter_mut().for_each(|x| *x *= 1.0 - f64::EPSILON);
    }
    v
}

/// Function on `[0,1]`: a catalog entry or samples on `k/(m-1)` read from a
/// CSV over the labels `x0..x{m-1}`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub enum IntervalSource {
    Catalog(IntervalFunction),
    Sampled(Vec<f64>),
}

impl IntervalSource {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s.parse::<IntervalFunction>() {
            Ok(f) => Ok(IntervalSource::Catalog(f)),
            Err(reason) => {
                let path = Path::new(s);
                if !path.is_file() {
                    return Err(HarnessError::BadSpec { spec: s.to_owned(), reason });
                }
                let pairs = read_labeled_values(path)?;
                let space = uniform_interval(pairs.len())?;
                if pairs.len() < 2 {
                    return Err(HarnessError::Parse { path: path.to_owned(), message: "need at least two samples".into() });
                }
                Ok(IntervalSource::Sampled(values_on(&space, &pairs, path)?))
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            IntervalSource::Catalog(f) => f.eval(x),
            IntervalSource::Sampled(v) => {
                let m = v.len() - 1;
                let pos = x.clamp(0.0, 1.0) * m as f64;
                let k = (pos.floor() as usize).min(m - 1);
                let w = pos - k as f64;
                (1.0 - w) * v[k] + w * v[k + 1]
            }
        }
    }
}

/// Function on the circle: a catalog entry or samples on a uniform grid read
/// from a CSV over the labels `t0..t{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusSource {
    Catalog(TorusFunction),
    Sampled(Vec<f64>),
}

impl TorusSource {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s.parse::<TorusFunction>() {
            Ok(f) => Ok(TorusSource::Catalog(f)),
            Err(reason) => {
                let path = Path::new(s);
                if !path.is_file() {
                    return Err(HarnessError::BadSpec { spec: s.to_owned(), reason });
                }
                let pairs = read_labeled_values(path)?;
                let space = uniform_torus(pairs.len())?;
                Ok(TorusSource::Sampled(values_on(&space, &pairs, path)?))
            }
        }
    }
}

/// Reads `label,value` rows; a first row whose value is not a number is
/// taken as a header.
pub fn read_labeled_values(path: &Path) -> Result<Vec<(String, f64)>, HarnessError> {
    let parse_err = |message: String| HarnessError::Parse { path: path.to_owned(), message };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(e.to_string()))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        if record.len() != 2 {
            return Err(parse_err(format!("row {}: expected label,value, got {} fields", row + 1, record.len())));
        }
        match record[1].parse::<f64>() {
            Ok(v) => out.push((record[0].to_owned(), v)),
            Err(_) if row == 0 => continue,
            Err(_) => return Err(parse_err(format!("row {}: {:?} is not a number", row + 1, &record[1]))),
        }
    }
    Ok(out)
}

/// Orders labeled values by the space's labels; every label exactly once.
fn values_on(space: &PointedMetricSpace, pairs: &[(String, f64)], path: &Path) -> Result<Vec<f64>, HarnessError> {
    let parse_err = |message: String| HarnessError::Parse { path: path.to_owned(), message };
    let mut values = vec![None; space.len()];
    for (label, v) in pairs {
        let i = space.index_of(label).ok_or_else(|| parse_err(format!("unknown label {label:?}")))?;
        if values[i].replace(*v).is_some() {
            return Err(parse_err(format!("label {label:?} appears twice")));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse_err(format!("no value for label {:?}", space.labels()[i]))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for s in ["euclidean:2:10", "ultrametric:7", "interval:32", "torus:64", "data/space.json"] {
            assert_eq!(s.parse::<SpaceSpec>().unwrap().to_string(), s);
        }
        assert!("euclidean:2".parse::<SpaceSpec>().is_err());
        assert!("interval:0".parse::<SpaceSpec>().is_err());
    }

    #[test]
    fn random_generators_need_seeds() {
        let spec: SpaceSpec = "ultrametric:5".parse().unwrap();
        assert!(matches!(spec.load(None), Err(HarnessError::MissingSeed(_))));
        let a = spec.load(Some(3)).unwrap().space;
        let b = spec.load(Some(3)).unwrap().space;
        assert_eq!(a, b);
    }

    #[test]
    fn ultrametric_is_ultrametric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 5, 17, 32] {
            let d = ultrametric_matrix(&mut rng, n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        assert!(d[i][k] <= d[i][j].max(d[j][k]));
                    }
                    assert_eq!(d[i][j] > 0.0, i != j);
                }
            }
        }
    }

    #[test]
    fn sampled_interval_interpolates() {
        let s = IntervalSource::Sampled(vec![0.0, 1.0, 0.0]);
        assert_eq!(s.eval(0.25), 0.5);
        assert_eq!(s.eval(0.5), 1.0);
        assert_eq!(s.eval(1.0), 0.0);
    }

    #[test]
    fn random_function_in_unit_ball() {
        let loaded = SpaceSpec::Euclidean { dim: 2, points: 20 }.load(Some(4)).unwrap();
        let v = ConeFunction::Random.sample(&loaded, 0.5, Some(4)).unwrap();
        let holder = loaded.space.snowflake(0.5).unwrap();
        assert!(lip_constant(&holder, &v) <= 1.0);
        assert_eq!(v[0], 0.0);
    }
}
