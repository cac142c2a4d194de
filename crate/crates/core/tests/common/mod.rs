#![allow(dead_code)]

use lipdense::metric::{coordinate_matrix, CoordMetric};
use lipdense::PointedMetricSpace;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points of `[0,1]^dim`, base point 0.
pub fn euclidean_space(rng: &mut impl Rng, n: usize, dim: usize) -> PointedMetricSpace {
    let coords: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    let dist = coordinate_matrix(&coords, CoordMetric::Euclidean).unwrap();
    PointedMetricSpace::new((0..n).map(|i| format!("p{i}")).collect(), dist, 0).unwrap()
}

/// Random values vanishing at the base point.
pub fn random_values(rng: &mut impl Rng, space: &PointedMetricSpace) -> Vec<f64> {
    (0..space.len())
        .map(|i| if i == space.base() { 0.0 } else { rng.gen_range(-1.0..1.0) })
        .collect()
}

/// Brute-force Lipschitz constant over all ordered pairs.
pub fn brute_lip(space: &PointedMetricSpace, values: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..space.len() {
        for j in 0..space.len() {
            if i != j {
                best = best.max((values[i] - values[j]).abs() / space.d(i, j));
            }
        }
    }
    best
}

/// Random values rescaled so that their `d^alpha` constant is exactly 1
/// (or zero when all values vanish).
pub fn unit_ball_values(rng: &mut impl Rng, space: &PointedMetricSpace, alpha: f64) -> Vec<f64> {
    let v = random_values(rng, space);
    let holder = space.snowflake(alpha).unwrap();
    let l = brute_lip(&holder, &v);
    let scaled: Vec<f64> = v.iter().map(|x| x / l).collect();
    // division can overshoot 1 by an ulp; shrink until it does not
    let mut s = scaled;
    while brute_lip(&holder, &s) > 1.0 {
        s.iter_mut().for_each(|x| *x *= 1.0 - 1e-15);
    }
    s
}
