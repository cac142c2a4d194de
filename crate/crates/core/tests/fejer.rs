use std::f64::consts::{PI, TAU};

use lipdense::fejer::{
    fejer_convolution, fejer_density_check, fejer_kernel, fejer_mean, fourier_coeffs, TorusFunction,
    TorusGrid,
};
use lipdense::lip::lip_constant;
use lipdense::metric::torus_distance;
use num_complex::Complex64;

#[test]
fn kernel_integrates_to_one() {
    let nodes = 4096;
    for n in [0, 1, 7, 64, 255, 1000] {
        // trapezoidal rule on a periodic integrand: plain node average
        let mean: f64 = (0..nodes).map(|k| fejer_kernel(n, TAU * k as f64 / nodes as f64)).sum::<f64>()
            / nodes as f64;
        assert!((mean - 1.0).abs() < 1e-8, "n={n} mean={mean}");
    }
}

/// Continuous coefficients of `t -> d(t, 0)`: `π/2` at 0, `-2/(π j²)` for
/// odd `j`, 0 otherwise.
fn triangle_coeff(j: i64) -> f64 {
    if j == 0 {
        PI / 2.0
    } else if j % 2 != 0 {
        -2.0 / (PI * (j * j) as f64)
    } else {
        0.0
    }
}

#[test]
fn triangle_coefficients() {
    let size = 1024usize;
    let grid = TorusGrid::new(size).unwrap();
    let samples: Vec<f64> = grid.nodes().iter().map(|&t| torus_distance(t, 0.0)).collect();
    let n = 16;
    let coeffs = fourier_coeffs(&samples, n).unwrap();

    // fine quadrature of the continuous coefficients
    let fine = 200_000usize;
    for j in -(n as i64)..=(n as i64) {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..fine {
            let t = TAU * k as f64 / fine as f64;
            acc += Complex64::from_polar(torus_distance(t, 0.0), -(j as f64) * t);
        }
        let quad = acc / fine as f64;
        assert!((quad.re - triangle_coeff(j)).abs() < 1e-10);

        // discrete coefficients equal the continuous ones summed over aliases
        // (N even, so every alias of an odd j is odd and of an even j is even)
        let aliased = if j % 2 != 0 {
            let s = (PI * j as f64 / size as f64).sin();
            -2.0 * PI / ((size * size) as f64 * s * s)
        } else {
            triangle_coeff(j)
        };
        let c = coeffs[(j + n as i64) as usize];
        assert!((c.re - aliased).abs() < 1e-12, "j={j}");
        assert!(c.im.abs() < 1e-12);

        // aliasing error bound: Σ_{m≠0} 2/(π (j+mN)²) ≤ (4/π) ζ(2) / (N - |j|)²
        let bound = 4.0 / PI * (PI * PI / 6.0) / ((size as i64 - j.abs()) as f64).powi(2);
        assert!((c - quad).norm() <= bound + 1e-10, "j={j}: {}", (c - quad).norm());
    }
}

#[test]
fn single_mode_attenuation_on_512() {
    let grid = TorusGrid::new(512).unwrap();
    let s: Vec<f64> = grid.nodes().iter().map(|t| t.sin()).collect();
    for n in [4, 16, 64, 256] {
        let sigma = fejer_mean(&s, n, false).unwrap().grid_values().unwrap();
        let factor = n as f64 / (n + 1) as f64;
        for (t, v) in grid.nodes().iter().zip(sigma) {
            assert!((v - factor * t.sin()).abs() < 1e-10);
        }
    }
}

#[test]
fn coefficient_and_convolution_routes_agree() {
    let grid = TorusGrid::new(256).unwrap();
    for f in [TorusFunction::Sin, TorusFunction::DistToZero(0.5), TorusFunction::SawtoothHolder(0.4)] {
        let s: Vec<f64> = grid.nodes().iter().map(|&t| f.eval(t)).collect();
        for n in [1, 9, 100, 128] {
            let a = fejer_mean(&s, n, false).unwrap().grid_values().unwrap();
            let b = fejer_convolution(&s, n).unwrap();
            let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-8, "{f:?} n={n}: {gap}");
        }
    }
}

#[test]
fn off_grid_evaluation_matches_convolution_integral() {
    // σ_n(f, t) = (1/2π) ∫ K_n(τ) f(t - τ) dτ, by fine quadrature at an off-grid t
    let grid = TorusGrid::new(2048).unwrap();
    let f = TorusFunction::Sin;
    let s: Vec<f64> = grid.nodes().iter().map(|&t| f.eval(t)).collect();
    let n = 12;
    let mean = fejer_mean(&s, n, false).unwrap();
    let t = 0.8137;
    let fine = 200_000;
    let integral: f64 = (0..fine)
        .map(|k| {
            let tau = TAU * k as f64 / fine as f64;
            fejer_kernel(n, tau) * f.eval(t - tau)
        })
        .sum::<f64>()
        / fine as f64;
    assert!((mean.sigma(t).unwrap() - integral).abs() < 1e-10);
}

#[test]
fn dist_to_zero_density_example() {
    let grid = TorusGrid::new(512).unwrap();
    let samples = TorusFunction::DistToZero(0.5).sample_unit_ball(grid, 0.5).unwrap();
    let holder = grid.space().unwrap().snowflake(0.5).unwrap();
    let lf = lip_constant(&holder, &samples);
    assert!(lf <= 1.0 + 1e-12);
    let t = fejer_density_check(&samples, 0.5, &[4, 16, 64, 256]).unwrap();
    for row in &t.rows {
        assert!(row.lip_alpha <= lf + 1e-9);
    }
    assert!(t.rows[3].sup_error < t.rows[0].sup_error);
    assert!(t.all_passed(), "{:?}", t.failures().collect::<Vec<_>>());
}

#[test]
fn normalized_sine_contracts() {
    let grid = TorusGrid::new(512).unwrap();
    for alpha in [0.25, 0.5, 0.75] {
        let samples = TorusFunction::Sin.sample_unit_ball(grid, alpha).unwrap();
        let holder = grid.space().unwrap().snowflake(alpha).unwrap();
        let lf = lip_constant(&holder, &samples);
        assert!((lf - 1.0).abs() < 1e-12);
        let t = fejer_density_check(&samples, alpha, &[4, 16, 64, 256]).unwrap();
        for row in &t.rows {
            assert!(row.lip_alpha / lf <= 1.0 + 1e-9);
        }
        assert!(t.all_passed());
    }
}
