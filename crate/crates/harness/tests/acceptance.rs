//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each, and exits nonzero if any criterion fails.

use std::f64::consts::E;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lipdense::bernstein::{bernstein_density_check, BernsteinApproximant};
use lipdense::cone::{lemma_map, little_approx_sequence, min_value_lemma};
use lipdense::fejer::{fejer_convolution, fejer_density_check, fejer_kernel, fejer_mean, TorusFunction, TorusGrid};
use lipdense::lip::{de_leeuw, lip_constant, SampledFunction};
use lipdense::PointedMetricSpace;
use lipdense_harness::source::{ConeFunction, SpaceSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Ordered-pair scan, independent of the library's `i < j` loop.
fn brute_lip(space: &PointedMetricSpace, values: &[f64]) -> f64 {
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

/// The seeded corpus: alternating generators, 8 to 32 points.
fn corpus_spec(seed: u64) -> SpaceSpec {
    let points = 8 + (seed as usize * 7) % 25;
    if seed.is_multiple_of(2) {
        SpaceSpec::Euclidean { dim: 2, points }
    } else {
        SpaceSpec::Ultrametric { points }
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.1?}, limit {limit:?}"))
}

fn cone_certificate() -> Verdict {
    let start = Instant::now();
    let (mut steps, mut worst_b, mut worst_c) = (0usize, f64::INFINITY, f64::INFINITY);
    for seed in 0..50u64 {
        let spec = corpus_spec(seed);
        let loaded = spec.load(Some(seed)).map_err(|e| e.to_string())?;
        let space = &loaded.space;
        for alpha in [0.25, 0.5, 0.75] {
            let holder = space.snowflake(alpha).map_err(|e| e.to_string())?;
            let values = ConeFunction::Random.sample(&loaded, alpha, Some(seed)).map_err(|e| e.to_string())?;
            ensure(brute_lip(&holder, &values) <= 1.0, || format!("{spec} seed {seed}: input outside the unit ball"))?;
            let f = SampledFunction::new(space, values.clone()).map_err(|e| e.to_string())?;
            let seq = little_approx_sequence(&f, alpha, 8).map_err(|e| e.to_string())?;
            let at = |n: usize| format!("{spec} seed {seed} alpha {alpha} n {n}");
            for step in &seq.steps {
                let n = step.n as f64;
                for &c in &step.approximant.centers {
                    let raw = step.approximant.eval_at(space, c);
                    ensure((raw - values[c]).abs() <= 1e-12, || format!("(a) {}: residue {:e}", at(step.n), raw - values[c]))?;
                }
                let lip_h = brute_lip(&holder, &step.interpolant);
                let limit_b = 1.0 + 1.0 / n + 1e-9;
                ensure(lip_h <= limit_b, || format!("(b) {}: Lip {lip_h}", at(step.n)))?;
                let err = values.iter().zip(&step.interpolant).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let limit_c = (2.0 + 1.0 / n) / n + 1e-9;
                ensure(err <= limit_c, || format!("(c) {}: error {err}", at(step.n)))?;
                let lip_f = brute_lip(&holder, &step.normalized);
                ensure(lip_f <= 1.0, || format!("(d) {}: Lip {lip_f}", at(step.n)))?;
                worst_b = worst_b.min(limit_b - lip_h);
                worst_c = worst_c.min(limit_c - err);
                steps += 1;
            }
            ensure(seq.trace.all_passed(), || format!("{spec} seed {seed} alpha {alpha}: library verdict failed"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30), "cone corpus")?;
    Ok(format!(
        "{steps} steps on 50 spaces; min slack (b) {worst_b:.3e}, (c) {worst_c:.3e}; {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn lemma_scan() -> Verdict {
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        for d in [0.5, 1.0, 2.0, 10.0] {
            let (mut best_t, mut best) = (0.0, f64::INFINITY);
            for i in 1..=100_000u32 {
                let t = 10.0 * d * f64::from(i) / 100_000.0;
                let v = lemma_map(d, n, t);
                if v < best {
                    best = v;
                    best_t = t;
                }
            }
            let expected = 1.0 / (1.0 + 1.0 / n as f64);
            let closed = min_value_lemma(d, n);
            ensure((best - expected).abs() <= 1e-6, || format!("n {n} D {d}: min {best} vs {expected}"))?;
            ensure((best_t - d / E).abs() <= 1e-3 * d, || format!("n {n} D {d}: argmin {best_t} vs {}", d / E))?;
            ensure((closed.value - expected).abs() <= 1e-12, || format!("n {n} D {d}: closed form {}", closed.value))?;
            worst = worst.max((best - expected).abs());
        }
    }
    Ok(format!("40 (n, D) cases; worst value gap {worst:.2e}"))
}

fn de_leeuw_isometry() -> Verdict {
    for seed in 0..100u64 {
        let spec = corpus_spec(seed);
        let loaded = spec.load(Some(1000 + seed)).map_err(|e| e.to_string())?;
        let space = &loaded.space;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> =
            (0..space.len()).map(|i| if i == space.base() { 0.0 } else { rng.gen_range(-5.0..5.0) }).collect();
        let f = SampledFunction::new(space, values).map_err(|e| e.to_string())?;
        let lib = f.lip_constant();
        let phi = de_leeuw(&f).sup_norm();
        let brute = brute_lip(space, f.values());
        ensure(phi.to_bits() == lib.to_bits(), || format!("{spec} seed {seed}: sup|Phi| {phi} vs Lip {lib}"))?;
        ensure(brute.to_bits() == lib.to_bits(), || format!("{spec} seed {seed}: brute {brute} vs Lip {lib}"))?;
    }
    Ok("100 seeded pairs agree bit for bit".into())
}

fn bernstein_example() -> Verdict {
    let start = Instant::now();
    let degrees = [4, 16, 64, 256];
    let mut summary = Vec::new();
    for alpha in [0.3, 0.5, 0.7] {
        let f = move |x: f64| x.powf(alpha);
        let t = bernstein_density_check(&f, alpha, 256, &degrees).map_err(|e| e.to_string())?;
        for row in &t.rows {
            ensure(row.lip_alpha <= 1.0 + 1e-9, || format!("x^{alpha} degree {}: Hölder {}", row.n, row.lip_alpha))?;
        }
        for w in t.rows.windows(2) {
            ensure(w[1].sup_error < w[0].sup_error, || {
                format!("x^{alpha}: error {} at {} not below {} at {}", w[1].sup_error, w[1].n, w[0].sup_error, w[0].n)
            })?;
        }
        ensure(t.all_passed(), || format!("x^{alpha}: library verdict failed"))?;
        summary.push(format!("x^{alpha} {:.2e}->{:.2e}", t.rows[0].sup_error, t.rows[3].sup_error));

        let id = |x: f64| x;
        let t = bernstein_density_check(&id, alpha, 256, &degrees).map_err(|e| e.to_string())?;
        for row in &t.rows {
            ensure(row.sup_error < 1e-12, || format!("identity degree {}: error {:e}", row.n, row.sup_error))?;
        }
    }
    // exact reproduction at a few off-grid points too
    for n in degrees {
        let b = BernsteinApproximant::build(|x| x, n).map_err(|e| e.to_string())?;
        for x in [0.0, 0.1, 1.0 / 3.0, 0.77, 1.0] {
            let v = b.eval(x).map_err(|e| e.to_string())?;
            ensure((v - x).abs() < 1e-12, || format!("identity degree {n} at {x}: {v}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "bernstein")?;
    Ok(format!("{}; identity exact; {:.2}s", summary.join(", "), elapsed.as_secs_f64()))
}

fn fejer_example() -> Verdict {
    let start = Instant::now();
    let orders = [4usize, 16, 64, 256];
    let grid = TorusGrid::new(512).map_err(|e| e.to_string())?;
    let nodes = grid.nodes();

    for &n in &orders {
        let kernel: Vec<f64> = nodes.iter().map(|&t| fejer_kernel(n, t)).collect();
        let min = kernel.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = kernel.iter().sum::<f64>() / kernel.len() as f64;
        ensure(min >= 0.0, || format!("K_{n} has negative value {min}"))?;
        ensure((mean - 1.0).abs() <= 1e-10, || format!("K_{n} mean {mean}"))?;
    }

    let sin: Vec<f64> = nodes.iter().map(|t| t.sin()).collect();
    for &n in &orders {
        let sigma = fejer_mean(&sin, n, false).and_then(|m| m.grid_values()).map_err(|e| e.to_string())?;
        let factor = n as f64 / (n + 1) as f64;
        let gap = sigma.iter().zip(&nodes).map(|(v, t)| (v - factor * t.sin()).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-10, || format!("single mode n {n}: gap {gap:e}"))?;
    }

    let mut traces = 0;
    for alpha in [0.25, 0.5, 0.75] {
        let catalog = [
            TorusFunction::Zero,
            TorusFunction::Sin,
            TorusFunction::DistToZero(alpha),
            TorusFunction::SawtoothHolder(alpha),
        ];
        let holder = grid.space().and_then(|s| s.snowflake(alpha)).map_err(|e| e.to_string())?;
        for func in catalog {
            let samples = func.sample_unit_ball(grid, alpha).map_err(|e| e.to_string())?;
            let lf = lip_constant(&holder, &samples);
            let t = fejer_density_check(&samples, alpha, &orders).map_err(|e| e.to_string())?;
            for row in &t.rows {
                ensure(row.lip_alpha <= lf + 1e-9, || format!("{func:?} alpha {alpha} n {}: {} > {lf}", row.n, row.lip_alpha))?;
            }
            ensure(t.all_passed(), || format!("{func:?} alpha {alpha}: {:?}", t.failures().collect::<Vec<_>>()))?;
            for &n in &orders {
                let beta = fejer_mean(&samples, n, true).and_then(|m| m.grid_values()).map_err(|e| e.to_string())?;
                ensure(beta[0] == 0.0, || format!("{func:?} n {n}: beta(0) = {:e}", beta[0]))?;
                let sigma = fejer_mean(&samples, n, false).and_then(|m| m.grid_values()).map_err(|e| e.to_string())?;
                let conv = fejer_convolution(&samples, n).map_err(|e| e.to_string())?;
                let gap = sigma.iter().zip(&conv).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                ensure(gap <= 1e-8, || format!("{func:?} n {n}: convolution gap {gap:e}"))?;
            }
            traces += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "fejer")?;
    Ok(format!("{traces} catalog traces, kernel and single-mode checks; {:.2}s", elapsed.as_secs_f64()))
}

fn cli_end_to_end() -> Verdict {
    let dir = std::env::temp_dir().join(format!("lipdense-acceptance-{}", std::process::id()));
    let run = |out: &std::path::Path| -> Result<Vec<u8>, String> {
        let status = Command::new(env!("CARGO_BIN_EXE_lipdense"))
            .args(["approx", "cone", "--space", "interval:32", "--fn", "identity", "--alpha", "0.5"])
            .args(["--n", "1,2,3,4,5,6,7,8", "--seed", "7", "--out"])
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
        })?;
        std::fs::read(out.join("cone-trace.csv")).map_err(|e| e.to_string())
    };
    let first = run(&dir.join("a"))?;
    let second = run(&dir.join("b"))?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(first == second, || "reruns differ".into())?;
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let rows: Vec<&str> = text.lines().skip(1).collect();
    ensure(rows.len() == 8, || format!("{} rows", rows.len()))?;
    ensure(rows.iter().all(|r| r.ends_with(",pass")), || "a row failed its verdict".into())?;
    Ok(format!("exit 0, 8 passing rows, rerun byte-identical ({} bytes)", text.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("cone certificate", cone_certificate),
        ("minimum-value lemma", lemma_scan),
        ("De Leeuw isometry", de_leeuw_isometry),
        ("Bernstein example", bernstein_example),
        ("Fejér example", fejer_example),
        ("CLI end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {reason}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
