use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lipdense::lip::lip_constant;
use lipdense::Construction;
use lipdense_harness::source::ConeFunction;
use lipdense_harness::{emit_plot, read_report, run_experiment, ExperimentConfig, ReportBundle, SpaceSpec};
use serde_json::json;

/// Lipschitz and Hölder constants on finite metric spaces, and certified
/// little-Hölder approximation experiments.
#[derive(Parser)]
#[command(name = "lipdense", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and fully validate a space, then print a summary.
    ValidateSpace(SpaceArgs),
    /// Lipschitz constant of a function, in d and optionally in d^alpha.
    Lipconst {
        #[command(flatten)]
        space: SpaceArgs,
        /// Catalog name (zero, dist-to-base, identity, random) or CSV of label,value.
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Greedy net of radius 1/n in d^alpha (or d when alpha is omitted).
    Net {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: usize,
    },
    /// Run a density experiment and write its trace and report.
    Approx(ApproxArgs),
    /// Summarize a saved JSON report, optionally re-plotting it.
    Report {
        report: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpaceArgs {
    /// JSON space file or generator: euclidean:k:N, ultrametric:N, interval:N, torus:N.
    #[arg(long)]
    space: String,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ApproxArgs {
    /// cone, bernstein or fejer.
    #[arg(value_parser = parse_construction)]
    construction: Construction,
    /// Space for the cone construction.
    #[arg(long)]
    space: Option<String>,
    /// Function: catalog name or CSV path. Catalogs differ per construction.
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    alpha: f64,
    /// Comma-separated ascending indices (cone steps, degrees or orders).
    #[arg(long = "n", visible_aliases = ["degrees", "orders"], value_delimiter = ',', required = true)]
    indices: Vec<usize>,
    /// Grid size for bernstein (default 256) and fejer (default 512).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "LIPDENSE_OUT", default_value = "lipdense-out")]
    out: PathBuf,
    /// Also write an SVG plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    match s {
        "cone" => Ok(Construction::Cone),
        "bernstein" => Ok(Construction::Bernstein),
        "fejer" => Ok(Construction::Fejer),
        _ => Err(format!("unknown construction {s:?} (expected cone, bernstein or fejer)")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some verdict failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ValidateSpace(args) => {
            let loaded = load(&args)?;
            let s = &loaded.space;
            println!(
                "ok: {} points, base {:?}, diameter {}, min separation {}",
                s.len(),
                s.labels()[s.base()],
                s.diameter(),
                s.min_separation().map_or("n/a".into(), |m| m.to_string())
            );
            Ok(true)
        }
        Command::Lipconst { space, function, alpha } => {
            let loaded = load(&space)?;
            let f: ConeFunction = function.parse()?;
            let values = f.sample(&loaded, alpha.unwrap_or(1.0), space.seed)?;
            let mut out = json!({ "points": loaded.space.len(), "lip": lip_constant(&loaded.space, &values) });
            if let Some(a) = alpha {
                let holder = loaded.space.snowflake(a)?;
                out["alpha"] = json!(a);
                out["lip_alpha"] = json!(lip_constant(&holder, &values));
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Net { space, alpha, n } => {
            if n == 0 {
                bail!("--n must be positive");
            }
            let loaded = load(&space)?;
            let metric = match alpha {
                Some(a) => loaded.space.snowflake(a)?,
                None => loaded.space.clone(),
            };
            let net = metric.greedy_net(1.0 / n as f64)?;
            let centers: Vec<&str> = net.centers().iter().map(|&c| metric.labels()[c].as_str()).collect();
            let out = json!({ "radius": net.radius(), "alpha": alpha.unwrap_or(1.0), "centers": centers });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Approx(args) => {
            let config = ExperimentConfig {
                construction: args.construction,
                space: args.space.as_deref().map(str::parse).transpose()?,
                function: args.function,
                alpha: args.alpha,
                indices: args.indices,
                grid: args.grid,
                seed: args.seed,
                out_dir: args.out,
                plot: args.plot,
            };
            let bundle = run_experiment(&config)?;
            for w in &bundle.warnings {
                eprintln!("warning: {w}");
            }
            summarize(&bundle);
            println!("trace: {}", config.trace_path().display());
            println!("report: {}", config.report_path().display());
            Ok(bundle.passed)
        }
        Command::Report { report, plot } => {
            let bundle = read_report(&report)?;
            summarize(&bundle);
            if let Some(path) = plot {
                emit_plot(&bundle.trace, &path)?;
                println!("plot: {}", path.display());
            }
            Ok(bundle.passed)
        }
    }
}

fn load(args: &SpaceArgs) -> Result<lipdense_harness::LoadedSpace> {
    let spec: SpaceSpec = args.space.parse()?;
    spec.load(args.seed).with_context(|| format!("loading space {spec}"))
}

fn summarize(bundle: &ReportBundle) {
    let t = &bundle.trace;
    println!("{} alpha={} ({} rows)", t.construction, t.alpha, t.rows.len());
    println!("{:>6} {:>8} {:>12} {:>12} {:>12} {:>12}", "n", "size", "lip_alpha", "lip_base", "sup_error", "bound");
    for r in &t.rows {
        let bound = r.bound.map_or("-".to_owned(), |b| format!("{b:.4e}"));
        println!(
            "{:>6} {:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>12}",
            r.n, r.size, r.lip_alpha, r.lip_base, r.sup_error, bound
        );
    }
    let failed: Vec<_> = bundle.verdicts.iter().filter(|v| !v.passed).collect();
    println!("verdicts: {} checked, {} failed", bundle.verdicts.len(), failed.len());
    for v in failed {
        let at = v.index.map_or(String::new(), |i| format!(" at n={i}"));
        println!("  FAIL {}{at}: measured {:e} > limit {:e}", v.invariant, v.measured, v.limit);
    }
}
