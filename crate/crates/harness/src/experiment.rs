//! Experiment configuration, execution and persistence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lipdense::bernstein::{bernstein_density_check, DEFAULT_GRID};
use lipdense::cone::little_approx_sequence_at;
use lipdense::fejer::{fejer_density_check, TorusGrid};
use lipdense::lip::SampledFunction;
use lipdense::{Check, Construction, ConvergenceTrace, Execution};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::plot::emit_plot;
use crate::source::{ConeFunction, IntervalSource, SpaceSpec, TorusSource};

/// Default Fejér grid size.
pub const DEFAULT_TORUS_GRID: usize = 512;

pub const CSV_HEADER: [&str; 7] =
    ["n", "net_size_or_degree", "lip_alpha", "lip_base", "sup_error", "paper_bound", "verdict"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub construction: Construction,
    /// Only the cone construction takes a space; the others build their grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    /// Catalog name or CSV path.
    pub function: String,
    pub alpha: f64,
    /// Cone steps, Bernstein degrees or Fejér orders.
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(HarnessError::config("alpha", format!("must lie in (0,1), got {}", self.alpha)));
        }
        if self.indices.is_empty() {
            return Err(HarnessError::config("indices", "at least one index is required"));
        }
        if self.indices.contains(&0) {
            return Err(HarnessError::config("indices", "indices must be positive"));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::config("indices", "indices must be strictly ascending"));
        }
        match self.construction {
            Construction::Cone => {
                let space = self.space.as_ref().ok_or_else(|| HarnessError::config("space", "required for cone"))?;
                if space.is_random() && self.seed.is_none() {
                    return Err(HarnessError::config("seed", format!("required by the generator {space}")));
                }
                if self.cone_function().is_random() && self.seed.is_none() {
                    return Err(HarnessError::config("seed", "required by the random function"));
                }
                if self.grid.is_some() {
                    return Err(HarnessError::config("grid", "not used by cone"));
                }
            }
            Construction::Bernstein | Construction::Fejer => {
                if self.space.is_some() {
                    return Err(HarnessError::config("space", format!("not used by {}", self.construction)));
                }
            }
        }
        Ok(())
    }

    fn cone_function(&self) -> ConeFunction {
        match self.function.parse() {
            Ok(f) => f,
            Err(never) => match never {},
        }
    }

    pub fn trace_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}-trace.csv", self.construction))
    }

    pub fn report_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}-report.json", self.construction))
    }
}

/// A trace together with everything needed to interpret it later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub wall_time_secs: f64,
    pub warnings: Vec<String>,
    pub trace: ConvergenceTrace,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub invariant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub passed: bool,
    pub measured: f64,
    pub limit: f64,
    pub slack: f64,
}

impl From<&Check> for Verdict {
    fn from(c: &Check) -> Self {
        Verdict {
            invariant: c.invariant.clone(),
            index: c.index,
            passed: c.passed,
            measured: c.measured,
            limit: c.limit,
            slack: c.slack(),
        }
    }
}

/// The computed trace plus non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub trace: ConvergenceTrace,
    pub warnings: Vec<String>,
}

/// Runs the configured construction without touching the filesystem
/// (except to read inputs).
pub fn compute(config: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    config.validate()?;
    let alpha = config.alpha;
    let mut warnings = Vec::new();
    let trace = match config.construction {
        Construction::Cone => {
            let spec = config.space.as_ref().expect("validated");
            let loaded = spec.load(config.seed)?;
            let values = config.cone_function().sample(&loaded, alpha, config.seed)?;
            let f = SampledFunction::new(&loaded.space, values)?;
            let seq = little_approx_sequence_at(&f, alpha, &config.indices, Execution::default())?;
            if seq.input_lip_alpha > 1.0 {
                warnings.push(format!(
                    "input is outside the unit ball (Lip in d^{alpha} = {}); certificates scaled by that factor",
                    seq.input_lip_alpha
                ));
            }
            seq.trace
        }
        Construction::Bernstein => {
            let src = IntervalSource::parse(&config.function)?;
            let f = move |x: f64| src.eval(x);
            bernstein_density_check(&f, alpha, config.grid.unwrap_or(DEFAULT_GRID), &config.indices)?
        }
        Construction::Fejer => {
            let samples = match TorusSource::parse(&config.function)? {
                TorusSource::Catalog(f) => {
                    f.sample_unit_ball(TorusGrid::new(config.grid.unwrap_or(DEFAULT_TORUS_GRID))?, alpha)?
                }
                TorusSource::Sampled(v) => {
                    if let Some(g) = config.grid.filter(|&g| g != v.len()) {
                        return Err(HarnessError::config(
                            "grid",
                            format!("{g} does not match the {} samples in {}", v.len(), config.function),
                        ));
                    }
                    v
                }
            };
            fejer_density_check(&samples, alpha, &config.indices)?
        }
    };
    Ok(Outcome { trace, warnings })
}

/// Runs the experiment and writes the CSV trace, the JSON report and, when
/// configured, the plot.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ReportBundle, HarnessError> {
    let start = Instant::now();
    let Outcome { trace, warnings } = compute(config)?;
    let bundle = ReportBundle {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        config: config.clone(),
        wall_time_secs: start.elapsed().as_secs_f64(),
        warnings,
        verdicts: trace.checks.iter().map(Verdict::from).collect(),
        passed: trace.all_passed(),
        trace,
    };

    fs::create_dir_all(&config.out_dir).map_err(|e| HarnessError::io(&config.out_dir, e))?;
    let csv_path = config.trace_path();
    fs::write(&csv_path, trace_csv(&bundle.trace)?).map_err(|e| HarnessError::io(&csv_path, e))?;
    write_report(&bundle, &config.report_path())?;
    if let Some(plot) = &config.plot {
        emit_plot(&bundle.trace, plot)?;
    }
    Ok(bundle)
}

/// The trace as CSV bytes. Floats use shortest round-trip exponent notation,
/// so identical traces give identical bytes.
pub fn trace_csv(trace: &ConvergenceTrace) -> Result<Vec<u8>, HarnessError> {
    let to_err = |e: csv::Error| HarnessError::Parse { path: "<trace>".into(), message: e.to_string() };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for row in &trace.rows {
        let verdict = if trace.row_passed(row.n) { "pass" } else { "fail" };
        w.write_record([
            row.n.to_string(),
            row.size.to_string(),
            format!("{:e}", row.lip_alpha),
            format!("{:e}", row.lip_base),
            format!("{:e}", row.sup_error),
            row.bound.map(|b| format!("{b:e}")).unwrap_or_default(),
            verdict.to_owned(),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| HarnessError::io(Path::new("<trace>"), e))?;
    w.into_inner().map_err(|e| HarnessError::io(Path::new("<trace>"), e.into_error()))
}

pub fn write_report(bundle: &ReportBundle, path: &Path) -> Result<(), HarnessError> {
    let mut file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::to_writer_pretty(&mut file, bundle)
        .map_err(|e| HarnessError::Parse { path: path.to_owned(), message: e.to_string() })?;
    file.write_all(b"\n").map_err(|e| HarnessError::io(path, e))
}

pub fn read_report(path: &Path) -> Result<ReportBundle, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Parse { path: path.to_owned(), message: e.to_string() })
}
