use std::path::Path;

use lipdense::ConvergenceTrace;
use plotters::prelude::*;

use crate::error::HarnessError;

type Series = (&'static str, RGBColor, Vec<(f64, f64)>);

/// Writes an SVG line chart of the sup error, the Hölder constant and, where
/// present, the error bound against `n`, on a logarithmic y axis. Zeros are
/// drawn at a floor one decade below the smallest positive value.
pub fn emit_plot(trace: &ConvergenceTrace, path: &Path) -> Result<(), HarnessError> {
    if trace.rows.is_empty() {
        return Err(HarnessError::EmptyTrace);
    }
    let plot_err = |e: &dyn std::fmt::Display| HarnessError::Plot { path: path.to_owned(), message: e.to_string() };

    let mut series: Vec<Series> = vec![
        ("sup error", RED, trace.rows.iter().map(|r| (r.n as f64, r.sup_error)).collect()),
        ("Hölder constant", BLUE, trace.rows.iter().map(|r| (r.n as f64, r.lip_alpha)).collect()),
    ];
    let bound: Vec<(f64, f64)> = trace.rows.iter().filter_map(|r| r.bound.map(|b| (r.n as f64, b))).collect();
    if !bound.is_empty() {
        series.push(("error bound", BLACK, bound));
    }

    let positive = series.iter().flat_map(|s| s.2.iter().map(|p| p.1)).filter(|&v| v > 0.0);
    let (lo, hi) = positive.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (floor, top) = if hi > 0.0 { (lo / 10.0, hi * 2.0) } else { (1e-17, 1.0) };
    for s in &mut series {
        s.2.iter_mut().for_each(|p| p.1 = p.1.max(floor));
    }
    let x0 = trace.rows.first().map_or(1, |r| r.n) as f64;
    let x1 = (trace.rows.last().map_or(1, |r| r.n) as f64).max(x0 + 1.0);

    let root = SVGBackend::new(path, (800, 520)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(format!("{} construction, alpha = {}", trace.construction, trace.alpha), ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(x0..x1, (floor..top).log_scale())
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc("n")
        .y_desc("value")
        .draw()
        .map_err(|e| plot_err(&e))?;
    for (label, color, points) in series {
        chart
            .draw_series(LineSeries::new(points, color.stroke_width(2)))
            .map_err(|e| plot_err(&e))?
            .label(label)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(&e))?;
    root.present().map_err(|e| plot_err(&e))
}
