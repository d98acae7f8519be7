//! `spinbench report`: render analysis CSVs as deterministic SVG figures.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use spinbench_core::metrics::QualityReport;

use crate::manifest::{sidecar_path, RunManifest};
use crate::{svg, CliError, CliResult};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Overlaid relative-error histograms from quality-report CSVs.
    Histogram,
    /// Scatter of two-column CSVs (e.g. p_gs over problem size).
    Scatter,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub out: PathBuf,
    /// Input CSVs; one overlay series per file.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

/// (x label, y label, points).
type LabeledPoints = (String, String, Vec<(f64, f64)>);

fn parse_points(path: &Path) -> CliResult<LabeledPoints> {
    let text = std::fs::read_to_string(path)?;
    let source = path.display().to_string();
    let mut points = Vec::new();
    let mut labels = ("x".to_string(), "y".to_string());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::validation(format!(
                "{source}:{}: expected two comma-separated columns",
                lineno + 1
            )));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if points.is_empty() => {
                // Header row names the axes.
                labels = (fields[0].to_string(), fields[1].to_string());
            }
            _ => {
                return Err(CliError::validation(format!(
                    "{source}:{}: invalid numeric row",
                    lineno + 1
                )))
            }
        }
    }
    if points.is_empty() {
        return Err(CliError::validation(format!("{source}: no data points")));
    }
    Ok((labels.0, labels.1, points))
}

pub fn run(args: &ReportArgs) -> CliResult<()> {
    let start = Instant::now();
    let rendered = match args.kind {
        Kind::Histogram => {
            let mut series = Vec::new();
            for path in &args.inputs {
                let text = std::fs::read_to_string(path)?;
                let report = QualityReport::from_csv(&text, &path.display().to_string())?;
                series.push((super::file_stem(path), report.histogram));
            }
            svg::histogram_svg(&series, "relative error")
        }
        Kind::Scatter => {
            let mut series = Vec::new();
            let mut labels = ("x".to_string(), "y".to_string());
            for path in &args.inputs {
                let (lx, ly, points) = parse_points(path)?;
                labels = (lx, ly);
                series.push((super::file_stem(path), points));
            }
            svg::scatter_svg(&series, &labels.0, &labels.1)
        }
    };
    std::fs::write(&args.out, rendered)?;

    let mut manifest = RunManifest::new("report");
    manifest.param(
        "kind",
        match args.kind {
            Kind::Histogram => "histogram",
            Kind::Scatter => "scatter",
        },
    );
    for path in &args.inputs {
        manifest.input(path)?;
    }
    manifest.output(&args.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&sidecar_path(&args.out))?;

    println!("rendered {} -> {}", args.inputs.len(), args.out.display());
    Ok(())
}
