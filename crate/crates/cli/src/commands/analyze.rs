//! `spinbench analyze`: summarize sample files against a known ground
//! state as a CSV quality report.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use spinbench_core::io;
use spinbench_core::metrics;
use spinbench_core::SampleSet;

use crate::manifest::{sidecar_path, RunManifest};
use crate::CliResult;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Instance the samples were drawn from (energies are re-validated
    /// against it).
    #[arg(long)]
    pub instance: PathBuf,
    /// Ground-state file providing e_gs.
    #[arg(long)]
    pub ground_state: PathBuf,
    /// Pre-aggregate with best-of-blocks of this size.
    #[arg(long)]
    pub block_size: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Sample files, concatenated in argument order.
    #[arg(required = true)]
    pub samples: Vec<PathBuf>,
}

pub fn run(args: &AnalyzeArgs) -> CliResult<()> {
    let start = Instant::now();
    let file = io::read_instance(&args.instance)?;
    let (gs, _) = io::read_ground_state(&args.ground_state)?;

    let mut merged = SampleSet::default();
    for path in &args.samples {
        let loaded = io::read_samples(path, &file.model)?;
        if !loaded.corrected_rows.is_empty() {
            eprintln!(
                "note: {}: corrected {} stored energies against the instance",
                path.display(),
                loaded.corrected_rows.len()
            );
        }
        merged.records.extend(loaded.samples.records);
    }

    let analyzed = match args.block_size {
        Some(c) => metrics::best_of_blocks(&merged, c)?,
        None => merged,
    };
    let report = metrics::summarize(&analyzed, gs.energy, args.bins)?;
    std::fs::write(&args.out, report.to_csv())?;

    let mut manifest = RunManifest::new("analyze");
    manifest.param("bins", args.bins);
    if let Some(c) = args.block_size {
        manifest.param("block_size", c);
    }
    manifest.param("e_gs", format!("{:.16e}", gs.energy));
    manifest.input(&args.instance)?;
    manifest.input(&args.ground_state)?;
    for path in &args.samples {
        manifest.input(path)?;
    }
    manifest.output(&args.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&sidecar_path(&args.out))?;

    println!(
        "analyzed {} reads: p_gs={:.4} mean_re={:.4} -> {}",
        report.reads,
        report.p_gs,
        report.mean_re,
        args.out.display()
    );
    Ok(())
}
