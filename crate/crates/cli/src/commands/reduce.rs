//! `spinbench reduce`: quadratize an instance's cubic terms.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use spinbench_core::io;
use spinbench_core::reduce::quadratize;

use crate::manifest::{sidecar_path, RunManifest};
use crate::CliResult;

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 5.0)]
    pub penalty: f64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ReduceArgs) -> CliResult<()> {
    let start = Instant::now();
    let file = io::read_instance(&args.instance)?;
    let rmap = quadratize(&file.model, args.penalty)?;

    let mut extra = BTreeMap::new();
    extra.insert("source".to_string(), super::file_stem(&args.instance));
    io::write_reduction(&args.out, &rmap, &file.meta.class_tag, &extra)?;

    let mut manifest = RunManifest::new("reduce");
    manifest.param("penalty", args.penalty);
    manifest.param("auxiliaries", rmap.aux_defs.len());
    manifest.input(&args.instance)?;
    manifest.output(&args.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&sidecar_path(&args.out))?;

    println!(
        "reduced {} cubic terms with {} auxiliaries (penalty {}) -> {}",
        file.model.num_cubic(),
        rmap.aux_defs.len(),
        args.penalty,
        args.out.display()
    );
    Ok(())
}
