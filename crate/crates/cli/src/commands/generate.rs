//! `spinbench generate`: write a seeded ensemble of instance files plus a
//! run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand};
use spinbench_core::generators::{
    gen_heavy_hex, EnsembleClass, EnsembleSpec, HeavyHexGraph, HeavyHexLayout,
};
use spinbench_core::io::{self, InstanceMeta};

use crate::manifest::RunManifest;
use crate::{CliError, CliResult};

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub class: GenerateClass,
}

#[derive(Subcommand, Debug)]
pub enum GenerateClass {
    /// Fully connected Ising instances with Gaussian weights.
    Clique {
        /// Number of variables per instance.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Cubic hising instances on heavy-hex neighborhoods.
    Heavyhex {
        /// Use the 156-node default layout (17 x 1 cells).
        #[arg(long, conflicts_with_all = ["cells_x", "cells_y", "edge_list"])]
        default: bool,
        #[arg(long, requires = "cells_y")]
        cells_x: Option<usize>,
        #[arg(long, requires = "cells_x")]
        cells_y: Option<usize>,
        /// Load the lattice from an explicit edge-list file instead.
        #[arg(long, conflicts_with_all = ["cells_x", "cells_y"])]
        edge_list: Option<PathBuf>,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
}

pub fn run(args: &GenerateArgs) -> CliResult<()> {
    let start = Instant::now();
    match &args.class {
        GenerateClass::Clique {
            n,
            count,
            seed,
            out,
            force,
        } => {
            let spec = EnsembleSpec::new(EnsembleClass::CliqueIsing { n: *n }, *count, *seed)?;
            emit(&spec, out, *force, &[("n", n.to_string())], None, start)
        }
        GenerateClass::Heavyhex {
            default,
            cells_x,
            cells_y,
            edge_list,
            count,
            seed,
            out,
            force,
        } => {
            let graph = match (default, cells_x, cells_y, edge_list) {
                (true, ..) => HeavyHexGraph::default_156(),
                (false, Some(x), Some(y), None) => gen_heavy_hex(*x, *y)?,
                (false, None, None, Some(path)) => HeavyHexGraph::from_edge_list(path)?,
                _ => {
                    return Err(CliError::usage(
                        "heavyhex needs --default, --cells-x/--cells-y, or --edge-list",
                    ))
                }
            };
            let mut extra: Vec<(&str, String)> = Vec::new();
            match graph.layout() {
                HeavyHexLayout::Cells { cells_x, cells_y } => {
                    extra.push(("cells_x", cells_x.to_string()));
                    extra.push(("cells_y", cells_y.to_string()));
                }
                HeavyHexLayout::Explicit => {
                    extra.push(("layout", "explicit".to_string()));
                }
            }
            let input = edge_list.clone();
            let spec = EnsembleSpec::new(EnsembleClass::HeavyHexHising { graph }, *count, *seed)?;
            emit(&spec, out, *force, &extra, input, start)
        }
    }
}

fn emit(
    spec: &EnsembleSpec,
    out: &Path,
    force: bool,
    extra: &[(&str, String)],
    input: Option<PathBuf>,
    start: Instant,
) -> CliResult<()> {
    super::prepare_out_dir(out, force)?;
    let mut manifest = RunManifest::new("generate");
    manifest.seed = Some(spec.base_seed);
    manifest.param("class", spec.class.tag());
    manifest.param("count", spec.count);
    manifest.param("base_seed", spec.base_seed);
    for (key, value) in extra {
        manifest.param(key, value);
    }
    if let Some(path) = &input {
        manifest.input(path)?;
    }

    for index in 0..spec.count {
        let model = spec.instance(index)?;
        let mut meta = InstanceMeta::new(spec.class.tag(), model.num_variables())
            .with("base_seed", spec.base_seed)
            .with("instance_index", index)
            .with("instance_seed", spec.instance_seed(index));
        for (key, value) in extra {
            meta = meta.with(key, value);
        }
        let path = out.join(format!("instance_{index:05}.inst"));
        io::write_instance(&path, &model, &meta)?;
        manifest.output(&path)?;
    }

    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&out.join("manifest.json"))?;
    println!(
        "generated {} {} instances in {}",
        spec.count,
        spec.class.tag(),
        out.display()
    );
    Ok(())
}
