//! `spinbench exact`: compute and store the exact ground state of an
//! instance.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use spinbench_core::exact::{brute_force, elimination_solve, min_fill_order};
use spinbench_core::io;

use crate::manifest::{sidecar_path, RunManifest};
use crate::CliResult;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Brute force for N <= 22, elimination otherwise.
    Auto,
    Brute,
    Elim,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ExactArgs) -> CliResult<()> {
    let start = Instant::now();
    let file = io::read_instance(&args.instance)?;
    let n = file.model.num_variables();
    let method = match args.method {
        Method::Auto if n <= 22 => Method::Brute,
        Method::Auto => Method::Elim,
        m => m,
    };

    let mut extra = BTreeMap::new();
    extra.insert("instance".to_string(), super::file_stem(&args.instance));
    let gs = match method {
        Method::Brute => {
            extra.insert("method".to_string(), "brute".to_string());
            brute_force(&file.model)?
        }
        Method::Elim => {
            let order = min_fill_order(&file.model);
            extra.insert("method".to_string(), "elimination".to_string());
            extra.insert("induced_width".to_string(), order.induced_width.to_string());
            elimination_solve(&file.model, &order)?
        }
        Method::Auto => unreachable!("resolved above"),
    };

    io::write_ground_state(&args.out, &gs, &extra)?;

    let mut manifest = RunManifest::new("exact");
    manifest.param("method", extra["method"].clone());
    manifest.input(&args.instance)?;
    manifest.output(&args.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&sidecar_path(&args.out))?;

    println!(
        "ground state {:.6} ({}) -> {}",
        gs.energy,
        extra["method"],
        args.out.display()
    );
    Ok(())
}
