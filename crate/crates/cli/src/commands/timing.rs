//! `spinbench timing`: emit a runtime comparison table with a measured
//! BF-Null column next to annealer and gate-model estimates.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use spinbench_core::bfnull::{run_bf_null, BfConfig};
use spinbench_core::generators::{gen_clique_ising, gen_heavy_hex_hising, HeavyHexGraph};
use spinbench_core::timing::{gate_model_time, qpu_access_time, AnnealerTiming, GateModelTiming};

use crate::manifest::{sidecar_path, RunManifest};
use crate::{CliError, CliResult};

#[derive(Args, Debug)]
pub struct TimingArgs {
    /// Built-in experiment preset: ising-fig1, ising-fig23 or hising-fig4.
    #[arg(long)]
    pub preset: Option<String>,

    /// Skip the BF-Null measurement (keeps the output byte-deterministic).
    #[arg(long)]
    pub no_measure: bool,

    // Explicit annealer parameters (used when no preset is given).
    #[arg(long)]
    pub programming_ms: Option<f64>,
    #[arg(long)]
    pub anneal_us: Option<f64>,
    #[arg(long)]
    pub readout_us: Option<f64>,
    #[arg(long)]
    pub delay_us: Option<f64>,
    #[arg(long)]
    pub reads: Option<u64>,

    // Explicit gate-model estimate, per-gate flavor.
    #[arg(long)]
    pub gate_per_gate_us: Option<f64>,
    #[arg(long)]
    pub gate_shots: Option<u64>,
    #[arg(long)]
    pub gate_iterations: Option<u64>,
    #[arg(long)]
    pub gate_depth: Option<u64>,

    // Explicit gate-model estimate, workload-formula flavor.
    #[arg(long)]
    pub workload_reads: Option<u64>,
    #[arg(long)]
    pub workload_iterations: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

struct Row {
    experiment: String,
    measured_seconds: Option<f64>,
    annealer_seconds: f64,
    gate_seconds: Option<f64>,
    gate_is_lower_bound: bool,
}

/// 1000-read BF-Null wall-clock measurement on the preset's instance class.
fn measure(preset: &str) -> CliResult<f64> {
    let (model, gamma) = match preset {
        "hising-fig4" => (gen_heavy_hex_hising(&HeavyHexGraph::default_156(), 0)?, 2.0),
        _ => (gen_clique_ising(29, 0)?, 3.0),
    };
    let config = BfConfig {
        iterations: 1,
        reads: 1000,
        alpha: 0.02,
        gamma,
        seed: 0,
        rank_by_biased: false,
    };
    Ok(run_bf_null(&model, &config)?.wall_clock_seconds)
}

fn preset_row(preset: &str, no_measure: bool) -> CliResult<Row> {
    let (annealer, gate) = match preset {
        "ising-fig1" => (
            AnnealerTiming::new(35.0, 500.0, 98.0, 60.0, 1000)?,
            GateModelTiming::per_gate(970.0, 1000, 10, 10)?,
        ),
        "ising-fig23" => (
            AnnealerTiming::new(35.0, 500.0, 98.0, 60.0, 1000)?,
            GateModelTiming::per_gate(970.0, 1000, 39, 10)?,
        ),
        "hising-fig4" => (
            AnnealerTiming::new(35.0, 350.0, 98.0, 60.0, 1000)?,
            GateModelTiming::workload(1000, 10)?,
        ),
        other => {
            return Err(CliError::usage(format!(
                "unknown preset {other:?} (expected ising-fig1, ising-fig23 or hising-fig4)"
            )))
        }
    };
    let measured_seconds = if no_measure {
        None
    } else {
        Some(measure(preset)?)
    };
    Ok(Row {
        experiment: preset.to_string(),
        measured_seconds,
        annealer_seconds: qpu_access_time(&annealer),
        gate_seconds: Some(gate_model_time(&gate)),
        gate_is_lower_bound: true,
    })
}

fn explicit_row(args: &TimingArgs) -> CliResult<Row> {
    let (Some(programming_ms), Some(anneal_us), Some(readout_us), Some(delay_us), Some(reads)) = (
        args.programming_ms,
        args.anneal_us,
        args.readout_us,
        args.delay_us,
        args.reads,
    ) else {
        return Err(CliError::usage(
            "explicit mode needs --programming-ms, --anneal-us, --readout-us, --delay-us and --reads (or use --preset)",
        ));
    };
    let annealer = AnnealerTiming::new(programming_ms, anneal_us, readout_us, delay_us, reads)?;

    let gate = match (args.gate_per_gate_us, args.workload_reads) {
        (Some(per_gate_us), None) => {
            let (Some(shots), Some(iterations), Some(depth)) =
                (args.gate_shots, args.gate_iterations, args.gate_depth)
            else {
                return Err(CliError::usage(
                    "per-gate estimate needs --gate-shots, --gate-iterations and --gate-depth",
                ));
            };
            Some(GateModelTiming::per_gate(
                per_gate_us,
                shots,
                iterations,
                depth,
            )?)
        }
        (None, Some(w_reads)) => {
            let Some(w_iters) = args.workload_iterations else {
                return Err(CliError::usage(
                    "workload estimate needs --workload-iterations",
                ));
            };
            Some(GateModelTiming::workload(w_reads, w_iters)?)
        }
        (None, None) => None,
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "choose one gate-model flavor: per-gate or workload",
            ))
        }
    };

    Ok(Row {
        experiment: "custom".to_string(),
        measured_seconds: None,
        annealer_seconds: qpu_access_time(&annealer),
        gate_seconds: gate.as_ref().map(gate_model_time),
        gate_is_lower_bound: gate.is_some(),
    })
}

pub fn run(args: &TimingArgs) -> CliResult<()> {
    let start = Instant::now();
    let row = match &args.preset {
        Some(preset) => preset_row(preset, args.no_measure)?,
        None => explicit_row(args)?,
    };

    let mut csv = String::from("# timing-table v1\n");
    csv.push_str(
        "experiment,bf_null_measured_seconds,annealer_seconds,gate_model_estimate_seconds,gate_estimate_kind\n",
    );
    let measured = row
        .measured_seconds
        .map(|s| format!("{s:.6}"))
        .unwrap_or_default();
    let gate = row
        .gate_seconds
        .map(|s| format!("{s:.16e}"))
        .unwrap_or_default();
    let kind = if row.gate_seconds.is_none() {
        ""
    } else if row.gate_is_lower_bound {
        "lower_bound"
    } else {
        "estimate"
    };
    let _ = writeln!(
        csv,
        "{},{},{:.16e},{},{}",
        row.experiment, measured, row.annealer_seconds, gate, kind
    );
    std::fs::write(&args.out, csv)?;

    let mut manifest = RunManifest::new("timing");
    manifest.param("experiment", &row.experiment);
    manifest.param("measured", (!args.no_measure).to_string());
    manifest.output(&args.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.write(&sidecar_path(&args.out))?;

    println!(
        "timing table ({}) -> {}",
        row.experiment,
        args.out.display()
    );
    Ok(())
}
