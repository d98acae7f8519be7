//! Ingestion equivalence: externally produced sample files flow through
//! the analysis path identically to native in-memory samples.

use std::fmt::Write as _;

use spinbench_core::bfnull::{self, BfConfig};
use spinbench_core::generators;
use spinbench_core::io;
use spinbench_core::metrics;
use spinbench_core::model::SpinAssignment;
use spinbench_core::rng;

#[test]
fn external_sample_file_analyzes_like_native_samples() {
    let m = generators::gen_clique_ising(10, 314).unwrap();
    let gs = spinbench_core::exact::brute_force(&m).unwrap();

    // Build 1000 synthetic reads in memory.
    let mut records = Vec::new();
    for t in 0..1000u64 {
        let mut r = rng::stream(2718, t);
        let s = SpinAssignment::new((0..10).map(|_| rng::spin(&mut r)).collect()).unwrap();
        let energy = m.energy(&s).unwrap();
        records.push(spinbench_core::SampleRecord {
            assignment: s,
            energy,
            block_id: 0,
        });
    }
    let native = spinbench_core::SampleSet::new(records);

    // Write the same reads as an "external" file: no tool header, different
    // metadata, same rows.
    let mut text = String::from("# producer external-qpu-pipeline\n");
    text.push_str("assignment,energy,block_id\n");
    for rec in &native.records {
        let _ = writeln!(
            text,
            "{},{:.16e},{}",
            rec.assignment.to_sign_string(),
            rec.energy,
            rec.block_id
        );
    }
    let loaded = io::parse_samples(&text, "external", &m).unwrap();
    assert!(loaded.corrected_rows.is_empty());

    let native_report = metrics::summarize(&native, gs.energy, 20).unwrap();
    let loaded_report = metrics::summarize(&loaded.samples, gs.energy, 20).unwrap();
    assert_eq!(native_report, loaded_report);
    assert_eq!(native_report.to_csv(), loaded_report.to_csv());
}

#[test]
fn bfnull_written_samples_reanalyze_identically() {
    let m = generators::gen_clique_ising(8, 12).unwrap();
    let gs = spinbench_core::exact::brute_force(&m).unwrap();
    let run = bfnull::run_bf_null(
        &m,
        &BfConfig {
            iterations: 2,
            reads: 100,
            alpha: 0.05,
            gamma: 3.0,
            seed: 77,
            rank_by_biased: false,
        },
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    io::write_samples(&path, run.final_samples()).unwrap();
    let loaded = io::read_samples(&path, &m).unwrap();
    assert_eq!(&loaded.samples, run.final_samples());
    let a = metrics::summarize(run.final_samples(), gs.energy, 10).unwrap();
    let b = metrics::summarize(&loaded.samples, gs.energy, 10).unwrap();
    assert_eq!(a, b);
}
