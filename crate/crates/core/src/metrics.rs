//! Solution-quality metrics: relative error, ground-state probability,
//! best-of-block aggregation, and histogram summaries.

use crate::error::{Error, Result};
use crate::model::{SampleRecord, SampleSet};

/// Default relative tolerance for declaring a read "ground state".
pub const GS_RTOL: f64 = 1e-9;

/// Histograms are clipped at this relative error for plotting.
pub const MAX_PLOT_RE: f64 = 2.0;

/// Relative error RE = (e - e_gs) / |e_gs|; zero at optimality, one at
/// e = 0 for negative e_gs.
pub fn relative_error(e: f64, e_gs: f64) -> Result<f64> {
    if e_gs == 0.0 {
        return Err(Error::UndefinedNormalization);
    }
    Ok((e - e_gs) / e_gs.abs())
}

/// Fraction of records with energy <= e_gs + tol * |e_gs|. Matching is by
/// energy, not assignment, so degenerate ground states all count.
pub fn ground_state_probability(samples: &SampleSet, e_gs: f64, tol: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("ground-state probability needs samples"));
    }
    if tol < 0.0 {
        return Err(Error::Parameter(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let threshold = e_gs + tol * e_gs.abs();
    let hits = samples.energies().filter(|&e| e <= threshold).count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Keep the best record of each consecutive block of `block_size` reads
/// (ties go to the first). Output records get sequential block ids.
pub fn best_of_blocks(samples: &SampleSet, block_size: usize) -> Result<SampleSet> {
    if block_size == 0 {
        return Err(Error::Parameter("block size must be >= 1".to_string()));
    }
    if !samples.len().is_multiple_of(block_size) {
        return Err(Error::BlockShape {
            count: samples.len(),
            block_size,
        });
    }
    let records: Vec<SampleRecord> = samples
        .records
        .chunks_exact(block_size)
        .enumerate()
        .map(|(block_id, chunk)| {
            let mut best = &chunk[0];
            for rec in &chunk[1..] {
                if rec.energy < best.energy {
                    best = rec;
                }
            }
            SampleRecord {
                block_id,
                ..best.clone()
            }
        })
        .collect();
    let mut out = SampleSet::new(records);
    out.metadata = samples.metadata.clone();
    out.metadata
        .insert("block_size".into(), block_size.to_string());
    Ok(out)
}

/// Distribution summary of a sample set against a known ground-state
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub reads: usize,
    pub relative_errors: Vec<f64>,
    pub p_gs: f64,
    pub mean_re: f64,
    pub min_re: f64,
    /// Equal-width bins (low, high, count) over [0, min(max RE, 2.0)];
    /// values beyond the clip land in the last bin.
    pub histogram: Vec<(f64, f64, usize)>,
}

/// Relative errors, ground-state probability, and an equal-width histogram
/// for every record in the set.
pub fn summarize(samples: &SampleSet, e_gs: f64, bins: usize) -> Result<QualityReport> {
    if bins == 0 {
        return Err(Error::Parameter("bins must be >= 1".to_string()));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput("summary needs at least one record"));
    }
    let relative_errors: Vec<f64> = samples
        .energies()
        .map(|e| relative_error(e, e_gs))
        .collect::<Result<_>>()?;
    let p_gs = ground_state_probability(samples, e_gs, GS_RTOL)?;
    let mean_re = relative_errors.iter().sum::<f64>() / relative_errors.len() as f64;
    let min_re = relative_errors
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let max_re = relative_errors
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);

    let hi = if max_re > 0.0 {
        max_re.min(MAX_PLOT_RE)
    } else {
        1.0
    };
    let width = hi / bins as f64;
    let mut counts = vec![0usize; bins];
    for &re in &relative_errors {
        let idx = if re <= 0.0 {
            0
        } else {
            ((re / width) as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| (i as f64 * width, (i + 1) as f64 * width, count))
        .collect();

    Ok(QualityReport {
        reads: samples.len(),
        relative_errors,
        p_gs,
        mean_re,
        min_re,
        histogram,
    })
}

impl QualityReport {
    /// CSV form: summary header rows (comment-prefixed) followed by one row
    /// per bin. Per-read relative errors are not serialized.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# quality-report v1\n");
        out.push_str(&format!("# reads,{}\n", self.reads));
        out.push_str(&format!("# p_gs,{:.16e}\n", self.p_gs));
        out.push_str(&format!("# mean_re,{:.16e}\n", self.mean_re));
        out.push_str(&format!("# min_re,{:.16e}\n", self.min_re));
        out.push_str("bin_low,bin_high,count\n");
        for &(low, high, count) in &self.histogram {
            out.push_str(&format!("{low:.16e},{high:.16e},{count}\n"));
        }
        out
    }

    pub fn from_csv(text: &str, source: &str) -> Result<Self> {
        let mut reads = None;
        let mut p_gs = None;
        let mut mean_re = None;
        let mut min_re = None;
        let mut histogram = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::parse(source, lineno + 1, msg);
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some((key, value)) = rest.split_once(',') {
                    match key.trim() {
                        "reads" => {
                            reads = Some(
                                value
                                    .trim()
                                    .parse::<usize>()
                                    .map_err(|_| err("invalid reads count"))?,
                            )
                        }
                        "p_gs" => p_gs = Some(parse_f64(value, source, lineno + 1)?),
                        "mean_re" => mean_re = Some(parse_f64(value, source, lineno + 1)?),
                        "min_re" => min_re = Some(parse_f64(value, source, lineno + 1)?),
                        _ => {}
                    }
                }
                continue;
            }
            if line == "bin_low,bin_high,count" {
                saw_header = true;
                continue;
            }
            if !saw_header {
                return Err(err("expected `bin_low,bin_high,count` header"));
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(err("expected three comma-separated fields"));
            }
            let low = parse_f64(fields[0], source, lineno + 1)?;
            let high = parse_f64(fields[1], source, lineno + 1)?;
            let count = fields[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| err("invalid count"))?;
            histogram.push((low, high, count));
        }
        if histogram.is_empty() {
            return Err(Error::parse(source, 1, "report has no histogram rows"));
        }
        Ok(Self {
            reads: reads.ok_or_else(|| Error::parse(source, 1, "missing `# reads` row"))?,
            relative_errors: Vec::new(),
            p_gs: p_gs.ok_or_else(|| Error::parse(source, 1, "missing `# p_gs` row"))?,
            mean_re: mean_re.ok_or_else(|| Error::parse(source, 1, "missing `# mean_re` row"))?,
            min_re: min_re.ok_or_else(|| Error::parse(source, 1, "missing `# min_re` row"))?,
            histogram,
        })
    }
}

fn parse_f64(field: &str, source: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(source, line, "invalid floating-point value"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::generators;
    use crate::model::SpinAssignment;
    use crate::rng;

    fn record(energy: f64) -> SampleRecord {
        SampleRecord {
            assignment: SpinAssignment::new(vec![1]).unwrap(),
            energy,
            block_id: 0,
        }
    }

    fn set(energies: &[f64]) -> SampleSet {
        SampleSet::new(energies.iter().map(|&e| record(e)).collect())
    }

    #[test]
    fn relative_error_basics() {
        assert_eq!(relative_error(-5.0, -5.0).unwrap(), 0.0);
        // e = 0 with negative ground state is exactly RE = 1.
        assert_eq!(relative_error(0.0, -3.5).unwrap(), 1.0);
        assert_eq!(relative_error(-118.09, -236.18).unwrap(), 0.5);
        assert!(matches!(
            relative_error(1.0, 0.0),
            Err(Error::UndefinedNormalization)
        ));
    }

    #[test]
    fn relative_error_is_scale_covariant() {
        for (e, gs, lambda) in [(-3.0, -7.0, 2.5), (1.5, -2.0, 0.125), (-1.0, -4.0, 10.0)] {
            let base = relative_error(e, gs).unwrap();
            let scaled = relative_error(lambda * e, lambda * gs).unwrap();
            assert!((base - scaled).abs() <= 1e-12 * base.abs().max(1.0));
        }
    }

    #[test]
    fn ground_state_probability_extremes() {
        let s = set(&[-2.0, -2.0, -2.0]);
        assert_eq!(ground_state_probability(&s, -2.0, GS_RTOL).unwrap(), 1.0);
        let s = set(&[-1.0, 0.0]);
        assert_eq!(ground_state_probability(&s, -2.0, GS_RTOL).unwrap(), 0.0);
        assert!(ground_state_probability(&SampleSet::default(), -1.0, GS_RTOL).is_err());
    }

    #[test]
    fn ground_state_probability_matches_exhaustive_count() {
        let m = generators::gen_clique_ising(10, 17).unwrap();
        let gs = exact::brute_force(&m).unwrap();
        let mut records = Vec::new();
        let mut expected_hits = 0usize;
        for trial in 0..1000u64 {
            let mut r = rng::stream(333, trial);
            let s = SpinAssignment::new((0..10).map(|_| rng::spin(&mut r)).collect()).unwrap();
            let e = m.energy(&s).unwrap();
            if e <= gs.energy + GS_RTOL * gs.energy.abs() {
                expected_hits += 1;
            }
            records.push(SampleRecord {
                assignment: s,
                energy: e,
                block_id: 0,
            });
        }
        let p = ground_state_probability(&SampleSet::new(records), gs.energy, GS_RTOL).unwrap();
        assert_eq!(p, expected_hits as f64 / 1000.0);
    }

    #[test]
    fn best_of_blocks_examples() {
        let s = set(&[3.0, 1.0, 0.0, 5.0]);
        // Block size 1 is the identity on energies.
        let one = best_of_blocks(&s, 1).unwrap();
        assert_eq!(one.energies().collect::<Vec<_>>(), vec![3.0, 1.0, 0.0, 5.0]);
        let two = best_of_blocks(&s, 2).unwrap();
        assert_eq!(two.energies().collect::<Vec<_>>(), vec![1.0, 0.0]);
        assert_eq!(
            two.records.iter().map(|r| r.block_id).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert!(matches!(
            best_of_blocks(&s, 3),
            Err(Error::BlockShape { .. })
        ));
    }

    #[test]
    fn best_of_blocks_dominates_sources() {
        let mut r = rng::seeded(2);
        let energies: Vec<f64> = (0..120).map(|_| rng::standard_normal(&mut r)).collect();
        let s = set(&energies);
        for c in [2, 3, 4, 6] {
            let agg = best_of_blocks(&s, c).unwrap();
            for (block, rec) in agg.records.iter().enumerate() {
                for src in &s.records[block * c..(block + 1) * c] {
                    assert!(rec.energy <= src.energy);
                }
            }
            // Best-of aggregation cannot reduce per-read success.
            let p0 = ground_state_probability(
                &s,
                energies.iter().copied().fold(f64::INFINITY, f64::min),
                GS_RTOL,
            )
            .unwrap();
            let p1 = ground_state_probability(
                &agg,
                energies.iter().copied().fold(f64::INFINITY, f64::min),
                GS_RTOL,
            )
            .unwrap();
            assert!(p1 >= p0);
        }
    }

    #[test]
    fn summarize_single_optimal_record() {
        let s = set(&[-4.0]);
        let q = summarize(&s, -4.0, 4).unwrap();
        assert_eq!(q.p_gs, 1.0);
        assert_eq!(q.mean_re, 0.0);
        assert_eq!(q.min_re, 0.0);
    }

    #[test]
    fn summarize_two_bin_histogram() {
        // Records at RE = 0 and RE = 1 with two bins: one count each.
        let s = set(&[-2.0, 0.0]);
        let q = summarize(&s, -2.0, 2).unwrap();
        let counts: Vec<usize> = q.histogram.iter().map(|&(_, _, c)| c).collect();
        assert_eq!(counts, vec![1, 1]);
    }

    #[test]
    fn histogram_counts_sum_to_record_count() {
        let mut r = rng::seeded(10);
        let energies: Vec<f64> = (0..257)
            .map(|_| -5.0 + rng::uniform01(&mut r) * 20.0)
            .collect();
        let s = set(&energies);
        for bins in [1, 3, 10] {
            let q = summarize(&s, -5.0, bins).unwrap();
            let total: usize = q.histogram.iter().map(|&(_, _, c)| c).sum();
            assert_eq!(total, s.len());
        }
    }

    #[test]
    fn report_csv_round_trip() {
        let s = set(&[-2.0, -1.0, 0.0, 1.0]);
        let q = summarize(&s, -2.0, 3).unwrap();
        let csv = q.to_csv();
        let parsed = QualityReport::from_csv(&csv, "test").unwrap();
        assert_eq!(parsed.reads, q.reads);
        assert_eq!(parsed.p_gs, q.p_gs);
        assert_eq!(parsed.mean_re, q.mean_re);
        assert_eq!(parsed.min_re, q.min_re);
        assert_eq!(parsed.histogram, q.histogram);
    }
}
