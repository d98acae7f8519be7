//! Bias-field null-hypothesis solver (BF-Null): iterated bias-field
//! updates wrapped around a single zero-temperature sweep subsolver.
//!
//! Each iteration optimizes E'(s) = E(s) + gamma * B . s with one ordered
//! sweep from a fresh uniform-random start per read, then points the bias
//! field at the negated average of the best alpha-fraction of samples.
//! Recorded energies always refer to the unbiased model.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{BiasField, PolynomialModel, SampleRecord, SampleSet, SpinAssignment};
use crate::rng;

/// Run parameters for [`run_bf_null`].
#[derive(Debug, Clone, PartialEq)]
pub struct BfConfig {
    /// Number of bias-field updates b.
    pub iterations: usize,
    /// Reads per iteration R.
    pub reads: usize,
    /// Fraction of best samples feeding the bias update, in (0, 1).
    pub alpha: f64,
    /// Bias-field weight.
    pub gamma: f64,
    pub seed: u64,
    /// Rank the alpha-selection by biased energy E' instead of the default
    /// unbiased E.
    pub rank_by_biased: bool,
}

impl BfConfig {
    /// Defaults for fully connected Ising instances: b=10, R=1000,
    /// alpha=0.02, gamma=3.
    pub fn clique_defaults(seed: u64) -> Self {
        Self {
            iterations: 10,
            reads: 1000,
            alpha: 0.02,
            gamma: 3.0,
            seed,
            rank_by_biased: false,
        }
    }

    /// Defaults for heavy-hex hising instances: gamma=2.
    pub fn heavy_hex_defaults(seed: u64) -> Self {
        Self {
            gamma: 2.0,
            ..Self::clique_defaults(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Parameter("iterations must be >= 1".to_string()));
        }
        if self.reads == 0 {
            return Err(Error::Parameter("reads must be >= 1".to_string()));
        }
        if self.reads as u64 > u32::MAX as u64 || self.iterations as u64 > u32::MAX as u64 {
            return Err(Error::Parameter(
                "iterations and reads must fit in 32 bits".to_string(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !self.gamma.is_finite() {
            return Err(Error::Parameter("gamma must be finite".to_string()));
        }
        Ok(())
    }

    /// Size of the alpha-best selection: ceil(alpha * R), never empty.
    pub fn selection_size(&self) -> usize {
        (self.alpha * self.reads as f64).ceil() as usize
    }
}

/// Full output of a BF-Null run: one sample set per iteration (the last
/// one is the final reporting set), the final bias field, and the measured
/// wall-clock time.
#[derive(Debug, Clone)]
pub struct BfRunResult {
    pub per_iteration: Vec<SampleSet>,
    pub final_bias: BiasField,
    pub wall_clock_seconds: f64,
}

impl BfRunResult {
    /// The last iteration's samples, used for final reporting.
    pub fn final_samples(&self) -> &SampleSet {
        self.per_iteration.last().expect("at least one iteration")
    }
}

/// One zero-temperature sweep: pass through variables in ascending index
/// order and flip each exactly when the flip strictly lowers the energy.
pub fn sweep_subsolve(model: &PolynomialModel, s0: &SpinAssignment) -> Result<SpinAssignment> {
    Ok(sweep_subsolve_counted(model, s0)?.0)
}

/// [`sweep_subsolve`] with an instrumented count of candidate states
/// considered: the start state plus one single-flip candidate per
/// variable, N+1 in total.
pub fn sweep_subsolve_counted(
    model: &PolynomialModel,
    s0: &SpinAssignment,
) -> Result<(SpinAssignment, usize)> {
    let mut s = s0.clone();
    let mut states_considered = 1; // the start state
    for k in 0..model.num_variables() {
        states_considered += 1;
        if model.flip_delta(&s, k)? < 0.0 {
            s.flip(k);
        }
    }
    Ok((s, states_considered))
}

/// Bias update B <- -<s>_alpha: average the spin vectors of the
/// ceil(alpha*R) lowest-energy records (ties broken by record order,
/// duplicates counted as listed) and negate the mean.
pub fn bias_update(samples: &SampleSet, alpha: f64) -> Result<BiasField> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("bias update needs at least one sample"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let energies: Vec<f64> = samples.energies().collect();
    bias_update_ranked(samples, alpha, &energies)
}

/// [`bias_update`] with explicit ranking keys (one per record); used when
/// ranking by biased energy.
fn bias_update_ranked(samples: &SampleSet, alpha: f64, keys: &[f64]) -> Result<BiasField> {
    let count = (alpha * samples.len() as f64).ceil() as usize;
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    // Stable sort keeps record order among ties.
    idx.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    let selected = &idx[..count.min(idx.len())];

    let n = samples.records[0].assignment.len();
    let mut sums = vec![0.0f64; n];
    for &i in selected {
        for (acc, &v) in sums.iter_mut().zip(samples.records[i].assignment.values()) {
            *acc += v as f64;
        }
    }
    let m = selected.len() as f64;
    BiasField::new(
        sums.into_iter()
            .map(|s| (-s / m).clamp(-1.0, 1.0))
            .collect(),
    )
}

/// Execute b bias-field iterations of R sweeps each. The bias field starts
/// at zero, so iteration 1 optimizes the unbiased model. Reads within an
/// iteration run in parallel with per-read derived seeds and merge in read
/// order, so results do not depend on scheduling.
pub fn run_bf_null(model: &PolynomialModel, config: &BfConfig) -> Result<BfRunResult> {
    config.validate()?;
    let start = Instant::now();
    let n = model.num_variables();
    let mut bias = BiasField::zeros(n);
    let mut per_iteration = Vec::with_capacity(config.iterations);

    for iteration in 1..=config.iterations {
        let biased = if bias.is_zero() {
            model.clone()
        } else {
            model.with_bias(&bias, config.gamma)?
        };

        let reads: Vec<(SpinAssignment, f64, f64)> = (0..config.reads)
            .into_par_iter()
            .map(|read| {
                let stream_id = ((iteration as u64) << 32) | read as u64;
                let mut r = rng::stream(config.seed, stream_id);
                let s0 = SpinAssignment::new((0..n).map(|_| rng::spin(&mut r)).collect())
                    .expect("generated spins are +1/-1");
                let s = sweep_subsolve(&biased, &s0)?;
                let e_original = model.energy(&s)?;
                let e_biased = biased.energy(&s)?;
                Ok((s, e_original, e_biased))
            })
            .collect::<Result<_>>()?;

        let mut samples = SampleSet::new(
            reads
                .iter()
                .map(|(s, e, _)| SampleRecord {
                    assignment: s.clone(),
                    energy: *e,
                    block_id: 0,
                })
                .collect(),
        );
        let rank_by = if config.rank_by_biased {
            "biased"
        } else {
            "original"
        };
        for (key, value) in [
            ("solver", "bf-null".to_string()),
            ("seed", config.seed.to_string()),
            ("iteration", iteration.to_string()),
            ("iterations", config.iterations.to_string()),
            ("reads", config.reads.to_string()),
            ("alpha", config.alpha.to_string()),
            ("gamma", config.gamma.to_string()),
            ("rank_by", rank_by.to_string()),
        ] {
            samples.metadata.insert(key.to_string(), value);
        }

        let keys: Vec<f64> = if config.rank_by_biased {
            reads.iter().map(|(_, _, eb)| *eb).collect()
        } else {
            reads.iter().map(|(_, e, _)| *e).collect()
        };
        bias = bias_update_ranked(&samples, config.alpha, &keys)?;
        per_iteration.push(samples);
    }

    Ok(BfRunResult {
        per_iteration,
        final_bias: bias,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn assignment(values: &[i8]) -> SpinAssignment {
        SpinAssignment::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sweep_takes_single_improving_flip() {
        let m = PolynomialModel::new(1, [(0, 1.0)], [], []).unwrap();
        let out = sweep_subsolve(&m, &assignment(&[1])).unwrap();
        assert_eq!(out.values(), &[-1]);
    }

    #[test]
    fn sweep_never_flips_on_ties() {
        let m = PolynomialModel::new(4, [], [], []).unwrap();
        let s0 = assignment(&[1, -1, 1, -1]);
        assert_eq!(sweep_subsolve(&m, &s0).unwrap(), s0);
    }

    #[test]
    fn sweep_counts_n_plus_one_candidates() {
        let m = generators::gen_clique_ising(9, 4).unwrap();
        let s0 = assignment(&[1, 1, 1, -1, -1, -1, 1, -1, 1]);
        let (_, considered) = sweep_subsolve_counted(&m, &s0).unwrap();
        assert_eq!(considered, 10);
    }

    /// Independent straightforward sweep: recomputes the full energy of
    /// both candidate states at every step.
    fn naive_sweep(model: &PolynomialModel, s0: &SpinAssignment) -> SpinAssignment {
        let mut s = s0.clone();
        for k in 0..model.num_variables() {
            let before = model.energy(&s).unwrap();
            let mut flipped = s.clone();
            flipped.flip(k);
            let after = model.energy(&flipped).unwrap();
            if after < before {
                s = flipped;
            }
        }
        s
    }

    #[test]
    fn sweep_matches_naive_reimplementation() {
        for trial in 0..40 {
            let mut r = crate::rng::stream(606, trial);
            let m = generators::random_mixed_model(10, 16, 6, &mut r).unwrap();
            let s0 =
                SpinAssignment::new((0..10).map(|_| crate::rng::spin(&mut r)).collect()).unwrap();
            let fast = sweep_subsolve(&m, &s0).unwrap();
            assert_eq!(fast, naive_sweep(&m, &s0), "trial {trial}");
            assert!(m.energy(&fast).unwrap() <= m.energy(&s0).unwrap() + 1e-12);
        }
    }

    #[test]
    fn sweep_flips_are_locally_justified() {
        // Replay the sweep: every accepted flip must have had a strictly
        // negative delta, so flipping it straight back would increase E'.
        let mut r = crate::rng::seeded(77);
        let m = generators::random_mixed_model(12, 20, 8, &mut r).unwrap();
        let mut s =
            SpinAssignment::new((0..12).map(|_| crate::rng::spin(&mut r)).collect()).unwrap();
        for k in 0..12 {
            let delta = m.flip_delta(&s, k).unwrap();
            if delta < 0.0 {
                s.flip(k);
                let back = m.flip_delta(&s, k).unwrap();
                assert!(back > 0.0, "flip of {k} not locally justified");
            }
        }
    }

    #[test]
    fn bias_update_unanimous_and_averaged() {
        let rec = |vals: &[i8], e: f64| SampleRecord {
            assignment: assignment(vals),
            energy: e,
            block_id: 0,
        };
        // All selected samples identical.
        let s = SampleSet::new(vec![rec(&[1, -1], -2.0), rec(&[1, -1], -2.0)]);
        assert_eq!(bias_update(&s, 0.9).unwrap().values(), &[-1.0, 1.0]);
        // Averaging two selected samples.
        let s = SampleSet::new(vec![rec(&[1, 1], -2.0), rec(&[-1, 1], -2.0)]);
        assert_eq!(bias_update(&s, 0.9).unwrap().values(), &[0.0, -1.0]);
    }

    #[test]
    fn bias_update_selection_size() {
        let cfg = BfConfig {
            iterations: 1,
            reads: 100,
            alpha: 0.02,
            gamma: 3.0,
            seed: 0,
            rank_by_biased: false,
        };
        assert_eq!(cfg.selection_size(), 2);
        // R=1 still selects one record.
        let cfg = BfConfig { reads: 1, ..cfg };
        assert_eq!(cfg.selection_size(), 1);
    }

    #[test]
    fn bias_update_rejects_empty_input() {
        assert!(matches!(
            bias_update(&SampleSet::default(), 0.5),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn config_validation() {
        let ok = BfConfig::clique_defaults(1);
        assert!(ok.validate().is_ok());
        assert!(BfConfig {
            alpha: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(BfConfig {
            alpha: 1.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(BfConfig {
            iterations: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(BfConfig { reads: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn run_is_deterministic_and_well_formed() {
        let m = generators::gen_clique_ising(10, 5).unwrap();
        let cfg = BfConfig {
            iterations: 3,
            reads: 50,
            alpha: 0.1,
            gamma: 3.0,
            seed: 42,
            rank_by_biased: false,
        };
        let a = run_bf_null(&m, &cfg).unwrap();
        let b = run_bf_null(&m, &cfg).unwrap();
        assert_eq!(a.per_iteration, b.per_iteration);
        assert_eq!(a.final_bias, b.final_bias);
        assert_eq!(a.per_iteration.len(), 3);
        assert!(a.per_iteration.iter().all(|s| s.len() == 50));
        // Stored energies always refer to the unbiased model.
        for set in &a.per_iteration {
            set.validate_energies(&m, 1e-9).unwrap();
        }
        // Bias components are means of +1/-1 values.
        assert!(a.final_bias.values().iter().all(|b| b.abs() <= 1.0));
    }

    #[test]
    fn biased_ranking_switch_changes_selection() {
        // Two records whose order differs between the unbiased energies
        // and an alternative key: the selected record drives the bias.
        let rec = |vals: &[i8], e: f64| SampleRecord {
            assignment: assignment(vals),
            energy: e,
            block_id: 0,
        };
        let samples = SampleSet::new(vec![rec(&[1, 1], -1.0), rec(&[-1, -1], -0.5)]);
        let by_original = bias_update_ranked(&samples, 0.4, &[-1.0, -0.5]).unwrap();
        let by_biased = bias_update_ranked(&samples, 0.4, &[0.0, -2.0]).unwrap();
        assert_eq!(by_original.values(), &[-1.0, -1.0]);
        assert_eq!(by_biased.values(), &[1.0, 1.0]);

        // The first iteration is independent of the switch (zero bias).
        let m = generators::gen_clique_ising(6, 31).unwrap();
        let base = BfConfig {
            iterations: 1,
            reads: 30,
            alpha: 0.1,
            gamma: 3.0,
            seed: 12,
            rank_by_biased: false,
        };
        let a = run_bf_null(&m, &base).unwrap();
        let b = run_bf_null(
            &m,
            &BfConfig {
                rank_by_biased: true,
                ..base
            },
        )
        .unwrap();
        assert_eq!(a.per_iteration[0].records, b.per_iteration[0].records);
    }

    #[test]
    fn first_iteration_matches_unbiased_sweeps() {
        let m = generators::gen_clique_ising(8, 21).unwrap();
        let cfg = BfConfig {
            iterations: 1,
            reads: 20,
            alpha: 0.1,
            gamma: 3.0,
            seed: 9,
            rank_by_biased: false,
        };
        let run = run_bf_null(&m, &cfg).unwrap();
        for (read, rec) in run.per_iteration[0].records.iter().enumerate() {
            let mut r = crate::rng::stream(9, (1u64 << 32) | read as u64);
            let s0 =
                SpinAssignment::new((0..8).map(|_| crate::rng::spin(&mut r)).collect()).unwrap();
            let expect = sweep_subsolve(&m, &s0).unwrap();
            assert_eq!(rec.assignment, expect, "read {read}");
        }
    }
}
