//! Cubic-to-quadratic (hising to Ising) reduction with shared auxiliary
//! variables and penalty terms.
//!
//! The model is converted to 0/1 variables internally, where each cubic
//! monomial x_i x_j x_k is rewritten by substituting one constituent
//! pair's product with an auxiliary variable y = x_i x_j, constrained by
//! the standard product penalty 3y + x_i x_j - 2 x_i y - 2 x_j y (zero
//! exactly when y equals the product, at least one unit otherwise). The
//! result is converted back to +1/-1 form with the constant offset
//! tracked explicitly.
//!
//! The penalty argument is specified in spin-coefficient units. Cubic spin
//! coefficients scale by 8 under the 0/1 expansion, so the gadget strength
//! follows the same conversion; a reduction is then faithful whenever the
//! penalty exceeds the summed |K| routed through any one shared pair,
//! independent of representation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact;
use crate::model::{close_rel, PolynomialModel, SpinAssignment};

/// Guard for [`verify_reduction`], which enumerates all reduced assignments.
pub const VERIFY_GUARD: usize = 26;

/// A quadratized model plus the bookkeeping needed to interpret its
/// solutions in the original variable space.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionMap {
    pub original_n: usize,
    /// Cubic-free model over original variables 0..original_n followed by
    /// the auxiliaries.
    pub reduced_model: PolynomialModel,
    /// (auxiliary index, pair whose 0/1 product it represents): the
    /// auxiliary is +1 exactly when both pair spins are +1.
    pub aux_defs: Vec<(usize, (usize, usize))>,
    pub penalty: f64,
    /// energy(original, s) = energy(reduced, (s, aux)) + offset whenever
    /// every auxiliary is consistent with its defining pair.
    pub offset: f64,
}

/// 0/1 polynomial accumulator keyed by sorted index tuples.
#[derive(Default)]
struct Poly01 {
    constant: f64,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<[usize; 2], f64>,
    cubic: BTreeMap<[usize; 3], f64>,
}

impl Poly01 {
    fn add_linear(&mut self, i: usize, c: f64) {
        *self.linear.entry(i).or_insert(0.0) += c;
    }

    fn add_quadratic(&mut self, a: usize, b: usize, c: f64) {
        let key = [a.min(b), a.max(b)];
        *self.quadratic.entry(key).or_insert(0.0) += c;
    }

    /// Expansion of a spin model under s = 2x - 1.
    fn from_spin(model: &PolynomialModel) -> Self {
        let mut p = Poly01::default();
        for &(i, h) in model.linear_terms() {
            p.add_linear(i, 2.0 * h);
            p.constant -= h;
        }
        for &([i, j], c) in model.quadratic_terms() {
            p.add_quadratic(i, j, 4.0 * c);
            p.add_linear(i, -2.0 * c);
            p.add_linear(j, -2.0 * c);
            p.constant += c;
        }
        for &([i, j, k], c) in model.cubic_terms() {
            *p.cubic.entry([i, j, k]).or_insert(0.0) += 8.0 * c;
            p.add_quadratic(i, j, -4.0 * c);
            p.add_quadratic(i, k, -4.0 * c);
            p.add_quadratic(j, k, -4.0 * c);
            p.add_linear(i, 2.0 * c);
            p.add_linear(j, 2.0 * c);
            p.add_linear(k, 2.0 * c);
            p.constant -= c;
        }
        p
    }

    /// Conversion back to a spin model under x = (1 + s)/2; the residual
    /// constant is returned alongside.
    fn into_spin(self, num_variables: usize) -> (PolynomialModel, f64) {
        let mut constant = self.constant;
        let mut lin: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, c) in self.linear {
            *lin.entry(i).or_insert(0.0) += c / 2.0;
            constant += c / 2.0;
        }
        let mut quad: BTreeMap<[usize; 2], f64> = BTreeMap::new();
        for ([i, j], c) in self.quadratic {
            *quad.entry([i, j]).or_insert(0.0) += c / 4.0;
            *lin.entry(i).or_insert(0.0) += c / 4.0;
            *lin.entry(j).or_insert(0.0) += c / 4.0;
            constant += c / 4.0;
        }
        debug_assert!(self.cubic.is_empty(), "cubic terms must be substituted");
        let model = PolynomialModel::from_sorted_maps(num_variables, lin, quad, BTreeMap::new());
        (model, constant)
    }
}

/// Rewrite every cubic term using shared pair-product auxiliaries and
/// penalty gadgets. Introduces at most one new auxiliary per cubic term;
/// existing pair auxiliaries are reused (lexicographically smallest
/// first), otherwise the term's lexicographically smallest pair gets a
/// fresh auxiliary.
pub fn quadratize(model: &PolynomialModel, penalty: f64) -> Result<ReductionMap> {
    if !penalty.is_finite() || penalty <= 0.0 {
        return Err(Error::Parameter(format!(
            "penalty must be positive, got {penalty}"
        )));
    }
    let n = model.num_variables();
    let mut poly = Poly01::from_spin(model);

    let mut aux_by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let cubic = std::mem::take(&mut poly.cubic);
    for ([i, j, k], coeff) in cubic {
        let pairs = [(i, j), (i, k), (j, k)];
        let pair = pairs
            .iter()
            .copied()
            .find(|p| aux_by_pair.contains_key(p))
            .unwrap_or(pairs[0]);
        let next_index = n + aux_by_pair.len();
        let aux = *aux_by_pair.entry(pair).or_insert(next_index);
        let other = if pair == (i, j) {
            k
        } else if pair == (i, k) {
            j
        } else {
            i
        };
        poly.add_quadratic(aux, other, coeff);
    }

    // Product penalty per pair, scaled into the 0/1 domain.
    let strength = 8.0 * penalty;
    for (&(i, j), &aux) in &aux_by_pair {
        poly.add_linear(aux, 3.0 * strength);
        poly.add_quadratic(i, j, strength);
        poly.add_quadratic(i, aux, -2.0 * strength);
        poly.add_quadratic(j, aux, -2.0 * strength);
    }

    let total_n = n + aux_by_pair.len();
    let (reduced_model, offset) = poly.into_spin(total_n);
    let mut aux_defs: Vec<(usize, (usize, usize))> = aux_by_pair
        .into_iter()
        .map(|(pair, aux)| (aux, pair))
        .collect();
    aux_defs.sort_unstable();

    Ok(ReductionMap {
        original_n: n,
        reduced_model,
        aux_defs,
        penalty,
        offset,
    })
}

/// Restriction of a reduced-space assignment to the original variables,
/// plus a flag reporting whether every auxiliary equals its defining
/// product.
pub fn lift_solution(
    rmap: &ReductionMap,
    reduced_s: &SpinAssignment,
) -> Result<(SpinAssignment, bool)> {
    if reduced_s.len() != rmap.reduced_model.num_variables() {
        return Err(Error::LengthMismatch {
            expected: rmap.reduced_model.num_variables(),
            actual: reduced_s.len(),
        });
    }
    let original =
        SpinAssignment::new(reduced_s.values()[..rmap.original_n].to_vec()).expect("valid spins");
    let consistent = rmap.aux_defs.iter().all(|&(aux, (i, j))| {
        let expect = if reduced_s.get(i) == 1 && reduced_s.get(j) == 1 {
            1
        } else {
            -1
        };
        reduced_s.get(aux) == expect
    });
    Ok((original, consistent))
}

/// Outcome of the exhaustive reduction checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    /// Reduced ground energy (offset-corrected) equals the original one.
    pub ground_energy_match: bool,
    /// Every reduced ground state has consistent auxiliaries.
    pub ground_states_consistent: bool,
    /// For every original assignment, minimizing over auxiliaries
    /// reproduces the original energy (offset-corrected).
    pub conditional_minima_match: bool,
    pub first_failure: Option<String>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.ground_energy_match && self.ground_states_consistent && self.conditional_minima_match
    }
}

/// Exhaustively check a reduction by double brute force.
pub fn verify_reduction(model: &PolynomialModel, rmap: &ReductionMap) -> Result<ReductionReport> {
    let total_n = rmap.reduced_model.num_variables();
    if total_n > VERIFY_GUARD {
        return Err(Error::SizeGuard {
            n: total_n,
            limit: VERIFY_GUARD,
        });
    }
    if model.num_variables() != rmap.original_n {
        return Err(Error::LengthMismatch {
            expected: rmap.original_n,
            actual: model.num_variables(),
        });
    }
    let rtol = 1e-9;
    let mut report = ReductionReport {
        ground_energy_match: true,
        ground_states_consistent: true,
        conditional_minima_match: true,
        first_failure: None,
    };
    let fail = |report: &mut ReductionReport, message: String| {
        if report.first_failure.is_none() {
            report.first_failure = Some(message);
        }
    };

    let original_gs = exact::brute_force(model)?;
    let reduced_gs = exact::brute_force(&rmap.reduced_model)?;

    if !close_rel(reduced_gs.energy + rmap.offset, original_gs.energy, rtol) {
        report.ground_energy_match = false;
        fail(
            &mut report,
            format!(
                "reduced minimum {} + offset {} != original minimum {}",
                reduced_gs.energy, rmap.offset, original_gs.energy
            ),
        );
    }

    // Scan every reduced assignment: collect ground-state consistency and
    // per-original-assignment minima over the auxiliaries.
    let n = rmap.original_n;
    let num_aux = total_n - n;
    let gs_tol = rtol * reduced_gs.energy.abs().max(1.0);
    for orig_code in 0u64..(1u64 << n) {
        let mut values = vec![1i8; total_n];
        for (b, value) in values.iter_mut().enumerate().take(n) {
            if (orig_code >> b) & 1 == 1 {
                *value = -1;
            }
        }
        let mut s = SpinAssignment::new(values).expect("valid spins");
        let mut energy = rmap.reduced_model.energy(&s)?;
        let mut min_over_aux = energy;
        let check_state = |e: f64, s: &SpinAssignment, report: &mut ReductionReport| {
            if e <= reduced_gs.energy + gs_tol {
                let (_, consistent) = lift_solution(rmap, s).expect("length checked");
                if !consistent {
                    report.ground_states_consistent = false;
                    fail(
                        report,
                        format!(
                            "reduced ground state {} is aux-inconsistent",
                            s.to_sign_string()
                        ),
                    );
                }
            }
        };
        check_state(energy, &s, &mut report);
        for step in 1u64..(1u64 << num_aux) {
            let bit = step.trailing_zeros() as usize;
            let var = n + bit;
            energy += rmap.reduced_model.flip_delta(&s, var)?;
            s.flip(var);
            min_over_aux = min_over_aux.min(energy);
            check_state(energy, &s, &mut report);
        }

        let original_energy = {
            let os = SpinAssignment::new(s.values()[..n].to_vec()).expect("valid spins");
            model.energy(&os)?
        };
        if !close_rel(min_over_aux + rmap.offset, original_energy, 1e-7) {
            report.conditional_minima_match = false;
            fail(
                &mut report,
                format!(
                    "assignment code {orig_code}: min over aux {} + offset {} != original {}",
                    min_over_aux, rmap.offset, original_energy
                ),
            );
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rng;

    #[test]
    fn cubic_free_model_reduces_to_itself() {
        let m = PolynomialModel::new(3, [(0, 0.5), (2, -1.25)], [((0, 1), 2.0)], []).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        assert_eq!(rmap.reduced_model, m);
        assert!(rmap.aux_defs.is_empty());
        assert_eq!(rmap.offset, 0.0);
    }

    #[test]
    fn single_cubic_term_uses_one_auxiliary() {
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 1.0)]).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        assert_eq!(rmap.aux_defs, vec![(3, (0, 1))]);
        assert_eq!(rmap.reduced_model.num_variables(), 4);
        assert_eq!(rmap.reduced_model.num_cubic(), 0);
        assert!(verify_reduction(&m, &rmap).unwrap().passed());
    }

    #[test]
    fn auxiliaries_are_shared_across_terms_with_common_pair() {
        let m = PolynomialModel::new(4, [], [], [((0, 1, 2), 1.0), ((0, 1, 3), -0.5)]).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        assert_eq!(rmap.aux_defs, vec![(4, (0, 1))]);
    }

    #[test]
    fn pair_selection_is_lexicographic_with_reuse() {
        let m = PolynomialModel::new(
            4,
            [],
            [],
            [((0, 1, 2), 1.0), ((1, 2, 3), 1.0), ((0, 2, 3), 1.0)],
        )
        .unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        // Terms are processed in sorted triple order: (0,1,2) creates
        // (0,1); (0,2,3) finds no existing pair and creates (0,2);
        // (1,2,3) likewise creates (1,2).
        assert_eq!(rmap.aux_defs, vec![(4, (0, 1)), (5, (0, 2)), (6, (1, 2))]);
        // At most one new auxiliary per cubic term.
        assert!(rmap.aux_defs.len() <= m.num_cubic());
    }

    #[test]
    fn penalty_gadget_truth_table() {
        // Make the substituted term negligible so the reduced energy (plus
        // offset) exposes the bare penalty: zero exactly on consistent
        // states, and 8P or 24P (one or three AND-violation units) off
        // them.
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 1e-9)]).unwrap();
        let penalty = 1.0;
        let rmap = quadratize(&m, penalty).unwrap();
        let mut zeros = 0;
        let mut violations = Vec::new();
        for code in 0..16u8 {
            let spin = |b: u8| if (code >> b) & 1 == 1 { -1i8 } else { 1 };
            let s = SpinAssignment::new(vec![spin(0), spin(1), spin(2), spin(3)]).unwrap();
            let pen = rmap.reduced_model.energy(&s).unwrap() + rmap.offset;
            let consistent = (spin(3) == 1) == (spin(0) == 1 && spin(1) == 1);
            if consistent {
                assert!(pen.abs() < 1e-6, "state {code}: penalty {pen}");
                zeros += 1;
            } else {
                violations.push(pen);
            }
        }
        assert_eq!(zeros, 8);
        let min = violations.iter().copied().fold(f64::INFINITY, f64::min);
        let max = violations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!((min - 8.0 * penalty).abs() < 1e-6, "min violation {min}");
        assert!((max - 24.0 * penalty).abs() < 1e-6, "max violation {max}");
    }

    #[test]
    fn penalty_must_be_positive() {
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 1.0)]).unwrap();
        assert!(quadratize(&m, 0.0).is_err());
        assert!(quadratize(&m, -1.0).is_err());
    }

    #[test]
    fn offset_correct_for_consistent_assignments() {
        let mut r = rng::seeded(71);
        let m = generators::random_mixed_model(6, 6, 4, &mut r).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        let n = m.num_variables();
        for code in 0u64..(1 << n) {
            let values: Vec<i8> = (0..n)
                .map(|b| if (code >> b) & 1 == 1 { -1 } else { 1 })
                .collect();
            let s = SpinAssignment::new(values.clone()).unwrap();
            // Extend with consistent auxiliaries.
            let mut full = values;
            for &(_, (i, j)) in &rmap.aux_defs {
                full.push(if full[i] == 1 && full[j] == 1 { 1 } else { -1 });
            }
            let fs = SpinAssignment::new(full).unwrap();
            let orig = m.energy(&s).unwrap();
            let red = rmap.reduced_model.energy(&fs).unwrap();
            assert!(
                close_rel(red + rmap.offset, orig, 1e-12),
                "code {code}: {} + {} vs {}",
                red,
                rmap.offset,
                orig
            );
        }
    }

    #[test]
    fn lift_is_identity_without_cubic_terms() {
        let m = PolynomialModel::new(2, [(0, 1.0)], [((0, 1), -1.0)], []).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        let s = SpinAssignment::new(vec![1, -1]).unwrap();
        let (lifted, consistent) = lift_solution(&rmap, &s).unwrap();
        assert_eq!(lifted, s);
        assert!(consistent);
    }

    #[test]
    fn lift_flags_violated_auxiliary() {
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 1.0)]).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        // s = (+1, +1, +1): the (0,1) product auxiliary must be +1.
        let bad = SpinAssignment::new(vec![1, 1, 1, -1]).unwrap();
        let (_, consistent) = lift_solution(&rmap, &bad).unwrap();
        assert!(!consistent);
        let good = SpinAssignment::new(vec![1, 1, 1, 1]).unwrap();
        assert!(lift_solution(&rmap, &good).unwrap().1);
    }

    #[test]
    fn reduced_ground_state_lifts_to_original_minimizer() {
        for trial in 0..15 {
            let mut r = rng::stream(909, trial);
            let m = generators::random_mixed_model(7, 5, 5, &mut r).unwrap();
            let rmap = quadratize(&m, 5.0).unwrap();
            let orig = exact::brute_force(&m).unwrap();
            let red = exact::brute_force(&rmap.reduced_model).unwrap();
            assert!(
                close_rel(red.energy + rmap.offset, orig.energy, 1e-9),
                "trial {trial}"
            );
            let (lifted, consistent) = lift_solution(&rmap, &red.assignment).unwrap();
            assert!(consistent, "trial {trial}: inconsistent reduced minimizer");
            assert!(
                close_rel(m.energy(&lifted).unwrap(), orig.energy, 1e-9),
                "trial {trial}: lifted state is not an original minimizer"
            );
        }
    }

    #[test]
    fn verify_passes_on_cubic_free_model() {
        let m = PolynomialModel::new(3, [(1, -0.5)], [((0, 2), 1.0)], []).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        assert!(verify_reduction(&m, &rmap).unwrap().passed());
    }

    #[test]
    fn weak_penalty_fails_verification() {
        // Adversarially large cubic coefficient against a tiny penalty: the
        // gadget is overpowered and the checks must say so.
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 10.0)]).unwrap();
        let rmap = quadratize(&m, 0.01).unwrap();
        let report = verify_reduction(&m, &rmap).unwrap();
        assert!(!report.ground_energy_match || !report.ground_states_consistent);
        assert!(!report.passed());
        assert!(report.first_failure.is_some());
    }

    #[test]
    fn verify_guard_rejects_large_inputs() {
        let m = generators::gen_clique_ising(27, 1).unwrap();
        let rmap = quadratize(&m, 5.0).unwrap();
        assert!(matches!(
            verify_reduction(&m, &rmap),
            Err(Error::SizeGuard { .. })
        ));
    }
}
