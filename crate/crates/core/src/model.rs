//! Spin Hamiltonians with linear, quadratic and cubic terms, spin
//! assignments, and sample collections.
//!
//! A [`PolynomialModel`] is immutable after construction: term keys are
//! canonicalized to strictly increasing index tuples, exact-zero
//! coefficients are dropped, terms are stored in sorted key order (so
//! energy sums are bit-reproducible), and a variable-to-term adjacency
//! index is built once for O(degree) single-flip deltas.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Energy of an assignment split by interaction degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub linear: f64,
    pub quadratic: f64,
    pub cubic: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.linear + self.quadratic + self.cubic
    }
}

/// Per-variable index of incident terms (positions into the term vectors).
#[derive(Debug, Clone, Default)]
struct Adjacency {
    linear: Option<usize>,
    quadratic: Vec<usize>,
    cubic: Vec<usize>,
}

/// A spin Hamiltonian E(s) = sum h_i s_i + sum J_ij s_i s_j + sum K_ijk s_i s_j s_k.
#[derive(Debug, Clone)]
pub struct PolynomialModel {
    num_variables: usize,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<([usize; 2], f64)>,
    cubic: Vec<([usize; 3], f64)>,
    adjacency: Vec<Adjacency>,
}

impl PartialEq for PolynomialModel {
    fn eq(&self, other: &Self) -> bool {
        self.num_variables == other.num_variables
            && self.linear == other.linear
            && self.quadratic == other.quadratic
            && self.cubic == other.cubic
    }
}

impl PolynomialModel {
    /// Build a model from term lists. Keys are canonicalized to ascending
    /// index order; duplicate keys (after canonicalization) and repeated
    /// indices within a key are rejected; exact-zero coefficients are
    /// dropped.
    pub fn new(
        num_variables: usize,
        linear: impl IntoIterator<Item = (usize, f64)>,
        quadratic: impl IntoIterator<Item = ((usize, usize), f64)>,
        cubic: impl IntoIterator<Item = ((usize, usize, usize), f64)>,
    ) -> Result<Self> {
        let n = num_variables;
        let check = |i: usize| -> Result<()> {
            if i >= n {
                Err(Error::IndexOutOfRange { index: i, n })
            } else {
                Ok(())
            }
        };

        let mut lin: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, h) in linear {
            check(i)?;
            if lin.insert(i, h).is_some() {
                return Err(Error::DuplicateTerm {
                    kind: "linear",
                    key: format!("{i}"),
                });
            }
        }

        let mut quad: BTreeMap<[usize; 2], f64> = BTreeMap::new();
        for ((a, b), j) in quadratic {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::DegenerateKey {
                    key: format!("({a}, {b})"),
                });
            }
            let key = if a < b { [a, b] } else { [b, a] };
            if quad.insert(key, j).is_some() {
                return Err(Error::DuplicateTerm {
                    kind: "quadratic",
                    key: format!("({}, {})", key[0], key[1]),
                });
            }
        }

        let mut cub: BTreeMap<[usize; 3], f64> = BTreeMap::new();
        for ((a, b, c), k) in cubic {
            check(a)?;
            check(b)?;
            check(c)?;
            let mut key = [a, b, c];
            key.sort_unstable();
            if key[0] == key[1] || key[1] == key[2] {
                return Err(Error::DegenerateKey {
                    key: format!("({a}, {b}, {c})"),
                });
            }
            if cub.insert(key, k).is_some() {
                return Err(Error::DuplicateTerm {
                    kind: "cubic",
                    key: format!("({}, {}, {})", key[0], key[1], key[2]),
                });
            }
        }

        Ok(Self::from_sorted_maps(n, lin, quad, cub))
    }

    /// Internal constructor for already-canonical maps (BTreeMap iteration
    /// is sorted, which fixes the summation order).
    pub(crate) fn from_sorted_maps(
        n: usize,
        lin: BTreeMap<usize, f64>,
        quad: BTreeMap<[usize; 2], f64>,
        cub: BTreeMap<[usize; 3], f64>,
    ) -> Self {
        let linear: Vec<(usize, f64)> = lin.into_iter().filter(|&(_, h)| h != 0.0).collect();
        let quadratic: Vec<([usize; 2], f64)> =
            quad.into_iter().filter(|&(_, j)| j != 0.0).collect();
        let cubic: Vec<([usize; 3], f64)> = cub.into_iter().filter(|&(_, k)| k != 0.0).collect();

        let mut adjacency = vec![Adjacency::default(); n];
        for (pos, &(i, _)) in linear.iter().enumerate() {
            adjacency[i].linear = Some(pos);
        }
        for (pos, &(key, _)) in quadratic.iter().enumerate() {
            for &i in &key {
                adjacency[i].quadratic.push(pos);
            }
        }
        for (pos, &(key, _)) in cubic.iter().enumerate() {
            for &i in &key {
                adjacency[i].cubic.push(pos);
            }
        }

        Self {
            num_variables: n,
            linear,
            quadratic,
            cubic,
            adjacency,
        }
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_linear(&self) -> usize {
        self.linear.len()
    }

    pub fn num_quadratic(&self) -> usize {
        self.quadratic.len()
    }

    pub fn num_cubic(&self) -> usize {
        self.cubic.len()
    }

    pub fn linear_terms(&self) -> &[(usize, f64)] {
        &self.linear
    }

    pub fn quadratic_terms(&self) -> &[([usize; 2], f64)] {
        &self.quadratic
    }

    pub fn cubic_terms(&self) -> &[([usize; 3], f64)] {
        &self.cubic
    }

    fn check_len(&self, s: &SpinAssignment) -> Result<()> {
        if s.len() != self.num_variables {
            return Err(Error::LengthMismatch {
                expected: self.num_variables,
                actual: s.len(),
            });
        }
        Ok(())
    }

    /// Total energy of `s`, summed in sorted term-key order.
    pub fn energy(&self, s: &SpinAssignment) -> Result<f64> {
        Ok(self.energy_parts(s)?.total())
    }

    /// Energy contributions split by term degree.
    pub fn energy_parts(&self, s: &SpinAssignment) -> Result<EnergyParts> {
        self.check_len(s)?;
        let v = s.values();
        let linear = self
            .linear
            .iter()
            .map(|&(i, h)| h * v[i] as f64)
            .sum::<f64>();
        let quadratic = self
            .quadratic
            .iter()
            .map(|&([i, j], c)| c * (v[i] * v[j]) as f64)
            .sum::<f64>();
        let cubic = self
            .cubic
            .iter()
            .map(|&([i, j, k], c)| c * (v[i] * v[j] * v[k]) as f64)
            .sum::<f64>();
        Ok(EnergyParts {
            linear,
            quadratic,
            cubic,
        })
    }

    /// Energy change from flipping variable `k` in `s`, touching only the
    /// terms incident to `k`.
    pub fn flip_delta(&self, s: &SpinAssignment, k: usize) -> Result<f64> {
        self.check_len(s)?;
        if k >= self.num_variables {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: self.num_variables,
            });
        }
        let v = s.values();
        let adj = &self.adjacency[k];
        // Flipping s_k negates every incident term: delta = -2 * (their sum).
        let mut incident = 0.0;
        if let Some(pos) = adj.linear {
            let (_, h) = self.linear[pos];
            incident += h * v[k] as f64;
        }
        for &pos in &adj.quadratic {
            let ([i, j], c) = self.quadratic[pos];
            incident += c * (v[i] * v[j]) as f64;
        }
        for &pos in &adj.cubic {
            let ([i, j, l], c) = self.cubic[pos];
            incident += c * (v[i] * v[j] * v[l]) as f64;
        }
        Ok(-2.0 * incident)
    }

    /// A copy of this model with linear terms h'_i = h_i + gamma * B_i.
    pub fn with_bias(&self, bias: &BiasField, gamma: f64) -> Result<PolynomialModel> {
        if bias.len() != self.num_variables {
            return Err(Error::LengthMismatch {
                expected: self.num_variables,
                actual: bias.len(),
            });
        }
        let mut lin: BTreeMap<usize, f64> = self.linear.iter().copied().collect();
        for (i, &b) in bias.values().iter().enumerate() {
            if b != 0.0 && gamma != 0.0 {
                *lin.entry(i).or_insert(0.0) += gamma * b;
            }
        }
        let quad: BTreeMap<[usize; 2], f64> = self.quadratic.iter().copied().collect();
        let cub: BTreeMap<[usize; 3], f64> = self.cubic.iter().copied().collect();
        Ok(Self::from_sorted_maps(self.num_variables, lin, quad, cub))
    }
}

/// A full assignment of +1/-1 values to the model's variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinAssignment {
    values: Vec<i8>,
}

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::Parameter(format!(
                "spin value must be +1 or -1, got {bad}"
            )));
        }
        Ok(Self { values })
    }

    /// All-(+1) assignment of length `n`.
    pub fn all_up(n: usize) -> Self {
        Self { values: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, i: usize) -> i8 {
        self.values[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.values[i] = -self.values[i];
    }

    /// Global spin flip s -> -s.
    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Encoding used by sample files: one '+' or '-' per variable.
    pub fn to_sign_string(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v == 1 { '+' } else { '-' })
            .collect()
    }

    pub fn from_sign_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parameter(format!(
                    "invalid spin character {other:?}, expected '+' or '-'"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(Self { values })
    }
}

/// Per-variable bias vector added to the linear terms each BF iteration.
/// Components are means of +1/-1 samples (negated), so they lie in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BiasField {
    values: Vec<f64>,
}

impl BiasField {
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || v.abs() > 1.0) {
            return Err(Error::Parameter(format!(
                "bias component {bad} outside [-1, 1]"
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// One sampled solution: the assignment, its energy under the unbiased
/// model, and a block id for best-of-block aggregation (0 when ungrouped).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub assignment: SpinAssignment,
    pub energy: f64,
    pub block_id: usize,
}

/// An ordered collection of sample records with run metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
    pub metadata: BTreeMap<String, String>,
}

impl SampleSet {
    pub fn new(records: Vec<SampleRecord>) -> Self {
        Self {
            records,
            metadata: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.energy)
    }

    /// Lowest-energy record (first among ties), if any.
    pub fn best(&self) -> Option<&SampleRecord> {
        self.records
            .iter()
            .min_by(|a, b| a.energy.total_cmp(&b.energy))
    }

    /// Check that every stored energy matches a recomputation under `model`
    /// within relative tolerance `rtol`.
    pub fn validate_energies(&self, model: &PolynomialModel, rtol: f64) -> Result<()> {
        for (row, rec) in self.records.iter().enumerate() {
            let e = model.energy(&rec.assignment)?;
            if !close_rel(e, rec.energy, rtol) {
                return Err(Error::Parameter(format!(
                    "record {row}: stored energy {} differs from recomputed {}",
                    rec.energy, e
                )));
            }
        }
        Ok(())
    }
}

/// Relative closeness: |a - b| <= rtol * max(|a|, |b|), with exact equality
/// accepted (covers 0 == 0).
pub fn close_rel(a: f64, b: f64, rtol: f64) -> bool {
    a == b || (a - b).abs() <= rtol * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::rng;

    fn assignment(values: &[i8]) -> SpinAssignment {
        SpinAssignment::new(values.to_vec()).unwrap()
    }

    #[test]
    fn empty_model_has_zero_energy() {
        let m = PolynomialModel::new(3, [], [], []).unwrap();
        let s = assignment(&[1, -1, 1]);
        assert_eq!(m.energy(&s).unwrap(), 0.0);
        // Degenerate N=0 input is accepted.
        let m0 = PolynomialModel::new(0, [], [], []).unwrap();
        assert_eq!(m0.energy(&assignment(&[])).unwrap(), 0.0);
    }

    #[test]
    fn single_linear_term() {
        let m = PolynomialModel::new(1, [(0, 1.0)], [], []).unwrap();
        assert_eq!(m.energy(&assignment(&[1])).unwrap(), 1.0);
        assert_eq!(m.energy(&assignment(&[-1])).unwrap(), -1.0);
    }

    #[test]
    fn cubic_term_direct_product() {
        // K_{012} = 2 at s = (+1, -1, +1) gives -2; cross-checked against
        // brute force over all 8 assignments.
        let m = PolynomialModel::new(3, [], [], [((0, 1, 2), 2.0)]).unwrap();
        let s = assignment(&[1, -1, 1]);
        assert_eq!(m.energy(&s).unwrap(), -2.0);
        let gs = exact::brute_force(&m).unwrap();
        assert_eq!(gs.energy, -2.0);
    }

    #[test]
    fn energy_rejects_length_mismatch() {
        let m = PolynomialModel::new(2, [(0, 1.0)], [], []).unwrap();
        assert!(matches!(
            m.energy(&assignment(&[1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_keys() {
        assert!(matches!(
            PolynomialModel::new(2, [(2, 1.0)], [], []),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            PolynomialModel::new(3, [], [((1, 1), 1.0)], []),
            Err(Error::DegenerateKey { .. })
        ));
        // (1, 0) canonicalizes to (0, 1) and collides.
        assert!(matches!(
            PolynomialModel::new(3, [], [((0, 1), 1.0), ((1, 0), 2.0)], []),
            Err(Error::DuplicateTerm { .. })
        ));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let m = PolynomialModel::new(3, [(0, 0.0), (1, 2.0)], [((0, 2), 0.0)], []).unwrap();
        assert_eq!(m.num_linear(), 1);
        assert_eq!(m.num_quadratic(), 0);
    }

    #[test]
    fn flip_delta_single_linear() {
        let m = PolynomialModel::new(1, [(0, 1.0)], [], []).unwrap();
        assert_eq!(m.flip_delta(&assignment(&[1]), 0).unwrap(), -2.0);
    }

    #[test]
    fn flip_delta_isolated_variable() {
        let m = PolynomialModel::new(3, [(0, 1.0)], [((0, 1), 0.5)], []).unwrap();
        assert_eq!(m.flip_delta(&assignment(&[1, 1, 1]), 2).unwrap(), 0.0);
    }

    #[test]
    fn flip_delta_bounds_error() {
        let m = PolynomialModel::new(2, [], [], []).unwrap();
        assert!(matches!(
            m.flip_delta(&assignment(&[1, 1]), 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn flip_delta_matches_full_reevaluation() {
        // Random N=8 model with all degrees, random assignments, all k.
        let mut r = rng::seeded(42);
        let m = crate::generators::random_mixed_model(8, 12, 6, &mut r).unwrap();
        for trial in 0..50 {
            let mut r2 = rng::stream(99, trial);
            let s = SpinAssignment::new((0..8).map(|_| rng::spin(&mut r2)).collect()).unwrap();
            for k in 0..8 {
                let mut flipped = s.clone();
                flipped.flip(k);
                let direct = m.energy(&flipped).unwrap() - m.energy(&s).unwrap();
                let fast = m.flip_delta(&s, k).unwrap();
                assert!(
                    (direct - fast).abs() <= 1e-12 * direct.abs().max(1.0),
                    "k={k} direct={direct} fast={fast}"
                );
            }
        }
    }

    #[test]
    fn with_bias_zero_is_identity() {
        let m = PolynomialModel::new(2, [(0, 1.0)], [((0, 1), -0.5)], []).unwrap();
        let b = BiasField::zeros(2);
        assert_eq!(m.with_bias(&b, 3.0).unwrap(), m);
    }

    #[test]
    fn with_bias_direct_arithmetic() {
        let m = PolynomialModel::new(2, [(0, 1.0)], [], []).unwrap();
        let b = BiasField::new(vec![-1.0, 0.5]).unwrap();
        let biased = m.with_bias(&b, 3.0).unwrap();
        assert_eq!(biased.linear_terms(), &[(0, -2.0), (1, 1.5)]);
    }

    #[test]
    fn with_bias_energy_identity() {
        let mut r = rng::seeded(7);
        let m = crate::generators::random_mixed_model(6, 8, 4, &mut r).unwrap();
        let b = BiasField::new(vec![0.25, -1.0, 0.0, 1.0, -0.5, 0.125]).unwrap();
        let gamma = 2.5;
        let biased = m.with_bias(&b, gamma).unwrap();
        for trial in 0..30 {
            let mut r2 = rng::stream(11, trial);
            let s = SpinAssignment::new((0..6).map(|_| rng::spin(&mut r2)).collect()).unwrap();
            let dot: f64 = b
                .values()
                .iter()
                .zip(s.values())
                .map(|(&bi, &si)| bi * si as f64)
                .sum();
            let expect = m.energy(&s).unwrap() + gamma * dot;
            let got = biased.energy(&s).unwrap();
            assert!((expect - got).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn global_flip_negates_odd_degrees() {
        let mut r = rng::seeded(3);
        let m = crate::generators::random_mixed_model(7, 10, 5, &mut r).unwrap();
        for trial in 0..20 {
            let mut r2 = rng::stream(23, trial);
            let s = SpinAssignment::new((0..7).map(|_| rng::spin(&mut r2)).collect()).unwrap();
            let p = m.energy_parts(&s).unwrap();
            let q = m.energy_parts(&s.negated()).unwrap();
            assert_eq!(p.linear, -q.linear);
            assert_eq!(p.cubic, -q.cubic);
            assert_eq!(p.quadratic, q.quadratic);
        }
    }

    #[test]
    fn spin_assignment_validation() {
        assert!(SpinAssignment::new(vec![1, -1, 1]).is_ok());
        assert!(SpinAssignment::new(vec![1, 0]).is_err());
        assert_eq!(
            SpinAssignment::from_sign_str("+-+").unwrap().values(),
            &[1, -1, 1]
        );
        assert!(SpinAssignment::from_sign_str("+x").is_err());
    }

    #[test]
    fn bias_field_bounds() {
        assert!(BiasField::new(vec![0.0, 1.0, -1.0]).is_ok());
        assert!(BiasField::new(vec![1.5]).is_err());
    }
}
