//! Exact ground-state computation: exhaustive enumeration for small
//! problems, and variable elimination over a tree decomposition (bucket
//! elimination with min-marginalization) for large sparse ones.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{close_rel, PolynomialModel, SpinAssignment};

/// Largest N accepted by [`brute_force`].
pub const BRUTE_FORCE_GUARD: usize = 30;
/// Largest induced width accepted by [`elimination_solve`]; 2^(width+1)
/// table entries must fit in memory.
pub const WIDTH_GUARD: usize = 28;

/// Relative tolerance for flagging degenerate minima.
const DEGENERACY_RTOL: f64 = 1e-12;

/// A minimum-energy assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub assignment: SpinAssignment,
    /// Another assignment attains the minimum within tolerance. Cheap
    /// detection, not an exhaustive count.
    pub degenerate: bool,
}

/// An elimination order together with the induced width it realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    pub induced_width: usize,
}

/// Exhaustive minimization over all 2^N assignments via a Gray-code walk
/// with incremental energy updates. Returns the lexicographically smallest
/// minimizing assignment (with -1 ordered before +1).
pub fn brute_force(model: &PolynomialModel) -> Result<GroundState> {
    let n = model.num_variables();
    if n > BRUTE_FORCE_GUARD {
        return Err(Error::SizeGuard {
            n,
            limit: BRUTE_FORCE_GUARD,
        });
    }
    let mut s = SpinAssignment::all_up(n);
    let mut energy = model.energy(&s)?;
    let mut best = energy;
    let mut best_assignment = s.clone();
    let mut degenerate = false;

    let consider = |e: f64,
                    s: &SpinAssignment,
                    best: &mut f64,
                    best_s: &mut SpinAssignment,
                    degenerate: &mut bool| {
        let tol = DEGENERACY_RTOL * best.abs().max(1.0);
        if e < *best - tol {
            *best = e;
            *best_s = s.clone();
            *degenerate = false;
        } else if e < *best {
            // New minimum, but the previous one ties within tolerance.
            *best = e;
            *best_s = s.clone();
            *degenerate = true;
        } else if e - *best <= tol {
            *degenerate = true;
            if e <= *best && s < best_s {
                *best_s = s.clone();
            }
        }
    };

    for step in 1u64..(1u64 << n) {
        let k = step.trailing_zeros() as usize; // bit flipped by the Gray walk
        energy += model.flip_delta(&s, k)?;
        s.flip(k);
        consider(energy, &s, &mut best, &mut best_assignment, &mut degenerate);
    }

    // Report the deterministically summed energy of the winner, not the
    // incrementally accumulated one.
    let exact_energy = model.energy(&best_assignment)?;
    Ok(GroundState {
        energy: exact_energy,
        assignment: best_assignment,
        degenerate,
    })
}

/// Adjacency sets of the interaction graph: quadratic terms contribute
/// edges, cubic terms contribute triangles.
fn interaction_adjacency(model: &PolynomialModel) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); model.num_variables()];
    for &([i, j], _) in model.quadratic_terms() {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    for &([i, j, k], _) in model.cubic_terms() {
        for (a, b) in [(i, j), (i, k), (j, k)] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj
}

/// Greedy min-fill elimination order with ties broken by lowest variable
/// index. Reports the induced width encountered while simulating the
/// elimination.
pub fn min_fill_order(model: &PolynomialModel) -> EliminationOrder {
    let n = model.num_variables();
    let mut adj = interaction_adjacency(model);
    let mut active: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    let mut width = 0usize;

    while !active.is_empty() {
        let mut chosen = None;
        for &v in &active {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0usize;
            for (a, &x) in nbrs.iter().enumerate() {
                for &y in &nbrs[a + 1..] {
                    if !adj[x].contains(&y) {
                        fill += 1;
                    }
                }
            }
            // BTreeSet iteration is ascending, so strict < keeps the lowest
            // index among equal fill counts.
            if chosen.is_none_or(|(best_fill, _)| fill < best_fill) {
                chosen = Some((fill, v));
            }
        }
        let (_, v) = chosen.expect("active set nonempty");
        width = width.max(adj[v].len());
        eliminate_node(&mut adj, v);
        active.remove(&v);
        order.push(v);
    }

    EliminationOrder {
        order,
        induced_width: width,
    }
}

/// Wrap an arbitrary permutation as an elimination order, computing the
/// induced width it realizes.
pub fn order_from_permutation(model: &PolynomialModel, perm: &[usize]) -> Result<EliminationOrder> {
    let n = model.num_variables();
    validate_permutation(perm, n)?;
    let mut adj = interaction_adjacency(model);
    let mut width = 0usize;
    for &v in perm {
        width = width.max(adj[v].len());
        eliminate_node(&mut adj, v);
    }
    Ok(EliminationOrder {
        order: perm.to_vec(),
        induced_width: width,
    })
}

fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
        if seen[v] {
            return Err(Error::Parameter(format!(
                "elimination order repeats variable {v}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Connect v's neighbors into a clique and remove v.
fn eliminate_node(adj: &mut [BTreeSet<usize>], v: usize) {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    for (a, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[a + 1..] {
            adj[x].insert(y);
            adj[y].insert(x);
        }
    }
    for &x in &nbrs {
        adj[x].remove(&v);
    }
    adj[v].clear();
}

/// Min-sum factor over a sorted variable scope. Table index bit j set
/// means scope[j] = -1; bit clear means +1.
struct Factor {
    vars: Vec<usize>,
    table: Vec<f64>,
}

impl Factor {
    fn from_term(vars: Vec<usize>, coeff: f64) -> Self {
        let k = vars.len();
        let mut table = vec![0.0; 1 << k];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut prod = 1.0;
            for j in 0..k {
                if (idx >> j) & 1 == 1 {
                    prod = -prod;
                }
            }
            *slot = coeff * prod;
        }
        Self { vars, table }
    }
}

struct EliminationStep {
    var: usize,
    scope_after: Vec<usize>,
    /// Minimizing spin of `var` per configuration of `scope_after`:
    /// 0 means +1, 1 means -1. Ties prefer +1.
    argmin: Vec<u8>,
}

/// Exact minimization by bucket elimination along `order`. Linear,
/// quadratic and cubic terms enter as factors directly (no quadratization).
/// The assignment is recovered by back-substitution, resolving argmin ties
/// toward +1; variables with no incident terms default to +1.
pub fn elimination_solve(model: &PolynomialModel, order: &EliminationOrder) -> Result<GroundState> {
    let n = model.num_variables();
    validate_permutation(&order.order, n)?;
    if order.induced_width > WIDTH_GUARD {
        return Err(Error::WidthGuard {
            width: order.induced_width,
            limit: WIDTH_GUARD,
        });
    }

    let mut rank = vec![0usize; n];
    for (r, &v) in order.order.iter().enumerate() {
        rank[v] = r;
    }

    let mut buckets: Vec<Vec<Factor>> = (0..n).map(|_| Vec::new()).collect();
    let place = |f: Factor, buckets: &mut Vec<Vec<Factor>>| {
        let r = f
            .vars
            .iter()
            .map(|&v| rank[v])
            .min()
            .expect("nonempty scope");
        buckets[r].push(f);
    };
    for &(i, h) in model.linear_terms() {
        place(Factor::from_term(vec![i], h), &mut buckets);
    }
    for &([i, j], c) in model.quadratic_terms() {
        place(Factor::from_term(vec![i, j], c), &mut buckets);
    }
    for &([i, j, k], c) in model.cubic_terms() {
        place(Factor::from_term(vec![i, j, k], c), &mut buckets);
    }

    let mut total = 0.0f64;
    let mut steps: Vec<Option<EliminationStep>> = (0..n).map(|_| None).collect();
    let mut degenerate = false;

    for r in 0..n {
        let bucket = std::mem::take(&mut buckets[r]);
        let v = order.order[r];
        if bucket.is_empty() {
            // No incident terms reach this variable: it is free, hence the
            // minimum is degenerate.
            degenerate = true;
            continue;
        }
        let combined = combine(&bucket);
        let (message, argmin, tie) = minimize_out(&combined, v);
        if message.vars.is_empty() {
            total += message.table[0];
            if tie {
                degenerate = true;
            }
            steps[r] = Some(EliminationStep {
                var: v,
                scope_after: Vec::new(),
                argmin,
            });
        } else {
            steps[r] = Some(EliminationStep {
                var: v,
                scope_after: message.vars.clone(),
                argmin,
            });
            place(message, &mut buckets);
        }
    }

    // Back-substitution in reverse elimination order. Every variable in a
    // step's remaining scope is eliminated later, so it is already assigned.
    let mut values = vec![1i8; n];
    for r in (0..n).rev() {
        let Some(step) = &steps[r] else { continue };
        let mut idx = 0usize;
        for (j, &w) in step.scope_after.iter().enumerate() {
            if values[w] == -1 {
                idx |= 1 << j;
            }
        }
        values[step.var] = if step.argmin[idx] == 0 { 1 } else { -1 };
    }

    let assignment = SpinAssignment::new(values).expect("spins are +1/-1");
    let energy = model.energy(&assignment)?;
    debug_assert!(
        close_rel(total, energy, 1e-6),
        "eliminated total {total} vs recomputed {energy}"
    );
    Ok(GroundState {
        energy,
        assignment,
        degenerate,
    })
}

/// Min-fill ordering followed by elimination.
pub fn elimination_solve_default(model: &PolynomialModel) -> Result<GroundState> {
    elimination_solve(model, &min_fill_order(model))
}

fn combine(factors: &[Factor]) -> Factor {
    let mut scope = BTreeSet::new();
    for f in factors {
        scope.extend(f.vars.iter().copied());
    }
    let vars: Vec<usize> = scope.into_iter().collect();
    let mut table = vec![0.0f64; 1 << vars.len()];
    for f in factors {
        // Position of each factor variable inside the combined scope.
        let positions: Vec<usize> = f
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("scope contains factor vars"))
            .collect();
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut src = 0usize;
            for (j, &p) in positions.iter().enumerate() {
                src |= ((idx >> p) & 1) << j;
            }
            *slot += f.table[src];
        }
    }
    Factor { vars, table }
}

/// Minimize a factor over variable `v`, returning the message on the
/// remaining scope, the argmin table, and whether any entry tied (used for
/// degeneracy detection at root level).
fn minimize_out(f: &Factor, v: usize) -> (Factor, Vec<u8>, bool) {
    let p = f.vars.binary_search(&v).expect("factor contains v");
    let vars: Vec<usize> = f.vars.iter().copied().filter(|&w| w != v).collect();
    let reduced_len = 1usize << vars.len();
    let mut table = vec![0.0f64; reduced_len];
    let mut argmin = vec![0u8; reduced_len];
    let mut tie = false;
    let low_mask = (1usize << p) - 1;
    for idx in 0..reduced_len {
        let base = (idx & low_mask) | ((idx & !low_mask) << 1);
        let plus = f.table[base];
        let minus = f.table[base | (1 << p)];
        let tol = DEGENERACY_RTOL * plus.abs().max(minus.abs()).max(1.0);
        if (plus - minus).abs() <= tol {
            tie = true;
        }
        // Strict comparison keeps +1 on ties.
        if minus < plus {
            table[idx] = minus;
            argmin[idx] = 1;
        } else {
            table[idx] = plus;
            argmin[idx] = 0;
        }
    }
    (Factor { vars, table }, argmin, tie)
}
