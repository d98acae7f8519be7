//! Seeded random instance generators: fully connected Ising cliques with
//! Gaussian weights, the heavy-hex lattice, and cubic hising models on
//! heavy-hex neighborhoods.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::PolynomialModel;
use crate::rng;

/// Nonzero standard-normal draw. Exact zeros would be dropped from the term
/// maps and change term counts, so they are redrawn (probability ~2^-53).
fn gaussian_coeff(r: &mut ChaCha8Rng) -> f64 {
    loop {
        let z = rng::standard_normal(r);
        if z != 0.0 {
            return z;
        }
    }
}

/// Fully connected Ising instance: all n linear and n(n-1)/2 quadratic
/// coefficients drawn i.i.d. standard normal. Deterministic per seed.
pub fn gen_clique_ising(n: usize, seed: u64) -> Result<PolynomialModel> {
    if n == 0 {
        return Err(Error::EmptyInput("clique instance needs n >= 1"));
    }
    let mut r = rng::seeded(seed);
    let mut lin = BTreeMap::new();
    for i in 0..n {
        lin.insert(i, gaussian_coeff(&mut r));
    }
    let mut quad = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            quad.insert([i, j], gaussian_coeff(&mut r));
        }
    }
    Ok(PolynomialModel::from_sorted_maps(
        n,
        lin,
        quad,
        BTreeMap::new(),
    ))
}

/// How a heavy-hex graph was laid out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeavyHexLayout {
    /// Generated from a grid of hexagonal unit cells.
    Cells { cells_x: usize, cells_y: usize },
    /// Loaded from an explicit edge list.
    Explicit,
}

/// Degree-<=3 lattice of hexagonal cells with one extra node on every
/// hexagon edge (the topology of large gate-model processors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyHexGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    layout: HeavyHexLayout,
}

impl HeavyHexGraph {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Edges as ordered pairs (i < j), sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn layout(&self) -> &HeavyHexLayout {
        &self.layout
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn validate(num_nodes: usize, edges: &[(usize, usize)]) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut degree = vec![0usize; num_nodes];
        for &(a, b) in edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    n: num_nodes,
                });
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Parameter(format!("duplicate edge ({a}, {b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(node) = degree.iter().position(|&d| d > 3) {
            return Err(Error::Parameter(format!(
                "node {node} has degree {} > 3",
                degree[node]
            )));
        }
        // Connectivity check via BFS from node 0.
        if num_nodes > 0 {
            let mut adj = vec![Vec::new(); num_nodes];
            for &(a, b) in edges {
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut visited = vec![false; num_nodes];
            let mut queue = std::collections::VecDeque::from([0usize]);
            visited[0] = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !visited[w] {
                        visited[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(node) = visited.iter().position(|&v| !v) {
                return Err(Error::Parameter(format!(
                    "graph is not connected: node {node} unreachable from 0"
                )));
            }
        }
        Ok(())
    }

    /// Load a graph from an edge-list file: one `i j` pair per line,
    /// 0-based indices, `#` comments and blank lines ignored.
    pub fn from_edge_list(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(&path.display().to_string(), e))?;
        Self::from_edge_list_str(&text, &path.display().to_string())
    }

    pub fn from_edge_list_str(text: &str, source: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_node = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| Error::parse(source, lineno + 1, "expected `i j` pair"))?
                    .parse::<usize>()
                    .map_err(|_| Error::parse(source, lineno + 1, "invalid node index"))
            };
            let a = parse(it.next())?;
            let b = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::parse(
                    source,
                    lineno + 1,
                    "trailing tokens after pair",
                ));
            }
            max_node = max_node.max(a).max(b);
            edges.push((a.min(b), a.max(b)));
        }
        if edges.is_empty() {
            return Err(Error::EmptyInput("edge list has no edges"));
        }
        let num_nodes = max_node + 1;
        Self::validate(num_nodes, &edges)?;
        edges.sort_unstable();
        Ok(Self {
            num_nodes,
            edges,
            layout: HeavyHexLayout::Explicit,
        })
    }

    /// Default parameterization: a 17 x 1 cell strip, the unique complete
    /// cell grid with exactly 156 nodes (node count 5xy + 4x + 4y - 1).
    pub fn default_156() -> Self {
        gen_heavy_hex(17, 1).expect("default layout parameters are valid")
    }
}

/// Heavy-hex lattice over a `cells_x` x `cells_y` grid of hexagonal cells:
/// the honeycomb lattice of cells with every honeycomb edge subdivided by
/// one extra degree-2 node.
///
/// Cells are laid out brick-wall style; corner nodes are numbered first
/// (row-major), then one subdivision node per honeycomb edge in sorted
/// edge order.
pub fn gen_heavy_hex(cells_x: usize, cells_y: usize) -> Result<HeavyHexGraph> {
    if cells_x == 0 || cells_y == 0 {
        return Err(Error::Parameter(
            "cells_x and cells_y must be >= 1".to_string(),
        ));
    }
    // Honeycomb corners on an integer grid, bricks of width 2 per cell.
    let mut corners: BTreeSet<(i64, i64)> = BTreeSet::new(); // (y, x)
    let mut hex_edges: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
    let mut add_edge = |a: (i64, i64), b: (i64, i64)| {
        hex_edges.insert((a.min(b), a.max(b)));
    };
    for r in 0..cells_y as i64 {
        for c in 0..cells_x as i64 {
            let x0 = 2 * c + (r % 2);
            let (top, bot) = (r, r + 1);
            for dx in 0..=2 {
                corners.insert((top, x0 + dx));
                corners.insert((bot, x0 + dx));
            }
            for dx in 0..2 {
                add_edge((top, x0 + dx), (top, x0 + dx + 1));
                add_edge((bot, x0 + dx), (bot, x0 + dx + 1));
            }
            add_edge((top, x0), (bot, x0));
            add_edge((top, x0 + 2), (bot, x0 + 2));
        }
    }

    let index: BTreeMap<(i64, i64), usize> = corners
        .iter()
        .enumerate()
        .map(|(i, &pos)| (pos, i))
        .collect();
    let mut indexed_edges: Vec<(usize, usize)> = hex_edges
        .iter()
        .map(|&(a, b)| {
            let (i, j) = (index[&a], index[&b]);
            (i.min(j), i.max(j))
        })
        .collect();
    indexed_edges.sort_unstable();

    let num_corners = corners.len();
    let num_nodes = num_corners + indexed_edges.len();
    let mut edges = Vec::with_capacity(2 * indexed_edges.len());
    for (t, &(a, b)) in indexed_edges.iter().enumerate() {
        let mid = num_corners + t;
        edges.push((a.min(mid), a.max(mid)));
        edges.push((b.min(mid), b.max(mid)));
    }
    edges.sort_unstable();
    HeavyHexGraph::validate(num_nodes, &edges)?;
    Ok(HeavyHexGraph {
        num_nodes,
        edges,
        layout: HeavyHexLayout::Cells { cells_x, cells_y },
    })
}

/// Every unordered set of three distinct nodes forming a simple path of
/// length 2, as ordered triples (i < j < k), each listed once.
pub fn enumerate_cubic_paths(g: &HeavyHexGraph) -> Vec<(usize, usize, usize)> {
    let adj = g.adjacency();
    let mut triples = BTreeSet::new();
    for (center, nbrs) in adj.iter().enumerate() {
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                let mut key = [u, center, w];
                key.sort_unstable();
                triples.insert((key[0], key[1], key[2]));
            }
        }
    }
    triples.into_iter().collect()
}

/// Cubic hising instance on a heavy-hex graph: one linear term per node,
/// one quadratic term per edge, one cubic term per 3-node chain, all
/// coefficients i.i.d. standard normal. Deterministic per seed.
pub fn gen_heavy_hex_hising(g: &HeavyHexGraph, seed: u64) -> Result<PolynomialModel> {
    let mut r = rng::seeded(seed);
    let n = g.num_nodes();
    let mut lin = BTreeMap::new();
    for i in 0..n {
        lin.insert(i, gaussian_coeff(&mut r));
    }
    let mut quad = BTreeMap::new();
    for &(a, b) in g.edges() {
        quad.insert([a, b], gaussian_coeff(&mut r));
    }
    let mut cub = BTreeMap::new();
    for (i, j, k) in enumerate_cubic_paths(g) {
        cub.insert([i, j, k], gaussian_coeff(&mut r));
    }
    Ok(PolynomialModel::from_sorted_maps(n, lin, quad, cub))
}

/// The two problem ensembles used throughout the suite.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleClass {
    CliqueIsing { n: usize },
    HeavyHexHising { graph: HeavyHexGraph },
}

impl EnsembleClass {
    pub fn tag(&self) -> &'static str {
        match self {
            EnsembleClass::CliqueIsing { .. } => "clique_ising",
            EnsembleClass::HeavyHexHising { .. } => "heavy_hex_hising",
        }
    }
}

/// A seeded ensemble: instance `i` uses derived seed `base_seed + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub class: EnsembleClass,
    pub count: usize,
    pub base_seed: u64,
}

impl EnsembleSpec {
    pub fn new(class: EnsembleClass, count: usize, base_seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parameter("ensemble count must be >= 1".to_string()));
        }
        Ok(Self {
            class,
            count,
            base_seed,
        })
    }

    pub fn instance_seed(&self, index: usize) -> u64 {
        self.base_seed.wrapping_add(index as u64)
    }

    pub fn instance(&self, index: usize) -> Result<PolynomialModel> {
        if index >= self.count {
            return Err(Error::IndexOutOfRange {
                index,
                n: self.count,
            });
        }
        let seed = self.instance_seed(index);
        match &self.class {
            EnsembleClass::CliqueIsing { n } => gen_clique_ising(*n, seed),
            EnsembleClass::HeavyHexHising { graph } => gen_heavy_hex_hising(graph, seed),
        }
    }

    pub fn instances(&self) -> impl Iterator<Item = Result<PolynomialModel>> + '_ {
        (0..self.count).map(|i| self.instance(i))
    }
}

/// Random model with the requested number of quadratic and cubic terms on
/// distinct random supports, Gaussian coefficients. Utility for oracle and
/// property tests that need mixed-degree inputs.
pub fn random_mixed_model(
    n: usize,
    num_quadratic: usize,
    num_cubic: usize,
    r: &mut ChaCha8Rng,
) -> Result<PolynomialModel> {
    use rand_chacha::rand_core::RngCore;
    if n == 0 {
        return Err(Error::EmptyInput("model needs n >= 1"));
    }
    let mut lin = BTreeMap::new();
    for i in 0..n {
        lin.insert(i, gaussian_coeff(r));
    }
    let mut quad = BTreeMap::new();
    let max_quad = n * (n.saturating_sub(1)) / 2;
    while quad.len() < num_quadratic.min(max_quad) {
        let a = (r.next_u64() % n as u64) as usize;
        let b = (r.next_u64() % n as u64) as usize;
        if a != b {
            let key = [a.min(b), a.max(b)];
            quad.entry(key).or_insert_with(|| gaussian_coeff(r));
        }
    }
    let mut cub = BTreeMap::new();
    let max_cub = if n >= 3 { n * (n - 1) * (n - 2) / 6 } else { 0 };
    while cub.len() < num_cubic.min(max_cub) {
        let a = (r.next_u64() % n as u64) as usize;
        let b = (r.next_u64() % n as u64) as usize;
        let c = (r.next_u64() % n as u64) as usize;
        if a != b && b != c && a != c {
            let mut key = [a, b, c];
            key.sort_unstable();
            cub.entry(key).or_insert_with(|| gaussian_coeff(r));
        }
    }
    Ok(PolynomialModel::from_sorted_maps(n, lin, quad, cub))
}
