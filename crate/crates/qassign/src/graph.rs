//! Weighted device connectivity graphs and simple-path qubit assignments.
//!
//! A [`NoiseGraph`] stores the hardware topology together with per-vertex
//! single-qubit error weights, per-edge two-qubit error weights, and
//! per-vertex readout flip rates. An [`Assignment`] is an ordered simple path
//! of physical qubits onto which a line-connectivity circuit is placed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Physical qubit identifier.
pub type QubitId = u32;

/// Unordered edge, stored as `(min, max)`.
pub type Edge = (QubitId, QubitId);

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(QubitId),
    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(QubitId, QubitId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(QubitId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(QubitId),
    #[error("probability {value} for {what} is outside [0, 1]")]
    InvalidWeight { what: &'static str, value: f64 },
    #[error("assignment is not a valid simple path: {0}")]
    InvalidAssignment(String),
    #[error("neighborhood is empty")]
    EmptyNeighborhood,
    #[error("graphs larger than 128 vertices are not supported for path enumeration")]
    TooManyVertices,
    #[error("more than {cap} assignments; refusing to enumerate")]
    PopulationCap { cap: usize },
    #[error("layout i/o: {0}")]
    Io(String),
    #[error("layout parse: {0}")]
    Parse(String),
}

fn norm_edge(a: QubitId, b: QubitId) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_prob(what: &'static str, value: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(GraphError::InvalidWeight { what, value });
    }
    Ok(())
}

/// Device connectivity with error weights.
///
/// Immutable once built; all query methods take `&self`.
#[derive(Debug, Clone, Default)]
pub struct NoiseGraph {
    vertices: BTreeSet<QubitId>,
    coords: BTreeMap<QubitId, (i32, i32)>,
    edges: BTreeSet<Edge>,
    eps: BTreeMap<QubitId, f64>,
    eta: BTreeMap<Edge, f64>,
    readout: BTreeMap<QubitId, (f64, f64)>,
    adjacency: BTreeMap<QubitId, Vec<QubitId>>,
}

impl NoiseGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a qubit with its single-qubit error weight and readout flip rates
    /// `(p10, p01)` = (p(1|0), p(0|1)).
    pub fn add_qubit(
        &mut self,
        id: QubitId,
        coord: Option<(i32, i32)>,
        eps: f64,
        readout: (f64, f64),
    ) -> Result<(), GraphError> {
        if self.vertices.contains(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        check_prob("eps", eps)?;
        check_prob("p10", readout.0)?;
        check_prob("p01", readout.1)?;
        self.vertices.insert(id);
        if let Some(c) = coord {
            self.coords.insert(id, c);
        }
        self.eps.insert(id, eps);
        self.readout.insert(id, readout);
        self.adjacency.insert(id, Vec::new());
        Ok(())
    }

    pub fn add_edge(&mut self, a: QubitId, b: QubitId, eta: f64) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for v in [a, b] {
            if !self.vertices.contains(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        check_prob("eta", eta)?;
        let e = norm_edge(a, b);
        if self.edges.insert(e) {
            self.adjacency.get_mut(&a).unwrap().push(b);
            self.adjacency.get_mut(&b).unwrap().push(a);
            self.adjacency.get_mut(&a).unwrap().sort_unstable();
            self.adjacency.get_mut(&b).unwrap().sort_unstable();
        }
        self.eta.insert(e, eta);
        Ok(())
    }

    /// Rectangular grid with uniform weights; ids are `row * cols + col`.
    pub fn grid(rows: usize, cols: usize, eps: f64, eta: f64, readout: (f64, f64)) -> Self {
        let mut g = Self::new();
        for r in 0..rows {
            for c in 0..cols {
                let id = (r * cols + c) as QubitId;
                g.add_qubit(id, Some((r as i32, c as i32)), eps, readout).unwrap();
            }
        }
        for r in 0..rows {
            for c in 0..cols {
                let id = (r * cols + c) as QubitId;
                if c + 1 < cols {
                    g.add_edge(id, id + 1, eta).unwrap();
                }
                if r + 1 < rows {
                    g.add_edge(id, id + cols as QubitId, eta).unwrap();
                }
            }
        }
        g
    }

    pub fn vertices(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: QubitId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, a: QubitId, b: QubitId) -> bool {
        self.edges.contains(&norm_edge(a, b))
    }

    pub fn coord(&self, v: QubitId) -> Option<(i32, i32)> {
        self.coords.get(&v).copied()
    }

    pub fn neighbors(&self, v: QubitId) -> &[QubitId] {
        self.adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn eps(&self, v: QubitId) -> Result<f64, GraphError> {
        self.eps.get(&v).copied().ok_or(GraphError::UnknownVertex(v))
    }

    pub fn eta(&self, a: QubitId, b: QubitId) -> Result<f64, GraphError> {
        self.eta
            .get(&norm_edge(a, b))
            .copied()
            .ok_or(GraphError::UnknownEdge(a, b))
    }

    /// Readout flip rates `(p10, p01)` for a vertex.
    pub fn readout(&self, v: QubitId) -> Result<(f64, f64), GraphError> {
        self.readout.get(&v).copied().ok_or(GraphError::UnknownVertex(v))
    }

    /// Copy of the graph with every eps/eta multiplied by `s` (clamped to 1).
    pub fn scaled_weights(&self, s: f64) -> Self {
        let mut g = self.clone();
        for w in g.eps.values_mut() {
            *w = (*w * s).clamp(0.0, 1.0);
        }
        for w in g.eta.values_mut() {
            *w = (*w * s).clamp(0.0, 1.0);
        }
        g
    }

    /// Replace the weights along one path (vertices and consecutive edges)
    /// by the current value times `factor`.
    pub fn with_path_weights_scaled(&self, path: &[QubitId], factor: f64) -> Self {
        let mut g = self.clone();
        for &v in path {
            if let Some(w) = g.eps.get_mut(&v) {
                *w = (*w * factor).clamp(0.0, 1.0);
            }
        }
        for pair in path.windows(2) {
            if let Some(w) = g.eta.get_mut(&norm_edge(pair[0], pair[1])) {
                *w = (*w * factor).clamp(0.0, 1.0);
            }
        }
        g
    }

    /// Set uniform weights along one path: every vertex gets `eps` and every
    /// consecutive edge gets `eta`.
    pub fn with_path_weights_set(&self, path: &[QubitId], eps: f64, eta: f64) -> Self {
        let mut g = self.clone();
        for &v in path {
            if let Some(w) = g.eps.get_mut(&v) {
                *w = eps.clamp(0.0, 1.0);
            }
        }
        for pair in path.windows(2) {
            if let Some(w) = g.eta.get_mut(&norm_edge(pair[0], pair[1])) {
                *w = eta.clamp(0.0, 1.0);
            }
        }
        g
    }

    /// Overwrite one vertex weight.
    pub fn set_eps(&mut self, v: QubitId, eps: f64) -> Result<(), GraphError> {
        check_prob("eps", eps)?;
        match self.eps.get_mut(&v) {
            Some(w) => {
                *w = eps;
                Ok(())
            }
            None => Err(GraphError::UnknownVertex(v)),
        }
    }

    /// Overwrite one edge weight.
    pub fn set_eta(&mut self, a: QubitId, b: QubitId, eta: f64) -> Result<(), GraphError> {
        check_prob("eta", eta)?;
        match self.eta.get_mut(&norm_edge(a, b)) {
            Some(w) => {
                *w = eta;
                Ok(())
            }
            None => Err(GraphError::UnknownEdge(a, b)),
        }
    }
}

// ---------------------------------------------------------------------------
// Layout file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct LayoutQubit {
    id: QubitId,
    row: i32,
    col: i32,
    eps: f64,
    p10: f64,
    p01: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayoutEdge {
    a: QubitId,
    b: QubitId,
    eta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayoutFile {
    qubits: Vec<LayoutQubit>,
    edges: Vec<LayoutEdge>,
}

impl NoiseGraph {
    pub fn from_layout_str(text: &str) -> Result<Self, GraphError> {
        let layout: LayoutFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        let mut g = Self::new();
        for q in &layout.qubits {
            g.add_qubit(q.id, Some((q.row, q.col)), q.eps, (q.p10, q.p01))?;
        }
        for e in &layout.edges {
            g.add_edge(e.a, e.b, e.eta)?;
        }
        Ok(g)
    }

    pub fn to_layout_string(&self) -> String {
        let layout = LayoutFile {
            qubits: self
                .vertices
                .iter()
                .map(|&id| {
                    let (row, col) = self.coords.get(&id).copied().unwrap_or((0, 0));
                    let (p10, p01) = self.readout[&id];
                    LayoutQubit { id, row, col, eps: self.eps[&id], p10, p01 }
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| LayoutEdge { a, b, eta: self.eta[&(a, b)] })
                .collect(),
        };
        serde_json::to_string_pretty(&layout).expect("layout serialization")
    }

    pub fn load_layout(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(e.to_string()))?;
        Self::from_layout_str(&text)
    }

    pub fn save_layout(&self, path: &Path) -> Result<(), GraphError> {
        let mut f = std::fs::File::create(path).map_err(|e| GraphError::Io(e.to_string()))?;
        f.write_all(self.to_layout_string().as_bytes())
            .and_then(|_| f.write_all(b"\n"))
            .map_err(|e| GraphError::Io(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

/// Ordered simple path of physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    path: Vec<QubitId>,
}

impl Assignment {
    pub fn new(path: Vec<QubitId>) -> Self {
        Self { path }
    }

    pub fn path(&self) -> &[QubitId] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut path = self.path.clone();
        path.reverse();
        Self { path }
    }

    /// Check the simple-path invariants against a host graph.
    pub fn validate(&self, g: &NoiseGraph) -> Result<(), GraphError> {
        if self.path.is_empty() {
            return Err(GraphError::InvalidAssignment("empty path".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &self.path {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
            if !seen.insert(v) {
                return Err(GraphError::InvalidAssignment(format!("repeated vertex {v}")));
            }
        }
        for pair in self.path.windows(2) {
            if !g.contains_edge(pair[0], pair[1]) {
                return Err(GraphError::InvalidAssignment(format!(
                    "({}, {}) is not an edge",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    /// Dash-separated id list, e.g. `"3-4-9"`.
    pub fn to_compact_string(&self) -> String {
        self.path
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    pub fn from_compact_string(s: &str) -> Result<Self, GraphError> {
        let path = s
            .split('-')
            .map(|t| t.trim().parse::<QubitId>().map_err(|e| GraphError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(path))
    }
}

/// All ordered simple paths of exactly `n` vertices, in lexicographic order
/// of the vertex-id sequence. Both orientations of each undirected path are
/// included as distinct assignments.
pub fn enumerate_simple_paths(g: &NoiseGraph, n: usize) -> Vec<Assignment> {
    enumerate_simple_paths_capped(g, n, usize::MAX).expect("uncapped enumeration")
}

/// Capped variant of [`enumerate_simple_paths`]: aborts as soon as more than
/// `cap` paths exist, guarding against combinatorial blowups.
pub fn enumerate_simple_paths_capped(
    g: &NoiseGraph,
    n: usize,
    cap: usize,
) -> Result<Vec<Assignment>, GraphError> {
    assert!(n >= 1, "path length must be at least 1");
    let mut out = Vec::new();
    let mut path: Vec<QubitId> = Vec::with_capacity(n);
    let mut used: BTreeSet<QubitId> = BTreeSet::new();

    fn dfs(
        g: &NoiseGraph,
        n: usize,
        cap: usize,
        path: &mut Vec<QubitId>,
        used: &mut BTreeSet<QubitId>,
        out: &mut Vec<Assignment>,
    ) -> Result<(), GraphError> {
        if path.len() == n {
            if out.len() >= cap {
                return Err(GraphError::PopulationCap { cap });
            }
            out.push(Assignment::new(path.clone()));
            return Ok(());
        }
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if used.insert(w) {
                path.push(w);
                let r = dfs(g, n, cap, path, used, out);
                path.pop();
                used.remove(&w);
                r?;
            }
        }
        Ok(())
    }

    for v in g.vertices() {
        path.push(v);
        used.insert(v);
        let r = dfs(g, n, cap, &mut path, &mut used, &mut out);
        path.pop();
        used.remove(&v);
        r?;
    }
    Ok(out)
}

/// Neighborhood size bound: candidate assignments may differ from the current
/// one in at most `k` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodSpec {
    pub k: usize,
}

impl NeighborhoodSpec {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

/// The move set around `a`: every valid path whose vertex set differs from
/// `a`'s in 1..=k elements, plus the reversal of `a`. Never contains `a`.
pub fn neighborhood(g: &NoiseGraph, a: &Assignment, spec: NeighborhoodSpec) -> Vec<Assignment> {
    let pop = Population::enumerate(g, a.len()).expect("population");
    let idx = pop.index_of(a).expect("assignment not in population");
    pop.neighbor_indices(idx, spec.k)
        .into_iter()
        .map(|i| pop.paths()[i].clone())
        .collect()
}

/// Uniformly random member of `neighborhood(g, a, spec)`.
pub fn sample_neighbor<R: Rng>(
    g: &NoiseGraph,
    a: &Assignment,
    spec: NeighborhoodSpec,
    rng: &mut R,
) -> Result<Assignment, GraphError> {
    let nb = neighborhood(g, a, spec);
    if nb.is_empty() {
        return Err(GraphError::EmptyNeighborhood);
    }
    Ok(nb[rng.gen_range(0..nb.len())].clone())
}

// ---------------------------------------------------------------------------
// Enumerated populations
// ---------------------------------------------------------------------------

/// The full set of length-`n` assignments on a graph, with vertex-set bitmasks
/// for fast neighborhood filtering. Built once and shared by the annealer,
/// locality analysis, and sweeps.
#[derive(Debug, Clone)]
pub struct Population {
    n: usize,
    paths: Vec<Assignment>,
    masks: Vec<u128>,
    index: HashMap<Vec<QubitId>, usize>,
}

impl Population {
    pub fn enumerate(g: &NoiseGraph, n: usize) -> Result<Self, GraphError> {
        Self::from_paths(g, enumerate_simple_paths(g, n))
    }

    /// Population over an explicit assignment list (e.g. after readout
    /// rejection), keeping the given order.
    pub fn from_paths(g: &NoiseGraph, paths: Vec<Assignment>) -> Result<Self, GraphError> {
        if g.vertex_count() > 128 {
            return Err(GraphError::TooManyVertices);
        }
        let n = paths.first().map(Assignment::len).unwrap_or(0);
        for a in &paths {
            a.validate(g)?;
            if a.len() != n {
                return Err(GraphError::InvalidAssignment(format!(
                    "mixed path lengths {n} and {}",
                    a.len()
                )));
            }
        }
        let vertex_bit: BTreeMap<QubitId, u32> = g
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, i as u32))
            .collect();
        let masks = paths
            .iter()
            .map(|a| {
                a.path()
                    .iter()
                    .fold(0u128, |m, v| m | (1u128 << vertex_bit[v]))
            })
            .collect();
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, a)| (a.path().to_vec(), i))
            .collect();
        Ok(Self { n, paths, masks, index })
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path_len(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[Assignment] {
        &self.paths
    }

    pub fn index_of(&self, a: &Assignment) -> Option<usize> {
        self.index.get(a.path()).copied()
    }

    /// Indices of the neighborhood of `paths()[i]` under bound `k`.
    pub fn neighbor_indices(&self, i: usize, k: usize) -> Vec<usize> {
        let mi = self.masks[i];
        let rev = self.paths[i].reversed();
        let rev_idx = self.index_of(&rev).filter(|&r| r != i);
        let mut out = Vec::new();
        for (j, &mj) in self.masks.iter().enumerate() {
            if j == i {
                continue;
            }
            let diff = (mj & !mi).count_ones() as usize;
            if diff > 0 && diff <= k {
                out.push(j);
            }
        }
        if let Some(r) = rev_idx {
            if !out.contains(&r) {
                // reversal has diff 0, so it is never picked up by the scan
                out.push(r);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Precomputed neighbor lists for every member of a population at a fixed `k`.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    pub k: usize,
    lists: Vec<Vec<usize>>,
}

impl NeighborTable {
    pub fn build(pop: &Population, k: usize) -> Self {
        let lists = (0..pop.len()).map(|i| pop.neighbor_indices(i, k)).collect();
        Self { k, lists }
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }
}
