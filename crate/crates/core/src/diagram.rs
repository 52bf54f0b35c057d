//! Unordered Bratteli diagrams as finite truncations, incidence matrices,
//! telescoping, simplicity windows, and isomorphism search.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IncidenceMatrix;

/// Default bound on the number of composite edges a telescoping may produce.
pub const DEFAULT_PATH_GUARD: u64 = 1_000_000;

/// Largest level width accepted by the exhaustive isomorphism search.
pub const ISOMORPHISM_WIDTH_GUARD: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("root level must be a single vertex, found {0}")]
    RootNotSingleton(usize),
    #[error("level {0} has no vertices")]
    EmptyLevel(usize),
    #[error("edge {edge} of level {level} refers to a missing vertex")]
    DanglingEdge { level: usize, edge: usize },
    #[error("vertex {vertex} of level {level} has no incoming edge")]
    NoIncomingEdge { level: usize, vertex: usize },
    #[error("vertex {vertex} of level {level} has no outgoing edge")]
    NoOutgoingEdge { level: usize, vertex: usize },
    #[error("level {level} out of range 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("invalid cut sequence {0:?}")]
    InvalidCuts(Vec<usize>),
    #[error("level provider exhausted at level {0}")]
    ProviderExhausted(usize),
    #[error("path count {count} exceeds guard {guard}")]
    SizeGuard { count: u64, guard: u64 },
    #[error("level width {width} exceeds isomorphism guard {guard}")]
    IsomorphismGuard { width: usize, guard: usize },
    #[error("integer overflow in path counting")]
    Overflow,
    #[error("matrix shape {rows}x{cols} does not chain here")]
    Shape { rows: usize, cols: usize },
    #[error("malformed diagram document: {0}")]
    Format(String),
}

/// An edge of `E_n`, between a vertex of `V_{n-1}` and a vertex of `V_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub range: usize,
}

impl Edge {
    pub fn new(source: usize, range: usize) -> Self {
        Edge { source, range }
    }
}

/// One level of a diagram: the vertex count of `V_n` and the edge list of `E_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderKind {
    Stationary,
    EventuallyPeriodic,
    ExplicitTable,
}

/// Deterministic source of levels `n >= 1` for an infinite diagram.
///
/// Implementations must be pure: the same `n` always yields the same level.
pub trait LevelProvider: Send + Sync + fmt::Debug {
    fn kind(&self) -> ProviderKind;
    /// `None` means the provider has no level `n`.
    fn level(&self, n: usize) -> Option<Level>;
}

fn edges_from_matrix(m: &IncidenceMatrix) -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for _ in 0..m.get(i, j) {
                edges.push(Edge::new(j, i));
            }
        }
    }
    edges
}

/// Level data whose edges are listed range-major, then source, then copy.
pub fn level_from_matrix(m: &IncidenceMatrix) -> Level {
    Level {
        vertices: m.rows(),
        edges: edges_from_matrix(m),
    }
}

/// Level 1 joins the root to each of `k` vertices once; every later level is `matrix`.
#[derive(Clone, Debug)]
pub struct StationaryProvider {
    matrix: IncidenceMatrix,
}

impl StationaryProvider {
    pub fn new(matrix: IncidenceMatrix) -> Result<Self, DiagramError> {
        if matrix.rows() != matrix.cols() || matrix.rows() == 0 {
            return Err(DiagramError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(StationaryProvider { matrix })
    }

    pub fn matrix(&self) -> &IncidenceMatrix {
        &self.matrix
    }
}

impl LevelProvider for StationaryProvider {
    fn kind(&self) -> ProviderKind {
        ProviderKind::Stationary
    }

    fn level(&self, n: usize) -> Option<Level> {
        match n {
            0 => None,
            1 => {
                let k = self.matrix.rows();
                Some(Level {
                    vertices: k,
                    edges: (0..k).map(|v| Edge::new(0, v)).collect(),
                })
            }
            _ => Some(level_from_matrix(&self.matrix)),
        }
    }
}

/// A finite prefix of levels followed by a cycle repeated forever.
#[derive(Clone, Debug)]
pub struct EventuallyPeriodicProvider {
    prefix: Vec<Level>,
    period: Vec<Level>,
}

impl EventuallyPeriodicProvider {
    pub fn new(prefix: Vec<Level>, period: Vec<Level>) -> Self {
        EventuallyPeriodicProvider { prefix, period }
    }

    /// Odometer with radices `prefix` and then `period` repeating.
    pub fn odometer(prefix: &[usize], period: &[usize]) -> Self {
        let lvl = |d: usize| Level {
            vertices: 1,
            edges: vec![Edge::new(0, 0); d],
        };
        Self::new(
            prefix.iter().map(|&d| lvl(d)).collect(),
            period.iter().map(|&d| lvl(d)).collect(),
        )
    }
}

impl LevelProvider for EventuallyPeriodicProvider {
    fn kind(&self) -> ProviderKind {
        ProviderKind::EventuallyPeriodic
    }

    fn level(&self, n: usize) -> Option<Level> {
        if n == 0 {
            return None;
        }
        let i = n - 1;
        if i < self.prefix.len() {
            return Some(self.prefix[i].clone());
        }
        if self.period.is_empty() {
            return None;
        }
        Some(self.period[(i - self.prefix.len()) % self.period.len()].clone())
    }
}

/// A finite table of levels; asking past its end exhausts the provider.
#[derive(Clone, Debug)]
pub struct TableProvider {
    levels: Vec<Level>,
}

impl TableProvider {
    pub fn new(levels: Vec<Level>) -> Self {
        TableProvider { levels }
    }
}

impl LevelProvider for TableProvider {
    fn kind(&self) -> ProviderKind {
        ProviderKind::ExplicitTable
    }

    fn level(&self, n: usize) -> Option<Level> {
        n.checked_sub(1).and_then(|i| self.levels.get(i).cloned())
    }
}

/// Finite truncation `V_0..V_N`, `E_1..E_N` of a Bratteli diagram.
#[derive(Clone, Debug)]
pub struct BratteliDiagram {
    vertex_counts: Vec<usize>,
    edges: Vec<Vec<Edge>>,
    /// For telescoped diagrams: the path of input edges behind each edge.
    constituents: Option<Vec<Vec<Vec<usize>>>>,
    provider: Option<Arc<dyn LevelProvider>>,
}

impl PartialEq for BratteliDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_counts == other.vertex_counts && self.edges == other.edges
    }
}
impl Eq for BratteliDiagram {}

impl BratteliDiagram {
    /// `vertex_counts[n] = |V_n|`, `edges[n-1] = E_n`.
    pub fn new(vertex_counts: Vec<usize>, edges: Vec<Vec<Edge>>) -> Result<Self, DiagramError> {
        validate(&vertex_counts, &edges)?;
        Ok(BratteliDiagram {
            vertex_counts,
            edges,
            constituents: None,
            provider: None,
        })
    }

    /// Builds levels `1..=depth` from a provider and keeps it for later extension.
    pub fn from_provider(
        provider: Arc<dyn LevelProvider>,
        depth: usize,
    ) -> Result<Self, DiagramError> {
        let mut d = BratteliDiagram {
            vertex_counts: vec![1],
            edges: Vec::new(),
            constituents: None,
            provider: Some(provider),
        };
        d.extend_in_place(depth)?;
        Ok(d)
    }

    /// Diagram whose level `n` has incidence matrix `matrices[n-1]`.
    pub fn from_matrices(matrices: &[IncidenceMatrix]) -> Result<Self, DiagramError> {
        let mut counts = vec![1];
        let mut edges = Vec::new();
        for m in matrices {
            if m.cols() != *counts.last().expect("root") {
                return Err(DiagramError::Shape {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            counts.push(m.rows());
            edges.push(edges_from_matrix(m));
        }
        Self::new(counts, edges)
    }

    /// Truncation depth `N`.
    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self, n: usize) -> usize {
        self.vertex_counts[n]
    }

    pub fn vertex_counts(&self) -> &[usize] {
        &self.vertex_counts
    }

    /// Edges of `E_n`, `1 <= n <= N`.
    pub fn edges(&self, n: usize) -> &[Edge] {
        &self.edges[n - 1]
    }

    pub fn edge(&self, n: usize, e: usize) -> Edge {
        self.edges[n - 1][e]
    }

    pub fn provider(&self) -> Option<&Arc<dyn LevelProvider>> {
        self.provider.as_ref()
    }

    /// Constituent path (edge indices of the pre-telescoping diagram) of edge `e` in `E_n`.
    pub fn constituents(&self, n: usize, e: usize) -> Option<&[usize]> {
        self.constituents.as_ref().map(|c| c[n - 1][e].as_slice())
    }

    fn extend_in_place(&mut self, depth: usize) -> Result<(), DiagramError> {
        if depth <= self.depth() {
            return Ok(());
        }
        let provider = self
            .provider
            .clone()
            .ok_or(DiagramError::ProviderExhausted(self.depth() + 1))?;
        for n in self.depth() + 1..=depth {
            let level = provider
                .level(n)
                .ok_or(DiagramError::ProviderExhausted(n))?;
            self.vertex_counts.push(level.vertices);
            self.edges.push(level.edges);
            if let Some(c) = self.constituents.as_mut() {
                c.push((0..self.edges[n - 1].len()).map(|e| vec![e]).collect());
            }
        }
        validate(&self.vertex_counts, &self.edges)
    }

    /// The truncation at `depth`, extending through the provider when needed.
    pub fn extended_to(&self, depth: usize) -> Result<BratteliDiagram, DiagramError> {
        let mut d = self.clone();
        d.extend_in_place(depth)?;
        Ok(d)
    }

    /// Drops levels below `depth`. Sources of the last kept level stay valid;
    /// vertices of `V_depth` keep incoming edges, so the result is valid.
    pub fn truncated(&self, depth: usize) -> BratteliDiagram {
        let depth = depth.min(self.depth());
        BratteliDiagram {
            vertex_counts: self.vertex_counts[..=depth].to_vec(),
            edges: self.edges[..depth].to_vec(),
            constituents: self.constituents.as_ref().map(|c| c[..depth].to_vec()),
            provider: self.provider.clone(),
        }
    }

    /// Truncated or extended to exactly `depth`.
    pub fn at_depth(&self, depth: usize) -> Result<BratteliDiagram, DiagramError> {
        if depth <= self.depth() {
            Ok(self.truncated(depth))
        } else {
            self.extended_to(depth)
        }
    }

    /// `M_n`: entry `(i, j)` counts edges of `E_n` from `V_{n-1}[j]` to `V_n[i]`.
    pub fn incidence_matrix(&self, n: usize) -> Result<IncidenceMatrix, DiagramError> {
        if n == 0 || n > self.depth() {
            return Err(DiagramError::LevelOutOfRange {
                level: n,
                depth: self.depth(),
            });
        }
        let mut m = IncidenceMatrix::zeros(self.vertex_counts[n], self.vertex_counts[n - 1]);
        for e in self.edges(n) {
            m.add(e.range, e.source, 1);
        }
        Ok(m)
    }

    /// `M_b ... M_{a+1}`, the incidence matrix of `E_{a+1} o ... o E_b`.
    pub fn product_matrix(&self, a: usize, b: usize) -> Result<IncidenceMatrix, DiagramError> {
        let mut acc = IncidenceMatrix::identity(self.vertex_counts[a]);
        for n in a + 1..=b {
            acc = self
                .incidence_matrix(n)?
                .checked_mul(&acc)
                .ok_or(DiagramError::Overflow)?;
        }
        Ok(acc)
    }

    /// Number of root paths ending at each vertex of `V_k`.
    pub fn path_counts(&self, k: usize) -> Result<Vec<u64>, DiagramError> {
        let p = self.product_matrix(0, k)?;
        Ok((0..p.rows()).map(|i| p.get(i, 0)).collect())
    }

    /// Telescoping along `0 = m_0 < ... < m_k = N`. Composite edges of each new
    /// level are listed in lexicographic order of their constituent edge
    /// indices (lowest level first) and remember that path.
    pub fn telescope(&self, cuts: &[usize]) -> Result<BratteliDiagram, DiagramError> {
        validate_cuts(cuts, self.depth())?;
        let mut counts = Vec::with_capacity(cuts.len());
        let mut edges = Vec::with_capacity(cuts.len() - 1);
        let mut constituents = Vec::with_capacity(cuts.len() - 1);
        counts.push(1);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let total: u64 = self.product_matrix(a, b)?.entry_sum();
            if total > DEFAULT_PATH_GUARD {
                return Err(DiagramError::SizeGuard {
                    count: total,
                    guard: DEFAULT_PATH_GUARD,
                });
            }
            let mut paths = self.segment_paths(a, b);
            paths.sort();
            let level_edges = paths
                .iter()
                .map(|p| {
                    Edge::new(
                        self.edge(a + 1, p[0]).source,
                        self.edge(b, *p.last().expect("nonempty")).range,
                    )
                })
                .collect();
            counts.push(self.vertex_counts[b]);
            edges.push(level_edges);
            constituents.push(paths);
        }
        Ok(BratteliDiagram {
            vertex_counts: counts,
            edges,
            constituents: Some(constituents),
            provider: None,
        })
    }

    /// All paths `E_{a+1} o ... o E_b` as edge-index sequences.
    pub fn segment_paths(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let mut paths: Vec<Vec<usize>> = (0..self.edges(a + 1).len()).map(|e| vec![e]).collect();
        for n in a + 2..=b {
            let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_counts[n - 1]];
            for (i, e) in self.edges(n).iter().enumerate() {
                by_source[e.source].push(i);
            }
            let mut next = Vec::new();
            for p in &paths {
                let end = self.edge(n - 1, *p.last().expect("nonempty")).range;
                for &e in &by_source[end] {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
            paths = next;
        }
        paths
    }

    /// Searches for cuts `0 = m_0 < m_1 < ... < m_k = horizon` (`k >= 2`) whose
    /// telescoped incidence matrices are all entrywise positive.
    pub fn is_simple_within(&self, horizon: usize) -> Result<Simplicity, DiagramError> {
        let d = self.at_depth(horizon)?;
        if horizon < 2 {
            return Ok(Simplicity::NoWitnessWithinHorizon);
        }
        let mut cuts = vec![0usize, 1];
        let mut start = 1;
        while start < horizon {
            let mut reach = BoolMatrix::identity(d.vertex_counts[start]);
            let mut found = None;
            for m in start + 1..=horizon {
                reach = BoolMatrix::from_incidence(&d.incidence_matrix(m)?).mul(&reach);
                if reach.all_true() {
                    found = Some(m);
                    break;
                }
            }
            match found {
                Some(m) => {
                    cuts.push(m);
                    start = m;
                }
                None => break,
            }
        }
        if cuts.len() < 3 {
            return Ok(Simplicity::NoWitnessWithinHorizon);
        }
        // positivity survives extending the last block upward
        *cuts.last_mut().expect("nonempty") = horizon;
        Ok(Simplicity::SimpleWitness { cuts })
    }

    /// Exhaustive isomorphism search over levelwise vertex bijections.
    pub fn are_isomorphic(&self, other: &BratteliDiagram) -> Result<Isomorphism, DiagramError> {
        if self.depth() != other.depth() {
            return Ok(Isomorphism::Refuted(format!(
                "depths differ: {} vs {}",
                self.depth(),
                other.depth()
            )));
        }
        for n in 0..=self.depth() {
            let w = self.vertex_counts[n].max(other.vertex_counts[n]);
            if w > ISOMORPHISM_WIDTH_GUARD {
                return Err(DiagramError::IsomorphismGuard {
                    width: w,
                    guard: ISOMORPHISM_WIDTH_GUARD,
                });
            }
            if self.vertex_counts[n] != other.vertex_counts[n] {
                return Ok(Isomorphism::Refuted(format!(
                    "level {n} vertex counts differ"
                )));
            }
            if n > 0 && self.edges(n).len() != other.edges(n).len() {
                return Ok(Isomorphism::Refuted(format!(
                    "level {n} edge counts differ"
                )));
            }
        }
        let ms: Vec<IncidenceMatrix> = (1..=self.depth())
            .map(|n| self.incidence_matrix(n))
            .collect::<Result<_, _>>()?;
        let ns: Vec<IncidenceMatrix> = (1..=other.depth())
            .map(|n| other.incidence_matrix(n))
            .collect::<Result<_, _>>()?;
        let mut maps = vec![vec![0usize]];
        if !extend_iso(&ms, &ns, &mut maps) {
            return Ok(Isomorphism::Refuted(
                "no levelwise vertex bijection matches the incidence data".into(),
            ));
        }
        let mut edge_maps = Vec::with_capacity(self.depth());
        for n in 1..=self.depth() {
            let f_prev = &maps[n - 1];
            let f = &maps[n];
            let mut pool: std::collections::HashMap<Edge, Vec<usize>> =
                std::collections::HashMap::new();
            for (i, e) in other.edges(n).iter().enumerate() {
                pool.entry(*e).or_default().push(i);
            }
            for v in pool.values_mut() {
                v.reverse();
            }
            let mut g = Vec::with_capacity(self.edges(n).len());
            for e in self.edges(n) {
                let target = Edge::new(f_prev[e.source], f[e.range]);
                let i = pool
                    .get_mut(&target)
                    .and_then(|v| v.pop())
                    .expect("multiplicities match");
                g.push(i);
            }
            edge_maps.push(g);
        }
        Ok(Isomorphism::Witness {
            vertex_maps: maps,
            edge_maps,
        })
    }

    /// Graphviz rendering, levels as ranks, root on top.
    pub fn to_dot(&self) -> String {
        self.dot_with_labels(|_, _| None)
    }

    pub(crate) fn dot_with_labels<F>(&self, label: F) -> String
    where
        F: Fn(usize, usize) -> Option<String>,
    {
        let mut out =
            String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=point, width=0.12];\n");
        for (n, &k) in self.vertex_counts.iter().enumerate() {
            out.push_str("  { rank=same;");
            for v in 0..k {
                out.push_str(&format!(" v{n}_{v};"));
            }
            out.push_str(" }\n");
        }
        for n in 1..=self.depth() {
            for (i, e) in self.edges(n).iter().enumerate() {
                match label(n, i) {
                    Some(l) => out.push_str(&format!(
                        "  v{}_{} -> v{}_{} [arrowhead=none, label=\"{}\"];\n",
                        n - 1,
                        e.source,
                        n,
                        e.range,
                        l
                    )),
                    None => out.push_str(&format!(
                        "  v{}_{} -> v{}_{} [arrowhead=none];\n",
                        n - 1,
                        e.source,
                        n,
                        e.range
                    )),
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn validate(vertex_counts: &[usize], edges: &[Vec<Edge>]) -> Result<(), DiagramError> {
    if vertex_counts.first() != Some(&1) {
        return Err(DiagramError::RootNotSingleton(
            vertex_counts.first().copied().unwrap_or(0),
        ));
    }
    if vertex_counts.len() != edges.len() + 1 {
        return Err(DiagramError::Format(format!(
            "{} vertex levels but {} edge levels",
            vertex_counts.len(),
            edges.len()
        )));
    }
    for (n, &k) in vertex_counts.iter().enumerate() {
        if k == 0 {
            return Err(DiagramError::EmptyLevel(n));
        }
    }
    for (i, level) in edges.iter().enumerate() {
        let n = i + 1;
        let mut has_in = vec![false; vertex_counts[n]];
        let mut has_out = vec![false; vertex_counts[n - 1]];
        for (j, e) in level.iter().enumerate() {
            if e.source >= vertex_counts[n - 1] || e.range >= vertex_counts[n] {
                return Err(DiagramError::DanglingEdge { level: n, edge: j });
            }
            has_in[e.range] = true;
            has_out[e.source] = true;
        }
        if let Some(v) = has_in.iter().position(|x| !x) {
            return Err(DiagramError::NoIncomingEdge {
                level: n,
                vertex: v,
            });
        }
        if let Some(v) = has_out.iter().position(|x| !x) {
            return Err(DiagramError::NoOutgoingEdge {
                level: n - 1,
                vertex: v,
            });
        }
    }
    Ok(())
}

pub(crate) fn validate_cuts(cuts: &[usize], depth: usize) -> Result<(), DiagramError> {
    let ok = cuts.len() >= 2
        && cuts[0] == 0
        && *cuts.last().expect("nonempty") == depth
        && cuts.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(DiagramError::InvalidCuts(cuts.to_vec()))
    }
}

fn extend_iso(ms: &[IncidenceMatrix], ns: &[IncidenceMatrix], maps: &mut Vec<Vec<usize>>) -> bool {
    let n = maps.len();
    if n > ms.len() {
        return true;
    }
    let m = &ms[n - 1];
    let p = &ns[n - 1];
    let f_prev = maps[n - 1].clone();
    let rows = m.rows();
    // compatible[v][w]: row v of M_n, columns relabelled by f_prev, equals row w of N_n
    let compatible: Vec<Vec<bool>> = (0..rows)
        .map(|v| {
            (0..rows)
                .map(|w| (0..m.cols()).all(|j| m.get(v, j) == p.get(w, f_prev[j])))
                .collect()
        })
        .collect();
    let mut assignment = vec![usize::MAX; rows];
    let mut used = vec![false; rows];
    search_bijection(0, &compatible, &mut assignment, &mut used, &mut |f| {
        maps.push(f.to_vec());
        if extend_iso(ms, ns, maps) {
            return true;
        }
        maps.pop();
        false
    })
}

fn search_bijection(
    v: usize,
    compatible: &[Vec<bool>],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    on_complete: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if v == compatible.len() {
        return on_complete(assignment);
    }
    for w in 0..compatible.len() {
        if !used[w] && compatible[v][w] {
            used[w] = true;
            assignment[v] = w;
            if search_bijection(v + 1, compatible, assignment, used, on_complete) {
                return true;
            }
            used[w] = false;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BoolMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl BoolMatrix {
    fn identity(k: usize) -> Self {
        let mut cells = vec![false; k * k];
        for i in 0..k {
            cells[i * k + i] = true;
        }
        BoolMatrix {
            rows: k,
            cols: k,
            cells,
        }
    }

    fn from_incidence(m: &IncidenceMatrix) -> Self {
        BoolMatrix {
            rows: m.rows(),
            cols: m.cols(),
            cells: (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j) > 0)
                .collect(),
        }
    }

    fn mul(&self, rhs: &BoolMatrix) -> BoolMatrix {
        let mut cells = vec![false; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.cells[i * self.cols + k] {
                    for j in 0..rhs.cols {
                        cells[i * rhs.cols + j] |= rhs.cells[k * rhs.cols + j];
                    }
                }
            }
        }
        BoolMatrix {
            rows: self.rows,
            cols: rhs.cols,
            cells,
        }
    }

    fn all_true(&self) -> bool {
        self.cells.iter().all(|&c| c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Simplicity {
    SimpleWitness { cuts: Vec<usize> },
    NoWitnessWithinHorizon,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism {
    /// `vertex_maps[n][v]` and `edge_maps[n-1][e]` give the bijections level by level.
    Witness {
        vertex_maps: Vec<Vec<usize>>,
        edge_maps: Vec<Vec<usize>>,
    },
    Refuted(String),
}

impl Isomorphism {
    pub fn is_witness(&self) -> bool {
        matches!(self, Isomorphism::Witness { .. })
    }
}
