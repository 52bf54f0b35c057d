//! Finite paths, fibers, and the Vershik successor on depth-k fibers.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordering::OrderedBratteliDiagram;

pub const DEFAULT_FIBER_GUARD: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VershikError {
    #[error("path of depth {depth} exceeds diagram depth {available}")]
    TooDeep { depth: usize, available: usize },
    #[error("edge {edge} does not exist at level {level}")]
    NoSuchEdge { level: usize, edge: usize },
    #[error("edges at levels {level} and {} do not compose", level + 1)]
    NotComposable { level: usize },
    #[error("vertex {vertex} does not exist at level {level}")]
    NoSuchVertex { level: usize, vertex: usize },
    #[error("fiber holds {count} paths, above the guard {guard}")]
    SizeGuard { count: u64, guard: u64 },
    #[error("cannot parse path {0:?}")]
    Parse(String),
    #[error("path depth {0} is not a cut level")]
    NotACut(usize),
}

/// Edge indices `e_1..e_k`; `edges[i]` lives in `E_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinitePath {
    pub edges: Vec<usize>,
}

impl FinitePath {
    pub fn new(edges: Vec<usize>) -> Self {
        FinitePath { edges }
    }

    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn prefix(&self, j: usize) -> FinitePath {
        FinitePath::new(self.edges[..j].to_vec())
    }

    pub fn validate(&self, od: &OrderedBratteliDiagram) -> Result<(), VershikError> {
        let d = od.base();
        if self.depth() > d.depth() {
            return Err(VershikError::TooDeep {
                depth: self.depth(),
                available: d.depth(),
            });
        }
        let mut at = 0usize;
        for (i, &e) in self.edges.iter().enumerate() {
            let level = i + 1;
            let edge = d
                .edges(level)
                .get(e)
                .ok_or(VershikError::NoSuchEdge { level, edge: e })?;
            if edge.source != at {
                return Err(VershikError::NotComposable { level: i });
            }
            at = edge.range;
        }
        Ok(())
    }

    /// Vertex of `V_k` where the path ends.
    pub fn range(&self, od: &OrderedBratteliDiagram) -> usize {
        match self.edges.last() {
            Some(&e) => od.base().edge(self.depth(), e).range,
            None => 0,
        }
    }

    /// Induced lexicographic order: the highest level where the paths differ decides.
    pub fn lex_cmp(&self, other: &FinitePath, od: &OrderedBratteliDiagram) -> Ordering {
        for i in (0..self.depth().min(other.depth())).rev() {
            let (a, b) = (self.edges[i], other.edges[i]);
            if a != b {
                return od.rank(i + 1, a).cmp(&od.rank(i + 1, b));
            }
        }
        self.depth().cmp(&other.depth())
    }

    /// 1-based index of the first coordinate where the paths differ.
    pub fn first_difference(&self, other: &FinitePath) -> Option<usize> {
        self.edges
            .iter()
            .zip(&other.edges)
            .position(|(a, b)| a != b)
            .map(|i| i + 1)
            .or_else(|| {
                (self.depth() != other.depth()).then(|| self.depth().min(other.depth()) + 1)
            })
    }

    /// `2^{-i}` with `i` the first differing index, `0` for equal paths.
    pub fn distance(&self, other: &FinitePath) -> f64 {
        match self.first_difference(other) {
            Some(i) => (-(i as f64)).exp2(),
            None => 0.0,
        }
    }
}

impl fmt::Display for FinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.edges.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl FromStr for FinitePath {
    type Err = VershikError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(FinitePath::new(Vec::new()));
        }
        s.split('.')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(FinitePath::new)
            .map_err(|_| VershikError::Parse(s.to_string()))
    }
}

/// All depth-`level` paths ending at `vertex`, in increasing lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFiber {
    pub level: usize,
    pub vertex: usize,
    pub paths: Vec<FinitePath>,
}

impl PathFiber {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn position(&self, p: &FinitePath) -> Option<usize> {
        self.paths.iter().position(|q| q == p)
    }
}

pub fn enumerate_fiber(
    od: &OrderedBratteliDiagram,
    k: usize,
    v: usize,
) -> Result<PathFiber, VershikError> {
    enumerate_fiber_guarded(od, k, v, DEFAULT_FIBER_GUARD)
}

pub fn enumerate_fiber_guarded(
    od: &OrderedBratteliDiagram,
    k: usize,
    v: usize,
    guard: u64,
) -> Result<PathFiber, VershikError> {
    let d = od.base();
    if k > d.depth() {
        return Err(VershikError::TooDeep {
            depth: k,
            available: d.depth(),
        });
    }
    if v >= d.vertex_count(k) {
        return Err(VershikError::NoSuchVertex {
            level: k,
            vertex: v,
        });
    }
    let count = d
        .path_counts(k)
        .map(|c| c[v])
        .unwrap_or(if k == 0 { 1 } else { u64::MAX });
    if count > guard {
        return Err(VershikError::SizeGuard { count, guard });
    }
    let mut paths = Vec::with_capacity(count as usize);
    let mut tail = Vec::with_capacity(k);
    collect_fiber(od, k, v, &mut tail, &mut paths);
    Ok(PathFiber {
        level: k,
        vertex: v,
        paths,
    })
}

// `tail` holds the chosen edges for levels above `level`, highest first.
fn collect_fiber(
    od: &OrderedBratteliDiagram,
    level: usize,
    v: usize,
    tail: &mut Vec<usize>,
    out: &mut Vec<FinitePath>,
) {
    if level == 0 {
        out.push(FinitePath::new(tail.iter().rev().copied().collect()));
        return;
    }
    for &e in od.fiber(level, v) {
        tail.push(e);
        collect_fiber(od, level - 1, od.base().edge(level, e).source, tail, out);
        tail.pop();
    }
}

/// The min path (or max path) of depth `level` ending at `v`.
pub fn extreme_path_to(
    od: &OrderedBratteliDiagram,
    level: usize,
    v: usize,
    max: bool,
) -> Vec<usize> {
    let mut edges = vec![0; level];
    let mut at = v;
    for n in (1..=level).rev() {
        let e = if max {
            od.max_edge(n, at)
        } else {
            od.min_edge(n, at)
        };
        edges[n - 1] = e;
        at = od.base().edge(n, e).source;
    }
    edges
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Path(FinitePath),
    /// Every coordinate is maximal; the image depends on deeper levels.
    FiberMaximum,
    /// Every coordinate is minimal.
    FiberMinimum,
}

impl Step {
    pub fn path(self) -> Option<FinitePath> {
        match self {
            Step::Path(p) => Some(p),
            _ => None,
        }
    }
}

pub fn vershik_successor(od: &OrderedBratteliDiagram, p: &FinitePath) -> Step {
    step(od, p, false)
}

pub fn vershik_predecessor(od: &OrderedBratteliDiagram, p: &FinitePath) -> Step {
    step(od, p, true)
}

fn step(od: &OrderedBratteliDiagram, p: &FinitePath, backward: bool) -> Step {
    let extreme = |n: usize, e: usize| {
        if backward {
            od.is_min(n, e)
        } else {
            od.is_max(n, e)
        }
    };
    let Some(i) = (0..p.depth()).find(|&i| !extreme(i + 1, p.edges[i])) else {
        return if backward {
            Step::FiberMinimum
        } else {
            Step::FiberMaximum
        };
    };
    let f = if backward {
        od.prev_edge(i + 1, p.edges[i])
    } else {
        od.next_edge(i + 1, p.edges[i])
    }
    .expect("non-extreme edge has a neighbour");
    let mut edges = extreme_path_to(od, i, od.base().edge(i + 1, f).source, backward);
    edges.push(f);
    edges.extend_from_slice(&p.edges[i + 1..]);
    Step::Path(FinitePath::new(edges))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub paths: Vec<FinitePath>,
    /// Set when an unwrapped orbit stopped early at the fiber maximum.
    pub stopped_at: Option<Step>,
}

/// Iterates the successor `steps` times. With `wrap`, the fiber maximum is
/// followed by the fiber minimum (a cyclic model of the fiber).
pub fn vershik_orbit(
    od: &OrderedBratteliDiagram,
    p: &FinitePath,
    steps: usize,
    wrap: bool,
) -> Orbit {
    let mut paths = Vec::with_capacity(steps + 1);
    paths.push(p.clone());
    let mut cur = p.clone();
    for _ in 0..steps {
        cur = match vershik_successor(od, &cur) {
            Step::Path(q) => q,
            _ if wrap => FinitePath::new(extreme_path_to(od, cur.depth(), cur.range(od), false)),
            boundary => {
                return Orbit {
                    paths,
                    stopped_at: Some(boundary),
                }
            }
        };
        paths.push(cur.clone());
    }
    Orbit {
        paths,
        stopped_at: None,
    }
}

/// Canonical bijection between depth-`cuts[j]` paths of a diagram and
/// depth-`j` paths of its telescoping along `cuts`.
#[derive(Clone, Debug)]
pub struct PathTransport {
    cuts: Vec<usize>,
    /// `lookup[j-1]`: constituent path to telescoped edge index.
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    constituents: Vec<Vec<Vec<usize>>>,
}

impl PathTransport {
    pub fn new(telescoped: &OrderedBratteliDiagram, cuts: &[usize]) -> Self {
        let t = telescoped.base();
        let mut lookup = Vec::with_capacity(t.depth());
        let mut constituents = Vec::with_capacity(t.depth());
        for j in 1..=t.depth() {
            let paths: Vec<Vec<usize>> = (0..t.edges(j).len())
                .map(|i| t.constituents(j, i).expect("telescoped diagram").to_vec())
                .collect();
            lookup.push(
                paths
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, p)| (p, i))
                    .collect(),
            );
            constituents.push(paths);
        }
        PathTransport {
            cuts: cuts.to_vec(),
            lookup,
            constituents,
        }
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// Depth-`cuts[j]` path to its depth-`j` image.
    pub fn forward(&self, p: &FinitePath) -> Result<FinitePath, VershikError> {
        let j = self
            .cuts
            .iter()
            .position(|&c| c == p.depth())
            .ok_or(VershikError::NotACut(p.depth()))?;
        (1..=j)
            .map(|t| {
                let seg = &p.edges[self.cuts[t - 1]..self.cuts[t]];
                self.lookup[t - 1]
                    .get(seg)
                    .copied()
                    .ok_or(VershikError::NotComposable {
                        level: self.cuts[t - 1],
                    })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FinitePath::new)
    }

    pub fn backward(&self, q: &FinitePath) -> FinitePath {
        FinitePath::new(
            q.edges
                .iter()
                .enumerate()
                .flat_map(|(j, &e)| self.constituents[j][e].iter().copied())
                .collect(),
        )
    }
}
