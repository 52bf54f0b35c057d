//! Ordered Bratteli diagrams: per-fiber ranks, lexicographic transport under
//! telescoping, min/max trees, the finite proper-ordering test, Skau orders.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{BratteliDiagram, DiagramError, Simplicity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("level {level}: rank data has {got} entries for {expected} edges")]
    RankLength {
        level: usize,
        got: usize,
        expected: usize,
    },
    #[error("level {level}, vertex {vertex}: ranks are not a bijection onto 0..{size}")]
    RankNotBijective {
        level: usize,
        vertex: usize,
        size: usize,
    },
    #[error("no order rule to rank levels beyond {0}")]
    NoExtensionRule(usize),
    #[error("diagram is not simple within horizon {0}")]
    NoWitnessWithinHorizon(usize),
}

/// How levels pulled from a provider get ranked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderRule {
    /// Rank by edge index within the fiber.
    EdgeIndex,
    /// Rank by source vertex, ties by edge index.
    SourceThenIndex,
}

impl OrderRule {
    fn ranks_for(self, d: &BratteliDiagram, n: usize) -> Vec<usize> {
        let edges = d.edges(n);
        let mut ranks = vec![0; edges.len()];
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); d.vertex_count(n)];
        for (i, e) in edges.iter().enumerate() {
            fibers[e.range].push(i);
        }
        for fiber in fibers.iter_mut() {
            if self == OrderRule::SourceThenIndex {
                fiber.sort_by_key(|&i| (edges[i].source, i));
            }
            for (r, &i) in fiber.iter().enumerate() {
                ranks[i] = r;
            }
        }
        ranks
    }
}

/// A diagram with a total order on each fiber `r^{-1}(v)`, stored as ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBratteliDiagram {
    base: BratteliDiagram,
    /// `ranks[n-1][e]`: position of edge `e` of `E_n` within its fiber.
    ranks: Vec<Vec<usize>>,
    /// `fibers[n-1][v]`: edges of `r^{-1}(v)` in increasing order.
    fibers: Vec<Vec<Vec<usize>>>,
    rule: Option<OrderRule>,
}

impl OrderedBratteliDiagram {
    pub fn new(base: BratteliDiagram, ranks: Vec<Vec<usize>>) -> Result<Self, OrderingError> {
        Self::build(base, ranks, None)
    }

    /// Ranks every level by `rule`; provider-backed diagrams can then be extended.
    pub fn with_rule(base: BratteliDiagram, rule: OrderRule) -> Self {
        let ranks = (1..=base.depth())
            .map(|n| rule.ranks_for(&base, n))
            .collect();
        Self::build(base, ranks, Some(rule)).expect("rule ranks are bijective")
    }

    fn build(
        base: BratteliDiagram,
        ranks: Vec<Vec<usize>>,
        rule: Option<OrderRule>,
    ) -> Result<Self, OrderingError> {
        if ranks.len() != base.depth() {
            return Err(OrderingError::RankLength {
                level: ranks.len().min(base.depth()) + 1,
                got: ranks.len(),
                expected: base.depth(),
            });
        }
        let mut fibers = Vec::with_capacity(base.depth());
        for n in 1..=base.depth() {
            let edges = base.edges(n);
            let r = &ranks[n - 1];
            if r.len() != edges.len() {
                return Err(OrderingError::RankLength {
                    level: n,
                    got: r.len(),
                    expected: edges.len(),
                });
            }
            let mut level: Vec<Vec<Option<usize>>> = vec![Vec::new(); base.vertex_count(n)];
            for e in edges {
                level[e.range].push(None);
            }
            for (i, e) in edges.iter().enumerate() {
                let slot = level[e.range].get_mut(r[i]);
                match slot {
                    Some(s @ None) => *s = Some(i),
                    _ => {
                        return Err(OrderingError::RankNotBijective {
                            level: n,
                            vertex: e.range,
                            size: level[e.range].len(),
                        })
                    }
                }
            }
            fibers.push(
                level
                    .into_iter()
                    .map(|f| f.into_iter().map(|x| x.expect("filled")).collect())
                    .collect(),
            );
        }
        Ok(OrderedBratteliDiagram {
            base,
            ranks,
            fibers,
            rule,
        })
    }

    pub fn base(&self) -> &BratteliDiagram {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    pub fn rule(&self) -> Option<OrderRule> {
        self.rule
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn rank(&self, n: usize, e: usize) -> usize {
        self.ranks[n - 1][e]
    }

    /// Edges into `v` at level `n`, lowest rank first.
    pub fn fiber(&self, n: usize, v: usize) -> &[usize] {
        &self.fibers[n - 1][v]
    }

    pub fn min_edge(&self, n: usize, v: usize) -> usize {
        self.fibers[n - 1][v][0]
    }

    pub fn max_edge(&self, n: usize, v: usize) -> usize {
        *self.fibers[n - 1][v].last().expect("nonempty fiber")
    }

    pub fn is_min(&self, n: usize, e: usize) -> bool {
        self.rank(n, e) == 0
    }

    pub fn is_max(&self, n: usize, e: usize) -> bool {
        let v = self.base.edge(n, e).range;
        self.rank(n, e) + 1 == self.fibers[n - 1][v].len()
    }

    pub fn next_edge(&self, n: usize, e: usize) -> Option<usize> {
        let v = self.base.edge(n, e).range;
        self.fibers[n - 1][v].get(self.rank(n, e) + 1).copied()
    }

    pub fn prev_edge(&self, n: usize, e: usize) -> Option<usize> {
        let v = self.base.edge(n, e).range;
        self.rank(n, e)
            .checked_sub(1)
            .map(|r| self.fibers[n - 1][v][r])
    }

    /// Truncated or extended (through the provider and order rule) to `depth`.
    pub fn at_depth(&self, depth: usize) -> Result<OrderedBratteliDiagram, OrderingError> {
        if depth <= self.depth() {
            let base = self.base.truncated(depth);
            let ranks = self.ranks[..depth].to_vec();
            return Self::build(base, ranks, self.rule);
        }
        let rule = self
            .rule
            .ok_or(OrderingError::NoExtensionRule(self.depth()))?;
        let base = self.base.extended_to(depth)?;
        let mut ranks = self.ranks.clone();
        for n in self.depth() + 1..=depth {
            ranks.push(rule.ranks_for(&base, n));
        }
        Self::build(base, ranks, Some(rule))
    }

    /// Telescoping with the induced lexicographic order: composite edges in a
    /// fiber compare at the highest level where they differ.
    pub fn lex_telescope(&self, cuts: &[usize]) -> Result<OrderedBratteliDiagram, OrderingError> {
        let t = self.base.telescope(cuts)?;
        let mut ranks = Vec::with_capacity(t.depth());
        for j in 1..=t.depth() {
            let a = cuts[j - 1];
            let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); t.vertex_count(j)];
            for (i, e) in t.edges(j).iter().enumerate() {
                fibers[e.range].push(i);
            }
            let key = |i: usize| -> Vec<usize> {
                let path = t.constituents(j, i).expect("telescoped");
                path.iter()
                    .enumerate()
                    .rev()
                    .map(|(off, &e)| self.rank(a + 1 + off, e))
                    .collect()
            };
            let mut level = vec![0; t.edges(j).len()];
            for fiber in fibers.iter_mut() {
                fiber.sort_by_cached_key(|&i| key(i));
                for (r, &i) in fiber.iter().enumerate() {
                    level[i] = r;
                }
            }
            ranks.push(level);
        }
        Self::build(t, ranks, None)
    }

    pub fn min_max_trees(&self) -> (MinMaxTree, MinMaxTree) {
        let pick = |f: &dyn Fn(usize, usize) -> usize| MinMaxTree {
            edges: (1..=self.depth())
                .map(|n| (0..self.base.vertex_count(n)).map(|v| f(n, v)).collect())
                .collect(),
        };
        (
            pick(&|n, v| self.min_edge(n, v)),
            pick(&|n, v| self.max_edge(n, v)),
        )
    }

    /// Finite-depth version of the unique-branch criterion for `T_min`, `T_max`.
    ///
    /// Refutations are judged against the whole truncation (at least `depth`
    /// levels), so a `NotProper` verdict does not change for smaller depths.
    pub fn properly_ordered_within(&self, depth: usize) -> Result<ProperOrder, OrderingError> {
        let window = depth.max(self.depth());
        let full = self.at_depth(window)?;
        let (tmin, tmax) = full.min_max_trees();

        for (tree, extreme) in [(&tmin, Extreme::Min), (&tmax, Extreme::Max)] {
            if let Branches::Split { level } = tree.chain(&full.base, window) {
                return Ok(ProperOrder::NotProper(Violation::TwoBranches {
                    extreme,
                    level,
                }));
            }
        }
        if full.base.is_simple_within(window)? == Simplicity::NoWitnessWithinHorizon {
            return Ok(ProperOrder::NotProper(Violation::NotSimple {
                horizon: window,
            }));
        }

        let d = full.at_depth(depth)?;
        let (tmin, tmax) = d.min_max_trees();
        let (min_prefix, max_prefix) =
            match (tmin.chain(&d.base, depth), tmax.chain(&d.base, depth)) {
                (Branches::Unique(a), Branches::Unique(b)) => (a, b),
                _ => return Ok(ProperOrder::UndeterminedAtDepth),
            };
        let cuts = match d.base.is_simple_within(depth)? {
            Simplicity::SimpleWitness { cuts } => cuts,
            Simplicity::NoWitnessWithinHorizon => return Ok(ProperOrder::UndeterminedAtDepth),
        };
        let total =
            |k: usize| -> Result<u64, DiagramError> { Ok(d.base.path_counts(k)?.iter().sum()) };
        if total(depth)? <= total(cuts[cuts.len() - 2])? {
            return Ok(ProperOrder::UndeterminedAtDepth);
        }
        Ok(ProperOrder::ProperWitness {
            min_prefix,
            max_prefix,
        })
    }

    /// Prefix of the unique min (or max) branch surviving to the truncation
    /// depth: length `N - 1`, or `N` when the last step is also unique.
    /// `Err(level)` names the vertex level where two branches survive.
    pub fn extreme_branch(&self, max: bool) -> Result<Vec<usize>, usize> {
        let (tmin, tmax) = self.min_max_trees();
        let tree = if max { tmax } else { tmin };
        match tree.chain(&self.base, self.depth()) {
            Branches::Unique(p) => Ok(p),
            Branches::Split { level } => Err(level),
        }
    }

    /// Graphviz rendering with edges labelled by rank.
    pub fn to_dot(&self) -> String {
        self.base
            .dot_with_labels(|n, e| Some(self.rank(n, e).to_string()))
    }
}

/// Telescope to positive matrices, then rank each fiber by
/// source vertex index and then edge index.
pub fn skau_order(
    d: &BratteliDiagram,
    horizon: usize,
) -> Result<OrderedBratteliDiagram, OrderingError> {
    let cuts = match d.is_simple_within(horizon)? {
        Simplicity::SimpleWitness { cuts } => cuts,
        Simplicity::NoWitnessWithinHorizon => {
            return Err(OrderingError::NoWitnessWithinHorizon(horizon))
        }
    };
    let t = d.at_depth(horizon)?.telescope(&cuts)?;
    let ranks = (1..=t.depth())
        .map(|n| OrderRule::SourceThenIndex.ranks_for(&t, n))
        .collect();
    OrderedBratteliDiagram::build(t, ranks, None)
}

/// The min (or max) edge into each vertex at levels `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinMaxTree {
    /// `edges[n-1][v]`: the tree edge with range `v` at level `n`.
    pub edges: Vec<Vec<usize>>,
}

enum Branches {
    Unique(Vec<usize>),
    Split { level: usize },
}

impl MinMaxTree {
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// `alive[n][v]`: `v` in `V_n` has a tree descendant at level `to`.
    fn alive(&self, d: &BratteliDiagram, to: usize) -> Vec<Vec<bool>> {
        let mut alive: Vec<Vec<bool>> = (0..=to).map(|n| vec![false; d.vertex_count(n)]).collect();
        alive[to].iter_mut().for_each(|a| *a = true);
        for n in (1..=to).rev() {
            for (v, &e) in self.edges[n - 1].iter().enumerate() {
                if alive[n][v] {
                    alive[n - 1][d.edge(n, e).source] = true;
                }
            }
        }
        alive
    }

    /// Follows the branch from the root while it is the only one surviving to
    /// `survive_to`. Splits at vertex levels up to `survive_to - 2` refute
    /// uniqueness; a split at `survive_to - 1` only shortens the prefix.
    fn chain(&self, d: &BratteliDiagram, survive_to: usize) -> Branches {
        let alive = self.alive(d, survive_to);
        let mut v = 0usize;
        let mut prefix = Vec::new();
        for n in 0..survive_to {
            let children: Vec<usize> = (0..d.vertex_count(n + 1))
                .filter(|&w| alive[n + 1][w] && d.edge(n + 1, self.edges[n][w]).source == v)
                .collect();
            match children.as_slice() {
                [w] => {
                    prefix.push(self.edges[n][*w]);
                    v = *w;
                }
                _ if n + 1 == survive_to => break,
                _ => return Branches::Split { level: n },
            }
        }
        Branches::Unique(prefix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extreme {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Two tree children of the candidate branch at vertex level `level` both survive.
    TwoBranches {
        extreme: Extreme,
        level: usize,
    },
    NotSimple {
        horizon: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProperOrder {
    ProperWitness {
        min_prefix: Vec<usize>,
        max_prefix: Vec<usize>,
    },
    NotProper(Violation),
    UndeterminedAtDepth,
}

impl ProperOrder {
    pub fn is_proper(&self) -> bool {
        matches!(self, ProperOrder::ProperWitness { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diagram::Edge;
    use crate::matrix::IncidenceMatrix;

    #[test]
    fn rank_validation() {
        let d = catalog::worked_example();
        let mut ranks: Vec<Vec<usize>> = catalog::index_ranks(&d);
        assert!(OrderedBratteliDiagram::new(d.clone(), ranks.clone()).is_ok());
        ranks[1][0] = 5;
        assert!(matches!(
            OrderedBratteliDiagram::new(d.clone(), ranks),
            Err(OrderingError::RankNotBijective { level: 2, .. })
        ));
        assert!(matches!(
            OrderedBratteliDiagram::new(d, vec![]),
            Err(OrderingError::RankLength { .. })
        ));
    }

    #[test]
    fn odometer_pairs_reverse_significance() {
        let od = catalog::odometer(&[2, 2, 2, 2]);
        let t = od.lex_telescope(&[0, 2, 4]).unwrap();
        // constituents (a, b) are sorted (0,0),(0,1),(1,0),(1,1); value is a + 2b
        for j in 1..=2 {
            assert_eq!(t.ranks()[j - 1], vec![0, 2, 1, 3]);
        }
        let same = od.lex_telescope(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(same.ranks(), od.ranks());
    }

    #[test]
    fn odometer_is_proper_with_zero_prefix() {
        let od = catalog::odometer(&[2; 6]);
        let (tmin, tmax) = od.min_max_trees();
        assert_eq!(tmin.edges, vec![vec![0]; 6]);
        assert_eq!(tmax.edges, vec![vec![1]; 6]);
        for depth in 2..=6 {
            assert_eq!(
                od.properly_ordered_within(depth).unwrap(),
                ProperOrder::ProperWitness {
                    min_prefix: vec![0; depth],
                    max_prefix: vec![1; depth],
                }
            );
        }
    }

    #[test]
    fn persistent_min_chains_are_not_proper() {
        let od = catalog::two_min_chains(6);
        for depth in 1..=6 {
            assert_eq!(
                od.properly_ordered_within(depth).unwrap(),
                ProperOrder::NotProper(Violation::TwoBranches {
                    extreme: Extreme::Min,
                    level: 0
                })
            );
        }
    }

    #[test]
    fn worked_example_skau() {
        let d = catalog::worked_example();
        let od = skau_order(&d, 3).unwrap();
        assert_eq!(
            od.base().incidence_matrix(2).unwrap(),
            IncidenceMatrix::from_rows(&[vec![2, 3], vec![1, 3]]).unwrap()
        );
        assert!(od.properly_ordered_within(2).unwrap().is_proper());
        for v in 0..2 {
            assert_eq!(od.base().edge(2, od.min_edge(2, v)).source, 0);
            assert_eq!(od.base().edge(2, od.max_edge(2, v)).source, 1);
        }
    }

    #[test]
    fn skau_on_positive_diagram_keeps_levels() {
        let d = catalog::stationary(
            &IncidenceMatrix::from_rows(&[vec![1, 1], vec![2, 1]]).unwrap(),
            4,
        )
        .unwrap();
        let od = skau_order(&d, d.depth()).unwrap();
        assert_eq!(od.depth(), d.depth());
        for n in 2..=od.depth() {
            for v in 0..2 {
                assert_eq!(od.base().edge(n, od.min_edge(n, v)).source, 0);
            }
        }
        assert!(matches!(
            skau_order(&catalog::parallel_chains(4), 4),
            Err(OrderingError::NoWitnessWithinHorizon(4))
        ));
    }

    #[test]
    fn extension_uses_rule() {
        let od = catalog::odometer(&[2, 3]);
        assert!(matches!(
            od.at_depth(3),
            Err(OrderingError::NoExtensionRule(2))
        ));
        let st = catalog::stationary_ordered(
            &IncidenceMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap(),
            2,
        )
        .unwrap();
        let deeper = st.at_depth(6).unwrap();
        assert_eq!(deeper.depth(), 6);
        assert_eq!(deeper.ranks()[5], st.ranks()[1]);
    }

    #[test]
    fn dot_labels_ranks() {
        let od = catalog::odometer(&[2, 2]);
        let dot = od.to_dot();
        assert!(dot.contains("label=\"1\""));
        let d = BratteliDiagram::new(vec![1, 1], vec![vec![Edge::new(0, 0)]]).unwrap();
        let single = OrderedBratteliDiagram::new(d, vec![vec![0]]).unwrap();
        assert_eq!(single.min_max_trees().0.edge_count(), 1);
    }
}
