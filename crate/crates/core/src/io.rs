//! JSON documents for diagrams: each level is coded by its `(source, range)` list.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::diagram::{BratteliDiagram, DiagramError, Edge};
use crate::ordering::{OrderedBratteliDiagram, OrderingError};

/// `{"levels": [...], "edges": [[[s, r], ...], ...], "ranks"?: ..., "meta"?: {...}}`.
///
/// `ranks[n-1][v]` lists the ranks of the edges of `r^{-1}(v)` in edge-index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub levels: Vec<usize>,
    pub edges: Vec<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Map<String, Value>>,
}

impl DiagramDocument {
    pub fn from_diagram(d: &BratteliDiagram) -> Self {
        DiagramDocument {
            levels: d.vertex_counts().to_vec(),
            edges: (1..=d.depth())
                .map(|n| d.edges(n).iter().map(|e| [e.source, e.range]).collect())
                .collect(),
            ranks: None,
            meta: None,
        }
    }

    pub fn from_ordered(od: &OrderedBratteliDiagram) -> Self {
        let d = od.base();
        let mut doc = Self::from_diagram(d);
        doc.ranks = Some(
            (1..=d.depth())
                .map(|n| {
                    let mut per_vertex = vec![Vec::new(); d.vertex_count(n)];
                    for (i, e) in d.edges(n).iter().enumerate() {
                        per_vertex[e.range].push(od.rank(n, i));
                    }
                    per_vertex
                })
                .collect(),
        );
        doc
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta
            .get_or_insert_with(Map::new)
            .insert(key.into(), value);
        self
    }

    pub fn diagram(&self) -> Result<BratteliDiagram, DiagramError> {
        BratteliDiagram::new(
            self.levels.clone(),
            self.edges
                .iter()
                .map(|l| l.iter().map(|&[s, r]| Edge::new(s, r)).collect())
                .collect(),
        )
    }

    /// Ordered diagram, or `None` when the document carries no ranks.
    pub fn ordered(&self) -> Result<Option<OrderedBratteliDiagram>, OrderingError> {
        let Some(ranks) = &self.ranks else {
            return Ok(None);
        };
        let d = self.diagram()?;
        if ranks.len() != d.depth() {
            return Err(OrderingError::RankLength {
                level: ranks.len().min(d.depth()) + 1,
                got: ranks.len(),
                expected: d.depth(),
            });
        }
        let mut flat = Vec::with_capacity(d.depth());
        for (i, per_vertex) in ranks.iter().enumerate() {
            let n = i + 1;
            let mut cursor = vec![0usize; per_vertex.len()];
            let mut level = Vec::with_capacity(d.edges(n).len());
            for e in d.edges(n) {
                let r = per_vertex
                    .get(e.range)
                    .and_then(|f| f.get(cursor[e.range]))
                    .copied()
                    .ok_or(OrderingError::RankNotBijective {
                        level: n,
                        vertex: e.range,
                        size: per_vertex.get(e.range).map_or(0, Vec::len),
                    })?;
                cursor[e.range] += 1;
                level.push(r);
            }
            flat.push(level);
        }
        OrderedBratteliDiagram::new(d, flat).map(Some)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Format(e.to_string()))
    }
}
