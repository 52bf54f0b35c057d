//! Ready-made diagrams: the two-level example with its telescoping, odometers,
//! stationary diagrams and seeded random simple diagrams.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{
    BratteliDiagram, DiagramError, Edge, EventuallyPeriodicProvider, StationaryProvider,
};
use crate::matrix::IncidenceMatrix;
use crate::ordering::{OrderRule, OrderedBratteliDiagram};

/// Three levels: the root, two vertices, then the 4- and 2-vertex levels whose
/// incidence matrices are `[[0,1],[2,1],[1,0],[0,2]]` and `[[2,1,0,0],[1,0,1,1]]`.
pub fn worked_example() -> BratteliDiagram {
    let e = Edge::new;
    BratteliDiagram::new(
        vec![1, 2, 4, 2],
        vec![
            vec![e(0, 0), e(0, 1)],
            vec![
                e(0, 2),
                e(0, 1),
                e(1, 0),
                e(1, 3),
                e(1, 1),
                e(0, 1),
                e(1, 3),
            ],
            vec![e(2, 1), e(3, 1), e(0, 1), e(0, 0), e(1, 0), e(0, 0)],
        ],
    )
    .expect("valid diagram")
}

/// Ranks equal to positions within each fiber in edge-index order.
pub fn index_ranks(d: &BratteliDiagram) -> Vec<Vec<usize>> {
    (1..=d.depth())
        .map(|n| {
            let mut seen = vec![0usize; d.vertex_count(n)];
            d.edges(n)
                .iter()
                .map(|e| {
                    seen[e.range] += 1;
                    seen[e.range] - 1
                })
                .collect()
        })
        .collect()
}

/// Finite odometer with radices `d_1, ..., d_k`; edge `i` has rank `i`.
pub fn odometer(radices: &[usize]) -> OrderedBratteliDiagram {
    let d = BratteliDiagram::new(
        vec![1; radices.len() + 1],
        radices.iter().map(|&r| vec![Edge::new(0, 0); r]).collect(),
    )
    .expect("radices must be positive");
    let ranks = index_ranks(&d);
    OrderedBratteliDiagram::new(d, ranks).expect("index ranks")
}

/// Odometer whose radices repeat `period` forever, truncated at `depth`.
pub fn periodic_odometer(period: &[usize], depth: usize) -> OrderedBratteliDiagram {
    let p = Arc::new(EventuallyPeriodicProvider::odometer(&[], period));
    let d = BratteliDiagram::from_provider(p, depth).expect("periodic provider never runs out");
    OrderedBratteliDiagram::with_rule(d, OrderRule::EdgeIndex)
}

/// Root to each vertex once, then `copies` levels with incidence matrix `m`.
pub fn stationary(m: &IncidenceMatrix, copies: usize) -> Result<BratteliDiagram, DiagramError> {
    BratteliDiagram::from_provider(Arc::new(StationaryProvider::new(m.clone())?), copies + 1)
}

pub fn stationary_ordered(
    m: &IncidenceMatrix,
    copies: usize,
) -> Result<OrderedBratteliDiagram, DiagramError> {
    Ok(OrderedBratteliDiagram::with_rule(
        stationary(m, copies)?,
        OrderRule::EdgeIndex,
    ))
}

/// Two vertices per level joined only to themselves: never simple.
pub fn parallel_chains(depth: usize) -> BratteliDiagram {
    stationary(&IncidenceMatrix::identity(2), depth.saturating_sub(1)).expect("square matrix")
}

/// Full 2x2 levels where each vertex's min edge comes from itself, so two min
/// branches persist at every depth.
pub fn two_min_chains(depth: usize) -> OrderedBratteliDiagram {
    let full = IncidenceMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).expect("2x2");
    let d = stationary(&full, depth.saturating_sub(1)).expect("square matrix");
    // level edges are (0->0), (1->0), (0->1), (1->1)
    let mut ranks = vec![vec![0, 0]];
    ranks.extend((2..=depth).map(|_| vec![0, 1, 1, 0]));
    OrderedBratteliDiagram::new(d, ranks).expect("valid ranks")
}

/// A diagram with 2 to `max_width` vertices per level and multiplicities up to 2.
/// Level 2 and the last level are entrywise positive, so the result is simple
/// within its depth whenever `depth >= 2`.
pub fn random_simple<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    max_width: usize,
) -> BratteliDiagram {
    assert!(depth >= 1 && max_width >= 2);
    let mut matrices = Vec::with_capacity(depth);
    let mut prev = 1usize;
    for n in 1..=depth {
        let k = rng.gen_range(2..=max_width);
        let positive = n == 2 || n == depth || n == 1;
        let mut rows: Vec<Vec<u64>> = (0..k)
            .map(|_| {
                (0..prev)
                    .map(|_| {
                        if positive {
                            rng.gen_range(1..=2)
                        } else {
                            rng.gen_range(0..=2)
                        }
                    })
                    .collect()
            })
            .collect();
        for row in rows.iter_mut() {
            if row.iter().all(|&x| x == 0) {
                row[rng.gen_range(0..prev)] = 1;
            }
        }
        for j in 0..prev {
            if rows.iter().all(|r| r[j] == 0) {
                rows[rng.gen_range(0..k)][j] = 1;
            }
        }
        matrices.push(IncidenceMatrix::from_rows(&rows).expect("rectangular"));
        prev = k;
    }
    BratteliDiagram::from_matrices(&matrices).expect("surjective matrices")
}

/// Uniformly shuffled ranks in every fiber.
pub fn random_ranks<R: Rng + ?Sized>(rng: &mut R, d: &BratteliDiagram) -> Vec<Vec<usize>> {
    (1..=d.depth())
        .map(|n| {
            let mut ranks = vec![0; d.edges(n).len()];
            for v in 0..d.vertex_count(n) {
                let mut fiber: Vec<usize> = d
                    .edges(n)
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.range == v)
                    .map(|(i, _)| i)
                    .collect();
                fiber.shuffle(rng);
                for (r, i) in fiber.into_iter().enumerate() {
                    ranks[i] = r;
                }
            }
            ranks
        })
        .collect()
}

pub fn random_ordered<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    max_width: usize,
) -> OrderedBratteliDiagram {
    let d = random_simple(rng, depth, max_width);
    let ranks = random_ranks(rng, &d);
    OrderedBratteliDiagram::new(d, ranks).expect("shuffled ranks are bijective")
}
