//! The Boolean algebra generated by rotated initial segments `T^k [0, alpha)`,
//! computed on the partition of `[0, 1)` cut out by all generator endpoints.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use super::interval::{CircleIntervalSet, IntervalError};
use crate::real::{order, CertifiedReal, RealError};

/// Largest number of pairwise operations one closure round may perform.
pub const PAIR_GUARD: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("rotation number {0} is rational")]
    RationalRotation(String),
    #[error("generator {0} is not inside (0, 1)")]
    GeneratorOutOfRange(String),
    #[error("closure round {round} needs {pairs} pair operations, above {guard}")]
    Guard { round: u32, pairs: u64, guard: u64 },
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Finite window onto the algebra: shifts `|k| <= shift_range`, then
/// `boolean_depth` rounds of complements, unions and intersections.
#[derive(Clone, Debug)]
pub struct ReturnAlgebraSpec {
    pub gamma: CertifiedReal,
    pub generators: Vec<CertifiedReal>,
    pub shift_range: u32,
    pub boolean_depth: u32,
}

impl ReturnAlgebraSpec {
    pub fn new(
        gamma: CertifiedReal,
        generators: Vec<CertifiedReal>,
        shift_range: u32,
        boolean_depth: u32,
    ) -> Self {
        ReturnAlgebraSpec {
            gamma,
            generators,
            shift_range,
            boolean_depth,
        }
    }

    pub fn validate(&self, cap: u32) -> Result<(), AlgebraError> {
        if self.gamma.is_rational() {
            return Err(AlgebraError::RationalRotation(self.gamma.to_string()));
        }
        for a in &self.generators {
            let inside = order(&CertifiedReal::zero(), a, cap)? == Ordering::Less
                && order(a, &CertifiedReal::one(), cap)? == Ordering::Less;
            if !inside {
                return Err(AlgebraError::GeneratorOutOfRange(a.to_string()));
            }
        }
        Ok(())
    }

    /// `(k, generator index, T^k [0, alpha))` for every shift and generator.
    pub fn generator_sets(
        &self,
        cap: u32,
    ) -> Result<Vec<(i64, usize, CircleIntervalSet)>, AlgebraError> {
        let r = self.shift_range as i64;
        let mut out = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            let base = CircleIntervalSet::initial(a, cap)?;
            for k in -r..=r {
                out.push((k, i, base.rotate(&self.gamma, k, cap)?));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct CellMask(Vec<u64>);

impl CellMask {
    fn empty(cells: usize) -> Self {
        CellMask(vec![0; cells.div_ceil(64)])
    }

    fn full(cells: usize) -> Self {
        let mut m = Self::empty(cells);
        for i in 0..cells {
            m.set(i);
        }
        m
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn zip(&self, o: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        CellMask(self.0.iter().zip(&o.0).map(|(&a, &b)| f(a, b)).collect())
    }

    fn and(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a & b)
    }

    fn or(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a | b)
    }

    fn not(&self, full: &Self) -> Self {
        self.zip(full, |a, f| !a & f)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

/// Sorted distinct breakpoints `0 = p_0 < ... < p_m = 1`; cell `i` is `[p_i, p_{i+1})`.
struct Partition {
    points: Vec<CertifiedReal>,
    cap: u32,
}

impl Partition {
    fn new<'a>(
        sets: impl Iterator<Item = &'a CircleIntervalSet>,
        cap: u32,
    ) -> Result<Self, AlgebraError> {
        let mut points = vec![CertifiedReal::zero(), CertifiedReal::one()];
        for s in sets {
            points.extend(s.boundary());
        }
        let mut failure = None;
        points.sort_by(|a, b| {
            order(a, b, cap).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        let mut distinct: Vec<CertifiedReal> = Vec::with_capacity(points.len());
        for p in points {
            match distinct.last() {
                Some(last) if order(last, &p, cap)? == Ordering::Equal => {}
                _ => distinct.push(p),
            }
        }
        Ok(Partition {
            points: distinct,
            cap,
        })
    }

    fn cells(&self) -> usize {
        self.points.len() - 1
    }

    fn index(&self, x: &CertifiedReal) -> Result<usize, AlgebraError> {
        let (mut lo, mut hi) = (0, self.points.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match order(&self.points[mid], x, self.cap)? {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(mid),
            }
        }
        unreachable!("every endpoint is a breakpoint")
    }

    fn mask(&self, s: &CircleIntervalSet) -> Result<CellMask, AlgebraError> {
        let mut m = CellMask::empty(self.cells());
        for (a, b) in s.intervals() {
            for i in self.index(a)?..self.index(b)? {
                m.set(i);
            }
        }
        Ok(m)
    }

    fn set(&self, m: &CellMask) -> CircleIntervalSet {
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < self.cells() {
            if m.get(i) {
                let start = i;
                while i < self.cells() && m.get(i) {
                    i += 1;
                }
                pieces.push((self.points[start].clone(), self.points[i].clone()));
            } else {
                i += 1;
            }
        }
        // runs of cells are already sorted, disjoint and separated
        CircleIntervalSet::from_intervals(pieces, self.cap).expect("breakpoints are ordered")
    }
}

fn closure(gens: &[CellMask], depth: u32, cells: usize) -> Result<Vec<CellMask>, AlgebraError> {
    let full = CellMask::full(cells);
    let mut current: HashSet<CellMask> = gens.iter().cloned().collect();
    current.insert(CellMask::empty(cells));
    current.insert(full.clone());
    for round in 1..=depth {
        let mut t: Vec<CellMask> = current.iter().cloned().collect();
        t.extend(current.iter().map(|m| m.not(&full)));
        t.sort();
        t.dedup();
        let pairs = (t.len() as u64) * (t.len() as u64 + 1) / 2;
        if pairs > PAIR_GUARD {
            return Err(AlgebraError::Guard {
                round,
                pairs,
                guard: PAIR_GUARD,
            });
        }
        let mut next: HashSet<CellMask> = t.iter().cloned().collect();
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                next.insert(t[i].and(&t[j]));
                next.insert(t[i].or(&t[j]));
            }
        }
        current = next;
    }
    let mut out: Vec<CellMask> = current.into_iter().collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Elements of the depth-bounded algebra, `∅` first and `[0, 1)` last.
pub fn generate_algebra(
    spec: &ReturnAlgebraSpec,
    cap: u32,
) -> Result<Vec<CircleIntervalSet>, AlgebraError> {
    spec.validate(cap)?;
    let gens = spec.generator_sets(cap)?;
    let part = Partition::new(gens.iter().map(|g| &g.2), cap)?;
    let masks = gens
        .iter()
        .map(|g| part.mask(&g.2))
        .collect::<Result<Vec<_>, _>>()?;
    let elements = closure(&masks, spec.boolean_depth, part.cells())?;
    Ok(elements.iter().map(|m| part.set(m)).collect())
}

/// Sorts exact-or-separable reals, merging certified-equal neighbours.
pub fn sorted_distinct(
    mut values: Vec<CertifiedReal>,
    cap: u32,
) -> Result<Vec<CertifiedReal>, RealError> {
    let mut seen = HashSet::new();
    values.retain(|v| seen.insert(v.clone()));
    let mut failure = None;
    values.sort_by(|a, b| {
        order(a, b, cap).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out: Vec<CertifiedReal> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(last) if order(last, &v, cap)? == Ordering::Equal => {}
            _ => out.push(v),
        }
    }
    Ok(out)
}

/// `{mu(U) : U in the algebra}`, sorted and deduplicated.
pub fn density_set(spec: &ReturnAlgebraSpec, cap: u32) -> Result<Vec<CertifiedReal>, AlgebraError> {
    density_set_of(&generate_algebra(spec, cap)?, cap)
}

pub fn density_set_of(
    algebra: &[CircleIntervalSet],
    cap: u32,
) -> Result<Vec<CertifiedReal>, AlgebraError> {
    Ok(sorted_distinct(
        algebra.iter().map(CircleIntervalSet::measure).collect(),
        cap,
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum AtomSplit {
    /// `witness` meets `atom` and misses part of it.
    Split {
        atom: String,
        witness: String,
    },
    NoSplitFound {
        atom: String,
    },
}

impl AtomSplit {
    pub fn is_split(&self) -> bool {
        matches!(self, AtomSplit::Split { .. })
    }
}

/// For every atom of `coarse`, looks for an element of the `fine` output that
/// properly splits it. Intersecting with an atom is a Boolean homomorphism, so
/// the traces of the `fine` output on the atom are exactly the closure of the
/// generator traces; the search over them is exhaustive.
pub fn atom_refinement(
    coarse: &ReturnAlgebraSpec,
    fine: &ReturnAlgebraSpec,
    cap: u32,
) -> Result<Vec<AtomSplit>, AlgebraError> {
    coarse.validate(cap)?;
    fine.validate(cap)?;
    let cg = coarse.generator_sets(cap)?;
    let fg = fine.generator_sets(cap)?;
    let part = Partition::new(cg.iter().chain(&fg).map(|g| &g.2), cap)?;
    let cells = part.cells();

    let coarse_masks = cg
        .iter()
        .map(|g| part.mask(&g.2))
        .collect::<Result<Vec<_>, _>>()?;
    let elements = closure(&coarse_masks, coarse.boolean_depth, cells)?;
    let nonempty: Vec<&CellMask> = elements.iter().filter(|m| !m.is_empty()).collect();
    let atoms: Vec<&CellMask> = nonempty
        .iter()
        .filter(|&&a| !nonempty.iter().any(|&b| b != a && b.and(a) == *b))
        .copied()
        .collect();

    let fine_masks = fg
        .iter()
        .map(|g| part.mask(&g.2))
        .collect::<Result<Vec<_>, _>>()?;
    let full = CellMask::full(cells);
    Ok(atoms
        .into_iter()
        .map(|a| {
            let atom = part.set(a).symbolic();
            match split_within(a, &fine_masks, fine.boolean_depth, &full) {
                Some(w) => AtomSplit::Split {
                    atom,
                    witness: part.set(&w).symbolic(),
                },
                None => AtomSplit::NoSplitFound { atom },
            }
        })
        .collect())
}

/// An element of the depth-`depth` closure of `gens` whose trace on `atom` is
/// neither empty nor all of `atom`.
fn split_within(
    atom: &CellMask,
    gens: &[CellMask],
    depth: u32,
    full: &CellMask,
) -> Option<CellMask> {
    use std::collections::HashMap;
    let proper = |trace: &CellMask| !trace.is_empty() && trace != atom;
    // trace on the atom -> one full element with that trace
    let mut current: HashMap<CellMask, CellMask> = HashMap::new();
    for g in gens
        .iter()
        .chain([&CellMask::empty(full.0.len() * 64), full])
    {
        let g = g.and(full);
        current.entry(g.and(atom)).or_insert(g);
    }
    for _ in 0..depth {
        if let Some(w) = current.iter().find(|(t, _)| proper(t)) {
            return Some(w.1.clone());
        }
        let mut t: Vec<(CellMask, CellMask)> = current.clone().into_iter().collect();
        for f in current.values() {
            let c = f.not(full);
            t.push((c.and(atom), c));
        }
        let mut next: HashMap<CellMask, CellMask> = HashMap::new();
        for (tr, f) in &t {
            next.entry(tr.clone()).or_insert_with(|| f.clone());
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let (x, y) = (&t[i].1, &t[j].1);
                for e in [x.and(y), x.or(y)] {
                    next.entry(e.and(atom)).or_insert(e);
                }
            }
        }
        current = next;
    }
    current.into_iter().find(|(t, _)| proper(t)).map(|w| w.1)
}
