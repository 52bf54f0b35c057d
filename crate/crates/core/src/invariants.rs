//! Return-times data of Vershik systems based at `x_max`, the coding by a
//! family of cylinders, window-level conjugacy checks, and the density-set
//! distinguishing pipeline.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::ordering::{OrderedBratteliDiagram, OrderingError};
use crate::real::{order, CertifiedReal, RealError};
use crate::rotation::algebra::{density_set_of, generate_algebra, AlgebraError, ReturnAlgebraSpec};
use crate::rotation::interval::CircleIntervalSet;
use crate::rotation::qtree::{qtree_reals, BinaryPath, QTreeError};
use crate::vershik::{
    extreme_path_to, vershik_predecessor, vershik_successor, FinitePath, PathTransport, Step,
    VershikError,
};

/// Bound on the number of depth-`t` extensions a single cylinder may have.
pub const EXTENSION_GUARD: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Path(#[from] VershikError),
    #[error("two {} branches survive at level {level}", if *.max { "max" } else { "min" })]
    NoUniqueExtreme { max: bool, level: usize },
    #[error("window [{lo}, {hi}] not covered within depth {depth}")]
    WindowNotCovered { lo: i64, hi: i64, depth: usize },
    #[error("duplicate cylinder {0}")]
    DuplicateCylinder(String),
    #[error("cylinder {0} has too many extensions")]
    ExtensionGuard(String),
    #[error("gamma path {0} also occurs among the generators")]
    GammaCollision(String),
    #[error("equal inputs produced different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    QTree(#[from] QTreeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Distinct valid cylinders `[e_1, ..., e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderFamily {
    pub paths: Vec<FinitePath>,
}

impl CylinderFamily {
    pub fn new(
        od: &OrderedBratteliDiagram,
        paths: Vec<FinitePath>,
    ) -> Result<Self, InvariantError> {
        let mut seen = HashSet::new();
        for p in &paths {
            p.validate(od)?;
            if !seen.insert(p) {
                return Err(InvariantError::DuplicateCylinder(p.to_string()));
            }
        }
        Ok(CylinderFamily { paths })
    }

    /// Every path of depth `j`.
    pub fn all_of_depth(od: &OrderedBratteliDiagram, j: usize) -> Result<Self, InvariantError> {
        let mut paths = Vec::new();
        for v in 0..od.base().vertex_count(j) {
            paths.extend(crate::vershik::enumerate_fiber(od, j, v)?.paths);
        }
        Self::new(od, paths)
    }

    pub fn max_depth(&self) -> usize {
        self.paths.iter().map(FinitePath::depth).max().unwrap_or(0)
    }
}

/// Depth-`depth` prefixes of `lambda^i(x_max)` for `i` in `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWindow {
    pub lo: i64,
    pub depth: usize,
    pub prefixes: Vec<FinitePath>,
}

impl OrbitWindow {
    pub fn at(&self, i: i64) -> &FinitePath {
        &self.prefixes[(i - self.lo) as usize]
    }
}

fn extreme_prefix(
    od: &OrderedBratteliDiagram,
    k: usize,
    max: bool,
) -> Result<Option<FinitePath>, InvariantError> {
    let branch = od
        .extreme_branch(max)
        .map_err(|level| InvariantError::NoUniqueExtreme { max, level })?;
    Ok((branch.len() >= k).then(|| FinitePath::new(branch[..k].to_vec())))
}

fn try_orbit(
    od: &OrderedBratteliDiagram,
    k: usize,
    lo: i64,
    hi: i64,
) -> Result<Option<Vec<FinitePath>>, InvariantError> {
    let (Some(xmin), Some(xmax)) = (extreme_prefix(od, k, false)?, extreme_prefix(od, k, true)?)
    else {
        return Ok(None);
    };
    let mut forward = Vec::new();
    if hi >= 1 {
        // lambda(x_max) = x_min
        let mut cur = xmin;
        forward.push(cur.clone());
        for _ in 2..=hi {
            match vershik_successor(od, &cur) {
                Step::Path(p) => cur = p,
                _ => return Ok(None),
            }
            forward.push(cur.clone());
        }
    }
    let mut backward = vec![xmax.clone()];
    let mut cur = xmax;
    for _ in lo.min(0)..0 {
        match vershik_predecessor(od, &cur) {
            Step::Path(p) => cur = p,
            _ => return Ok(None),
        }
        backward.push(cur.clone());
    }
    // backward[m] is lambda^{-m}(x_max), forward[m] is lambda^{m+1}(x_max)
    Ok(Some(
        (lo..=hi)
            .map(|i| {
                if i <= 0 {
                    backward[(-i) as usize].clone()
                } else {
                    forward[(i - 1) as usize].clone()
                }
            })
            .collect(),
    ))
}

/// Orbit prefixes with adaptive deepening: the working depth doubles (pulling
/// more levels from a provider when present) until no fiber boundary is hit.
pub fn orbit_window(
    od: &OrderedBratteliDiagram,
    lo: i64,
    hi: i64,
    min_depth: usize,
) -> Result<OrbitWindow, InvariantError> {
    let mut k = min_depth.max(1);
    loop {
        let work = match od.at_depth((k + 1).max(od.depth())) {
            Ok(w) => w,
            Err(OrderingError::NoExtensionRule(_)) | Err(OrderingError::Diagram(_)) => {
                return Err(InvariantError::WindowNotCovered { lo, hi, depth: k })
            }
            Err(e) => return Err(e.into()),
        };
        if let Some(prefixes) = try_orbit(&work, k, lo, hi)? {
            // a deeper working depth may still be used; report prefixes cut to the request
            let prefixes = prefixes.into_iter().map(|p| p.prefix(min_depth)).collect();
            return Ok(OrbitWindow {
                lo,
                depth: min_depth,
                prefixes,
            });
        }
        let can_grow = work.base().provider().is_some() && work.rule().is_some();
        if k + 1 >= work.depth() && !can_grow {
            return Err(InvariantError::WindowNotCovered { lo, hi, depth: k });
        }
        k = if can_grow {
            k * 2
        } else {
            (k * 2).min(work.depth() - 1)
        };
    }
}

/// `w[i + n] = 1` iff the depth-`j` prefix of `lambda^{base + i}(x_max)` is `cyl`.
pub fn return_window_at(
    od: &OrderedBratteliDiagram,
    cyl: &FinitePath,
    n: u64,
    base: i64,
) -> Result<Vec<u8>, InvariantError> {
    if cyl.depth() > od.depth() {
        return return_window_at(&od.at_depth(cyl.depth())?, cyl, n, base);
    }
    cyl.validate(od)?;
    let n = n as i64;
    if cyl.depth() == 0 {
        return Ok(vec![1; (2 * n + 1) as usize]);
    }
    let orbit = orbit_window(od, base - n, base + n, cyl.depth())?;
    Ok(orbit.prefixes.iter().map(|p| u8::from(p == cyl)).collect())
}

/// Return window of a cylinder, based at `x_max`.
pub fn vershik_return_window(
    od: &OrderedBratteliDiagram,
    cyl: &FinitePath,
    n: u64,
) -> Result<Vec<u8>, InvariantError> {
    return_window_at(od, cyl, n, 0)
}

/// Windows of several cylinders from one orbit computation.
fn family_windows(
    od: &OrderedBratteliDiagram,
    fam: &CylinderFamily,
    n: u64,
    base: i64,
) -> Result<Vec<Vec<u8>>, InvariantError> {
    let n = n as i64;
    let j = fam.max_depth();
    if j == 0 {
        return Ok(fam
            .paths
            .iter()
            .map(|_| vec![1; (2 * n + 1) as usize])
            .collect());
    }
    let orbit = orbit_window(od, base - n, base + n, j)?;
    Ok(fam
        .paths
        .iter()
        .map(|c| {
            orbit
                .prefixes
                .iter()
                .map(|p| u8::from(p.prefix(c.depth()) == *c))
                .collect()
        })
        .collect())
}

/// Letter `i` lists, for each cylinder of `fam`, whether `lambda^{base+i}(x_max)` lies in it.
pub fn ret_code_at(
    od: &OrderedBratteliDiagram,
    fam: &CylinderFamily,
    n: u64,
    base: i64,
) -> Result<Vec<Vec<u8>>, InvariantError> {
    let windows = family_windows(od, fam, n, base)?;
    Ok((0..(2 * n + 1) as usize)
        .map(|i| windows.iter().map(|w| w[i]).collect())
        .collect())
}

pub fn ret_code(
    od: &OrderedBratteliDiagram,
    fam: &CylinderFamily,
    n: u64,
) -> Result<Vec<Vec<u8>>, InvariantError> {
    ret_code_at(od, fam, n, 0)
}

/// Members of a window word, as offsets from the base.
pub fn window_members(word: &[u8]) -> Vec<i64> {
    let n = (word.len() / 2) as i64;
    word.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i as i64 - n)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowMismatch {
    pub cylinder: String,
    pub original: Vec<u8>,
    pub telescoped: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub cuts: Vec<usize>,
    pub window: u64,
    pub cylinders: usize,
    pub mismatches: Vec<WindowMismatch>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Depth-`depth` paths starting with `cyl`.
fn extensions(
    od: &OrderedBratteliDiagram,
    cyl: &FinitePath,
    depth: usize,
) -> Result<Vec<FinitePath>, InvariantError> {
    let d = od.base();
    let mut out = vec![cyl.clone()];
    for n in cyl.depth() + 1..=depth {
        let mut next = Vec::new();
        for p in &out {
            let v = p.range(od);
            for (i, e) in d.edges(n).iter().enumerate() {
                if e.source == v {
                    let mut q = p.edges.clone();
                    q.push(i);
                    next.push(FinitePath::new(q));
                }
            }
        }
        if next.len() > EXTENSION_GUARD {
            return Err(InvariantError::ExtensionGuard(cyl.to_string()));
        }
        out = next;
    }
    Ok(out)
}

/// Carries every cylinder of `fam` into the telescoping along `cuts` (as the
/// union of its extensions to the next cut level) and compares return windows.
pub fn conjugacy_window_check(
    od: &OrderedBratteliDiagram,
    cuts: &[usize],
    fam: &CylinderFamily,
    n: u64,
) -> Result<ConjugacyReport, InvariantError> {
    let tel = od.lex_telescope(cuts)?;
    let transport = PathTransport::new(&tel, cuts);
    let original = family_windows(od, fam, n, 0)?;

    let mut images = Vec::with_capacity(fam.paths.len());
    let mut owners = Vec::new();
    for (c, cyl) in fam.paths.iter().enumerate() {
        let t = cuts
            .iter()
            .position(|&m| m >= cyl.depth())
            .expect("last cut is the depth");
        for ext in extensions(od, cyl, cuts[t])? {
            images.push(transport.forward(&ext)?);
            owners.push(c);
        }
    }
    let image_fam = CylinderFamily { paths: images };
    let image_windows = family_windows(&tel, &image_fam, n, 0)?;
    let mut merged = vec![vec![0u8; (2 * n + 1) as usize]; fam.paths.len()];
    for (w, &c) in image_windows.iter().zip(&owners) {
        for (m, &b) in merged[c].iter_mut().zip(w) {
            *m |= b;
        }
    }
    let mismatches = fam
        .paths
        .iter()
        .zip(original.into_iter().zip(merged))
        .filter(|(_, (a, b))| a != b)
        .map(|(cyl, (a, b))| WindowMismatch {
            cylinder: cyl.to_string(),
            original: a,
            telescoped: b,
        })
        .collect();
    Ok(ConjugacyReport {
        cuts: cuts.to_vec(),
        window: n,
        cylinders: fam.paths.len(),
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwiningReport {
    pub paths_checked: usize,
    pub failures: Vec<String>,
}

/// For every path at every cut depth, transporting then stepping equals
/// stepping then transporting (boundary outcomes must agree too).
pub fn check_intertwining(
    od: &OrderedBratteliDiagram,
    cuts: &[usize],
) -> Result<IntertwiningReport, InvariantError> {
    let tel = od.lex_telescope(cuts)?;
    let transport = PathTransport::new(&tel, cuts);
    let mut checked = 0;
    let mut failures = Vec::new();
    for &m in &cuts[1..] {
        for v in 0..od.base().vertex_count(m) {
            for p in crate::vershik::enumerate_fiber(od, m, v)?.paths {
                let image = transport.forward(&p)?;
                let lhs = match vershik_successor(od, &p) {
                    Step::Path(q) => Step::Path(transport.forward(&q)?),
                    other => other,
                };
                let rhs = vershik_successor(&tel, &image);
                if lhs != rhs {
                    failures.push(p.to_string());
                }
                checked += 1;
            }
        }
    }
    Ok(IntertwiningReport {
        paths_checked: checked,
        failures,
    })
}

/// The depth-`k` min path into `v`, exposed for oracles.
pub fn min_path(od: &OrderedBratteliDiagram, k: usize, v: usize) -> FinitePath {
    FinitePath::new(extreme_path_to(od, k, v, false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub gamma_path: BinaryPath,
    pub shift_range: u32,
    pub boolean_depth: u32,
    pub precision_cap: u32,
}

impl PipelineParams {
    pub fn new(gamma_path: BinaryPath) -> Self {
        PipelineParams {
            gamma_path,
            shift_range: 1,
            boolean_depth: 2,
            precision_cap: 300,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueRecord {
    pub symbolic: String,
    pub decimal: String,
}

impl ValueRecord {
    fn of(x: &CertifiedReal) -> Self {
        ValueRecord {
            symbolic: x.to_string(),
            decimal: x.to_decimal(24),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    S,
    SPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The side whose density set contains the value.
    pub side: Side,
    pub value: ValueRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinguished,
    IndistinguishableAtDepth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineInputs {
    pub s: Vec<BinaryPath>,
    pub s_prime: Vec<BinaryPath>,
    #[serde(flatten)]
    pub params: PipelineParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub inputs: PipelineInputs,
    pub algebra_sizes: [usize; 2],
    pub density_sets: [Vec<ValueRecord>; 2],
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Set when equal inputs were checked to give elementwise-equal algebras.
    pub algebras_equal: Option<bool>,
}

fn spec_for(
    paths: &[BinaryPath],
    gamma: &CertifiedReal,
    params: &PipelineParams,
) -> Result<ReturnAlgebraSpec, InvariantError> {
    Ok(ReturnAlgebraSpec::new(
        gamma.clone(),
        qtree_reals(paths)?,
        params.shift_range,
        params.boolean_depth,
    ))
}

/// A member of `ours` certified distinct from every member of the sorted `theirs`.
fn find_witness(
    preferred: &[CertifiedReal],
    ours: &[CertifiedReal],
    theirs: &[CertifiedReal],
    cap: u32,
) -> Result<Option<CertifiedReal>, RealError> {
    let absent = |x: &CertifiedReal| -> Result<bool, RealError> {
        let (mut lo, mut hi) = (0, theirs.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match order(&theirs[mid], x, cap)? {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(false),
            }
        }
        Ok(true)
    };
    for x in preferred.iter().chain(ours) {
        if absent(x)? {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// Builds both density sets from branch reals and looks for a certified
/// value in one that is absent from the other.
pub fn reduction_pipeline(
    s: &[BinaryPath],
    s_prime: &[BinaryPath],
    params: &PipelineParams,
) -> Result<PipelineReport, InvariantError> {
    if s.contains(&params.gamma_path) || s_prime.contains(&params.gamma_path) {
        return Err(InvariantError::GammaCollision(
            params.gamma_path.to_string(),
        ));
    }
    let cap = params.precision_cap;
    let gamma = params.gamma_path.real();
    let spec_s = spec_for(s, &gamma, params)?;
    let spec_t = spec_for(s_prime, &gamma, params)?;
    let alg_s = generate_algebra(&spec_s, cap)?;
    let alg_t = generate_algebra(&spec_t, cap)?;
    let dens_s = density_set_of(&alg_s, cap)?;
    let dens_t = density_set_of(&alg_t, cap)?;

    let as_set = |v: &[BinaryPath]| v.iter().cloned().collect::<HashSet<_>>();
    let (verdict, witness, algebras_equal) = if as_set(s) == as_set(s_prime) {
        let a: HashSet<&CircleIntervalSet> = alg_s.iter().collect();
        let b: HashSet<&CircleIntervalSet> = alg_t.iter().collect();
        if a != b {
            return Err(InvariantError::AlgebraMismatch);
        }
        (Verdict::IndistinguishableAtDepth, None, Some(true))
    } else {
        let found = match find_witness(&spec_s.generators, &dens_s, &dens_t, cap)? {
            Some(x) => Some((Side::S, x)),
            None => {
                find_witness(&spec_t.generators, &dens_t, &dens_s, cap)?.map(|x| (Side::SPrime, x))
            }
        };
        match found {
            Some((side, x)) => (
                Verdict::Distinguished,
                Some(Witness {
                    side,
                    value: ValueRecord::of(&x),
                }),
                None,
            ),
            None => (Verdict::IndistinguishableAtDepth, None, None),
        }
    };
    Ok(PipelineReport {
        inputs: PipelineInputs {
            s: s.to_vec(),
            s_prime: s_prime.to_vec(),
            params: params.clone(),
        },
        algebra_sizes: [alg_s.len(), alg_t.len()],
        density_sets: [
            dens_s.iter().map(ValueRecord::of).collect(),
            dens_t.iter().map(ValueRecord::of).collect(),
        ],
        verdict,
        witness,
        algebras_equal,
    })
}
