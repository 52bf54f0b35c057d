//! Acceptance suite: one PASS/FAIL line per criterion, each with its time budget.
//! Runs without the libtest harness so the lines always reach stdout.

#![allow(clippy::mutable_key_type)]

use std::collections::HashSet;
use std::time::{Duration, Instant};

use bratteli::catalog;
use bratteli::invariants::{
    check_intertwining, conjugacy_window_check, reduction_pipeline, CylinderFamily, PipelineParams,
    Verdict,
};
use bratteli::matrix::IncidenceMatrix;
use bratteli::ordering::{skau_order, OrderedBratteliDiagram, ProperOrder};
use bratteli::real::{order, CertifiedReal};
use bratteli::rotation::algebra::{
    atom_refinement, density_set, generate_algebra, ReturnAlgebraSpec,
};
use bratteli::rotation::interval::CircleIntervalSet;
use bratteli::rotation::qtree::BinaryPath;
use bratteli::rotation::returns::{
    return_set, return_set_from, sturmian_word, window_density, within,
};
use bratteli::vershik::{vershik_orbit, vershik_successor, FinitePath, Step};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u32 = 1024;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion(id: u32, name: &str, limit_secs: u64, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let (pass, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over time budget")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {id:>2} {name}: {} ({:.3}s of {limit_secs}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c1_matrices() -> Outcome {
    let d = catalog::worked_example();
    let m2 = d.incidence_matrix(2).map_err(|e| e.to_string())?;
    let m3 = d.incidence_matrix(3).map_err(|e| e.to_string())?;
    let want2 = IncidenceMatrix::from_rows(&[vec![0, 1], vec![2, 1], vec![1, 0], vec![0, 2]])?;
    let want3 = IncidenceMatrix::from_rows(&[vec![2, 1, 0, 0], vec![1, 0, 1, 1]])?;
    check(m2 == want2, || format!("M_2 = {m2}"))?;
    check(m3 == want3, || format!("M_3 = {m3}"))?;
    let t = d.telescope(&[0, 1, 3]).map_err(|e| e.to_string())?;
    let tm = t.incidence_matrix(2).map_err(|e| e.to_string())?;
    let want = IncidenceMatrix::from_rows(&[vec![2, 3], vec![1, 3]])?;
    check(tm == want, || format!("telescoped = {tm}"))?;
    Ok(format!("M_2={m2} M_3={m3} telescoped={tm}"))
}

fn c2_odometer() -> Outcome {
    let depth = 12;
    let od = catalog::odometer(&[2; 12]);
    let start = FinitePath::new(vec![0; depth]);
    let orbit = vershik_orbit(&od, &start, 1 << depth, true);
    check(orbit.paths[1 << depth] == start, || {
        "orbit does not close".into()
    })?;
    let distinct: HashSet<_> = orbit.paths[..1 << depth].iter().collect();
    check(distinct.len() == 1 << depth, || {
        format!("{} distinct paths", distinct.len())
    })?;
    // oracle: the path is the binary expansion of an integer, least significant first
    for x in 0u32..1 << depth {
        let digits = |x: u32| {
            (0..depth)
                .map(|i| ((x >> i) & 1) as usize)
                .collect::<Vec<_>>()
        };
        let p = FinitePath::new(digits(x));
        let want = if x + 1 == 1 << depth {
            Step::FiberMaximum
        } else {
            Step::Path(FinitePath::new(digits(x + 1)))
        };
        let got = vershik_successor(&od, &p);
        check(got == want, || format!("successor of {p} is {got:?}"))?;
    }
    Ok("4096 distinct paths, increment oracle agrees".into())
}

/// Every depth-`k` path into `v`, found by brute force over edge tuples and
/// sorted by its rank tuple read from the top level down.
fn brute_fiber(od: &OrderedBratteliDiagram, k: usize, v: usize) -> Vec<FinitePath> {
    let d = od.base();
    let mut all: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=k {
        all = all
            .into_iter()
            .flat_map(|p| (0..d.edges(n).len()).map(move |e| [p.clone(), vec![e]].concat()))
            .filter(|p| {
                let n = p.len();
                let src = if n == 1 {
                    0
                } else {
                    d.edge(n - 1, p[n - 2]).range
                };
                d.edge(n, p[n - 1]).source == src
            })
            .collect();
    }
    let mut fiber: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|p| d.edge(k, p[k - 1]).range == v)
        .collect();
    fiber.sort_by_key(|p| {
        p.iter()
            .enumerate()
            .rev()
            .map(|(i, &e)| od.rank(i + 1, e))
            .collect::<Vec<_>>()
    });
    fiber.into_iter().map(FinitePath::new).collect()
}

fn c3_fiber_oracle() -> Outcome {
    let mut checked = 0usize;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.gen_range(2..=5);
        let od = catalog::random_ordered(&mut rng, depth, 4);
        for k in 1..=depth {
            for v in 0..od.base().vertex_count(k) {
                let fiber = brute_fiber(&od, k, v);
                for (i, p) in fiber.iter().enumerate() {
                    let want = match fiber.get(i + 1) {
                        Some(q) => Step::Path(q.clone()),
                        None => Step::FiberMaximum,
                    };
                    let got = vershik_successor(&od, p);
                    check(got == want, || {
                        format!("seed {seed}: successor of {p} is {got:?}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} paths"))
}

/// Random cuts that keep levels `keep`, `keep + 1` and `depth - 1`, so the
/// telescoped diagram has a level above the image cylinders and a wide
/// second-to-last level to hold the orbit window.
fn random_cuts<R: Rng>(rng: &mut R, depth: usize, keep: usize) -> Vec<usize> {
    let mut cuts = vec![0];
    cuts.extend(
        (1..depth).filter(|&m| m == keep || m == keep + 1 || m == depth - 1 || rng.gen_bool(0.5)),
    );
    cuts.push(depth);
    cuts
}

fn c4_conjugacy() -> Outcome {
    let mut paths = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let depth = rng.gen_range(10..=11);
        let d = catalog::random_simple(&mut rng, depth, 3);
        let od = skau_order(&d, depth).map_err(|e| format!("seed {seed}: {e}"))?;
        let j = 2;
        let cuts = random_cuts(&mut rng, od.depth(), j);
        let rep = check_intertwining(&od, &cuts).map_err(|e| format!("seed {seed}: {e}"))?;
        check(rep.failures.is_empty(), || {
            format!("seed {seed} cuts {cuts:?}: {:?}", rep.failures)
        })?;
        paths += rep.paths_checked;
        let fam = CylinderFamily::all_of_depth(&od, j).map_err(|e| e.to_string())?;
        let conj = conjugacy_window_check(&od, &cuts, &fam, 32)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        check(conj.passed(), || {
            format!("seed {seed} cuts {cuts:?}: {:?}", conj.mismatches)
        })?;
    }
    Ok(format!(
        "100 pairs, {paths} paths intertwined, windows n=32 agree"
    ))
}

fn c5_skau() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let depth = rng.gen_range(4..=8);
        let d = catalog::random_simple(&mut rng, depth, 4);
        let od = skau_order(&d, depth).map_err(|e| format!("seed {seed}: {e}"))?;
        let verdict = od
            .properly_ordered_within(od.depth())
            .map_err(|e| e.to_string())?;
        check(matches!(verdict, ProperOrder::ProperWitness { .. }), || {
            format!("seed {seed}: {verdict:?}")
        })?;
    }
    Ok("100 outputs properly ordered".into())
}

fn c6_equidistribution() -> Outcome {
    let gamma = CertifiedReal::sqrt2_minus_1();
    let n = 100_000;
    let mut notes = Vec::new();
    for (a, b) in [(1, 2), (3, 10)] {
        let u = CircleIntervalSet::initial(&CertifiedReal::ratio(a, b), CAP)
            .map_err(|e| e.to_string())?;
        let ret = return_set(&u, &gamma, n, CAP).map_err(|e| e.to_string())?;
        let dens = window_density(&ret, n);
        let mu = ratio(a, b);
        check(within(&dens, &mu, &ratio(5, 1000)), || {
            format!("U=[0,{a}/{b}): density {dens}")
        })?;
        notes.push(format!(
            "[0,{a}/{b}) dev {:.2e}",
            (dens - mu).to_f64().unwrap_or(f64::NAN).abs()
        ));
    }
    Ok(notes.join(", "))
}

fn c7_shift_invariance() -> Outcome {
    let gamma = CertifiedReal::sqrt2_minus_1();
    let n: u64 = 100_000;
    let mut worst = Vec::new();
    for (a, b) in [(1, 2), (3, 10)] {
        let u = CircleIntervalSet::initial(&CertifiedReal::ratio(a, b), CAP)
            .map_err(|e| e.to_string())?;
        let d0 = window_density(
            &return_set(&u, &gamma, n, CAP).map_err(|e| e.to_string())?,
            n,
        );
        for m in [1i64, 5, 50] {
            let base = gamma.scale_int(m).frac(CAP).map_err(|e| e.to_string())?;
            let dm = window_density(
                &return_set_from(&u, &gamma, &base, n, CAP).map_err(|e| e.to_string())?,
                n,
            );
            let bound = ratio(2 * m + 2, 2 * n as i64 + 1);
            check(within(&d0, &dm, &bound), || {
                format!("U=[0,{a}/{b}) m={m}: {d0} vs {dm}")
            })?;
            worst.push(format!(
                "m={m}:{}",
                (&d0 - &dm).abs() * BigInt::from(2 * n + 1)
            ));
        }
    }
    Ok(format!("(2n+1)|diff| = {}", worst.join(" ")))
}

fn c8_four_elements() -> Outcome {
    let gamma = CertifiedReal::sqrt2_minus_1();
    let mut out = Vec::new();
    for alpha in [
        CertifiedReal::ratio(1, 3),
        BinaryPath(vec![false, true, true]).real(),
    ] {
        let spec = ReturnAlgebraSpec::new(gamma.clone(), vec![alpha.clone()], 0, 1);
        let alg = generate_algebra(&spec, CAP).map_err(|e| e.to_string())?;
        let low = CircleIntervalSet::initial(&alpha, CAP).map_err(|e| e.to_string())?;
        let high = low.complement(CAP).map_err(|e| e.to_string())?;
        let want: HashSet<_> = [
            CircleIntervalSet::empty(),
            low,
            high,
            CircleIntervalSet::full(),
        ]
        .into_iter()
        .collect();
        let got: HashSet<_> = alg.iter().cloned().collect();
        check(alg.len() == 4 && got == want, || {
            format!("algebra for {alpha}: {alg:?}")
        })?;
        let dens = density_set(&spec, CAP).map_err(|e| e.to_string())?;
        let mut expect = vec![
            CertifiedReal::zero(),
            alpha.clone(),
            &CertifiedReal::one() - &alpha,
            CertifiedReal::one(),
        ];
        expect.sort_by(|x, y| order(x, y, CAP).expect("distinct"));
        check(dens.len() == 4, || format!("density set {dens:?}"))?;
        for (x, y) in dens.iter().zip(&expect) {
            let same = order(x, y, CAP).map_err(|e| e.to_string())? == std::cmp::Ordering::Equal;
            check(same, || format!("density {x} vs {y}"))?;
        }
        out.push(format!("alpha={alpha}"));
    }
    Ok(out.join(", "))
}

fn random_branch<R: Rng>(rng: &mut R, depth: usize) -> BinaryPath {
    BinaryPath((0..depth).map(|_| rng.gen_bool(0.5)).collect())
}

fn c9_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut paths = Vec::new();
    while paths.len() < 3 {
        let b = random_branch(&mut rng, 8);
        if !paths.contains(&b) {
            paths.push(b);
        }
    }
    let (p, q, g) = (paths[0].clone(), paths[1].clone(), paths[2].clone());
    let mut params = PipelineParams::new(g.clone());
    params.precision_cap = 300;
    let diff = reduction_pipeline(std::slice::from_ref(&p), std::slice::from_ref(&q), &params)
        .map_err(|e| e.to_string())?;
    check(
        diff.verdict == Verdict::Distinguished && diff.witness.is_some(),
        || format!("p={p} q={q}: {:?}", diff.verdict),
    )?;
    let same = reduction_pipeline(std::slice::from_ref(&p), std::slice::from_ref(&p), &params)
        .map_err(|e| e.to_string())?;
    check(
        same.verdict == Verdict::IndistinguishableAtDepth && same.algebras_equal == Some(true),
        || format!("p={p}: {:?}", same.verdict),
    )?;
    let w = diff.witness.expect("checked");
    Ok(format!(
        "p={p} q={q} gamma={g}, witness {} on {:?}",
        w.value.decimal, w.side
    ))
}

fn c10_atom_refinement() -> Outcome {
    let gamma = CertifiedReal::sqrt2_minus_1();
    let mut atoms = 0;
    let mut unsplit = Vec::new();
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let alpha = random_branch(&mut rng, 8).real();
        let coarse = ReturnAlgebraSpec::new(gamma.clone(), vec![alpha.clone()], 2, 2);
        let fine = ReturnAlgebraSpec::new(gamma.clone(), vec![alpha.clone()], 4, 3);
        let report = atom_refinement(&coarse, &fine, CAP).map_err(|e| e.to_string())?;
        atoms += report.len();
        unsplit.extend(
            report
                .iter()
                .filter(|s| !s.is_split())
                .map(|s| format!("seed {seed}: {s:?}")),
        );
    }
    // each alpha gains 2 endpoints per new shift, 8 in all
    let new_points = 2 * 2 * (4 - 2);
    check(unsplit.is_empty(), || {
        format!(
            "{} of {atoms} atoms unsplit ({new_points} new endpoints per alpha), first {}",
            unsplit.len(),
            unsplit[0]
        )
    })?;
    Ok(format!("{atoms} atoms over 10 alphas, all split"))
}

/// `floor(k * (sqrt 5 - 1) / 2)` in integers.
fn floor_golden(k: i64) -> i64 {
    let r = (5 * (k as i128) * (k as i128)).sqrt() as i64;
    let floor_k_sqrt5 = if k >= 0 { r } else { -r - 1 };
    if k == 0 {
        return 0;
    }
    Integer::div_floor(&(floor_k_sqrt5 - k), &2)
}

fn c11_sturmian() -> Outcome {
    let gamma = CertifiedReal::golden_conjugate();
    let n = 50u64;
    let w0 = sturmian_word(&gamma, &CertifiedReal::zero(), n, CAP).map_err(|e| e.to_string())?;
    // frac(k g) < g iff floor(k g) - floor((k - 1) g) = 1
    let oracle: Vec<u8> = (0..6)
        .map(|k| (floor_golden(k) - floor_golden(k - 1)) as u8)
        .collect();
    let head = &w0[n as usize..n as usize + 6];
    check(head == oracle.as_slice(), || {
        format!("word {head:?}, oracle {oracle:?}")
    })?;
    for x in [CertifiedReal::zero(), BinaryPath(vec![true, false]).real()] {
        let wx = sturmian_word(&gamma, &x, n, CAP).map_err(|e| e.to_string())?;
        let tx = (&x + &gamma).frac(CAP).map_err(|e| e.to_string())?;
        let wt = sturmian_word(&gamma, &tx, n, CAP).map_err(|e| e.to_string())?;
        check(wt[..100] == wx[1..101], || {
            format!("shift fails at base {x}")
        })?;
    }
    Ok(format!("prefix {oracle:?}, shift holds on 100 letters"))
}

fn main() {
    let results = [
        criterion(1, "worked example matrices", 1, c1_matrices),
        criterion(2, "odometer law", 1, c2_odometer),
        criterion(3, "fiber oracle", 30, c3_fiber_oracle),
        criterion(4, "telescoping conjugacy", 60, c4_conjugacy),
        criterion(5, "skau construction", 30, c5_skau),
        criterion(6, "equidistribution", 10, c6_equidistribution),
        criterion(7, "density shift invariance", 30, c7_shift_invariance),
        criterion(8, "four-element algebra", 1, c8_four_elements),
        criterion(9, "reduction pipeline", 60, c9_pipeline),
        criterion(10, "atom refinement", 120, c10_atom_refinement),
        criterion(11, "sturmian word", 1, c11_sturmian),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
