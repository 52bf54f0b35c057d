use bratteli::catalog;
use bratteli::diagram::{BratteliDiagram, Isomorphism};
use bratteli::matrix::IncidenceMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagram(seed: u64, depth: usize) -> BratteliDiagram {
    catalog::random_simple(&mut ChaCha8Rng::seed_from_u64(seed), depth, 3)
}

fn naive_product(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

/// Number of depth-`k` paths into each vertex, counted edge by edge.
fn brute_paths(d: &BratteliDiagram, k: usize) -> Vec<u64> {
    fn walk(d: &BratteliDiagram, level: usize, at: usize, k: usize, out: &mut [u64]) {
        if level == k {
            out[at] += 1;
            return;
        }
        for e in d.edges(level + 1).iter().filter(|e| e.source == at) {
            walk(d, level + 1, e.range, k, out);
        }
    }
    let mut out = vec![0; d.vertex_count(k)];
    walk(d, 0, 0, k, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn telescoped_matrix_is_the_product(seed in any::<u64>(), depth in 3usize..6) {
        let d = diagram(seed, depth);
        let a = 1 + (seed as usize % (depth - 1));
        let t = d.telescope(&[0, a, depth]).unwrap();
        let mut prod = d.incidence_matrix(a + 1).unwrap().to_rows();
        for n in a + 2..=depth {
            prod = naive_product(&d.incidence_matrix(n).unwrap().to_rows(), &prod);
        }
        prop_assert_eq!(t.incidence_matrix(2).unwrap().to_rows(), prod);
    }

    #[test]
    fn identity_cuts_give_an_isomorphic_diagram(seed in any::<u64>(), depth in 2usize..5) {
        let d = diagram(seed, depth);
        let cuts: Vec<usize> = (0..=depth).collect();
        let t = d.telescope(&cuts).unwrap();
        let iso = matches!(d.are_isomorphic(&t).unwrap(), Isomorphism::Witness { .. });
        prop_assert!(iso);
    }

    #[test]
    fn path_counts_match_enumeration(seed in any::<u64>(), depth in 1usize..6) {
        let d = diagram(seed, depth);
        for k in 1..=depth {
            prop_assert_eq!(d.path_counts(k).unwrap(), brute_paths(&d, k));
        }
    }

    #[test]
    fn matrices_accepted_iff_rows_and_columns_are_positive(
        rows in prop::collection::vec(prop::collection::vec(0u64..3, 2), 1..4)
    ) {
        let m = IncidenceMatrix::from_rows(&rows).unwrap();
        let first = IncidenceMatrix::from_rows(&[vec![1], vec![1]]).unwrap();
        let oracle = rows.iter().all(|r| r.iter().any(|&x| x > 0))
            && (0..2).all(|j| rows.iter().any(|r| r[j] > 0));
        prop_assert_eq!(BratteliDiagram::from_matrices(&[first, m]).is_ok(), oracle);
    }
}
