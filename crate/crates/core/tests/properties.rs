mod common;

use std::collections::BTreeSet;

use critical_maps::chip::{stabilize, stabilize_with, ChipState};
use critical_maps::group::{
    critical_group, critical_group_via_laplacian, critical_group_via_tree_form, group_order,
};
use critical_maps::io::{parse_map, render_map};
use critical_maps::label::Label;
use critical_maps::linalg::{
    char_poly, determinant, is_principally_unimodular, pivot, smith_normal_form, IntMatrix,
};
use critical_maps::map::{CombMap, EdgeSet};
use critical_maps::matrices::build_a;
use critical_maps::quasi_trees::count_quasitrees;
use critical_maps::random::{random_bouquet, random_edge_set, random_map};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn map_from(seed: u64, edges: usize) -> CombMap {
    random_map(&mut ChaCha8Rng::seed_from_u64(seed), edges)
}

fn sym_diff(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.symmetric_difference(b).cloned().collect()
}

fn skew(n: usize, entries: &[i64]) -> IntMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    for ((i, j), &x) in pairs.zip(entries) {
        rows[i][j] = x;
        rows[j][i] = -x;
    }
    IntMatrix::from_rows(&rows)
}

fn skew_with_entries(bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1usize..=6).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * (n - 1) / 2).prop_map(move |e| skew(n, &e))
    })
}

fn skew_matrix() -> impl Strategy<Value = IntMatrix> {
    skew_with_entries(3)
}

fn int_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=max, 1usize..=max)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_duals_compose_by_symmetric_difference(seed in any::<u64>(), n in 1usize..=9) {
        let m = map_from(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        let a = random_edge_set(&mut rng, &m);
        let b = random_edge_set(&mut rng, &m);
        let ab = m.partial_dual(&a).unwrap().partial_dual(&b).unwrap();
        let ba = m.partial_dual(&b).unwrap().partial_dual(&a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(&ab, &m.partial_dual(&sym_diff(&a, &b)).unwrap());
        prop_assert_eq!(m.partial_dual(&a).unwrap().partial_dual(&a).unwrap(), m.clone());
        prop_assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn partial_duality_shifts_quasitrees(seed in any::<u64>(), n in 1usize..=8) {
        let m = map_from(seed, n);
        let a = random_edge_set(&mut ChaCha8Rng::seed_from_u64(!seed), &m);
        let pd = m.partial_dual(&a).unwrap();
        for t in common::subsets(&m) {
            let here = common::is_quasitree(&m, &t);
            prop_assert_eq!(here, m.is_spanning_quasitree(&t).unwrap());
            prop_assert_eq!(here, common::is_quasitree(&pd, &sym_diff(&t, &a)));
        }
    }

    #[test]
    fn quasitrees_differ_by_even_sets(seed in any::<u64>(), n in 1usize..=9) {
        let m = map_from(seed, n);
        let trees = common::brute_quasitrees(&m);
        let parity = trees[0].len() % 2;
        prop_assert!(trees.iter().all(|t| t.len() % 2 == parity));
        prop_assert_eq!(parity, (m.vertex_count() - 1) % 2);
    }

    #[test]
    fn interlacement_matrix_is_skew_and_unimodular_on_quasitrees(seed in any::<u64>(), n in 1usize..=8) {
        let m = map_from(seed, n);
        let t = m.find_spanning_quasitree().unwrap();
        prop_assert!(common::is_quasitree(&m, &t));
        let a = build_a(&m, &t).unwrap();
        prop_assert!(a.is_skew_symmetric());
        // Principal minors of A(G, T) are 1 exactly on sets X with X Δ T a
        // quasi-tree, and 0 otherwise.
        for x in common::subsets(&m) {
            let rows: Vec<Vec<BigInt>> = x.iter().map(|i| x.iter().map(|j| a.entry(i, j).unwrap().clone()).collect()).collect();
            let d = common::det_small(&rows);
            let expected = i32::from(common::is_quasitree(&m, &sym_diff(&x, &t)));
            prop_assert_eq!(d, BigInt::from(expected));
        }
    }

    #[test]
    fn pivot_on_a_unit_is_an_involution(a in skew_with_entries(1), pick in any::<prop::sample::Index>()) {
        let labels = a.labels().to_vec();
        let pairs: Vec<(Label, Label)> = labels
            .iter()
            .flat_map(|e| labels.iter().map(move |f| (e.clone(), f.clone())))
            .filter(|(e, f)| e != f && !a.entry(e, f).unwrap().is_zero())
            .collect();
        prop_assume!(!pairs.is_empty());
        let (e, f) = pick.get(&pairs);
        let once = pivot(&a, e, f).unwrap();
        prop_assert!(once.is_skew_symmetric());
        prop_assert_eq!(is_principally_unimodular(&once).unwrap(), is_principally_unimodular(&a).unwrap());
        prop_assert_eq!(pivot(&once, e, f).unwrap(), a);
    }

    #[test]
    fn char_poly_coefficients_are_principal_minor_sums(a in skew_matrix()) {
        let n = a.nrows();
        let rows: Vec<Vec<BigInt>> = a.rows().to_vec();
        let chi = char_poly(&a);
        for k in 0..=n {
            let mut sum = BigInt::zero();
            for bits in 0u32..1 << n {
                if bits.count_ones() as usize != k {
                    continue;
                }
                let idx: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
                let minor: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                sum += common::det_small(&minor);
            }
            let signed = if k % 2 == 0 { sum } else { -sum };
            prop_assert_eq!(chi.coefficient(n - k), signed);
        }
    }

    #[test]
    fn odd_skew_matrices_are_singular(a in skew_matrix()) {
        if a.nrows() % 2 == 1 {
            prop_assert!(determinant(&a).is_zero());
        }
    }

    #[test]
    fn smith_form_matches_determinantal_divisors(rows in int_matrix(4)) {
        let m = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        let diag = snf.diagonal();
        let oracle = common::invariant_factors(&rows);
        prop_assert_eq!(&diag[..oracle.len()], &oracle[..]);
        prop_assert!(diag.windows(2).all(|w| w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (w[1].clone() % &w[0]).is_zero()));
        if rows.len() == rows[0].len() {
            let product: BigInt = diag.iter().product();
            prop_assert_eq!(product.abs(), common::det_small(m.rows()).abs());
        }
    }

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>(), n in 0usize..=12) {
        let m = map_from(seed, n);
        let text = render_map(Some("random"), &m);
        prop_assert_eq!(parse_map(&text).unwrap(), m.clone());
        prop_assert_eq!(parse_map(&format!("sigma: {m}")).unwrap(), m);
    }

    #[test]
    fn genus_agrees_with_face_count(seed in any::<u64>(), n in 0usize..=12) {
        let m = map_from(seed, n);
        prop_assert_eq!(m.genus().unwrap(), common::genus(&m));
        prop_assert_eq!(m.reverse_orientation().genus().unwrap(), common::genus(&m));
    }

    #[test]
    fn group_order_counts_quasitrees(seed in any::<u64>(), n in 1usize..=9) {
        let m = map_from(seed, n);
        let k = critical_group(&m);
        let order = group_order(&k).unwrap();
        prop_assert_eq!(&order, &BigInt::from(common::brute_quasitrees(&m).len()));
        prop_assert_eq!(&order, &count_quasitrees(&m).unwrap());
        prop_assert_eq!(&critical_group_via_tree_form(&m).unwrap(), &k);
        prop_assert_eq!(&critical_group_via_laplacian(&m, &m.labels()[0]).unwrap(), &k);
    }

    #[test]
    fn bouquet_rank_is_twice_the_genus(seed in any::<u64>(), n in 1usize..=8) {
        let b = random_bouquet(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let a = build_a(&b, &EdgeSet::new()).unwrap();
        prop_assert_eq!(critical_maps::linalg::rank(&a), 2 * common::genus(&b));
    }

    #[test]
    fn stabilization_is_order_independent(seed in any::<u64>(), n in 2usize..=8) {
        let m = map_from(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let mut chips: Vec<i64> = (0..n).map(|_| rng.random_range(0..=4)).collect();
        chips[0] = -chips[1..].iter().sum::<i64>();
        let s = ChipState::new(&m, chips, m.labels()[0].clone()).unwrap();
        let first = stabilize(&m, &s).unwrap();
        let other = stabilize_with(&m, &s, |ready| rng.random_range(0..ready.len())).unwrap();
        prop_assert_eq!(&first, &other);
        let stable: BTreeSet<usize> = (1..n).filter(|&e| first.state.chips[e] >= 2).collect();
        prop_assert!(stable.is_empty());
    }
}
