mod common;

use std::collections::HashMap;

use common::arb_graph;
use proptest::prelude::*;
use seidel_lab::graphs::{complement, seidel_matrix, Graph};
use seidel_lab::search::enumerate_all_graphs;
use seidel_lab::seidel::{
    count_odd_pairs, is_sc_equivalent_to_complete, switch, switching_class_key, OddPairCount,
    SwitchingSet,
};
use seidel_lab::spectral::{char_poly_exact, eigenvalues, submatrix_det_parity};

fn all_graphs(n: usize) -> Vec<Graph> {
    enumerate_all_graphs(n)
        .unwrap()
        .map(|r| r.unwrap().unwrap())
        .collect()
}

/// Odd pairs by definition: ordered disjoint 2-sets with an odd number of
/// cross edges.
fn odd_pairs_naive(g: &Graph) -> u64 {
    let n = g.order();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut count = 0;
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            if [a, b].iter().any(|v| *v == c || *v == d) {
                continue;
            }
            let cross = [(a, c), (a, d), (b, c), (b, d)]
                .iter()
                .filter(|(u, v)| g.has_edge(*u, *v))
                .count();
            count += (cross % 2) as u64;
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switching_preserves_invariants(g in arb_graph(1, 12), w in any::<u64>()) {
        let set = SwitchingSet::from_mask(w & g.vertex_mask());
        let h = switch(&g, set);
        let (sg, sh) = (seidel_matrix(&g), seidel_matrix(&h));
        prop_assert_eq!(&sh, &sg.conjugate_by_signs(set.mask()));
        prop_assert_eq!(char_poly_exact(&sg), char_poly_exact(&sh));
        let (eg, eh) = (eigenvalues(&sg).unwrap(), eigenvalues(&sh).unwrap());
        for (x, y) in eg.values().iter().zip(eh.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert_eq!(count_odd_pairs(&g), count_odd_pairs(&h));
        prop_assert_eq!(count_odd_pairs(&g), count_odd_pairs(&complement(&g)));
        prop_assert_eq!(
            is_sc_equivalent_to_complete(&g).is_some(),
            is_sc_equivalent_to_complete(&h).is_some()
        );
        prop_assert_eq!(switch(&h, set), g);
    }

    #[test]
    fn odd_pair_count_shape(g in arb_graph(1, 10)) {
        let c = count_odd_pairs(&g).get();
        prop_assert_eq!(c % 2, 0);
        prop_assert!(c <= OddPairCount::upper_bound(g.order()));
        prop_assert_eq!(c, odd_pairs_naive(&g));
        let n = g.order() as u64;
        if c > 0 {
            prop_assert!(c >= 2 * (n - 3) * (n - 3));
        }
    }

    #[test]
    fn witness_reaches_complete(g in arb_graph(1, 16)) {
        if let Some(w) = is_sc_equivalent_to_complete(&g) {
            prop_assert!(w.apply(&g).is_complete());
            prop_assert_eq!(count_odd_pairs(&g).get(), 0);
        } else {
            prop_assert!(count_odd_pairs(&g).get() > 0);
        }
    }

    #[test]
    fn key_is_class_invariant(g in arb_graph(1, 7), w in any::<u64>(), seed in any::<u64>()) {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the seed bits
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let h = complement(&switch(&g, SwitchingSet::from_mask(w & g.vertex_mask()))).relabel(&perm);
        prop_assert_eq!(switching_class_key(&g).unwrap(), switching_class_key(&h).unwrap());
    }
}

#[test]
fn pair_determinants_detect_odd_pairs() {
    let g = Graph::cycle(6).unwrap();
    let s = seidel_matrix(&g);
    let n = g.order();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                for d in c + 1..n {
                    if [a, b].contains(&c) || [a, b].contains(&d) {
                        continue;
                    }
                    let det = submatrix_det_parity(&s, &[a, b], &[c, d]).unwrap();
                    let cross = [(a, c), (a, d), (b, c), (b, d)]
                        .iter()
                        .filter(|(u, v)| g.has_edge(*u, *v))
                        .count();
                    let want = if cross % 2 == 1 { 2 } else { 0 };
                    assert_eq!(det.magnitude().to_string(), want.to_string());
                }
            }
        }
    }
}

/// Classes of labelled graphs under switching at one vertex, complement and
/// transpositions, by union-find.
fn class_oracle(n: usize) -> (Vec<Graph>, Vec<usize>) {
    let graphs = all_graphs(n);
    let index: HashMap<Graph, usize> = graphs.iter().cloned().zip(0..).collect();
    let mut parent: Vec<usize> = (0..graphs.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, g) in graphs.iter().enumerate() {
        let mut moves = vec![complement(g)];
        for v in 0..n {
            moves.push(switch(g, SwitchingSet::from_mask(1 << v)));
        }
        for v in 0..n.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(v, v + 1);
            moves.push(g.relabel(&perm));
        }
        for h in moves {
            let (a, b) = (find(&mut parent, i), find(&mut parent, index[&h]));
            parent[a] = b;
        }
    }
    let roots = (0..graphs.len()).map(|i| find(&mut parent, i)).collect();
    (graphs, roots)
}

#[test]
fn class_key_matches_union_find_oracle() {
    for n in 1..=5 {
        let (graphs, roots) = class_oracle(n);
        let keys: Vec<Vec<u8>> = graphs
            .iter()
            .map(|g| switching_class_key(g).unwrap())
            .collect();
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                assert_eq!(
                    roots[i] == roots[j],
                    keys[i] == keys[j],
                    "n = {n}: {:?} vs {:?}",
                    graphs[i],
                    graphs[j]
                );
            }
        }
    }
}

#[test]
fn odd_pairs_vanish_exactly_on_the_complete_class() {
    for n in 1..=6 {
        for g in all_graphs(n) {
            let zero = count_odd_pairs(&g).get() == 0;
            assert_eq!(zero, is_sc_equivalent_to_complete(&g).is_some(), "{g:?}");
        }
    }
}
