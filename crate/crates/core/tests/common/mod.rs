#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use seidel_lab::graphs::Graph;

/// Labelled graph on `lo..=hi` vertices, every edge an independent coin flip.
pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n).unwrap();
            let mut bits = bits.into_iter();
            for j in 1..n {
                for i in 0..j {
                    if bits.next().unwrap() {
                        g.add_edge(i, j).unwrap();
                    }
                }
            }
            g
        })
    })
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}
