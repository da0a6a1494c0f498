#![allow(dead_code)]

use expander_match::certify::{search_bounded_degree, SearchParams, DEFAULT_BUDGET};
use expander_match::{BipartiteGraph, LeftSet, MatchParams, Rational};
use proptest::prelude::*;

pub fn graph(max_n: usize, max_m: usize, max_d: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_n, 1..=max_m, 1..=max_d).prop_flat_map(|(n, m, d)| {
        prop::collection::vec(0..m, n * d)
            .prop_map(move |edges| BipartiteGraph::new(n, m, d, edges).unwrap())
    })
}

pub fn set_of(mask: u32, n: usize) -> LeftSet {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// A graph certified `(r, K, ε)` bounded right degree by the seeded search.
pub fn certified(seed: u64, n: usize, m: usize, d: usize, params: &MatchParams) -> BipartiteGraph {
    let search = SearchParams {
        n_left: n,
        n_right: m,
        degree: d,
        capacity: params.capacity,
        epsilon: params.epsilon,
        seed,
        max_tries: 2000,
    };
    search_bounded_degree(&search, params.share_bound, DEFAULT_BUDGET)
        .expect("search finds a certified graph")
        .0
}

pub fn eps(n: u64, d: u64) -> Rational {
    Rational::new(n, d)
}
