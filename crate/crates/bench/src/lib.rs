//! Fixtures shared by the benchmarks.

use expander_match::certify::{search_bounded_degree, SearchParams, DEFAULT_BUDGET};
use expander_match::{BipartiteGraph, MatchParams, NoShareMatcher, Rational};

/// A certified graph with `n` left nodes, degree 8 and capacity `k` at
/// `eps = 1/8`, `r = 1`.
pub fn certified(n: usize, m: usize, k: usize) -> (BipartiteGraph, MatchParams) {
    let params = MatchParams::new(k, Rational::new(1, 8), 1).expect("valid params");
    let search = SearchParams {
        n_left: n,
        n_right: m,
        degree: 8,
        capacity: k,
        epsilon: params.epsilon,
        seed: 1,
        max_tries: 5000,
    };
    let (g, _) = search_bounded_degree(&search, 1, DEFAULT_BUDGET).expect("fixture certifies");
    (g, params)
}

pub fn hashed(n: usize, m: usize, k: usize) -> NoShareMatcher {
    let (g, params) = certified(n, m, k);
    NoShareMatcher::new(g, params, Rational::new(1, 8), None).expect("fixture hashes")
}
