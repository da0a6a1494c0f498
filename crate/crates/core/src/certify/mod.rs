//! Brute-force certification oracles.
//!
//! Everything here is exhaustive and meant for desk-scale graphs: expansion
//! and bounded-right-degree certificates, Hall-based offline matching, the
//! flat-source condenser view, and the online matching game.

mod condenser;
mod expansion;
mod offline;
mod online_game;
mod search;

pub use condenser::{condenser_distance, redirect_edges, CondenserParams, EdgeMove, Redirection};
pub use expansion::{
    certify_bounded_degree, certify_expansion, check_expander_degree_duality, DegreeCertificate,
    ExpansionCertificate,
};
pub use offline::{offline_match, OfflineFailure, OfflineMatch};
pub use online_game::{refute_online_matchability, AdversaryMove, OnlineVerdict, Reply};
pub use search::{search_bounded_degree, search_random_expander, SearchParams};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Cap on the number of subsets (or game states) an oracle may visit.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// `C(n,1) + … + C(n,k)`, saturating.
pub fn subsets_up_to(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for i in 1..=k.min(n) {
        // C(n,i) = C(n,i-1) * (n-i+1) / i, exact in u128
        binom = ((binom as u128 * (n - i + 1) as u128) / i as u128).min(u64::MAX as u128) as u64;
        total = total.saturating_add(binom);
    }
    total
}

pub(crate) fn check_budget(n: usize, k: usize, cap: u64) -> Result<u64> {
    let required = subsets_up_to(n, k);
    if required > cap {
        return Err(Error::BudgetExceeded { cap, required });
    }
    Ok(required)
}

/// Lexicographic walk over all nonempty subsets of size at most `k`,
/// maintaining per-right-node crossing counts incrementally.
pub(crate) struct SubsetWalk<'g> {
    graph: &'g BipartiteGraph,
    threshold: usize,
    counts: Vec<usize>,
    members: Vec<usize>,
    distinct: usize,
    excess: usize,
}

/// Statistics for the subset currently visited.
pub(crate) struct SubsetStats<'a> {
    pub members: &'a [usize],
    pub distinct: usize,
    pub excess: usize,
}

impl<'g> SubsetWalk<'g> {
    pub fn new(graph: &'g BipartiteGraph, threshold: usize) -> Self {
        Self {
            graph,
            threshold,
            counts: vec![0; graph.right_count()],
            members: Vec::new(),
            distinct: 0,
            excess: 0,
        }
    }

    pub fn run(mut self, k: usize, visit: &mut impl FnMut(SubsetStats<'_>)) {
        let k = k.min(self.graph.left_count());
        if k > 0 {
            self.descend(0, k, visit);
        }
    }

    fn descend(&mut self, start: usize, k: usize, visit: &mut impl FnMut(SubsetStats<'_>)) {
        for x in start..self.graph.left_count() {
            self.push(x);
            visit(SubsetStats {
                members: &self.members,
                distinct: self.distinct,
                excess: self.excess,
            });
            if self.members.len() < k {
                self.descend(x + 1, k, visit);
            }
            self.pop();
        }
    }

    fn push(&mut self, x: usize) {
        for &p in self.graph.row(x) {
            let c = &mut self.counts[p];
            if *c == 0 {
                self.distinct += 1;
            }
            *c += 1;
            if *c > self.threshold {
                self.excess += 1;
            }
        }
        self.members.push(x);
    }

    fn pop(&mut self) {
        let x = self.members.pop().expect("pop on empty walk");
        for &p in self.graph.row(x) {
            let c = &mut self.counts[p];
            if *c > self.threshold {
                self.excess -= 1;
            }
            *c -= 1;
            if *c == 0 {
                self.distinct -= 1;
            }
        }
    }
}
