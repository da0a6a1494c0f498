//! Offline `(rounds, 1)` matching by repeated maximum matchings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, LeftSet};

/// Per-node disjoint right sets, each of size `rounds`.
pub type OfflineMatch = BTreeMap<usize, BTreeSet<usize>>;

/// A round in which the restriction to `S` had no perfect matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfflineFailure {
    /// Zero-based round index.
    pub round: usize,
    /// Subset of `S` whose remaining neighborhood is smaller than itself.
    pub hall_violator: LeftSet,
    /// The remaining neighborhood of `hall_violator`.
    pub neighborhood: BTreeSet<usize>,
}

/// Assigns every member of `s` exactly `rounds` distinct right nodes, all
/// assigned sets pairwise disjoint, or reports the round that got stuck.
pub fn offline_match(
    g: &BipartiteGraph,
    s: &LeftSet,
    rounds: usize,
) -> Result<std::result::Result<OfflineMatch, OfflineFailure>> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be >= 1".into()));
    }
    g.check_set(s)?;
    let left: Vec<usize> = s.iter().collect();
    let mut used = vec![false; g.right_count()];
    let mut assigned: OfflineMatch = left.iter().map(|&x| (x, BTreeSet::new())).collect();

    for round in 0..rounds {
        let adj: Vec<Vec<usize>> = left
            .iter()
            .map(|&x| {
                let mut ns: Vec<usize> = g.row(x).iter().copied().filter(|&p| !used[p]).collect();
                ns.sort_unstable();
                ns.dedup();
                ns
            })
            .collect();
        let mut hk = HopcroftKarp::new(&adj, g.right_count());
        let size = hk.run();
        if size < left.len() {
            let (violator, neighborhood) = hk.hall_violator();
            return Ok(Err(OfflineFailure {
                round,
                hall_violator: violator.into_iter().map(|i| left[i]).collect(),
                neighborhood,
            }));
        }
        for (i, &x) in left.iter().enumerate() {
            let p = hk.pair_left[i].expect("perfect matching covers every left node");
            used[p] = true;
            assigned.get_mut(&x).expect("member present").insert(p);
        }
    }
    Ok(Ok(assigned))
}

/// Maximum bipartite matching over left indices `0..adj.len()`.
struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    pair_left: Vec<Option<usize>>,
    pair_right: Vec<Option<usize>>,
    dist: Vec<u32>,
}

const INF: u32 = u32::MAX;

impl<'a> HopcroftKarp<'a> {
    fn new(adj: &'a [Vec<usize>], right_count: usize) -> Self {
        Self {
            adj,
            pair_left: vec![None; adj.len()],
            pair_right: vec![None; right_count],
            dist: vec![INF; adj.len()],
        }
    }

    fn run(&mut self) -> usize {
        let mut size = 0;
        while self.bfs() {
            for u in 0..self.adj.len() {
                if self.pair_left[u].is_none() && self.dfs(u) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Layers free left vertices; true if some augmenting path exists.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.adj.len() {
            if self.pair_left[u].is_none() {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &p in &self.adj[u] {
                match self.pair_right[p] {
                    None => found = true,
                    Some(v) if self.dist[v] == INF => {
                        self.dist[v] = self.dist[u] + 1;
                        queue.push_back(v);
                    }
                    Some(_) => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let p = self.adj[u][i];
            let ok = match self.pair_right[p] {
                None => true,
                Some(v) => self.dist[v] == self.dist[u] + 1 && self.dfs(v),
            };
            if ok {
                self.pair_left[u] = Some(p);
                self.pair_right[p] = Some(u);
                return true;
            }
        }
        self.dist[u] = INF;
        false
    }

    /// Left vertices reachable by alternating paths from one free left
    /// vertex. Their neighborhood is matched entirely inside the set, so it
    /// has exactly one node fewer than the set.
    fn hall_violator(&self) -> (Vec<usize>, BTreeSet<usize>) {
        let start = self
            .pair_left
            .iter()
            .position(Option::is_none)
            .expect("called only when the matching is not perfect");
        let mut seen_left = vec![false; self.adj.len()];
        let mut reached_right = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen_left[start] = true;
        while let Some(u) = queue.pop_front() {
            for &p in &self.adj[u] {
                if reached_right.insert(p) {
                    let v = self.pair_right[p].expect("maximum matching leaves no augmenting path");
                    if !seen_left[v] {
                        seen_left[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        let set = (0..self.adj.len()).filter(|&i| seen_left[i]).collect();
        (set, reached_right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offline_only_pair_matches() {
        let g = BipartiteGraph::offline_only();
        let m = offline_match(&g, &LeftSet::from([0, 2]), 1)
            .unwrap()
            .unwrap();
        assert_eq!(m[&0], BTreeSet::from([0]));
        assert_eq!(m[&2], BTreeSet::from([1]));
    }

    #[test]
    fn offline_only_triple_fails_with_hall_witness() {
        let g = BipartiteGraph::offline_only();
        let fail = offline_match(&g, &LeftSet::from([0, 1, 2]), 1)
            .unwrap()
            .unwrap_err();
        assert_eq!(fail.round, 0);
        assert!(fail.neighborhood.len() < fail.hall_violator.len());
        assert_eq!(
            g.neighbor_set(&fail.hall_violator).unwrap(),
            fail.neighborhood
        );
    }

    #[test]
    fn complete_graph_all_rounds() {
        let g = BipartiteGraph::complete(4, 4);
        let all = LeftSet::from([0, 1, 2, 3]);
        let m = offline_match(&g, &all, 1).unwrap().unwrap();
        let used: BTreeSet<usize> = m.values().flatten().copied().collect();
        assert_eq!(used.len(), 4);
        assert!(offline_match(&g, &LeftSet::from([0, 1]), 2)
            .unwrap()
            .is_ok());
        let fail = offline_match(&g, &all, 2).unwrap().unwrap_err();
        assert_eq!(fail.round, 1);
    }

    #[test]
    fn zero_rounds_rejected() {
        assert!(offline_match(&BipartiteGraph::offline_only(), &LeftSet::from([0]), 0).is_err());
    }
}
