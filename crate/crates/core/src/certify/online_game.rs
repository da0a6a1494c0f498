//! Exhaustive search of the online `(ℓ, r)` matching game on tiny graphs.
//!
//! The adversary pushes left nodes; the assignment function answers each
//! push with a sub-multiset of the new node's neighbors that it may never
//! change afterwards. Pops only return to an earlier list, whose answers are
//! already fixed, and repeated pushes add no constraint, so the game tree
//! over lists of distinct nodes decides whether an online assignment exists.
//!
//! The function only ever needs a minimal support: dropping right nodes from
//! an answer lowers loads and keeps every later constraint satisfiable, so
//! answers are enumerated among inclusion-minimal supports whose
//! multiplicity reaches `ℓ`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// An adversary strategy that defeats every assignment function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryMove {
    pub push: usize,
    /// One entry per admissible minimal answer; empty when none exists.
    pub replies: Vec<Reply>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    /// Distinct right nodes assigned to the pushed node.
    pub assigned: Vec<usize>,
    pub next: Box<AdversaryMove>,
}

impl AdversaryMove {
    /// Every root-to-leaf push sequence of the strategy.
    pub fn sequences(&self) -> Vec<Vec<usize>> {
        if self.replies.is_empty() {
            return vec![vec![self.push]];
        }
        self.replies
            .iter()
            .flat_map(|r| r.next.sequences())
            .map(|mut tail| {
                tail.insert(0, self.push);
                tail
            })
            .collect()
    }

    /// Indented text rendering, one line per move.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!("{pad}push {}\n", self.push));
        if self.replies.is_empty() {
            out.push_str(&format!("{pad}  no admissible assignment\n"));
        }
        for r in &self.replies {
            let ids: Vec<String> = r.assigned.iter().map(usize::to_string).collect();
            out.push_str(&format!("{pad}  if assigned {{{}}}:\n", ids.join(",")));
            r.next.render_into(depth + 2, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlineVerdict {
    pub matchable: bool,
    pub witness: Option<AdversaryMove>,
    pub states: u64,
}

type State = Vec<(usize, Vec<usize>)>;

struct Game<'g> {
    graph: &'g BipartiteGraph,
    capacity: usize,
    share_bound: usize,
    supports: Vec<Vec<Vec<usize>>>,
    memo: HashMap<State, bool>,
    states: u64,
    budget: u64,
}

pub fn refute_online_matchability(
    g: &BipartiteGraph,
    capacity: usize,
    ell: usize,
    share_bound: usize,
    budget: u64,
) -> Result<OnlineVerdict> {
    if share_bound == 0 {
        return Err(Error::InvalidParameter("share bound r must be >= 1".into()));
    }
    let supports = (0..g.left_count())
        .map(|x| minimal_supports(g.row(x), ell))
        .collect();
    let mut game = Game {
        graph: g,
        capacity,
        share_bound,
        supports,
        memo: HashMap::new(),
        states: 0,
        budget,
    };
    let root = State::new();
    let matchable = game.wins(&root)?;
    let witness = (!matchable).then(|| game.strategy(&root));
    Ok(OnlineVerdict {
        matchable,
        witness,
        states: game.states,
    })
}

/// Inclusion-minimal sets of distinct neighbors whose multiplicity is `≥ ell`.
fn minimal_supports(row: &[usize], ell: usize) -> Vec<Vec<usize>> {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in row {
        *mult.entry(p).or_insert(0) += 1;
    }
    let distinct: Vec<(usize, usize)> = mult.into_iter().collect();
    let weight = |mask: u32| -> usize {
        (0..distinct.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| distinct[i].1)
            .sum()
    };
    let mut out = Vec::new();
    for mask in 0u32..1 << distinct.len() {
        if weight(mask) < ell {
            continue;
        }
        let minimal = (0..distinct.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| weight(mask & !(1 << i)) < ell);
        if minimal {
            out.push(
                (0..distinct.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| distinct[i].0)
                    .collect(),
            );
        }
    }
    out
}

impl Game<'_> {
    fn loads(state: &State) -> BTreeMap<usize, usize> {
        let mut loads = BTreeMap::new();
        for (_, support) in state {
            for &p in support {
                *loads.entry(p).or_insert(0) += 1;
            }
        }
        loads
    }

    fn admissible<'a>(&'a self, state: &State, x: usize) -> impl Iterator<Item = &'a Vec<usize>> {
        let loads = Self::loads(state);
        let r = self.share_bound;
        self.supports[x]
            .iter()
            .filter(move |t| t.iter().all(|p| loads.get(p).copied().unwrap_or(0) < r))
    }

    fn extend(state: &State, x: usize, support: &[usize]) -> State {
        let mut next = state.clone();
        let at = next.partition_point(|(y, _)| *y < x);
        next.insert(at, (x, support.to_vec()));
        next
    }

    fn candidates<'a>(&self, state: &'a State) -> impl Iterator<Item = usize> + 'a {
        (0..self.graph.left_count()).filter(move |x| !state.iter().any(|(y, _)| y == x))
    }

    fn wins(&mut self, state: &State) -> Result<bool> {
        if state.len() >= self.capacity {
            return Ok(true);
        }
        if let Some(&known) = self.memo.get(state) {
            return Ok(known);
        }
        self.states += 1;
        if self.states > self.budget {
            return Err(Error::BudgetExceeded {
                cap: self.budget,
                required: self.states,
            });
        }
        let mut result = true;
        let xs: Vec<usize> = self.candidates(state).collect();
        'push: for x in xs {
            let replies: Vec<Vec<usize>> = self.admissible(state, x).cloned().collect();
            for t in replies {
                if self.wins(&Self::extend(state, x, &t))? {
                    continue 'push;
                }
            }
            result = false;
            break;
        }
        self.memo.insert(state.clone(), result);
        Ok(result)
    }

    /// Builds the refutation tree for a losing state from the memo.
    fn strategy(&self, state: &State) -> AdversaryMove {
        let losing = |s: &State| s.len() < self.capacity && self.memo.get(s) == Some(&false);
        let push = self
            .candidates(state)
            .find(|&x| {
                self.admissible(state, x)
                    .all(|t| losing(&Self::extend(state, x, t)))
            })
            .expect("a losing state has a losing push");
        let replies = self
            .admissible(state, push)
            .map(|t| Reply {
                assigned: t.clone(),
                next: Box::new(self.strategy(&Self::extend(state, push, t))),
            })
            .collect();
        AdversaryMove { push, replies }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::DEFAULT_BUDGET;

    #[test]
    fn offline_only_is_not_online_matchable() {
        let v =
            refute_online_matchability(&BipartiteGraph::offline_only(), 2, 1, 1, DEFAULT_BUDGET)
                .unwrap();
        assert!(!v.matchable);
        let w = v.witness.unwrap();
        assert_eq!(w.push, 1, "x2 arrives first");
        let mut follow: Vec<(Vec<usize>, usize)> = w
            .replies
            .iter()
            .map(|r| (r.assigned.clone(), r.next.push))
            .collect();
        follow.sort();
        assert_eq!(follow, vec![(vec![0], 0), (vec![1], 2)]);
        assert!(w.replies.iter().all(|r| r.next.replies.is_empty()));
        assert_eq!(w.sequences(), vec![vec![1, 0], vec![1, 2]]);
    }

    #[test]
    fn complete_two_by_two_is_matchable() {
        let v =
            refute_online_matchability(&BipartiteGraph::complete(2, 2), 2, 1, 1, DEFAULT_BUDGET)
                .unwrap();
        assert!(v.matchable);
        assert!(v.witness.is_none());
    }

    #[test]
    fn zero_ell_always_matchable() {
        for g in [BipartiteGraph::offline_only(), BipartiteGraph::star(4)] {
            let v = refute_online_matchability(&g, 3, 0, 1, DEFAULT_BUDGET).unwrap();
            assert!(v.matchable);
        }
    }

    #[test]
    fn minimal_supports_respect_multiplicity() {
        assert_eq!(minimal_supports(&[0, 0, 1], 2), vec![vec![0]]);
        assert_eq!(minimal_supports(&[0, 1, 2], 2).len(), 3);
        assert_eq!(minimal_supports(&[0, 1], 3), Vec::<Vec<usize>>::new());
        assert_eq!(minimal_supports(&[0, 1], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn budget_exceeded_reports() {
        let g = BipartiteGraph::complete(6, 3);
        let err = refute_online_matchability(&g, 4, 1, 2, 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { cap: 3, .. }));
    }
}
