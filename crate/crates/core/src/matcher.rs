//! Online `((1−4ε)D, 2⌈log K⌉r)` matching for graphs with bounded right degree.
//!
//! The assignment of `x` depends only on the prefix of the request list up
//! to the first occurrence of `x`:
//!
//! ```text
//! S_0 = distinct elements of the prefix ending at x's first occurrence
//! while x is deficient for S_t:
//!     S_{t+1} = elements of S_t deficient for S_t
//! f(S, x) = the slots of x whose endpoint is not heavy for S_t
//! ```
//!
//! A right node is heavy for `S` if it has more than `2r` distinct
//! neighbors in `S`; a member of `S` is deficient if at least `4εD` of its
//! edges (with multiplicity) land on heavy nodes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, LeftSet, MatchParams};
use crate::ratio::{at_least, ceil_log2, retained, Rational};

/// A request list updated as a stack, never longer than its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestList {
    entries: Vec<usize>,
    capacity: usize,
}

impl RequestList {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            capacity,
        }
    }

    pub fn from_entries(entries: Vec<usize>, capacity: usize) -> Result<Self> {
        if entries.len() > capacity {
            return Err(Error::CapacityExceeded {
                len: entries.len(),
                capacity,
            });
        }
        Ok(Self { entries, capacity })
    }

    pub fn push(&mut self, x: usize) -> Result<()> {
        if self.entries.len() >= self.capacity {
            return Err(Error::CapacityExceeded {
                len: self.entries.len() + 1,
                capacity: self.capacity,
            });
        }
        self.entries.push(x);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.entries.pop()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn contains(&self, x: usize) -> bool {
        self.entries.contains(&x)
    }
}

/// `f(S, x)` as edge slots of `x`, with the trace of the loop that chose it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssignmentResult {
    /// Sorted slot indices of `x`; their endpoints form `f(S, x)`.
    pub slots: Vec<usize>,
    /// Number of loop rounds `t`.
    pub iterations: usize,
    /// `S_t` at termination.
    pub final_core: LeftSet,
    /// `|S_0|, …, |S_t|`.
    pub core_sizes: Vec<usize>,
}

impl AssignmentResult {
    /// Right endpoints of the assigned slots, in slot order.
    pub fn targets(&self, g: &BipartiteGraph, x: usize) -> Vec<usize> {
        let row = g.row(x);
        self.slots.iter().map(|&y| row[y]).collect()
    }
}

/// All assignments for one request list plus per-right-node loads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    /// Distinct list elements in first-occurrence order.
    pub entries: Vec<(usize, AssignmentResult)>,
    /// Number of distinct assigned elements per right node, zero loads omitted.
    pub load: BTreeMap<usize, usize>,
    /// Length of the list the matching was computed for.
    pub list_len: usize,
}

impl Matching {
    pub fn max_load(&self) -> usize {
        self.load.values().copied().max().unwrap_or(0)
    }

    pub fn load_of(&self, p: usize) -> usize {
        self.load.get(&p).copied().unwrap_or(0)
    }

    pub fn get(&self, x: usize) -> Option<&AssignmentResult> {
        self.entries.iter().find(|(y, _)| *y == x).map(|(_, a)| a)
    }

    pub fn min_assigned(&self) -> Option<usize> {
        self.entries.iter().map(|(_, a)| a.slots.len()).min()
    }
}

/// `2⌈log₂ K⌉ r` for `K ≥ 2`; a single-element list has load at most one.
pub fn load_bound(list_len: usize, share_bound: usize) -> usize {
    if list_len <= 1 {
        share_bound
    } else {
        2 * ceil_log2(list_len as u64) as usize * share_bound
    }
}

/// Lower bound `(1 − 4ε) D` on `|f(S, x)|`.
pub fn quality_bound(epsilon: &Rational, degree: usize) -> Rational {
    retained(&(*epsilon * 4), degree as u64)
}

#[derive(Debug, Clone)]
pub struct Matcher<'g> {
    graph: &'g BipartiteGraph,
    params: MatchParams,
}

impl<'g> Matcher<'g> {
    pub fn new(graph: &'g BipartiteGraph, params: MatchParams) -> Self {
        Self { graph, params }
    }

    pub fn graph(&self) -> &'g BipartiteGraph {
        self.graph
    }

    pub fn params(&self) -> &MatchParams {
        &self.params
    }

    /// Right nodes with more than `2r` distinct neighbors in `s`.
    pub fn heavy_set(&self, s: &LeftSet) -> Result<BTreeSet<usize>> {
        self.graph.check_set(s)?;
        Ok(self.heavy_unchecked(s))
    }

    fn heavy_unchecked(&self, s: &LeftSet) -> BTreeSet<usize> {
        let limit = 2 * self.params.share_bound;
        if s.len() <= limit {
            return BTreeSet::new();
        }
        let mut distinct: HashMap<usize, usize> = HashMap::new();
        let mut row_seen = Vec::with_capacity(self.graph.left_degree());
        for x in s.iter() {
            row_seen.clear();
            for &p in self.graph.row(x) {
                if !row_seen.contains(&p) {
                    row_seen.push(p);
                    *distinct.entry(p).or_insert(0) += 1;
                }
            }
        }
        distinct
            .into_iter()
            .filter(|&(_, c)| c > limit)
            .map(|(p, _)| p)
            .collect()
    }

    fn is_deficient(&self, x: usize, heavy: &BTreeSet<usize>) -> bool {
        if heavy.is_empty() {
            return false;
        }
        let into_heavy = self
            .graph
            .row(x)
            .iter()
            .filter(|p| heavy.contains(p))
            .count();
        let d = self.graph.left_degree() as u64;
        at_least(into_heavy as u64, &(self.params.epsilon * 4), d)
    }

    /// Members of `s` with at least `4εD` edges into the heavy set of `s`.
    pub fn deficient_set(&self, s: &LeftSet) -> Result<LeftSet> {
        self.graph.check_set(s)?;
        let heavy = self.heavy_unchecked(s);
        Ok(s.iter().filter(|&x| self.is_deficient(x, &heavy)).collect())
    }

    /// Computes `f(S, x)`; empty when `x` does not occur in `list`.
    pub fn assign(&self, list: &[usize], x: usize) -> Result<AssignmentResult> {
        self.graph.check_left(x)?;
        for &y in list {
            self.graph.check_left(y)?;
        }
        let Some(first) = list.iter().position(|&y| y == x) else {
            return Ok(AssignmentResult::default());
        };
        let mut core: LeftSet = list[..=first].iter().copied().collect();
        let mut core_sizes = vec![core.len()];
        let mut heavy = self.heavy_unchecked(&core);
        let mut iterations = 0;
        while self.is_deficient(x, &heavy) {
            let next: LeftSet = core
                .iter()
                .filter(|&y| self.is_deficient(y, &heavy))
                .collect();
            if next.len() == core.len() {
                return Err(Error::Stalled {
                    iteration: iterations,
                    core: core.len(),
                });
            }
            core = next;
            core_sizes.push(core.len());
            heavy = self.heavy_unchecked(&core);
            iterations += 1;
        }
        let slots = self
            .graph
            .row(x)
            .iter()
            .enumerate()
            .filter(|(_, p)| !heavy.contains(p))
            .map(|(y, _)| y)
            .collect();
        Ok(AssignmentResult {
            slots,
            iterations,
            final_core: core,
            core_sizes,
        })
    }

    /// Assigns every distinct element of `list` and tallies right-node loads.
    pub fn match_all(&self, list: &[usize]) -> Result<Matching> {
        if list.len() > self.params.capacity {
            return Err(Error::CapacityExceeded {
                len: list.len(),
                capacity: self.params.capacity,
            });
        }
        let mut seen = LeftSet::new();
        let mut entries = Vec::new();
        let mut load = BTreeMap::new();
        for &x in list {
            if !seen.insert(x) {
                continue;
            }
            let a = self.assign(list, x)?;
            let targets: BTreeSet<usize> = a.targets(self.graph, x).into_iter().collect();
            for p in targets {
                *load.entry(p).or_insert(0) += 1;
            }
            entries.push((x, a));
        }
        Ok(Matching {
            entries,
            load,
            list_len: list.len(),
        })
    }

    pub fn load_bound(&self, list_len: usize) -> usize {
        load_bound(list_len, self.params.share_bound)
    }

    pub fn quality_bound(&self) -> Rational {
        quality_bound(&self.params.epsilon, self.graph.left_degree())
    }
}
