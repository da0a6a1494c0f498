//! Left-regular bipartite multigraphs and the counting primitives over them.
//!
//! A graph is the function `Γ: L × [D] → R` stored row by row: slot `y` of
//! left node `x` holds `Γ(x, y)`. Rows may repeat a right id, so the
//! neighborhood of a left node is a multiset of size exactly `D`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{parse_err, Error, NodeSide, Result};
use crate::ratio::{check_open_unit, fmt_exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    left_degree: usize,
    edges: Vec<usize>,
}

impl BipartiteGraph {
    /// Builds a graph from a flat `N × D` edge table.
    pub fn new(
        left_count: usize,
        right_count: usize,
        left_degree: usize,
        edges: Vec<usize>,
    ) -> Result<Self> {
        if left_count == 0 || right_count == 0 || left_degree == 0 {
            return Err(Error::InvalidGraph(format!(
                "sizes must be positive (N={left_count}, M={right_count}, D={left_degree})"
            )));
        }
        if edges.len() != left_count * left_degree {
            return Err(Error::InvalidGraph(format!(
                "edge table has {} entries, expected {}",
                edges.len(),
                left_count * left_degree
            )));
        }
        if let Some(&bad) = edges.iter().find(|&&p| p >= right_count) {
            return Err(Error::InvalidNode {
                kind: NodeSide::Right,
                id: bad,
                count: right_count,
            });
        }
        Ok(Self {
            left_count,
            right_count,
            left_degree,
            edges,
        })
    }

    pub fn from_rows(right_count: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let degree = rows.first().map_or(0, Vec::len);
        if let Some(row) = rows.iter().find(|r| r.len() != degree) {
            return Err(Error::InvalidGraph(format!(
                "row of length {} in a graph of left degree {degree}",
                row.len()
            )));
        }
        let edges = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), right_count, degree, edges)
    }

    /// `ID(D)`: left node `x` has all `D` edges going to right node `x`.
    pub fn identity(n: usize, degree: usize) -> Self {
        let edges = (0..n)
            .flat_map(|x| std::iter::repeat_n(x, degree))
            .collect();
        Self::new(n, n, degree, edges).expect("identity graph is well formed")
    }

    /// Complete bipartite graph: every left node has one edge to each right node.
    pub fn complete(left_count: usize, right_count: usize) -> Self {
        let edges = (0..left_count).flat_map(|_| 0..right_count).collect();
        Self::new(left_count, right_count, right_count, edges)
            .expect("complete graph is well formed")
    }

    /// The three-node offline-but-not-online example, regularized to degree 2.
    ///
    /// Left `x1, x2, x3` are ids `0, 1, 2`; right `y1, y2` are ids `0, 1`.
    /// `x1` and `x3` have a single neighbor each, doubled to reach degree 2.
    pub fn offline_only() -> Self {
        Self::from_rows(2, &[vec![0, 0], vec![0, 1], vec![1, 1]])
            .expect("offline_only is well formed")
    }

    /// `n` left nodes of degree one, all adjacent to right node 0.
    pub fn star(n: usize) -> Self {
        Self::new(n, 1, 1, vec![0; n]).expect("star graph is well formed")
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn left_degree(&self) -> usize {
        self.left_degree
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn check_left(&self, x: usize) -> Result<()> {
        if x < self.left_count {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                kind: NodeSide::Left,
                id: x,
                count: self.left_count,
            })
        }
    }

    pub fn check_right(&self, p: usize) -> Result<()> {
        if p < self.right_count {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                kind: NodeSide::Right,
                id: p,
                count: self.right_count,
            })
        }
    }

    /// The row of `x`: its neighbor multiset in slot order.
    pub fn neighbors(&self, x: usize) -> Result<&[usize]> {
        self.check_left(x)?;
        Ok(self.row(x))
    }

    pub(crate) fn row(&self, x: usize) -> &[usize] {
        &self.edges[x * self.left_degree..(x + 1) * self.left_degree]
    }

    /// `Γ(x, y)`.
    pub fn neighbor(&self, x: usize, slot: usize) -> Result<usize> {
        self.check_left(x)?;
        if slot >= self.left_degree {
            return Err(Error::InvalidParameter(format!(
                "slot {slot} out of range for degree {}",
                self.left_degree
            )));
        }
        Ok(self.edges[x * self.left_degree + slot])
    }

    /// Neighbor multiset of `x` as right id → multiplicity.
    pub fn neighbor_multiset(&self, x: usize) -> Result<BTreeMap<usize, usize>> {
        let mut counts = BTreeMap::new();
        for &p in self.neighbors(x)? {
            *counts.entry(p).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// `N(S)`: distinct right neighbors of the members of `s`.
    pub fn neighbor_set(&self, s: &LeftSet) -> Result<BTreeSet<usize>> {
        self.check_set(s)?;
        Ok(s.iter().flat_map(|x| self.row(x).iter().copied()).collect())
    }

    /// `|ℰ(S, p)|`: edges from members of `s` into `p`, with multiplicity.
    pub fn crossing_count(&self, s: &LeftSet, p: usize) -> Result<usize> {
        self.check_set(s)?;
        self.check_right(p)?;
        Ok(s.iter()
            .map(|x| self.row(x).iter().filter(|&&q| q == p).count())
            .sum())
    }

    /// `|ℰ(S, p)|` for every `p ∈ N(S)`.
    pub fn crossing_counts(&self, s: &LeftSet) -> Result<BTreeMap<usize, usize>> {
        self.check_set(s)?;
        let mut counts = BTreeMap::new();
        for x in s.iter() {
            for &p in self.row(x) {
                *counts.entry(p).or_insert(0) += 1;
            }
        }
        Ok(counts)
    }

    /// `excess_S(r) = Σ_{p ∈ N(S)} max(|ℰ(S,p)| − r, 0)`.
    pub fn excess(&self, s: &LeftSet, r: usize) -> Result<usize> {
        if r == 0 {
            return Err(Error::InvalidParameter("share bound r must be >= 1".into()));
        }
        Ok(self
            .crossing_counts(s)?
            .values()
            .map(|&c| c.saturating_sub(r))
            .sum())
    }

    pub fn check_set(&self, s: &LeftSet) -> Result<()> {
        match s.iter().last() {
            Some(max) => self.check_left(max),
            None => Ok(()),
        }
    }

    /// Parses the text format: `N M D` then `N` rows of `D` right ids.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let dims = parse_numbers(hl, header)?;
        let [n, m, d] = dims[..] else {
            return Err(parse_err(hl, "header must be `N M D`"));
        };
        let mut edges = Vec::with_capacity(n * d);
        for _ in 0..n {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("expected {n} rows")))?;
            let row = parse_numbers(ln, line)?;
            if row.len() != d {
                return Err(parse_err(
                    ln,
                    format!("row has {} ids, expected {d}", row.len()),
                ));
            }
            if let Some(p) = row.iter().find(|&&p| p >= m) {
                return Err(parse_err(ln, format!("right id {p} out of range (M={m})")));
            }
            edges.extend(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after last row"));
        }
        Self::new(n, m, d, edges).map_err(|e| parse_err(hl, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.left_count, self.right_count, self.left_degree
        );
        for x in 0..self.left_count {
            let row: Vec<String> = self.row(x).iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse_err(line_no, format!("not a node id: {tok:?}")))
        })
        .collect()
}

/// A set of distinct left-node ids, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftSet(Vec<usize>);

impl LeftSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn insert(&mut self, x: usize) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, x);
                true
            }
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn union(&self, other: &LeftSet) -> LeftSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_subset(&self, other: &LeftSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

impl FromIterator<usize> for LeftSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl<const N: usize> From<[usize; N]> for LeftSet {
    fn from(ids: [usize; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl std::fmt::Display for LeftSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ids: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

/// `(K, ε, r)`: matching capacity, loss rate and share bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchParams {
    pub capacity: usize,
    pub epsilon: Rational,
    pub share_bound: usize,
}

impl MatchParams {
    pub fn new(capacity: usize, epsilon: Rational, share_bound: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter("capacity K must be >= 1".into()));
        }
        if share_bound == 0 {
            return Err(Error::InvalidParameter("share bound r must be >= 1".into()));
        }
        check_open_unit(&epsilon, "epsilon")?;
        Ok(Self {
            capacity,
            epsilon,
            share_bound,
        })
    }

    /// Whether `4ε < 1`, the regime in which the quality guarantee is non-vacuous.
    pub fn quality_regime(&self) -> bool {
        self.epsilon * 4 < Rational::from_integer(1)
    }
}

impl std::fmt::Display for MatchParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "K={} eps={} r={}",
            self.capacity,
            fmt_exact(&self.epsilon),
            self.share_bound
        )
    }
}
