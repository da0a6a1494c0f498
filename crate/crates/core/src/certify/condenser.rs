//! The graph view of a condenser `C: {0,1}^n × {0,1}^d → {0,1}^m`.
//!
//! Only flat sources `U_S` are handled. For a flat source the distance from
//! `Y = C(U_S, U_d)` to the nearest distribution of min-entropy at least
//! `log|S| + d − e` is the probability mass above the cap `2^e / (D|S|)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::check_budget;
use super::expansion::certify_bounded_degree;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, LeftSet};
use crate::ratio::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondenserParams {
    /// `|L| = 2^n`.
    pub n: u32,
    /// `D = 2^d`.
    pub d: u32,
    /// `|R| = 2^m`.
    pub m: u32,
    /// Entropy loss bound.
    pub e: u32,
    /// Largest source min-entropy covered.
    pub k_max: u32,
}

impl CondenserParams {
    /// Reads `n, d, m` off a graph whose sizes are powers of two.
    pub fn for_graph(g: &BipartiteGraph, e: u32, k_max: u32) -> Result<Self> {
        let bits = |v: usize, what: &str| {
            if v.is_power_of_two() {
                Ok(v.trailing_zeros())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{what}={v} is not a power of two"
                )))
            }
        };
        let params = Self {
            n: bits(g.left_count(), "|L|")?,
            d: bits(g.left_degree(), "D")?,
            m: bits(g.right_count(), "|R|")?,
            e,
            k_max,
        };
        if k_max > params.n {
            return Err(Error::InvalidParameter(format!(
                "k_max={k_max} exceeds n={}",
                params.n
            )));
        }
        Ok(params)
    }

    /// `m ≥ k_max + d − e`.
    pub fn room_condition(&self) -> bool {
        self.m as i64 >= self.k_max as i64 + self.d as i64 - self.e as i64
    }

    /// Overhead `δ = m − k_max`.
    pub fn overhead(&self) -> i64 {
        self.m as i64 - self.k_max as i64
    }

    /// Whether the graph is a `k →_ε k+d−e` condenser for every `k ≤ k_max`
    /// with `2^k` integral, checked source by source on flat distributions.
    pub fn is_condenser(
        &self,
        g: &BipartiteGraph,
        epsilon: &Rational,
        budget: u64,
    ) -> Result<bool> {
        if !self.room_condition() {
            return Ok(false);
        }
        let max_size = 1usize << self.k_max;
        check_budget(g.left_count(), max_size, budget)?;
        let mut ok = true;
        let mut members = Vec::new();
        for_each_subset(g.left_count(), max_size, &mut members, &mut |s| {
            if ok {
                let set: LeftSet = s.iter().copied().collect();
                ok = clipped_mass(g, &set, self.e) <= *epsilon;
            }
        });
        Ok(ok)
    }

    /// The other side of the equivalence: `(2^e, 2^k_max, ε)` bounded right
    /// degree together with the room condition.
    pub fn bounded_degree_side(
        &self,
        g: &BipartiteGraph,
        epsilon: &Rational,
        budget: u64,
    ) -> Result<bool> {
        let cert = certify_bounded_degree(g, 1 << self.k_max, cap(self.e) as usize, budget)?;
        Ok(self.room_condition() && cert.holds(epsilon))
    }
}

fn for_each_subset(n: usize, k: usize, members: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    let start = members.last().map_or(0, |&x| x + 1);
    for x in start..n {
        members.push(x);
        visit(members);
        if members.len() < k {
            for_each_subset(n, k, members, visit);
        }
        members.pop();
    }
}

fn cap(e: u32) -> u64 {
    1u64.checked_shl(e).unwrap_or(u64::MAX)
}

/// Mass of `Y = C(U_S, U_d)` above the per-point cap `2^e / (D|S|)`.
fn clipped_mass(g: &BipartiteGraph, s: &LeftSet, e: u32) -> Rational {
    let total = (g.left_degree() * s.len()) as u64;
    let ceiling = Rational::new(cap(e).min(total), total);
    let mut mass: BTreeMap<usize, Rational> = BTreeMap::new();
    let unit = Rational::new(1, total);
    for x in s.iter() {
        for &p in g.row(x) {
            *mass.entry(p).or_insert_with(Rational::zero) += unit;
        }
    }
    mass.values()
        .filter(|&&y| y > ceiling)
        .fold(Rational::zero(), |acc, &y| acc + (y - ceiling))
}

/// Statistical distance from `C(U_S, U_d)` to min-entropy `log|S| + d − e`.
pub fn condenser_distance(g: &BipartiteGraph, s: &LeftSet, e: u32) -> Result<Rational> {
    g.check_set(s)?;
    if !s.len().is_power_of_two() {
        return Err(Error::InvalidSource(s.len()));
    }
    Ok(clipped_mass(g, s, e))
}

/// One redirected edge: slot `slot` of `left` moves from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeMove {
    pub left: usize,
    pub slot: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redirection {
    pub moves: Vec<EdgeMove>,
    /// Rows of the members of `S` after redirection.
    pub rows: BTreeMap<usize, Vec<usize>>,
}

impl Redirection {
    /// Largest number of edges from `S` landing on one right node.
    pub fn max_load(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in self.rows.values().flatten() {
            *counts.entry(p).or_insert(0) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }
}

/// Moves exactly `excess_S(2^e)` edge endpoints out of over-full right nodes
/// so that every right node receives at most `2^e` edges from `S`.
pub fn redirect_edges(g: &BipartiteGraph, s: &LeftSet, e: u32) -> Result<Redirection> {
    g.check_set(s)?;
    let cap = cap(e);
    let edges = (g.left_degree() * s.len()) as u64;
    if (g.right_count() as u128) * (cap as u128) < edges as u128 {
        return Err(Error::Infeasible {
            right_count: g.right_count(),
            cap,
            edges,
        });
    }
    // loads after redirection: the first `cap` edges into a node stay
    let mut counts = vec![0u64; g.right_count()];
    for x in s.iter() {
        for &p in g.row(x) {
            counts[p] = (counts[p] + 1).min(cap);
        }
    }
    let mut kept = vec![0u64; g.right_count()];
    let mut receiver = 0usize;
    let mut moves = Vec::new();
    let mut rows = BTreeMap::new();
    for x in s.iter() {
        let mut row = g.row(x).to_vec();
        for (slot, p) in row.iter_mut().enumerate() {
            if kept[*p] < cap {
                kept[*p] += 1;
                continue;
            }
            while counts[receiver] >= cap {
                receiver += 1;
            }
            counts[receiver] += 1;
            moves.push(EdgeMove {
                left: x,
                slot,
                from: *p,
                to: receiver,
            });
            *p = receiver;
        }
        rows.insert(x, row);
    }
    Ok(Redirection { moves, rows })
}
