//! From bounded sharing to disjoint assignments by polynomial hashing.
//!
//! Every left id `x < 2^n` is read as a polynomial of degree below `n` with
//! 0/1 coefficients over `GF(t)`. Each base edge `(x, p)` becomes the `t`
//! edges `(x, (p, x(a), a))` for `a ∈ GF(t)`, so the transformed graph has
//! degree `D·t` and `M·t²` right nodes. Two distinct labels agree on at most
//! `n − 1` points, which is what lets each element keep most of its copies
//! of a shared base node while avoiding every earlier sharer.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::BinaryField;
use crate::graph::{BipartiteGraph, MatchParams};
use crate::matcher::{load_bound, AssignmentResult, Matcher};
use crate::ratio::{ceil_log2, check_open_unit, retained, Rational};

/// Smallest power of two that is at least `(n−1)(r−1)/ε`, and at least 2.
pub fn pick_t(n: u32, r: usize, epsilon: &Rational) -> Result<u32> {
    check_open_unit(epsilon, "epsilon")?;
    let product = n.saturating_sub(1) as u64 * r.saturating_sub(1) as u64;
    let bound = (Rational::from_integer(product) / epsilon)
        .ceil()
        .to_integer();
    let t = bound.max(2).next_power_of_two();
    u32::try_from(t).map_err(|_| Error::InvalidParameter(format!("field order {t} too large")))
}

/// Number of label bits for `left_count` ids: `max(1, ⌈log₂ N⌉)`.
pub fn label_bits(left_count: usize) -> u32 {
    ceil_log2(left_count as u64).max(1)
}

/// A transformed right node `(p, x(a), a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub base: usize,
    pub value: u32,
    pub point: u32,
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.base, self.value, self.point)
    }
}

/// The graph `G'`, evaluated lazily from the base graph and the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedGraph {
    base: BipartiteGraph,
    field: BinaryField,
    label_bits: u32,
}

impl TransformedGraph {
    pub fn new(base: BipartiteGraph, field: BinaryField) -> Self {
        let label_bits = label_bits(base.left_count());
        Self {
            base,
            field,
            label_bits,
        }
    }

    pub fn base(&self) -> &BipartiteGraph {
        &self.base
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn label_bits(&self) -> u32 {
        self.label_bits
    }

    pub fn t(&self) -> usize {
        self.field.order() as usize
    }

    /// `D' = D·t`.
    pub fn degree(&self) -> usize {
        self.base.left_degree() * self.t()
    }

    /// `|R'| = M·t²`.
    pub fn right_count(&self) -> usize {
        self.base.right_count() * self.t() * self.t()
    }

    pub fn left_count(&self) -> usize {
        self.base.left_count()
    }

    /// `x(a)`.
    pub fn label_value(&self, x: usize, a: u32) -> Result<u32> {
        self.base.check_left(x)?;
        self.field.eval_label(x as u64, self.label_bits, a)
    }

    /// Slot `(y, a)` of a left node is numbered `y·t + a`.
    pub fn slot_index(&self, base_slot: usize, a: u32) -> usize {
        base_slot * self.t() + a as usize
    }

    pub fn split_slot(&self, slot: usize) -> (usize, u32) {
        (slot / self.t(), (slot % self.t()) as u32)
    }

    pub fn right_id(&self, triple: Triple) -> usize {
        let t = self.t();
        (triple.base * t + triple.value as usize) * t + triple.point as usize
    }

    pub fn triple_of(&self, id: usize) -> Triple {
        let t = self.t();
        Triple {
            base: id / (t * t),
            value: ((id / t) % t) as u32,
            point: (id % t) as u32,
        }
    }

    /// `(Γ(x, y), x(a), a)` for transformed slot `(y, a)`.
    pub fn transformed_neighbor(&self, x: usize, slot: usize) -> Result<Triple> {
        self.base.check_left(x)?;
        if slot >= self.degree() {
            return Err(Error::InvalidParameter(format!(
                "slot {slot} out of range for degree {}",
                self.degree()
            )));
        }
        let (y, a) = self.split_slot(slot);
        Ok(Triple {
            base: self.base.row(x)[y],
            value: self.field.eval_unchecked(x as u64, self.label_bits, a),
            point: a,
        })
    }
}

/// A graph together with an online assignment function for it.
///
/// Assignments are reported as edge slots (probe indices) of the left node.
pub trait OnlineMatcher {
    fn left_count(&self) -> usize;
    fn right_count(&self) -> usize;
    fn degree(&self) -> usize;
    /// Longest request list the assignment function accepts.
    fn capacity(&self) -> usize;
    /// Right endpoint of edge slot `probe` of `x`.
    fn neighbor(&self, x: usize, probe: usize) -> Result<usize>;
    /// Slots of `x` assigned for the request list `list`.
    fn assign_slots(&self, list: &[usize], x: usize) -> Result<Vec<usize>>;
    /// `ε` such that every assignment has at least `(1−ε)·degree` slots and
    /// distinct elements receive disjoint right nodes.
    fn loss_bound(&self) -> Rational;
}

/// Result of the disjoint assignment for one element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NoShareAssignment {
    /// Sorted transformed slots `y·t + a`.
    pub slots: Vec<usize>,
    /// The base assignment the slots were derived from.
    pub base: AssignmentResult,
    /// Largest number of earlier sharers of any assigned base node.
    pub max_sharers: usize,
}

/// The base online matcher composed with the hashing step.
#[derive(Debug, Clone)]
pub struct NoShareMatcher {
    graph: TransformedGraph,
    base_params: MatchParams,
    hash_epsilon: Rational,
}

impl NoShareMatcher {
    /// For a `(K, (1−ε)D)` expander: base share bound 1, sharing at most
    /// `2⌈log₂ K⌉` and `t` from [`pick_t`] with the same `ε`.
    pub fn for_expander(base: BipartiteGraph, capacity: usize, epsilon: Rational) -> Result<Self> {
        let params = MatchParams::new(capacity, epsilon, 1)?;
        Self::new(base, params, epsilon, None)
    }

    /// General form; `t_override` replaces the computed field order.
    pub fn new(
        base: BipartiteGraph,
        base_params: MatchParams,
        hash_epsilon: Rational,
        t_override: Option<u32>,
    ) -> Result<Self> {
        let sharing = load_bound(base_params.capacity, base_params.share_bound);
        let t = match t_override {
            Some(t) => t,
            None => pick_t(label_bits(base.left_count()), sharing, &hash_epsilon)?,
        };
        check_open_unit(&hash_epsilon, "hash epsilon")?;
        let field = BinaryField::new(t)?;
        Ok(Self {
            graph: TransformedGraph::new(base, field),
            base_params,
            hash_epsilon,
        })
    }

    pub fn graph(&self) -> &TransformedGraph {
        &self.graph
    }

    pub fn base_params(&self) -> &MatchParams {
        &self.base_params
    }

    pub fn hash_epsilon(&self) -> &Rational {
        &self.hash_epsilon
    }

    pub fn base_matcher(&self) -> Matcher<'_> {
        Matcher::new(self.graph.base(), self.base_params.clone())
    }

    /// Bound on how many elements share one base right node.
    pub fn sharing_bound(&self) -> usize {
        load_bound(self.base_params.capacity, self.base_params.share_bound)
    }

    /// Guaranteed `|f'(S,x)|`: `(1 − ε_hash)·|f(S,x)|·t`.
    pub fn retained_for(&self, base_count: usize) -> Rational {
        retained(&self.hash_epsilon, (base_count * self.graph.t()) as u64)
    }

    /// Computes `f'(S, x)`.
    pub fn assign_noshare(&self, list: &[usize], x: usize) -> Result<NoShareAssignment> {
        if list.len() > self.base_params.capacity {
            return Err(Error::CapacityExceeded {
                len: list.len(),
                capacity: self.base_params.capacity,
            });
        }
        let matcher = self.base_matcher();
        let base = matcher.assign(list, x)?;
        if base.slots.is_empty() {
            return Ok(NoShareAssignment {
                base,
                ..Default::default()
            });
        }
        let g = self.graph.base();
        let first = list.iter().position(|&y| y == x).expect("x occurs in list");

        let mut earlier: Vec<usize> = Vec::new();
        for &y in &list[..first] {
            if !earlier.contains(&y) {
                earlier.push(y);
            }
        }
        let mut sharers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let own: BTreeSet<usize> = base.targets(g, x).into_iter().collect();
        for &y in &earlier {
            let theirs: BTreeSet<usize> =
                matcher.assign(list, y)?.targets(g, y).into_iter().collect();
            for &p in own.intersection(&theirs) {
                sharers.entry(p).or_default().push(y);
            }
        }

        let t = self.graph.t() as u32;
        let bits = self.graph.label_bits();
        let field = self.graph.field();
        let values = |z: usize| -> Vec<u32> {
            (0..t)
                .map(|a| field.eval_unchecked(z as u64, bits, a))
                .collect()
        };
        let mine = values(x);
        let mut allowed: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &p in &own {
            let others: Vec<Vec<u32>> = sharers
                .get(&p)
                .map(|ys| ys.iter().map(|&y| values(y)).collect())
                .unwrap_or_default();
            let points = (0..t)
                .filter(|&a| others.iter().all(|v| v[a as usize] != mine[a as usize]))
                .collect();
            allowed.insert(p, points);
        }

        let row = g.row(x);
        let mut slots = Vec::new();
        for &y in &base.slots {
            for &a in &allowed[&row[y]] {
                slots.push(self.graph.slot_index(y, a));
            }
        }
        slots.sort_unstable();
        Ok(NoShareAssignment {
            slots,
            base,
            max_sharers: sharers.values().map(Vec::len).max().unwrap_or(0),
        })
    }
}

impl OnlineMatcher for NoShareMatcher {
    fn left_count(&self) -> usize {
        self.graph.left_count()
    }

    fn right_count(&self) -> usize {
        self.graph.right_count()
    }

    fn degree(&self) -> usize {
        self.graph.degree()
    }

    fn capacity(&self) -> usize {
        self.base_params.capacity
    }

    fn neighbor(&self, x: usize, probe: usize) -> Result<usize> {
        Ok(self
            .graph
            .right_id(self.graph.transformed_neighbor(x, probe)?))
    }

    fn assign_slots(&self, list: &[usize], x: usize) -> Result<Vec<usize>> {
        Ok(self.assign_noshare(list, x)?.slots)
    }

    fn loss_bound(&self) -> Rational {
        let loss = self.hash_epsilon + self.base_params.epsilon * 4;
        loss.min(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pick_t_examples() {
        assert_eq!(pick_t(9, 2, &Rational::new(1, 4)).unwrap(), 32);
        assert_eq!(pick_t(7, 1, &Rational::new(1, 3)).unwrap(), 2);
        assert_eq!(pick_t(2, 2, &Rational::new(1, 2)).unwrap(), 2);
        assert_eq!(pick_t(4, 3, &Rational::new(1, 5)).unwrap(), 32);
        assert_eq!(pick_t(4, 4, &Rational::new(1, 8)).unwrap(), 128);
        assert!(pick_t(4, 4, &Rational::new(0, 1)).is_err());
    }

    #[test]
    fn label_bits_floor() {
        assert_eq!(label_bits(1), 1);
        assert_eq!(label_bits(2), 1);
        assert_eq!(label_bits(3), 2);
        assert_eq!(label_bits(16), 4);
        assert_eq!(label_bits(17), 5);
    }

    #[test]
    fn transformed_parameters() {
        let tg =
            TransformedGraph::new(BipartiteGraph::offline_only(), BinaryField::new(4).unwrap());
        assert_eq!(tg.degree(), 8);
        assert_eq!(tg.right_count(), 2 * 16);
        assert_eq!(tg.left_count(), 3);
        for id in 0..tg.right_count() {
            assert_eq!(tg.right_id(tg.triple_of(id)), id);
        }
    }

    #[test]
    fn zero_label_neighbors() {
        let tg =
            TransformedGraph::new(BipartiteGraph::offline_only(), BinaryField::new(4).unwrap());
        for slot in 0..tg.degree() {
            let tr = tg.transformed_neighbor(0, slot).unwrap();
            let (y, a) = tg.split_slot(slot);
            assert_eq!(
                tr,
                Triple {
                    base: 0,
                    value: 0,
                    point: a
                }
            );
            assert_eq!(y, slot / 4);
        }
        assert!(tg.transformed_neighbor(0, 8).is_err());
        assert!(tg.transformed_neighbor(3, 0).is_err());
    }

    #[test]
    fn copies_of_one_edge_land_on_distinct_nodes() {
        let tg =
            TransformedGraph::new(BipartiteGraph::offline_only(), BinaryField::new(8).unwrap());
        for x in 0..3 {
            for y in 0..2 {
                let ids: BTreeSet<usize> = (0..8)
                    .map(|a| tg.right_id(tg.transformed_neighbor(x, tg.slot_index(y, a)).unwrap()))
                    .collect();
                assert_eq!(ids.len(), 8);
            }
        }
    }

    fn offline_only_noshare(t: u32) -> NoShareMatcher {
        let params = MatchParams::new(2, Rational::new(1, 8), 1).unwrap();
        NoShareMatcher::new(
            BipartiteGraph::offline_only(),
            params,
            Rational::new(1, 2),
            Some(t),
        )
        .unwrap()
    }

    #[test]
    fn singleton_keeps_every_copy() {
        let m = offline_only_noshare(2);
        let a = m.assign_noshare(&[1], 1).unwrap();
        assert_eq!(a.slots, vec![0, 1, 2, 3]);
        assert_eq!(a.max_sharers, 0);
        assert!(m.assign_noshare(&[1], 0).unwrap().slots.is_empty());
    }

    #[test]
    fn offline_only_shared_node_is_split_by_labels() {
        // x2 = id 1 (label z⁰ → constant 1), x1 = id 0 (zero polynomial);
        // over GF(2) with 2 label bits they differ at both points
        let m = offline_only_noshare(2);
        let list = [1, 0];
        let a1 = m.assign_noshare(&list, 1).unwrap();
        let a0 = m.assign_noshare(&list, 0).unwrap();
        assert_eq!(a0.max_sharers, 1);
        let g = m.graph();
        let ids = |x: usize, slots: &[usize]| -> BTreeSet<usize> {
            slots
                .iter()
                .map(|&s| g.right_id(g.transformed_neighbor(x, s).unwrap()))
                .collect()
        };
        let (s1, s0) = (ids(1, &a1.slots), ids(0, &a0.slots));
        assert!(s1.is_disjoint(&s0));
        assert!(a0.slots.len() as u64 >= 2);
        assert!(
            m.retained_for(a0.base.slots.len()) <= Rational::from_integer(a0.slots.len() as u64)
        );
    }

    #[test]
    fn capacity_enforced() {
        let m = offline_only_noshare(2);
        assert!(matches!(
            m.assign_noshare(&[0, 1, 2], 0),
            Err(Error::CapacityExceeded {
                len: 3,
                capacity: 2
            })
        ));
    }

    #[test]
    fn loss_bound_composes() {
        let m = offline_only_noshare(2);
        assert_eq!(m.loss_bound(), Rational::new(1, 2) + Rational::new(1, 2));
        let e =
            NoShareMatcher::for_expander(BipartiteGraph::identity(8, 2), 4, Rational::new(1, 16))
                .unwrap();
        assert_eq!(e.loss_bound(), Rational::new(5, 16));
        // n = 3, sharing 2·2·1 = 4: (2·3)·16 = 96 → 128
        assert_eq!(e.graph().t(), 128);
        assert_eq!(e.sharing_bound(), 4);
    }
}
