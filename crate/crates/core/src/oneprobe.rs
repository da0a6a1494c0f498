//! Dynamic one-probe membership storage.
//!
//! The table has one bit per right node of an online matching graph. An
//! element `x` owns the bits of its assigned neighbors `f(S̃, x)`, where `S̃`
//! lists every element ever inserted in first-insertion order; insertion sets
//! them, deletion clears them. A query reads the bit behind one uniformly
//! chosen edge of `x`, so it never touches `S̃` and never takes the lock.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, MutexGuard};

use crate::disjointify::OnlineMatcher;
use crate::error::{Error, Result};
use crate::ratio::{ceil_log2, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Elements stay listed once inserted; deletion only marks them off.
    Dynamic,
    /// Only the most recent element may be deleted, and it leaves the list.
    Stack,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Dynamic => "dynamic",
            Mode::Stack => "stack",
        })
    }
}

/// One state-list entry: element and on/off mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub element: usize,
    pub on: bool,
}

#[derive(Debug)]
pub struct OneProbeStore<M> {
    matcher: M,
    table: Vec<AtomicU64>,
    state: Mutex<Vec<Entry>>,
    capacity: usize,
    mode: Mode,
}

impl<M: OnlineMatcher> OneProbeStore<M> {
    /// The matcher must accept lists of length `capacity + 1`: a queried
    /// non-member is analysed as one extra element at the end of the list.
    pub fn new(matcher: M, capacity: usize, mode: Mode) -> Result<Self> {
        if capacity == 0 || matcher.capacity() < capacity + 1 {
            return Err(Error::InvalidParameter(format!(
                "store capacity {capacity} needs matching capacity at least {}, have {}",
                capacity + 1,
                matcher.capacity()
            )));
        }
        let words = matcher.right_count().div_ceil(64);
        Ok(Self {
            table: (0..words).map(|_| AtomicU64::new(0)).collect(),
            matcher,
            state: Mutex::new(Vec::new()),
            capacity,
            mode,
        })
    }

    pub fn matcher(&self) -> &M {
        &self.matcher
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `ε` of the underlying matching; bounds every query error.
    pub fn error_bound(&self) -> Rational {
        self.matcher.loss_bound()
    }

    fn lock(&self) -> MutexGuard<'_, Vec<Entry>> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn state(&self) -> Vec<Entry> {
        self.lock().clone()
    }

    /// `x ∈ S` iff `x` is listed with its mark on.
    pub fn contains(&self, x: usize) -> bool {
        self.lock().iter().any(|e| e.element == x && e.on)
    }

    fn ids(state: &[Entry]) -> Vec<usize> {
        state.iter().map(|e| e.element).collect()
    }

    fn owned_bits(&self, list: &[usize], x: usize) -> Result<BTreeSet<usize>> {
        self.matcher
            .assign_slots(list, x)?
            .into_iter()
            .map(|s| self.matcher.neighbor(x, s))
            .collect()
    }

    fn write_bit(&self, p: usize, value: bool) {
        let mask = 1u64 << (p % 64);
        if value {
            self.table[p / 64].fetch_or(mask, Ordering::SeqCst);
        } else {
            self.table[p / 64].fetch_and(!mask, Ordering::SeqCst);
        }
    }

    pub fn bit(&self, p: usize) -> bool {
        self.table[p / 64].load(Ordering::SeqCst) >> (p % 64) & 1 == 1
    }

    pub fn insert(&self, x: usize) -> Result<()> {
        self.insert_observed(x, |_| {})
    }

    /// Insertion that calls `on_write` after every individual bit write,
    /// while still holding the writer lock.
    pub fn insert_observed(&self, x: usize, mut on_write: impl FnMut(usize)) -> Result<()> {
        if x >= self.matcher.left_count() {
            return Err(Error::InvalidParameter(format!(
                "element {x} outside universe of size {}",
                self.matcher.left_count()
            )));
        }
        let mut state = self.lock();
        let at = match state.iter().position(|e| e.element == x) {
            Some(i) => i,
            None => {
                if state.len() >= self.capacity {
                    return Err(Error::CapacityExceeded {
                        len: state.len() + 1,
                        capacity: self.capacity,
                    });
                }
                state.push(Entry {
                    element: x,
                    on: false,
                });
                state.len() - 1
            }
        };
        let bits = match self.owned_bits(&Self::ids(&state), x) {
            Ok(bits) => bits,
            Err(e) => {
                if !state[at].on && at == state.len() - 1 {
                    state.pop();
                }
                return Err(e);
            }
        };
        state[at].on = true;
        for p in bits {
            self.write_bit(p, true);
            on_write(p);
        }
        Ok(())
    }

    pub fn delete(&self, x: usize) -> Result<()> {
        self.delete_observed(x, |_| {})
    }

    pub fn delete_observed(&self, x: usize, mut on_write: impl FnMut(usize)) -> Result<()> {
        let mut state = self.lock();
        let Some(at) = state.iter().position(|e| e.element == x) else {
            return Ok(());
        };
        if self.mode == Mode::Stack && at + 1 != state.len() {
            return Err(Error::Discipline(format!(
                "cannot delete {x}: top of stack is {}",
                state[state.len() - 1].element
            )));
        }
        let bits = self.owned_bits(&Self::ids(&state), x)?;
        state[at].on = false;
        for p in bits {
            self.write_bit(p, false);
            on_write(p);
        }
        if self.mode == Mode::Stack {
            state.pop();
        }
        Ok(())
    }

    /// Reads the single bit behind edge `probe` of `x`; returns the answer
    /// and the probed position.
    pub fn query(&self, x: usize, probe: usize) -> Result<(bool, usize)> {
        let p = self.matcher.neighbor(x, probe)?;
        Ok((self.bit(p), p))
    }

    /// Fraction of the `D'` probes that answer wrongly about `x`.
    pub fn exact_error(&self, x: usize) -> Result<Rational> {
        let member = self.contains(x);
        let degree = self.matcher.degree();
        let mut wrong = 0u64;
        for probe in 0..degree {
            if self.query(x, probe)?.0 != member {
                wrong += 1;
            }
        }
        Ok(Rational::new(wrong, degree as u64))
    }

    /// `f(S̃ + x, x)` as right node ids; `x` is appended when not listed.
    pub fn footprint(&self, x: usize) -> Result<BTreeSet<usize>> {
        let mut list = Self::ids(&self.lock());
        if !list.contains(&x) {
            list.push(x);
        }
        self.owned_bits(&list, x)
    }

    pub fn table_snapshot(&self) -> Vec<u64> {
        self.table
            .iter()
            .map(|w| w.load(Ordering::SeqCst))
            .collect()
    }

    pub fn popcount(&self) -> usize {
        self.table_snapshot()
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Table bits plus the state list at `⌈log₂ N⌉ + 1` bits per entry.
    pub fn size_bits(&self) -> u64 {
        let per_entry = ceil_log2(self.matcher.left_count() as u64) as u64 + 1;
        self.matcher.right_count() as u64 + per_entry * self.lock().len() as u64
    }

    /// Header line, hex bitmap (bit `p` is bit `p mod 64` of word `p / 64`,
    /// words printed lowest first) and one line per listed element.
    pub fn snapshot(&self) -> String {
        let state = self.lock();
        let mut out = format!(
            "store N={} R={} D={} K={} mode={}\n",
            self.matcher.left_count(),
            self.matcher.right_count(),
            self.matcher.degree(),
            self.capacity,
            self.mode
        );
        out.push_str("table ");
        for w in self.table_snapshot() {
            let _ = write!(out, "{w:016x}");
        }
        out.push('\n');
        for e in state.iter() {
            let _ = writeln!(
                out,
                "state {} {}",
                e.element,
                if e.on { "on" } else { "off" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjointify::NoShareMatcher;
    use crate::graph::{BipartiteGraph, MatchParams};

    fn store(mode: Mode) -> OneProbeStore<NoShareMatcher> {
        let base = BipartiteGraph::from_rows(
            6,
            &[
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![4, 5],
                vec![5, 0],
            ],
        )
        .unwrap();
        let params = MatchParams::new(3, Rational::new(1, 64), 2).unwrap();
        let m = NoShareMatcher::new(base, params, Rational::new(1, 4), None).unwrap();
        OneProbeStore::new(m, 2, mode).unwrap()
    }

    #[test]
    fn fresh_store_answers_no() {
        let s = store(Mode::Dynamic);
        for x in 0..6 {
            assert_eq!(s.exact_error(x).unwrap(), Rational::new(0, 1));
            assert!(!s.query(x, 0).unwrap().0);
        }
        assert_eq!(s.popcount(), 0);
    }

    #[test]
    fn insert_sets_exactly_the_footprint() {
        let s = store(Mode::Dynamic);
        let f = s.footprint(0).unwrap();
        s.insert(0).unwrap();
        assert_eq!(s.popcount(), f.len());
        assert!(f.iter().all(|&p| s.bit(p)));
        let before = s.table_snapshot();
        s.insert(0).unwrap();
        assert_eq!(s.table_snapshot(), before);
        assert!(s.exact_error(0).unwrap() <= s.error_bound());
    }

    #[test]
    fn capacity_counts_distinct_inserts() {
        let s = store(Mode::Dynamic);
        s.insert(0).unwrap();
        s.insert(1).unwrap();
        s.delete(1).unwrap();
        assert!(matches!(
            s.insert(2),
            Err(Error::CapacityExceeded {
                len: 3,
                capacity: 2
            })
        ));
        s.insert(1).unwrap();
    }

    #[test]
    fn delete_and_reinsert() {
        let s = store(Mode::Dynamic);
        s.insert(0).unwrap();
        let first = s.table_snapshot();
        s.insert(1).unwrap();
        s.delete(0).unwrap();
        assert!(!s.contains(0));
        assert!(s.exact_error(0).unwrap() <= s.error_bound());
        s.insert(0).unwrap();
        s.delete(1).unwrap();
        assert_eq!(s.table_snapshot(), first);
        s.delete(5).unwrap();
        assert_eq!(s.table_snapshot(), first);
    }

    #[test]
    fn stack_discipline() {
        let s = store(Mode::Stack);
        s.insert(0).unwrap();
        s.insert(1).unwrap();
        assert!(matches!(s.delete(0), Err(Error::Discipline(_))));
        s.delete(1).unwrap();
        s.insert(2).unwrap();
        assert_eq!(s.state().len(), 2);
        s.delete(2).unwrap();
        s.delete(0).unwrap();
        assert_eq!(s.popcount(), 0);
        assert!(s.state().is_empty());
    }

    #[test]
    fn capacity_must_leave_room_for_a_query() {
        let base = BipartiteGraph::identity(4, 2);
        let params = MatchParams::new(2, Rational::new(1, 8), 1).unwrap();
        let m = NoShareMatcher::new(base, params, Rational::new(1, 2), None).unwrap();
        assert!(OneProbeStore::new(m, 2, Mode::Dynamic).is_err());
    }

    #[test]
    fn snapshot_format() {
        let s = store(Mode::Dynamic);
        s.insert(3).unwrap();
        s.insert(4).unwrap();
        s.delete(4).unwrap();
        let text = s.snapshot();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("store N=6 R="));
        assert!(lines[0].ends_with("K=2 mode=dynamic"));
        assert!(lines[1].starts_with("table "));
        assert_eq!(&lines[2..], &["state 3 on", "state 4 off"]);
        assert_eq!(s.size_bits(), s.matcher().right_count() as u64 + 2 * 4);
    }
}
