use std::fmt::Write as _;

use num_traits::Zero;

use super::{check_budget, SubsetWalk};
use crate::error::Result;
use crate::graph::{BipartiteGraph, LeftSet};
use crate::ratio::{fmt_exact, retained, Rational};

/// Exact minimum of `|N(S)| / |S|` over `1 ≤ |S| ≤ K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionCertificate {
    pub capacity: usize,
    pub degree: usize,
    pub min_ratio: Rational,
    pub witness_set: LeftSet,
    pub subsets_checked: u64,
}

impl ExpansionCertificate {
    /// Whether the graph is a `(K, γ)` expander.
    pub fn expands_by(&self, gamma: &Rational) -> bool {
        self.min_ratio >= *gamma
    }

    /// Whether the graph is a `(K, (1−ε)D)` expander, i.e. `(K, ε)` lossless.
    pub fn is_lossless(&self, epsilon: &Rational) -> bool {
        self.expands_by(&retained(epsilon, self.degree as u64))
    }

    pub fn to_report(&self, epsilon: Option<&Rational>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate=expansion");
        let _ = writeln!(out, "capacity={}", self.capacity);
        let _ = writeln!(out, "degree={}", self.degree);
        let _ = writeln!(out, "min_ratio={}", fmt_exact(&self.min_ratio));
        let _ = writeln!(out, "witness={}", join(self.witness_set.as_slice()));
        let _ = writeln!(out, "subsets={}", self.subsets_checked);
        if let Some(eps) = epsilon {
            let gamma = retained(eps, self.degree as u64);
            let _ = writeln!(out, "epsilon={}", fmt_exact(eps));
            let _ = writeln!(out, "required_ratio={}", fmt_exact(&gamma));
            let _ = writeln!(
                out,
                "{} expansion min_ratio>=(1-eps)D",
                verdict(self.expands_by(&gamma))
            );
        }
        out
    }
}

/// Exact maximum of `excess_S(r) / (D|S|)` over `1 ≤ |S| ≤ K`.
///
/// This is the smallest `ε` for which the graph has `(r, K, ε)` bounded
/// right degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCertificate {
    pub capacity: usize,
    pub share_bound: usize,
    pub degree: usize,
    pub max_normalized_excess: Rational,
    pub witness_set: LeftSet,
    pub subsets_checked: u64,
}

impl DegreeCertificate {
    pub fn holds(&self, epsilon: &Rational) -> bool {
        self.max_normalized_excess <= *epsilon
    }

    pub fn to_report(&self, epsilon: Option<&Rational>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate=bounded_degree");
        let _ = writeln!(out, "capacity={}", self.capacity);
        let _ = writeln!(out, "share_bound={}", self.share_bound);
        let _ = writeln!(out, "degree={}", self.degree);
        let _ = writeln!(
            out,
            "max_normalized_excess={}",
            fmt_exact(&self.max_normalized_excess)
        );
        let _ = writeln!(out, "witness={}", join(self.witness_set.as_slice()));
        let _ = writeln!(out, "subsets={}", self.subsets_checked);
        if let Some(eps) = epsilon {
            let _ = writeln!(out, "epsilon={}", fmt_exact(eps));
            let _ = writeln!(
                out,
                "{} bounded_degree excess<=eps*D*|S|",
                verdict(self.holds(eps))
            );
        }
        out
    }
}

pub(crate) fn join(ids: &[usize]) -> String {
    ids.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn certify_expansion(
    g: &BipartiteGraph,
    capacity: usize,
    budget: u64,
) -> Result<ExpansionCertificate> {
    let subsets_checked = check_budget(g.left_count(), capacity, budget)?;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    SubsetWalk::new(g, 1).run(capacity, &mut |s| {
        let ratio = Rational::new(s.distinct as u64, s.members.len() as u64);
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, s.members.to_vec()));
        }
    });
    // capacity 0 leaves the minimum over an empty family; report D
    let (min_ratio, witness) =
        best.unwrap_or((Rational::from_integer(g.left_degree() as u64), Vec::new()));
    Ok(ExpansionCertificate {
        capacity,
        degree: g.left_degree(),
        min_ratio,
        witness_set: witness.into_iter().collect(),
        subsets_checked,
    })
}

pub fn certify_bounded_degree(
    g: &BipartiteGraph,
    capacity: usize,
    share_bound: usize,
    budget: u64,
) -> Result<DegreeCertificate> {
    if share_bound == 0 {
        return Err(crate::Error::InvalidParameter(
            "share bound r must be >= 1".into(),
        ));
    }
    let subsets_checked = check_budget(g.left_count(), capacity, budget)?;
    let d = g.left_degree() as u64;
    let mut best = (Rational::zero(), Vec::new());
    SubsetWalk::new(g, share_bound).run(capacity, &mut |s| {
        let value = Rational::new(s.excess as u64, d * s.members.len() as u64);
        if value > best.0 || best.1.is_empty() {
            best = (value, s.members.to_vec());
        }
    });
    Ok(DegreeCertificate {
        capacity,
        share_bound,
        degree: g.left_degree(),
        max_normalized_excess: best.0,
        witness_set: best.1.into_iter().collect(),
        subsets_checked,
    })
}

/// Evaluates both sides of "(1, K, ε) bounded right degree ⇔ ((1−ε)D, K)
/// expander" from two independent certificates and reports whether they agree.
pub fn check_expander_degree_duality(
    g: &BipartiteGraph,
    capacity: usize,
    epsilon: &Rational,
    budget: u64,
) -> Result<bool> {
    let degree = certify_bounded_degree(g, capacity, 1, budget)?;
    let expansion = certify_expansion(g, capacity, budget)?;
    Ok(degree.holds(epsilon) == expansion.is_lossless(epsilon))
}
