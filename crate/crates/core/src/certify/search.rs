//! Seeded random search for certified graphs.
//!
//! Each try draws a full edge table with every slot an independent uniform
//! right id, using one ChaCha stream seeded once per search, and keeps the
//! first draw whose exhaustive certificate passes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expansion::{certify_bounded_degree, certify_expansion};
use super::{check_budget, DegreeCertificate, ExpansionCertificate};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::ratio::{fmt_exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub n_left: usize,
    pub n_right: usize,
    pub degree: usize,
    pub capacity: usize,
    pub epsilon: Rational,
    pub seed: u64,
    pub max_tries: u32,
}

impl SearchParams {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<BipartiteGraph> {
        let edges = (0..self.n_left * self.degree)
            .map(|_| rng.random_range(0..self.n_right))
            .collect();
        BipartiteGraph::new(self.n_left, self.n_right, self.degree, edges)
    }

    fn validate(&self, budget: u64) -> Result<()> {
        if self.n_left == 0 || self.n_right == 0 || self.degree == 0 || self.capacity == 0 {
            return Err(Error::InvalidParameter(
                "N, M, D and K must be positive".into(),
            ));
        }
        check_budget(self.n_left, self.capacity, budget).map(|_| ())
    }
}

/// First draw that is a `(K, (1−ε)D)` expander.
pub fn search_random_expander(
    params: &SearchParams,
    budget: u64,
) -> Result<(BipartiteGraph, ExpansionCertificate)> {
    params.validate(budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<Rational> = None;
    for _ in 0..params.max_tries {
        let g = params.draw(&mut rng)?;
        let cert = certify_expansion(&g, params.capacity, budget)?;
        if cert.is_lossless(&params.epsilon) {
            return Ok((g, cert));
        }
        if best.is_none_or(|b| cert.min_ratio > b) {
            best = Some(cert.min_ratio);
        }
    }
    Err(Error::SearchFailed {
        tries: params.max_tries,
        best: best.map_or_else(|| "none".into(), |b| fmt_exact(&b)),
    })
}

/// First draw with `(r, K, ε)` bounded right degree.
pub fn search_bounded_degree(
    params: &SearchParams,
    share_bound: usize,
    budget: u64,
) -> Result<(BipartiteGraph, DegreeCertificate)> {
    params.validate(budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<Rational> = None;
    for _ in 0..params.max_tries {
        let g = params.draw(&mut rng)?;
        let cert = certify_bounded_degree(&g, params.capacity, share_bound, budget)?;
        if cert.holds(&params.epsilon) {
            return Ok((g, cert));
        }
        if best.is_none_or(|b| cert.max_normalized_excess < b) {
            best = Some(cert.max_normalized_excess);
        }
    }
    Err(Error::SearchFailed {
        tries: params.max_tries,
        best: best.map_or_else(|| "none".into(), |b| fmt_exact(&b)),
    })
}
