mod common;

use std::collections::BTreeSet;

use common::{graph, set_of};
use expander_match::certify::{
    certify_bounded_degree, certify_expansion, check_expander_degree_duality, offline_match,
    DEFAULT_BUDGET,
};
use expander_match::{BipartiteGraph, LeftSet, Rational};
use proptest::prelude::*;

fn brute_neighbors(g: &BipartiteGraph, s: &LeftSet) -> BTreeSet<usize> {
    s.iter()
        .flat_map(|x| g.neighbors(x).unwrap().to_vec())
        .collect()
}

fn brute_excess(g: &BipartiteGraph, s: &LeftSet, r: usize) -> usize {
    let mut counts = vec![0usize; g.right_count()];
    for x in s.iter() {
        for &p in g.neighbors(x).unwrap() {
            counts[p] += 1;
        }
    }
    counts.iter().map(|&c| c.saturating_sub(r)).sum()
}

/// Hall's condition for every subset of `s`.
fn hall_holds(g: &BipartiteGraph, s: &LeftSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    (1u32..1 << members.len()).all(|mask| {
        let sub: LeftSet = (0..members.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| members[i])
            .collect();
        brute_neighbors(g, &sub).len() >= sub.len()
    })
}

proptest! {
    #[test]
    fn text_round_trip(g in graph(8, 8, 3)) {
        prop_assert_eq!(BipartiteGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn excess_matches_counts(g in graph(8, 6, 3), mask in any::<u32>(), r in 1usize..5) {
        let s = set_of(mask, g.left_count());
        prop_assert_eq!(g.excess(&s, r).unwrap(), brute_excess(&g, &s, r));
        prop_assert_eq!(g.neighbor_set(&s).unwrap(), brute_neighbors(&g, &s));
    }

    #[test]
    fn excess_at_one_is_edge_deficit(g in graph(8, 6, 3), mask in any::<u32>()) {
        let s = set_of(mask, g.left_count());
        let d = g.left_degree();
        prop_assert_eq!(g.excess(&s, 1).unwrap(), d * s.len() - g.neighbor_set(&s).unwrap().len());
    }

    #[test]
    fn excess_is_nonincreasing_in_r(g in graph(8, 6, 3), mask in any::<u32>()) {
        let s = set_of(mask, g.left_count());
        let total = g.left_degree() * s.len();
        let values: Vec<usize> = (1..=total.max(1)).map(|r| g.excess(&s, r).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(*values.last().unwrap(), 0);
    }

    #[test]
    fn expansion_certificate_is_exact(g in graph(7, 6, 3), k in 1usize..4) {
        let n = g.left_count();
        let brute = (1u32..1 << n)
            .filter(|m| m.count_ones() as usize <= k)
            .map(|m| {
                let s = set_of(m, n);
                Rational::new(brute_neighbors(&g, &s).len() as u64, s.len() as u64)
            })
            .min()
            .unwrap();
        let cert = certify_expansion(&g, k, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(cert.min_ratio, brute);
        let w = &cert.witness_set;
        prop_assert_eq!(Rational::new(brute_neighbors(&g, w).len() as u64, w.len() as u64), brute);
    }

    #[test]
    fn degree_certificate_is_exact(g in graph(7, 6, 3), k in 1usize..4, r in 1usize..3) {
        let n = g.left_count();
        let d = g.left_degree() as u64;
        let brute = (1u32..1 << n)
            .filter(|m| m.count_ones() as usize <= k)
            .map(|m| {
                let s = set_of(m, n);
                Rational::new(brute_excess(&g, &s, r) as u64, d * s.len() as u64)
            })
            .max()
            .unwrap();
        let cert = certify_bounded_degree(&g, k, r, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(cert.max_normalized_excess, brute);
    }

    #[test]
    fn bounded_degree_and_expansion_agree(g in graph(8, 8, 3), k in 1usize..4, num in 0u64..8) {
        let epsilon = Rational::new(num, 8);
        prop_assert!(check_expander_degree_duality(&g, k, &epsilon, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn offline_matching_follows_hall(g in graph(6, 6, 3), mask in any::<u32>()) {
        let s = set_of(mask, g.left_count());
        match offline_match(&g, &s, 1).unwrap() {
            Ok(m) => {
                prop_assert!(hall_holds(&g, &s));
                let mut used = BTreeSet::new();
                for (x, ps) in &m {
                    prop_assert_eq!(ps.len(), 1);
                    for p in ps {
                        prop_assert!(g.neighbors(*x).unwrap().contains(p));
                        prop_assert!(used.insert(*p));
                    }
                }
            }
            Err(fail) => {
                prop_assert!(!hall_holds(&g, &s));
                prop_assert!(fail.hall_violator.is_subset(&s));
                prop_assert!(fail.neighborhood.len() < fail.hall_violator.len());
                prop_assert_eq!(&fail.neighborhood, &brute_neighbors(&g, &fail.hall_violator));
            }
        }
    }

    #[test]
    fn offline_rounds_give_disjoint_sets(g in graph(5, 10, 3), mask in any::<u32>(), rounds in 1usize..3) {
        let s = set_of(mask, g.left_count());
        if let Ok(m) = offline_match(&g, &s, rounds).unwrap() {
            let all: Vec<usize> = m.values().flatten().copied().collect();
            let distinct: BTreeSet<usize> = all.iter().copied().collect();
            prop_assert_eq!(all.len(), distinct.len());
            prop_assert!(m.values().all(|ps| ps.len() == rounds));
        }
    }
}

#[test]
fn parse_reports_line_numbers() {
    let err = BipartiteGraph::parse("2 3 1\n0\n# comment\n7\n").unwrap_err();
    assert!(err.to_string().contains("line 4"), "{err}");
}
