mod common;

use common::graph;
use expander_match::certify::{
    condenser_distance, redirect_edges, CondenserParams, DEFAULT_BUDGET,
};
use expander_match::{BinaryField, BipartiteGraph, Error, LeftSet, Rational};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 4, 8, 16, 32, 256])
}

proptest! {
    #[test]
    fn field_axioms(t in order(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = BinaryField::new(t).unwrap();
        let (a, b, c) = (a % t, b % t, c % t);
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, 1), a);
        prop_assert!(f.mul(a, b) < t);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn distinct_labels_agree_rarely(t in order(), n in 1u32..7, a in any::<u64>(), b in any::<u64>()) {
        let f = BinaryField::new(t).unwrap();
        let mask = (1u64 << n) - 1;
        let (a, b) = (a & mask, b & mask);
        prop_assume!(a != b);
        let agree = (0..t)
            .filter(|&z| f.eval_label(a, n, z).unwrap() == f.eval_label(b, n, z).unwrap())
            .count();
        prop_assert!(agree < n as usize);
    }

    #[test]
    fn distance_is_normalized_excess(g in graph(8, 8, 4), mask in any::<u32>(), e in 0u32..4) {
        let n = g.left_count();
        let s: LeftSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let dist = condenser_distance(&g, &s, e);
        if s.is_empty() || !s.len().is_power_of_two() {
            prop_assert!(matches!(dist, Err(Error::InvalidSource(_))));
        } else {
            let total = (g.left_degree() * s.len()) as u64;
            let excess = g.excess(&s, 1 << e).unwrap() as u64;
            prop_assert_eq!(dist.unwrap() * total, Rational::from_integer(excess));
        }
    }

    #[test]
    fn redirection_moves_exactly_the_excess(g in graph(8, 8, 4), mask in any::<u32>(), e in 0u32..4) {
        let n = g.left_count();
        let s: LeftSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let cap = 1usize << e;
        let room = g.right_count() * cap >= g.left_degree() * s.len();
        match redirect_edges(&g, &s, e) {
            Ok(r) => {
                prop_assert!(room);
                prop_assert_eq!(r.moves.len(), g.excess(&s, cap).unwrap());
                prop_assert!(r.max_load() <= cap);
                for x in s.iter() {
                    let before = g.neighbors(x).unwrap();
                    let after = &r.rows[&x];
                    let changed = (0..before.len()).filter(|&i| before[i] != after[i]).count();
                    let moved = r.moves.iter().filter(|m| m.left == x).count();
                    prop_assert!(changed <= moved);
                }
            }
            Err(Error::Infeasible { .. }) => prop_assert!(!room),
            Err(other) => prop_assert!(false, "{}", other),
        }
    }
}

#[test]
fn condenser_iff_bounded_degree_with_room() {
    // every table of the n=2, d=1, m=2 family
    for code in 0u32..4u32.pow(8) {
        let edges: Vec<usize> = (0..8).map(|i| (code >> (2 * i) & 3) as usize).collect();
        let g = BipartiteGraph::new(4, 4, 2, edges).unwrap();
        for e in 0..3 {
            for k in 0..=2 {
                let p = CondenserParams::for_graph(&g, e, k).unwrap();
                for num in [0u64, 1, 2, 4] {
                    let epsilon = Rational::new(num, 8);
                    assert_eq!(
                        p.is_condenser(&g, &epsilon, DEFAULT_BUDGET).unwrap(),
                        p.bounded_degree_side(&g, &epsilon, DEFAULT_BUDGET).unwrap(),
                        "code={code} e={e} k={k} eps={epsilon}"
                    );
                }
            }
        }
    }
}
