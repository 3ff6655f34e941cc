//! Randomized structural properties of words and machines.

use num_bigint::BigUint;
use proptest::prelude::*;

use autosparse::{expand, Dfa, Direction};

fn tuple_strategy(max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..=max, 1..=3)
}

/// Arbitrary complete machine: every transition table is valid, so the
/// structural properties must hold with no reachability assumptions.
fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (2u32..=4, 1usize..=2, 1usize..=5, any::<bool>())
        .prop_flat_map(|(base, dim, states, lsd)| {
            let asize = (base as usize).pow(dim as u32);
            (
                Just(base),
                Just(dim),
                Just(lsd),
                prop::collection::vec(0..states, states * asize),
                prop::collection::vec(any::<bool>(), states),
            )
        })
        .prop_map(|(base, dim, lsd, trans, accepting)| {
            let direction = if lsd { Direction::Lsd } else { Direction::Msd };
            Dfa::from_parts(base, dim, direction, 0, accepting, trans).unwrap()
        })
}

fn nats(tuple: &[u64]) -> Vec<BigUint> {
    tuple.iter().map(|&v| BigUint::from(v)).collect()
}

proptest! {
    #[test]
    fn evaluate_inverts_expand(tuple in tuple_strategy(1_000_000), base in 2u32..=10) {
        let w = expand(&nats(&tuple), base).unwrap();
        prop_assert!(w.is_canonical());
        prop_assert_eq!(w.evaluate(), nats(&tuple));
    }

    #[test]
    fn minimize_preserves_membership(m in dfa_strategy(), tuple in tuple_strategy(10_000)) {
        let t = nats(&tuple);
        let t = &t[..m.dim().min(t.len())];
        prop_assume!(t.len() == m.dim());
        prop_assert_eq!(m.minimize().member(t).unwrap(), m.member(t).unwrap());
    }

    #[test]
    fn trim_preserves_membership(m in dfa_strategy(), tuple in tuple_strategy(10_000)) {
        let t = nats(&tuple);
        let t = &t[..m.dim().min(t.len())];
        prop_assume!(t.len() == m.dim());
        prop_assert_eq!(m.trim().member(t).unwrap(), m.member(t).unwrap());
    }

    #[test]
    fn reverse_direction_preserves_membership(
        m in dfa_strategy(),
        tuple in tuple_strategy(10_000),
    ) {
        let t = nats(&tuple);
        let t = &t[..m.dim().min(t.len())];
        prop_assume!(t.len() == m.dim());
        prop_assert_eq!(m.reverse_direction().member(t).unwrap(), m.member(t).unwrap());
    }

    #[test]
    fn minimize_shrinks_and_is_idempotent(m in dfa_strategy()) {
        let once = m.minimize();
        prop_assert!(once.state_count() <= m.state_count());
        let twice = once.minimize();
        prop_assert!(twice.isomorphic_to(&once));
    }

    #[test]
    fn projection_stays_under_subset_bound(m in dfa_strategy()) {
        prop_assume!(m.dim() == 2);
        let msd = m.reverse_direction();
        let p = msd.project(&[1]).unwrap();
        prop_assert!(p.state_count() <= (1 << msd.state_count()) + msd.state_count());
    }
}
