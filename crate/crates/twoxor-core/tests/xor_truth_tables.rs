//! Reduction to block form checked against full truth tables.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twoxor_core::xor::{all_clauses, sample_expression, to_multigraph, Clause, Expression, FunctionRepr, Literal};

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |bits| {
        (0..n).map(|v| bits >> v & 1 == 1).collect()
    })
}

fn literal(n: usize) -> impl Strategy<Value = Literal> {
    (1..=n, any::<bool>()).prop_map(|(var, positive)| Literal { var, positive })
}

fn expression() -> impl Strategy<Value = Expression> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec((literal(n), literal(n)).prop_map(|(a, b)| Clause(a, b)), 0..7)
            .prop_map(move |cs| Expression::new(n, cs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduced_form_has_the_same_truth_table(e in expression()) {
        let f = e.reduce();
        let mut any_true = false;
        for a in assignments(e.n()) {
            let want = e.evaluate(&a).unwrap();
            any_true |= want;
            prop_assert_eq!(f.evaluate(&a), want);
        }
        prop_assert_eq!(f.is_false(), !any_true);
    }

    #[test]
    fn block_flips_leave_the_function_alone(e in expression()) {
        let f = e.reduce();
        if let FunctionRepr::Blocks { blocks, .. } = &f {
            for k in 0..blocks.len() {
                prop_assert_eq!(&f.flip_block(k), &f);
            }
        }
    }

    #[test]
    fn coloured_multigraph_round_trips(e in expression()) {
        let g = to_multigraph(&e);
        prop_assert_eq!(g.decode(), e.clone());
        prop_assert_eq!(g.underlying().m(), e.m());
    }

    #[test]
    fn display_parses_back(e in expression()) {
        let text = e.to_string();
        prop_assert_eq!(Expression::parse(e.n(), &text).unwrap(), e);
    }

    /// A satisfiable expression needs at least n − ξ clauses.
    #[test]
    fn support_bound(e in expression()) {
        if let Some(i) = e.reduce().partition() {
            prop_assert!(e.m() + i.num_blocks() >= e.n());
            prop_assert_eq!(i.size(), e.n());
        }
    }
}

#[test]
fn there_are_four_n_squared_clauses() {
    for n in 1..6 {
        let cs = all_clauses(n);
        assert_eq!(cs.len(), 4 * n * n);
        let mut dedup = cs.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), cs.len());
    }
}

#[test]
fn essential_variables_change_the_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let e = sample_expression(4, 3, &mut rng);
        let f = e.reduce();
        if f.is_false() {
            continue;
        }
        let essential = (1..=4)
            .filter(|&x| {
                assignments(4).any(|mut a| {
                    let v = f.evaluate(&a);
                    a[x - 1] = !a[x - 1];
                    f.evaluate(&a) != v
                })
            })
            .count();
        assert_eq!(essential, f.essential_count());
    }
}
