mod common;

use proptest::prelude::*;
use tway::combgen::{CombinationRanker, StackCombinations};
use tway::{count_combinations, generate_nbit, generate_stack};

fn vecs(list: &tway::CombinationList) -> Vec<Vec<usize>> {
    list.iter().map(|c| c.indices().to_vec()).collect()
}

#[test]
fn five_choose_three_matches_popcount_filter() {
    let expected = common::subsets_by_popcount(5, 3);
    assert_eq!(expected.len(), 10);
    assert_eq!(expected[0], vec![0, 1, 2]);
    assert_eq!(expected[9], vec![2, 3, 4]);
    assert_eq!(vecs(&generate_stack(5, 3).unwrap()), expected);
}

#[test]
fn stack_equals_nbit_up_to_sixteen() {
    for k in 1..=16 {
        for t in 1..=k {
            let stack = generate_stack(k, t).unwrap();
            let nbit = generate_nbit(k, t).unwrap();
            assert_eq!(stack, nbit, "k={k} t={t}");
        }
    }
}

#[test]
fn counts_match_pascal_triangle() {
    for (k, t) in [(20, 2), (20, 6), (100, 2), (100, 4), (400, 2), (100, 6), (1000, 6)] {
        assert_eq!(
            u128::from(count_combinations(k, t).unwrap()),
            common::pascal(k, t),
            "C({k},{t})"
        );
    }
}

#[test]
fn streaming_counts_match_binomial() {
    for (k, t) in [(20, 2), (20, 3), (20, 6), (100, 2), (100, 3), (400, 2)] {
        let n = StackCombinations::new(k, t).unwrap().count_remaining();
        assert_eq!(n, count_combinations(k, t).unwrap(), "k={k} t={t}");
    }
}

proptest! {
    #[test]
    fn stack_output_is_strictly_increasing_sorted_and_complete(k in 1usize..=14, t_frac in 0.0f64..1.0) {
        let t = 1 + ((k - 1) as f64 * t_frac) as usize;
        let list = generate_stack(k, t).unwrap();
        prop_assert_eq!(list.len() as u64, count_combinations(k, t).unwrap());
        for c in list.iter() {
            prop_assert_eq!(c.len(), t);
            prop_assert!(c.indices().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(*c.indices().last().unwrap() < k);
        }
        for w in list.combos().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        prop_assert_eq!(vecs(&list), common::subsets_by_popcount(k, t));
    }

    #[test]
    fn rank_is_position(k in 1usize..=12, t_frac in 0.0f64..1.0) {
        let t = 1 + ((k - 1) as f64 * t_frac) as usize;
        let ranker = CombinationRanker::new(k, t).unwrap();
        for (pos, c) in common::subsets_by_popcount(k, t).iter().enumerate() {
            prop_assert_eq!(ranker.rank(c), pos as u64);
        }
    }
}
