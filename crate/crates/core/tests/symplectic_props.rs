mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn form_is_antisymmetric(s in arb_skew(8), seed in any::<u64>()) {
        prop_assert_eq!(antisymmetry(&s, seed), Ok(()));
    }

    #[test]
    fn radical_and_rank_fill_the_space(s in arb_skew(8), kill in 0usize..4) {
        prop_assert_eq!(radical_rank(&s, kill), Ok(()));
    }

    #[test]
    fn complete_lagrangians_have_half_dimension(m in 1usize..=8, p_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let p = ((m as f64) * p_frac).round() as usize;
        prop_assert_eq!(complete_lagrangian_dimension(m, p, seed), Ok(()));
    }

    #[test]
    fn balanced_forms_admit_complete_lagrangians(d in 1usize..=4, seed in any::<u64>()) {
        prop_assert_eq!(complete_lagrangian_dimension(2 * d, d, seed), Ok(()));
    }
}
