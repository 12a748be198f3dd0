mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn polynomial_ring_axioms(a in raw_poly(), b in raw_poly(), c in raw_poly(), at in point()) {
        ring_axioms(&a, &b, &c, &at)?;
    }

    #[test]
    fn rewriting_is_idempotent_and_multiplicative(a in raw_poly(), b in raw_poly()) {
        rewrite_laws(&a, &b)?;
    }

    #[test]
    fn pade_matches_through_order(raw in raw_series(5), l in 0usize..3, m in 1usize..3) {
        pade_order(&raw, l, m)?;
    }

    #[test]
    fn series_solution_resubstitutes_to_zero(
        a in 1i64..6, b in 1i64..6, c in rational(), d in rational(), two in any::<bool>()
    ) {
        series_resubstitution(a, b, c, d, two, if two { 4 } else { 6 })?;
    }
}
