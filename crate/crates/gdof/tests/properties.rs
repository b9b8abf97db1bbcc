//! Property tests for the structural invariants.

use gdof::verify::lp_sampling_counterexample;
use gdof::{
    bounds_at, canonical, converse_sum_upper, converse_weighted_rhs, three_slot_ledger,
    weighted_rate_coeff, Constraint, LinearProgram, RegionCase,
};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = f64> {
    0.0..3.0f64
}

proptest! {
    #[test]
    fn canonicalization_orders_and_is_idempotent(a in exponent(), b in exponent()) {
        let (c, swapped) = canonical(a, b).unwrap();
        prop_assert!(c.alpha2() <= c.alpha1());
        prop_assert_eq!(swapped, b > a);
        let (c2, swapped2) = canonical(c.alpha1(), c.alpha2()).unwrap();
        prop_assert_eq!(c2, c);
        prop_assert!(!swapped2);
    }

    #[test]
    fn exactly_one_region_predicate_holds(a in exponent(), b in exponent()) {
        let (c, _) = canonical(a, b).unwrap();
        let (a1, a2) = (c.alpha1(), c.alpha2());
        let predicates = [
            a1 <= 1.0 && a2 <= 1.0,
            a1 > 1.0 && a2 <= 1.0 && a1 + 2.0 * a2 >= 2.0,
            a1 > 1.0 && a2 > 1.0,
            a1 > 1.0 && a2 <= 1.0 && a1 + 2.0 * a2 < 2.0,
        ];
        prop_assert_eq!(predicates.iter().filter(|&&p| p).count(), 1);
        let tag_index = match c.region() {
            RegionCase::BothWeak => 0,
            RegionCase::MixedCovered => 1,
            RegionCase::BothStrong => 2,
            RegionCase::MixedOpen => 3,
        };
        prop_assert!(predicates[tag_index]);
    }

    #[test]
    fn converse_upper_is_symmetric_and_bounded(a in exponent(), b in exponent()) {
        let u1 = converse_sum_upper(&canonical(a, b).unwrap().0);
        let u2 = converse_sum_upper(&canonical(b, a).unwrap().0);
        prop_assert_eq!(u1.to_bits(), u2.to_bits());
        prop_assert!((0.0..=2.0 + 1e-9).contains(&u1));
    }

    #[test]
    fn bounds_are_ordered(a in exponent(), b in exponent()) {
        let (c, _) = canonical(a, b).unwrap();
        let bounds = bounds_at(&c);
        if let Some(lower) = bounds.lower {
            prop_assert!(lower <= bounds.upper + 1e-9);
            prop_assert!(bounds.tight == ((bounds.upper - lower).abs() <= 1e-9));
        } else {
            prop_assert_eq!(bounds.region, RegionCase::MixedOpen);
            prop_assert!(!bounds.tight);
        }
    }

    #[test]
    fn rank_zero_dominates_weighted_coefficient(alpha2 in 0.0..3.0f64) {
        let c0 = weighted_rate_coeff(0, alpha2).unwrap();
        for k in 1..=2u8 {
            prop_assert!(weighted_rate_coeff(k, alpha2).unwrap() <= c0 + 1e-12);
        }
        prop_assert!((c0 - converse_weighted_rhs(alpha2).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn ledger_totals_close_identity(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (c, _) = canonical(a, b).unwrap();
        let ledger = three_slot_ledger(&c).unwrap();
        let total = ledger.d1 + ledger.d2;
        let expected = 2.0 - (c.alpha1() + c.alpha2()) / 3.0;
        prop_assert!((total - expected).abs() < 1e-12);
        prop_assert!(ledger.entries.iter().all(|e| e.gdof >= 0.0));
    }

    /// Random bounded programs: the vertex optimum dominates sampling and
    /// the returned vertex is feasible.
    #[test]
    fn lp_vertex_dominates_sampling(seed in any::<u64>()) {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let lp = gdof::verify::random_bounded_lp(&mut rng, 4);
        prop_assert_eq!(lp_sampling_counterexample(&lp, 500, seed), None);
    }

    /// The solver never returns an infeasible point as optimal, even for
    /// arbitrary 2-variable constraint soups.
    #[test]
    fn lp_solution_always_certified(
        rows in proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64, -1.0..2.0f64), 1..10)
    ) {
        let constraints: Vec<Constraint> = rows
            .iter()
            .map(|&(c1, c2, b)| Constraint::new(vec![c1, c2], b))
            .collect();
        let lp = LinearProgram::new(
            vec!["d1".into(), "d2".into()],
            constraints,
            vec![1.0, 1.0],
        ).unwrap();
        let sol = lp.solve().unwrap();
        if sol.status == gdof::LpStatus::Optimal {
            for c in &lp.constraints {
                let lhs: f64 = c.coeffs.iter().zip(&sol.point).map(|(a, x)| a * x).sum();
                prop_assert!(lhs <= c.bound + 1e-9);
            }
            let obj: f64 = lp.objective.iter().zip(&sol.point).map(|(a, x)| a * x).sum();
            prop_assert!((obj - sol.value).abs() <= 1e-9);
        }
    }
}
