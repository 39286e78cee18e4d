mod common;

use common::*;
use polaris_core::algebra::is_engel;
use polaris_core::poly::{identity_minus, identity_plus};
use polaris_core::series::{
    decide_automorphism, formal_inverse_terms, free_algebra_nilpotent, inverse_terms_of_algebra,
    is_quasi_translation, iterate_map_nilpotent, truncation_is_exact, words_of_algebra,
    AutomorphismDecision, Outcome,
};
use polaris_core::{polarize, polarize_with_arity, PolyMap, Polynomial, Rational};
use proptest::prelude::*;

/// `Σ orderings(w) · w(X)` over the canonical words with `s - 1` products.
fn weighted_word_sum(h: &PolyMap, m: usize, s: usize) -> Vec<Polynomial> {
    let a = polarize_with_arity(h, m).unwrap();
    let table = words_of_algebra(&a, (s - 1) * (m - 1) + 1);
    let n = h.dim();
    let mut acc = vec![Polynomial::zero(n); n];
    for w in &table.levels[s - 1].words {
        let c = Rational::from_integer(w.word.orderings());
        for (x, p) in acc.iter_mut().zip(&w.value) {
            x.add_scaled(p, &c);
        }
    }
    acc
}

fn check_grading(h: &PolyMap, m: usize, s_max: usize) -> Result<(), TestCaseError> {
    let series = inverse_terms_of_algebra(&polarize_with_arity(h, m).unwrap(), s_max);
    for s in 1..=s_max {
        let d = ((s - 1) * (m - 1) + 1) as u32;
        for p in series.term(s) {
            prop_assert!(p.terms().all(|(mono, _)| mono.degree() == d));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn truncated_inverse_is_exact(seed in any::<u64>(), n in 1usize..=3, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = random_homogeneous(&mut r, n, m, 2);
        let s_max = if m == 2 { 4 } else { 3 };
        let series = formal_inverse_terms(&h, s_max).unwrap();
        prop_assert!(truncation_is_exact(&h, &series).unwrap());
        check_grading(&h, m as usize, s_max)?;
    }

    #[test]
    fn inverse_terms_are_word_sums(seed in any::<u64>(), n in 1usize..=3, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = random_homogeneous(&mut r, n, m, 2);
        let series = inverse_terms_of_algebra(&polarize_with_arity(&h, m as usize).unwrap(), 4);
        for s in 1..=4 {
            let words = weighted_word_sum(&h, m as usize, s);
            prop_assert_eq!(series.term(s), words.as_slice());
        }
    }

    #[test]
    fn quadratic_engel_maps_are_automorphisms(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let h = random_engel(&mut r, n, 2, 3);
        prop_assert!(is_engel(&polarize_with_arity(&h, 2).unwrap()));
        match decide_automorphism(&h, None).unwrap() {
            AutomorphismDecision::Automorphism { inverse } => {
                prop_assert_eq!(identity_minus(&h).compose(&inverse).unwrap(), PolyMap::identity(n));
                prop_assert_eq!(inverse.compose(&identity_minus(&h)).unwrap(), PolyMap::identity(n));
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn nilpotent_free_algebra_is_engel(seed in any::<u64>(), n in 1usize..=3, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = if seed % 2 == 0 {
            random_engel(&mut r, n, m, 2)
        } else {
            random_homogeneous(&mut r, n, m, 2)
        };
        let len = if m == 2 { 6 } else { 9 };
        let (verdict, _) = free_algebra_nilpotent(&h, len).unwrap();
        if verdict.outcome == Outcome::Holds {
            prop_assert!(is_engel(&polarize_with_arity(&h, m as usize).unwrap()));
        }
    }

    #[test]
    fn triangular_maps_iterate_to_zero(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = random_strongly_triangular(&mut r, n, m, 2);
        let v = iterate_map_nilpotent(&h, n).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Holds);
        prop_assert!(v.at.unwrap() <= n);
    }
}

#[test]
fn quasi_translations_invert_by_addition() {
    for h in [PolyMap::zero(3), ternary(), ternary().neg()] {
        assert!(is_quasi_translation(&h).unwrap());
        assert_eq!(
            decide_automorphism(&h, None).unwrap(),
            AutomorphismDecision::Automorphism { inverse: identity_plus(&h) }
        );
        let m = h.degree().map_or(2, |d| d as usize);
        let table = words_of_algebra(&polarize_with_arity(&h, m).unwrap(), 2 * m - 1);
        assert!(table.levels[2].all_zero());
    }
}

#[test]
fn catalog_words_match_inverse_terms() {
    for (h, m) in [(suttles(), 2), (ternary(), 3), (ternary_with_cube(), 3)] {
        let series = formal_inverse_terms(&h, 4).unwrap();
        assert!(truncation_is_exact(&h, &series).unwrap());
        for s in 1..=4 {
            assert_eq!(series.term(s), weighted_word_sum(&h, m, s).as_slice());
        }
    }
}

#[test]
fn cubic_increment_has_long_words() {
    let (verdict, table) = free_algebra_nilpotent(&ternary_with_cube(), 13).unwrap();
    assert_eq!(verdict.outcome, Outcome::UnknownAtBound);
    assert_eq!(table.max_length(), 13);
    assert!(table.levels.iter().all(|l| l.first_nonzero().is_some()));
    assert_eq!(verdict.evidence.len(), table.levels.len());
    assert!(is_engel(&polarize(&ternary_with_cube()).unwrap()));
}

#[test]
fn reduced_bound_can_be_inconclusive() {
    // the cubic increment needs inverse degree 9
    let h = ternary_with_cube();
    let decision = decide_automorphism(&h, Some(3)).unwrap();
    assert!(matches!(decision, AutomorphismDecision::UnknownAtBound { bound: 3, .. }));
    assert!(decide_automorphism(&h, None).unwrap().is_automorphism());
}
