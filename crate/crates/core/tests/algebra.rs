mod common;

use common::*;
use polaris_core::algebra::{
    annihilator, components_linearly_independent, derived_series, is_engel, is_strongly_triangular,
    multiplication_operator, product_span, quotient, triangulate, upper_series, Subspace,
};
use polaris_core::polarize::conjugate_map;
use polaris_core::{int, jacobian, polarize, polarize_with_arity, Error, QMatrix, SymAlgebra};
use proptest::prelude::*;

fn chain_is_monotone(chain: &[Subspace], decreasing: bool) -> bool {
    chain.windows(2).all(|w| {
        if decreasing {
            w[1].is_subspace_of(&w[0]) && w[1].dim() < w[0].dim()
        } else {
            w[0].is_subspace_of(&w[1]) && w[0].dim() < w[1].dim()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engel_iff_nilpotent_jacobian(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = if seed % 3 == 0 {
            random_engel(&mut r, n, m, 3)
        } else {
            random_homogeneous(&mut r, n, m, 4)
        };
        let a = polarize_with_arity(&h, m as usize).unwrap();
        let op = multiplication_operator(&a);
        prop_assert_eq!(op.scale(&int(m as i64)), jacobian(&h));
        prop_assert_eq!(is_engel(&a), jacobian(&h).is_nilpotent().unwrap());
    }

    #[test]
    fn full_square_iff_independent_components(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = random_homogeneous(&mut r, n, m, 4);
        let a = polarize_with_arity(&h, m as usize).unwrap();
        let full = Subspace::full(n);
        let square = product_span(&a, &vec![&full; m as usize]).unwrap();
        prop_assert_eq!(square.dim() == n, components_linearly_independent(&h));
        let derived = derived_series(&a);
        prop_assert_eq!(derived.dims()[0], n);
        if derived.chain.len() > 1 {
            prop_assert_eq!(&derived.chain[1], &square);
        }
    }

    #[test]
    fn series_are_monotone(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let a = polarize_with_arity(&random_homogeneous(&mut r, n, m, 3), m as usize).unwrap();
        let d = derived_series(&a);
        prop_assert!(chain_is_monotone(&d.chain, true));
        prop_assert_eq!(d.verdict, d.chain.last().unwrap().is_zero());
        let u = upper_series(&a);
        prop_assert!(chain_is_monotone(&u.chain, false));
        prop_assert_eq!(u.verdict, u.chain.last().unwrap().is_full());
        prop_assert_eq!(u.chain.len() > 1 && u.chain[1] == annihilator(&a), u.chain.len() > 1);
    }

    #[test]
    fn series_dimensions_are_invariant(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let h = random_homogeneous(&mut r, n, m, 3);
        let alpha = random_invertible(&mut r, n);
        let a = polarize_with_arity(&h, m as usize).unwrap();
        let b = polarize_with_arity(&conjugate_map(&alpha, &h).unwrap(), m as usize).unwrap();
        prop_assert_eq!(derived_series(&a).dims(), derived_series(&b).dims());
        prop_assert_eq!(upper_series(&a).dims(), upper_series(&b).dims());
        prop_assert_eq!(is_engel(&a), is_engel(&b));
    }

    #[test]
    fn conjugated_triangular_maps_triangulate(seed in any::<u64>(), n in 1usize..=4, m in 2u32..=3) {
        let mut r = rng(seed);
        let t = random_strongly_triangular(&mut r, n, m, 3);
        prop_assert!(is_strongly_triangular(&t));
        let alpha = random_invertible(&mut r, n);
        let h = conjugate_map(&alpha, &t).unwrap();
        let a = polarize_with_arity(&h, m as usize).unwrap();
        prop_assert!(upper_series(&a).verdict);
        let beta = triangulate(&a).unwrap();
        prop_assert!(is_strongly_triangular(&conjugate_map(&beta, &h).unwrap()));
    }

    #[test]
    fn annihilator_quotient_drops_dimension(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let h = random_engel(&mut r, n, 2, 3);
        let a = polarize_with_arity(&h, 2).unwrap();
        let ann = annihilator(&a);
        let q = quotient(&a, &ann).unwrap();
        prop_assert_eq!(q.dim(), n - ann.dim());
        prop_assert_eq!(q.arity(), 2);
    }
}

#[test]
fn non_triangulable_reports_error() {
    let x = var(2, 0);
    let h = polaris_core::PolyMap::new(vec![&x * &x, polaris_core::Polynomial::zero(2)]).unwrap();
    assert_eq!(triangulate(&polarize(&h).unwrap()), Err(Error::NotNilpotent));
}

#[test]
fn catalog_series() {
    let a = polarize(&suttles()).unwrap();
    assert_eq!(derived_series(&a).dims(), vec![5, 3, 0]);
    assert!(derived_series(&a).verdict);
    assert!(annihilator(&a).is_zero());
    assert!(!upper_series(&a).verdict);
    assert!(is_engel(&a));

    for h in [ternary(), ternary_with_cube()] {
        let a = polarize(&h).unwrap();
        assert!(is_engel(&a));
        assert!(derived_series(&a).verdict);
    }
    let z = SymAlgebra::zero(3, 2).unwrap();
    assert_eq!(upper_series(&z).dims(), vec![0, 3]);
    assert_eq!(triangulate(&z).unwrap(), QMatrix::identity(3));
}
