use std::collections::BTreeSet;

use proptest::prelude::*;

use fibdisp::dispersion::{
    box_is_empty, nonperiodic_dispersion_2d, periodic_dispersion_2d, periodic_dispersion_2d_reference,
    periodic_dispersion_nd,
};
use fibdisp::pointset::{transform, GridPointSet, Symmetry};
use fibdisp::search::{search_optimal_3d, search_range_2d};
use fibdisp::Rational;

fn point_set(dim: usize, max_points: usize) -> impl Strategy<Value = GridPointSet> {
    (2u64..=24).prop_flat_map(move |den| {
        prop::collection::btree_set(prop::collection::vec(0..den, dim), 1..=max_points)
            .prop_map(move |pts: BTreeSet<Vec<u64>>| GridPointSet::new(dim, den, pts.into_iter().collect()).unwrap())
    })
}

fn symmetry() -> impl Strategy<Value = Symmetry> {
    prop_oneof![
        (0u64..7, 1u64..8, 0u64..7, 1u64..8).prop_map(|(a, b, c, d)| Symmetry::Translate(vec![
            Rational::ratio(a as u128 % b as u128, b as u128),
            Rational::ratio(c as u128 % d as u128, d as u128),
        ])),
        Just(Symmetry::Permute(vec![1, 0])),
        (0usize..2).prop_map(Symmetry::Reflect),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dispersion_is_invariant_under_torus_symmetries(p in point_set(2, 21), t in symmetry()) {
        let moved = transform(&p, &t).unwrap();
        prop_assert_eq!(periodic_dispersion_2d(&p).unwrap().value, periodic_dispersion_2d(&moved).unwrap().value);
    }

    #[test]
    fn periodic_witnesses_are_empty_and_exact(p in point_set(2, 21)) {
        let r = periodic_dispersion_2d(&p).unwrap();
        prop_assert!(box_is_empty(&p, &r.witness));
        prop_assert_eq!(r.witness.area(), r.value.clone());
        prop_assert!(!box_is_empty(&p, &r.witness.inflated(&Rational::ratio(1, 1000))) || r.value == Rational::one());
    }

    #[test]
    fn nonperiodic_is_at_most_periodic(p in point_set(2, 21)) {
        let np = nonperiodic_dispersion_2d(&p).unwrap();
        prop_assert!(box_is_empty(&p, &np.witness));
        prop_assert!(np.witness.extents().iter().all(|e| !e.wraps()));
        prop_assert!(np.value <= periodic_dispersion_2d(&p).unwrap().value);
    }

    #[test]
    fn planar_routes_agree_on_arbitrary_sets(p in point_set(2, 14)) {
        let sweep = periodic_dispersion_2d(&p).unwrap();
        let reference = periodic_dispersion_2d_reference(&p).unwrap();
        let nd = periodic_dispersion_nd(&p).unwrap();
        prop_assert_eq!(&sweep.value, &reference.value);
        prop_assert_eq!(&sweep.value, &nd.value);
        prop_assert_eq!(&sweep.witness, &nd.witness);
    }

    #[test]
    fn spatial_witnesses_are_empty(p in point_set(3, 8)) {
        let r = periodic_dispersion_nd(&p).unwrap();
        prop_assert!(box_is_empty(&p, &r.witness));
        prop_assert_eq!(r.witness.area(), r.value);
    }
}

#[test]
fn searches_do_not_depend_on_worker_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| (search_range_2d(2, 60).unwrap(), search_optimal_3d(6).unwrap()))
    };
    let (one, one_3d) = run(1);
    for threads in [2, 5] {
        let (many, many_3d) = run(threads);
        assert_eq!(one, many);
        assert_eq!(one_3d, many_3d);
    }
}
