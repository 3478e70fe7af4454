use std::collections::BTreeSet;

use cornerlab::hull::{CornerPolyhedron, EnumCaps};
use cornerlab::par::Exec;
use cornerlab::rational::{dot, Q};
use cornerlab::selftest::{brute_force, random_rational_instance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>(), n in 1usize..=2, np in 1usize..=3, den in 2i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_rational_instance(&mut rng, n, np, den);
        let cp = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        let (pts, rays) = brute_force(&inst);
        prop_assert!(cp.is_complete());
        prop_assert_eq!(cp.points.iter().map(|p| p.0.clone()).collect::<BTreeSet<_>>(), pts);
        prop_assert_eq!(cp.rays.iter().map(|p| p.0.clone()).collect::<BTreeSet<_>>(), rays);
    }

    #[test]
    fn facets_are_valid_and_tight(seed in any::<u64>(), n in 1usize..=2, np in 1usize..=3, den in 2i64..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_rational_instance(&mut rng, n, np, den);
        let cp = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        if cp.is_empty() {
            return Ok(());
        }
        let (pts, rays) = (cp.point_vectors(), cp.ray_vectors());
        for f in cp.facets().unwrap() {
            prop_assert!(pts.iter().all(|e| f.holds(e)));
            prop_assert!(rays.iter().all(|r| dot(&f.a, r) >= Q::from_integer(0.into())));
            prop_assert!(pts.iter().any(|e| f.slack(e) == Q::from_integer(0.into())));
        }
    }

    #[test]
    fn parallel_and_sequential_agree(seed in any::<u64>(), np in 1usize..=4, den in 2i64..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_rational_instance(&mut rng, 2, np, den);
        let a = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        let b = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Parallel).unwrap();
        prop_assert_eq!(a.points, b.points);
        prop_assert_eq!(a.rays, b.rays);
    }
}
