//! Finite-set limits, the three-point construction and the size reduction
//! against brute-force enumeration.

mod common;

use codense::corpus::random_set3_diagram;
use codense::finset::{equalizer, all_maps, SetObj};
use codense::set_density::{reduce_set3, three_point_diagram, Verdict};
use codense::{compute_limit, is_limit_cone, Budget, Carrier};
use common::brute_families;
use proptest::prelude::*;

#[test]
fn three_point_limit_matches_enumeration() {
    for n in 3..=5 {
        let (d, cone, _) = three_point_diagram(n).unwrap();
        assert_eq!(brute_families(&d).len(), n);
        assert!(is_limit_cone(&d, &cone, Budget::default()).unwrap());
    }
}

#[test]
fn equalizer_sizes_over_all_pairs() {
    let three = SetObj::new(3);
    let maps = all_maps(three, three);
    let mut seen = [0usize; 4];
    for f in &maps {
        for g in &maps {
            let direct = (0..3).filter(|&x| f.apply(x) == g.apply(x)).count();
            let (e, incl) = equalizer(f, g).unwrap();
            assert_eq!(e.size(), direct);
            assert!(incl.is_injective());
            seen[direct] += 1;
        }
    }
    assert_eq!(seen.iter().sum::<usize>(), 729);
    // pairs agreeing on exactly k points: C(3,k) * 3^k * 6^(3-k)
    assert_eq!(seen, [216, 324, 162, 27]);
}

#[test]
fn enumeration_is_sorted_and_complete() {
    for seed in 0..200 {
        let d = random_set3_diagram(seed, 6, 12).unwrap();
        let lim = compute_limit(&d, Budget::default()).unwrap();
        let Carrier::Families(f) = lim.carrier else { unreachable!() };
        assert_eq!(f, brute_families(&d), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_predicts_brute_force(seed in any::<u64>()) {
        let d = random_set3_diagram(seed, 6, 12).unwrap();
        let size = brute_families(&d).len() as u64;
        prop_assert!(size == 0 || size.is_power_of_two());
        let r = reduce_set3(&d).unwrap();
        prop_assert_eq!(r.verdict.cardinality(), size);
        if let Verdict::PowerOfTwo(k) = r.verdict {
            prop_assert_eq!(k as usize, r.components.len());
            for &v in &r.surviving_nodes {
                prop_assert_eq!(d.object(v).size(), 2);
            }
        }
    }
}
