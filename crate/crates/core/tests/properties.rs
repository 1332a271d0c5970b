use braid_census::analysis::{lower_bound, upper_bound, witness_a_for_s, BoundReport, Verdict};
use braid_census::census::{count_actual, count_for_s_vector, count_for_s_vector_with, CensusOptions, Engine};
use braid_census::closedform::totient_sieve;
use braid_census::coords::{a_max, enumerate_a_tuples, enumerate_s_vectors, SVector, VirtualCoordinates};
use braid_census::diagram::{build_arc_graph, component_count, is_actual, tightness_check};
use braid_census::permcheck::{b3_actual, orbit_count, theta, B3Regime, PermSpec};
use proptest::prelude::*;

fn s_vector(max_n: usize, max_s: u32) -> impl Strategy<Value = SVector> {
    (1..=max_n).prop_flat_map(move |n| prop::collection::vec(0..=max_s, n - 1).prop_map(SVector::new))
}

fn coordinates(max_n: usize, max_s: u32) -> impl Strategy<Value = VirtualCoordinates> {
    s_vector(max_n, max_s).prop_flat_map(|sv| {
        let s = sv.full();
        let ranges: Vec<_> = sv.a_bounds().into_iter().map(|b| 0..=b).collect();
        ranges.prop_map(move |a| VirtualCoordinates::from_parts(s.clone(), a).unwrap())
    })
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn symmetries_are_commuting_involutions(c in coordinates(7, 6)) {
        prop_assert_eq!(c.sym_h().sym_h(), c.clone());
        prop_assert_eq!(c.sym_v().sym_v(), c.clone());
        prop_assert_eq!(c.sym_h().sym_v(), c.sym_v().sym_h());
        prop_assert_eq!(c.sym_c(), c.sym_h().sym_v());
        for d in [c.sym_h(), c.sym_v()] {
            prop_assert!(VirtualCoordinates::from_parts(d.s().to_vec(), d.a().to_vec()).is_ok());
            prop_assert_eq!(d.norm(), c.norm());
        }
    }

    #[test]
    fn text_round_trip(c in coordinates(7, 6)) {
        let parsed: VirtualCoordinates = c.to_string().parse().unwrap();
        prop_assert_eq!(parsed, c);
    }

    #[test]
    fn norm_counts_line_crossings(c in coordinates(7, 6)) {
        let expected = c.n() as u64 - 1 + 2 * c.s().iter().map(|&x| u64::from(x)).sum::<u64>();
        prop_assert_eq!(c.norm(), expected);
        prop_assert_eq!(build_arc_graph(&c, false).node_count() as u64, c.norm() + 2);
    }

    #[test]
    fn graph_structure(c in coordinates(6, 6)) {
        let open = build_arc_graph(&c, false);
        let closed = build_arc_graph(&c, true);
        prop_assert!(open.degree_invariant_holds());
        prop_assert!(closed.degree_invariant_holds());
        prop_assert!(open.zones_non_interleaving());
        prop_assert!(tightness_check(&open));
        prop_assert!(tightness_check(&closed));
        prop_assert_eq!(open.puncture_arcs().len(), c.n());
        prop_assert_eq!(component_count(&open), component_count(&closed));
    }

    #[test]
    fn actuality_is_symmetric(c in coordinates(6, 6)) {
        let base = is_actual(&c);
        prop_assert_eq!(is_actual(&c.sym_h()), base);
        prop_assert_eq!(is_actual(&c.sym_v()), base);
        prop_assert_eq!(is_actual(&c.sym_c()), base);
    }

    #[test]
    fn translated_cut_criterion(n in 1usize..200, x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let a = (x % (n as u64 + 1)) as usize;
        let b = (y % (n - a + 1) as u64) as usize;
        let c = (z % (n - a - b + 1) as u64) as usize;
        let t = PermSpec::translation(n, a).unwrap();
        prop_assert_eq!(t.is_cyclic(), orbit_count(&t) == 1);
        let tc = PermSpec::translated_cut(n, a, b, c).unwrap();
        prop_assert_eq!(tc.is_cyclic(), orbit_count(&tc) == 1);
        let mut images = tc.to_permutation().images().to_vec();
        images.sort_unstable();
        prop_assert_eq!(images, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn closed_form_actuality_matches_diagram(k in 0u32..40, l in 0u32..40, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let (a1, a2, a3) = (x % (a_max(0, k) + 1), y % (a_max(k, l) + 1), z % (a_max(l, 0) + 1));
        let c = VirtualCoordinates::from_parts(vec![0, k, l, 0], vec![a1, a2, a3]).unwrap();
        prop_assert_eq!(b3_actual(k, l, a1, a2, a3).unwrap(), is_actual(&c));
    }

    #[test]
    fn theta_decides_actuality(k in 1u32..30, m in 1u32..30, y in any::<u32>(), a3 in 0u32..=1) {
        let l = k + m;
        let a2 = y % (2 * k + 2);
        let t = theta(&B3Regime::new(k, l, a2, a3).unwrap());
        let c = VirtualCoordinates::from_parts(vec![0, k, l, 0], vec![1, a2, a3]).unwrap();
        prop_assert_eq!(t.is_cyclic(), is_actual(&c));
        prop_assert_eq!(t.is_cyclic(), t.is_cyclic_by_orbits());
    }

    #[test]
    fn reversal_preserves_counts(sv in s_vector(6, 4)) {
        prop_assert_eq!(count_for_s_vector(&sv), count_for_s_vector(&sv.reversed()));
    }

    #[test]
    fn engines_agree(sv in s_vector(5, 4)) {
        let direct = count_for_s_vector_with(&sv, Engine::Direct, false);
        prop_assert_eq!(count_for_s_vector_with(&sv, Engine::Frontier, false), direct);
        prop_assert_eq!(count_for_s_vector_with(&sv, Engine::Frontier, true), direct);
        prop_assert_eq!(count_for_s_vector_with(&sv, Engine::Direct, true), direct);
        let brute = enumerate_a_tuples(&sv).filter(is_actual).count() as u64;
        prop_assert_eq!(direct, brute);
    }

    #[test]
    fn witness_is_actual(sv in s_vector(8, 8)) {
        let w = witness_a_for_s(&sv);
        prop_assert_eq!(w.s_vector(), sv);
        prop_assert!(is_actual(&w));
    }

    #[test]
    fn bounds_are_ordered(n in 2usize..9, k in 0u32..60) {
        let lower = num_rational::BigRational::from_integer(lower_bound(n, k).into());
        prop_assert!(lower <= upper_bound(n, k).unwrap());
    }

    #[test]
    fn totient_is_multiplicative(a in 1usize..400, b in 1usize..400) {
        let t = totient_sieve(a * b).unwrap();
        let g = braid_census::permcheck::gcd(a as i64, b as i64);
        if g == 1 {
            prop_assert_eq!(t.phi(a * b), t.phi(a) * t.phi(b));
        }
        let brute = (1..=a).filter(|&x| braid_census::permcheck::gcd(x as i64, a as i64) == 1).count() as u64;
        prop_assert_eq!(t.phi(a), brute);
    }
}

#[test]
fn s_vector_enumeration_counts() {
    for n in 1..7usize {
        for k in 0..12u32 {
            let all: Vec<_> = enumerate_s_vectors(n, k).collect();
            let expected = if n == 1 { u64::from(k == 0) } else { binom(u64::from(k) + n as u64 - 2, n as u64 - 2) };
            assert_eq!(all.len() as u64, expected, "n={n} k={k}");
            assert!(all.iter().all(|sv| sv.k() == u64::from(k) && sv.n() == n));
            assert!(all.windows(2).all(|w| w[0].interior() < w[1].interior()));
            for sv in all.iter().take(5) {
                assert_eq!(enumerate_a_tuples(sv).count() as u128, sv.a_tuple_count());
            }
        }
    }
}

#[test]
fn census_is_thread_independent() {
    for (n, k) in [(4, 9), (5, 6)] {
        let one = count_actual(n, k, &CensusOptions { threads: Some(1), ..CensusOptions::default() }).unwrap();
        let three = count_actual(n, k, &CensusOptions { threads: Some(3), ..CensusOptions::default() }).unwrap();
        assert_eq!(one.g, three.g);
        assert_eq!(one.tuples, three.tuples);
    }
}

#[test]
fn census_within_bounds() {
    let opts = CensusOptions { threads: Some(1), ..CensusOptions::default() };
    for n in 2..=5 {
        for k in 0..=8 {
            let g = count_actual(n, k, &opts).unwrap().g;
            assert_eq!(BoundReport::new(n, k, Some(g)).unwrap().verdict, Verdict::Holds, "n={n} k={k}");
        }
    }
}
