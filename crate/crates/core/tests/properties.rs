use proptest::prelude::*;

use qfs_core::approx::{is_locally_hypercompact, Approximation};
use qfs_core::maps::{is_continuous, is_directed_continuous, is_quasicontinuous_map, PointMap};
use qfs_core::qfs::{check_qfs_map, SetValuedMap};
use qfs_core::space::default_labels;
use qfs_core::{FiniteSpace, PointSet, SpecOrder};

/// A random partial order on `n ≤ max` points, built from random pairs `i < j`
/// so the relation is acyclic before closure.
fn poset(max: usize) -> impl Strategy<Value = SpecOrder> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            SpecOrder::from_relation(n, pairs).unwrap()
        })
    })
}

fn space(max: usize) -> impl Strategy<Value = FiniteSpace> {
    poset(max).prop_map(|o| FiniteSpace::from_order(default_labels(o.len()), o).unwrap())
}

/// Upper sets straight from the order, without touching the space's opens.
fn upper_sets_by_order(o: &SpecOrder) -> Vec<PointSet> {
    let n = o.len();
    PointSet::full(n)
        .subsets()
        .filter(|&s| {
            s.iter()
                .all(|x| (0..n).all(|y| !o.le(x, y) || s.contains(y)))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn directed_opens_are_the_upper_sets(s in space(6)) {
        let d = s.directed_open_sets();
        prop_assert_eq!(&d, &upper_sets_by_order(s.specialization_order()));
        prop_assert!(s.is_directed_space());
        // the directed-open sets do not change the order
        let again = FiniteSpace::from_opens(s.labels().to_vec(), d).unwrap();
        prop_assert_eq!(again.specialization_order(), s.specialization_order());
    }

    #[test]
    fn convergence_is_domination_by_the_greatest_member(s in space(6)) {
        let o = s.specialization_order();
        for &d in s.directed_subsets() {
            let top = (0..s.len()).find(|&t| d.contains(t) && d.iter().all(|e| o.le(e, t))).unwrap();
            for x in 0..s.len() {
                prop_assert_eq!(s.converges(d, x).unwrap(), o.le(x, top));
            }
        }
    }

    #[test]
    fn convergence_is_monotone_in_the_limit(s in space(6)) {
        for (d, lim) in s.convergence_table() {
            for y in lim.iter() {
                for x in s.down(y).iter() {
                    prop_assert!(s.converges(d, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn principal_down_sets_are_directed_closed(s in space(6)) {
        let d = s.directed_open_sets();
        for x in 0..s.len() {
            prop_assert!(d.contains(&s.down(x).complement(s.len())));
        }
    }

    #[test]
    fn way_below_matches_order(s in space(6)) {
        let a = Approximation::new(&s).unwrap();
        for x in 0..s.len() {
            for y in 0..s.len() {
                prop_assert_eq!(a.way_below_point(x, y), s.le(x, y));
            }
        }
        prop_assert_eq!(a.compact_points(), s.carrier());
    }

    #[test]
    fn way_below_weakens_on_both_sides(s in space(5)) {
        let a = Approximation::new(&s).unwrap();
        let sets: Vec<PointSet> = s.carrier().subsets().filter(|x| !x.is_empty()).collect();
        for &g in &sets {
            for &h in &sets {
                if !a.way_below_set(g, h).unwrap() {
                    continue;
                }
                // a set whose up-closure contains ↑g approximates at least as much
                for &g2 in &sets {
                    if g.is_subset(s.up_closure(g2)) {
                        prop_assert!(a.way_below_set(g2, h).unwrap());
                    }
                }
                for &h2 in &sets {
                    if h2.is_subset(s.up_closure(h)) {
                        prop_assert!(a.way_below_set(g, h2).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn uparrow_is_interior_of_upset(s in space(6)) {
        let a = Approximation::new(&s).unwrap();
        for f in s.carrier().subsets().filter(|x| !x.is_empty()) {
            prop_assert_eq!(a.uparrow_d(f).unwrap(), s.interior(s.up_closure(f)));
        }
    }

    #[test]
    fn quasicontinuity_three_ways(s in space(6)) {
        let a = Approximation::new(&s).unwrap();
        let q = a.is_d_quasicontinuous();
        prop_assert_eq!(q, is_locally_hypercompact(&s));
        prop_assert_eq!(q, a.has_converging_subfamilies());
        prop_assert!(a.is_d_continuous());
    }

    #[test]
    fn identity_is_quasi_finitely_separating(s in space(6)) {
        let id = SetValuedMap::identity(s.len());
        let found = check_qfs_map(&s, &id);
        prop_assert!(found.passed());
        let given = check_qfs_map(&s, &id.clone().with_separating(found.separating_set.unwrap()));
        prop_assert!(given.passed());
    }

    #[test]
    fn continuity_notions_agree(s in space(4), t in space(3), seed in any::<u64>()) {
        let table: Vec<usize> = (0..s.len())
            .map(|i| ((seed >> (i * 4)) as usize) % t.len())
            .collect();
        let f = PointMap::new(table, t.len()).unwrap();
        let cont = is_continuous(&s, &t, &f);
        prop_assert_eq!(cont, is_directed_continuous(&s, &t, &f));
        if is_quasicontinuous_map(&s, &t, &f) {
            prop_assert!(cont);
        }
    }

    #[test]
    fn continuous_maps_compose(s in space(4), seed in any::<u64>()) {
        let n = s.len();
        let f = PointMap::new((0..n).map(|i| ((seed >> (i * 3)) as usize) % n).collect(), n).unwrap();
        let g = PointMap::new((0..n).map(|i| ((seed >> (32 + i * 3)) as usize) % n).collect(), n).unwrap();
        if is_continuous(&s, &s, &f) && is_continuous(&s, &s, &g) {
            prop_assert!(is_continuous(&s, &s, &f.compose(&g).unwrap()));
        }
    }
}
