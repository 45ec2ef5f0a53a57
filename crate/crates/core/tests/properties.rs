use std::sync::Arc;

use proptest::prelude::*;

use iwasawa_core::classify::{is_iwasawa, is_modular_element, is_modular_lattice, is_permutable_subgroup};
use iwasawa_core::degrees::{sd_value, ExactRational};
use iwasawa_core::group::{cyclic, direct_product, from_cayley_table, from_permutations, metacyclic, quotient};
use iwasawa_core::named::named;
use iwasawa_core::{enumerate_subgroups, Analysis, Bitset, Caps, MetacyclicParams, Permutation};

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn generator_sets(max_degree: usize) -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (1..=max_degree).prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 1..4)))
}

fn small_group() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["S_3", "D_8", "Q_8", "A_4", "Dic3", "Z_6", "Z_2", "S_4", "SL23"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_groups_are_valid_and_generator_order_is_irrelevant((degree, gens) in generator_sets(5)) {
        let caps = Caps::default();
        let g = from_permutations(degree, &gens, &caps).unwrap();
        prop_assert!(g.order() <= 120);
        g.validate().unwrap();
        let mut reversed = gens.clone();
        reversed.reverse();
        let h = from_permutations(degree, &reversed, &caps).unwrap();
        prop_assert_eq!(g.order_census(), h.order_census());
    }

    #[test]
    fn relabelled_tables_are_accepted(name in small_group(), seed in any::<u64>()) {
        let g = named(name).unwrap();
        let n = g.order();
        // deterministic shuffle of labels from the seed
        let mut labels: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            labels.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut raw = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                raw[labels[a]][labels[b]] = labels[g.mul(a, b)];
            }
        }
        let h = from_cayley_table(&raw).unwrap();
        prop_assert_eq!(h.order_census(), g.order_census());
        for a in 0..n {
            prop_assert_eq!(h.mul(0, a), a);
        }
    }

    #[test]
    fn lattice_invariants_of_small_permutation_groups((degree, gens) in generator_sets(4)) {
        let caps = Caps::default();
        let a = Analysis::new(from_permutations(degree, &gens, &caps).unwrap(), &caps).unwrap();
        let l = a.lattice();
        let n = a.group().order();
        for s in l.subgroups() {
            prop_assert_eq!(n % s.order(), 0);
        }
        let iwasawa = is_iwasawa(&a);
        prop_assert_eq!(iwasawa, l.is_nilpotent() && is_modular_lattice(l));
        prop_assert_eq!(sd_value(&a).is_one(), iwasawa);
        for h in 0..l.len() {
            if is_permutable_subgroup(&a, h) {
                prop_assert!(is_modular_element(l, h));
            }
        }
    }

    #[test]
    fn direct_products_multiply_orders(x in small_group(), m in 1usize..6) {
        let caps = Caps::default();
        let a = named(x).unwrap();
        let b = cyclic(m);
        let p = direct_product(&a, &b, &caps).unwrap();
        prop_assert_eq!(p.order(), a.order() * m);
        p.validate().unwrap();
    }

    #[test]
    fn metacyclic_groups_have_a_normal_subgroup_of_order_p(
        (p, q) in prop::sample::select(vec![(3u64, 2u64), (5, 2), (7, 2), (7, 3), (11, 5), (13, 3)]),
        n in 1u32..3,
    ) {
        let caps = Caps::default();
        let params = MetacyclicParams::auto(p, q, n).unwrap();
        let g = metacyclic(&params, &caps).unwrap();
        g.validate().unwrap();
        let m = q.pow(n) as usize;
        let base = Bitset::from_indices(g.order(), (0..p as usize).map(|a| a * m));
        let l = enumerate_subgroups(Arc::new(g), &caps).unwrap();
        let i = l.index_of(&base);
        prop_assert!(i.is_some());
        prop_assert!(l.is_normal(i.unwrap()));
    }

    #[test]
    fn quotients_by_normal_subgroups_are_groups(name in small_group(), pick in any::<prop::sample::Index>()) {
        let caps = Caps::default();
        let l = enumerate_subgroups(Arc::new(named(name).unwrap()), &caps).unwrap();
        let normal: Vec<usize> = (0..l.len()).filter(|&i| l.is_normal(i)).collect();
        let nsub = l.subgroup(normal[pick.index(normal.len())]);
        let q = quotient(l.group(), nsub.members()).unwrap();
        prop_assert_eq!(q.order() * nsub.order(), l.group().order());
        q.validate().unwrap();
    }

    #[test]
    fn rationals_are_kept_in_lowest_terms(a in 0u64..1000, b in 1u64..1000, k in 1u64..50) {
        let r = ExactRational::ratio(a, b);
        prop_assert_eq!(&r, &ExactRational::ratio(a * k, b * k));
        let g = num_gcd(a, b);
        prop_assert_eq!(r.to_string(), if b / g == 1 { format!("{}", a / g) } else { format!("{}/{}", a / g, b / g) });
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn sl23_mod_center_is_a_schmidt_group_like_a4() {
    use iwasawa_core::classify::extract_schmidt_structure;
    use iwasawa_core::lattice::center;
    let caps = Caps::default();
    let sl = named("SL23").unwrap();
    let q = quotient(&sl, center(&sl).members()).unwrap();
    assert_eq!(q.order(), 12);
    let s = extract_schmidt_structure(&Analysis::new(q, &caps).unwrap()).unwrap();
    assert!(s.p_abelian);
    assert_eq!((s.p, s.q, s.p_order), (2, 3, 4));
}
