use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relkit::catalog;
use relkit::census::{is_regular_set, regular_set_census};
use relkit::chains::{classify_a_prime, imprimitivity_chains, AClass};
use relkit::relation::{defines_group, invariance_group, invariance_group_with_candidate, relation_closure};
use relkit::wreath::{
    rela5_define_subgroup, rela_top_relation, regular_set_rela15, regular_set_rela4, wreath_product, wreath_relation,
};
use relkit::{Caps, Error, PermutationGroup, Relation, Subset};

fn load(name: &str) -> PermutationGroup {
    catalog::load(name).unwrap()
}

/// A relation inside layers `2..=d-2` defining `k`, taken from the relation closure.
fn block_relation_for(k: &PermutationGroup) -> Option<Relation> {
    let d = k.degree();
    let mut r = relation_closure(k).ok()?.witness_relation?;
    if r.is_empty() && d >= 4 {
        r = Relation::from_masks(d, relkit::subset::k_subsets(d, 2).collect()).ok()?;
    }
    let sets: Vec<u64> = r
        .masks()
        .iter()
        .map(|&m| {
            let size = m.count_ones() as usize;
            if size < 2 {
                !m & ((1u64 << d) - 1)
            } else {
                m
            }
        })
        .collect();
    let r = Relation::from_masks(d, sets).ok()?;
    let ok = !r.is_empty() && r.sets().iter().all(|x| (2..=d - 2).contains(&x.size()));
    (ok && defines_group(&r, k, &Caps::default()).ok()?).then_some(r)
}

#[test]
fn wreath_orders_for_catalog_pairs() {
    let small: Vec<PermutationGroup> = catalog::entries()
        .iter()
        .filter(|e| e.degree <= 5)
        .map(|e| e.load().unwrap())
        .collect();
    for k in &small {
        for l in &small {
            if k.degree() * l.degree() <= 20 {
                let w = wreath_product(k, l).unwrap();
                assert_eq!(Some(w.group.order()), w.expected_order());
                assert!(w.block_system().is_block_system_of(&w.group));
            }
        }
    }
}

#[test]
fn wreath_relation_defines_full_wreath_product() {
    let caps = Caps::default();
    let mut checked = 0;
    for ke in catalog::entries().iter().filter(|e| e.primitive && e.degree >= 4 && e.degree <= 6) {
        let k = ke.load().unwrap();
        let Some(r_delta) = block_relation_for(&k) else {
            continue;
        };
        for le in catalog::entries().iter().filter(|e| e.degree >= 2 && ke.degree * e.degree <= 12) {
            let l = le.load().unwrap();
            let Some(r_sigma) = relation_closure(&l).unwrap().witness_relation else {
                continue;
            };
            let r = wreath_relation(&k, &r_delta, &r_sigma, &caps).unwrap();
            let w = wreath_product(&k, &l).unwrap();
            let g = invariance_group(&r).unwrap();
            assert!(g.same_group(&w.group), "{} wr {}", ke.name, le.name);
            if !r_sigma.is_empty() && r_sigma.max_size() > 0 {
                assert_eq!(r.max_size(), k.degree() * r_sigma.max_size());
            }
            checked += 1;
        }
    }
    assert!(checked >= 6, "only {checked} pairs");
}

#[test]
fn c3_wreath_products_are_never_relation_groups() {
    let c3 = PermutationGroup::cyclic(3);
    for le in catalog::entries().iter().filter(|e| (2..=3).contains(&e.degree)) {
        let w = wreath_product(&c3, &le.load().unwrap()).unwrap();
        assert!(!relation_closure(&w.group).unwrap().is_relation_group, "C3 wr {}", le.name);
    }
}

#[test]
fn rela4_and_rela15_outputs_are_regular() {
    let c5 = PermutationGroup::cyclic(5);
    let c3 = PermutationGroup::cyclic(3);
    let xs: Vec<Subset> = [1, 2, 3]
        .iter()
        .map(|&k| Subset::new(5, (1u64 << k) - 1).unwrap())
        .collect();
    let w = regular_set_rela15(&c5, &xs, &Caps::default()).unwrap();
    assert_eq!(w.size(), 6);
    let wr = wreath_product(&c5, &c3).unwrap();
    assert_eq!(wr.degree(), 15);
    assert!(is_regular_set(&wr.group, &w).unwrap());

    let x = Subset::from_points(5, &[0, 1]).unwrap();
    let w = regular_set_rela4(&x, 1, 2).unwrap();
    let wr = wreath_product(&c5, &PermutationGroup::cyclic(2)).unwrap();
    assert!(is_regular_set(&wr.group, &w).unwrap());
}

#[test]
fn rela5_defines_subgroups_of_f21_wr_s2() {
    let caps = Caps::default();
    let k = load("F21@7");
    let census = regular_set_census(&k).unwrap();
    assert!(census.sizes_with_regular.len() >= 2);
    let l = PermutationGroup::symmetric(2);
    let r_delta = block_relation_for(&k).expect("F21 is a relation group");
    let r_sigma = Relation::empty(2);
    let x = (0..1u64 << 7)
        .map(|m| Subset::new(7, m).unwrap())
        .find(|x| is_regular_set(&k, x).unwrap())
        .unwrap();
    let w = regular_set_rela4(&x, 1, 2).unwrap();
    let wreath = wreath_product(&k, &l).unwrap();
    assert!(is_regular_set(&wreath.group, &w).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut subgroups = vec![wreath.group.clone()];
    // K acting on the first block only.
    let first_block: Vec<_> = wreath.group.generators().iter().filter(|g| g.apply(0) < 7).cloned().collect();
    subgroups.push(wreath.group.subgroup(first_block).unwrap());
    for gens in 1..=2 {
        for _ in 0..2 {
            let picks = (0..gens).map(|_| wreath.group.random_element(&mut rng)).collect();
            subgroups.push(wreath.group.subgroup(picks).unwrap());
        }
    }
    for g in &subgroups {
        let r = rela5_define_subgroup(&k, &l, &r_delta, &r_sigma, &w, g, &caps).unwrap();
        let found = invariance_group_with_candidate(&r, g, &caps).unwrap();
        assert!(found.same_group(g), "order {} vs {}", found.order(), g.order());
    }
}

#[test]
fn rela5_hypothesis_failures_are_named() {
    let caps = Caps::default();
    let c5 = PermutationGroup::cyclic(5);
    let l = PermutationGroup::symmetric(2);
    let edges = Relation::from_masks(5, (0..5).map(|i| 1 << i | 1 << ((i + 1) % 5)).collect()).unwrap();
    let w = Subset::from_points(10, &[0]).unwrap();
    let wr = wreath_product(&c5, &l).unwrap();
    let err = rela5_define_subgroup(&c5, &l, &edges, &Relation::empty(2), &w, &wr.group, &caps).unwrap_err();
    assert_eq!(err, Error::NotInvarianceGroup);
}

#[test]
fn top_relation_block_unions() {
    let r = rela_top_relation(&Relation::from_masks(3, vec![0b011]).unwrap(), 2).unwrap();
    assert_eq!(r.sets()[0].points(), vec![0, 1, 2, 3]);
}

#[test]
fn chain_degrees_multiply_to_the_degree() {
    let s2 = PermutationGroup::symmetric(2);
    let s3 = PermutationGroup::symmetric(3);
    let inner = wreath_product(&s2, &s3).unwrap();
    let outer = wreath_product(&s2, &inner.group).unwrap();
    let e = imprimitivity_chains(&outer.group, &Caps::default()).unwrap();
    assert!(!e.chains.is_empty());
    for c in &e.chains {
        assert_eq!(c.degrees().iter().product::<usize>(), 12);
        assert!(c.length() >= 1);
    }
}

#[test]
fn classification_examples() {
    let caps = Caps::default();
    let d10 = load("D10@5");
    let w = wreath_product(&d10, &d10).unwrap();
    let c = classify_a_prime(&w.group, &caps).unwrap();
    assert_eq!(c.class, AClass::AImprimitive);
    assert!(c.memberships.iter().flatten().all(|m| m.in_l_nr == Some(true)));

    let c5 = PermutationGroup::cyclic(5);
    let w = wreath_product(&c5, &c5).unwrap();
    assert_eq!(classify_a_prime(&w.group, &caps).unwrap().class, AClass::AImprimitive);

    // The top group C2 = Sym(2) lies in the list, so this chain is mixed.
    let w = wreath_product(&load("F21@7"), &PermutationGroup::cyclic(2)).unwrap();
    let c = classify_a_prime(&w.group, &caps).unwrap();
    assert_eq!(c.class, AClass::Neither);
    assert!(c.memberships.iter().all(|row| row[0].in_a == Some(false)));

    let w = wreath_product(&PermutationGroup::cyclic(7), &load("F21@7")).unwrap();
    assert_eq!(classify_a_prime(&w.group, &caps).unwrap().class, AClass::APrimeImprimitive);
}

#[test]
fn explicit_small_groups_are_unambiguous_at_degree_nine() {
    let caps = Caps::default();
    let mut order_72 = Vec::new();
    for e in catalog::entries().iter().filter(|e| e.degree == 9 && e.declared_order == 72) {
        let m = relkit::chains::list_a_membership(&e.load().unwrap(), &caps);
        order_72.push((e.name, m.is_explicit_small));
    }
    let flagged: Vec<_> = order_72.iter().filter(|(_, f)| *f).map(|(n, _)| *n).collect();
    assert_eq!(flagged, vec!["AGL(1,9)@9"]);
    assert!(order_72.len() >= 3);
}
