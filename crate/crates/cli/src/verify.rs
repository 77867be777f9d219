//! The `verify-paper` battery. `quick` stays at degree 8 and below; `full`
//! adds the degree 9 to 11 checks.

use std::collections::BTreeSet;
use std::time::Instant;

use relkit::catalog::{self, CatalogEntry};
use relkit::census::regular_set_census_with;
use relkit::closure::{k_orbit_equivalent, orbit_closure_with};
use relkit::orbits::{is_set_transitive, setwise_stabilizer};
use relkit::relation::{basic_lemma_construct, invariance_group_with, relation_closure_with};
use relkit::structure::{sym_alt_kind, SymAltKind};
use relkit::wreath::{rela4_size, rela_block_relation, rela_top_relation, regular_set_rela4, wreath_product};
use relkit::{Caps, Permutation, PermutationGroup, Relation, Subset};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn primitive_entries(lo: usize, hi: usize) -> Result<Vec<(&'static CatalogEntry, PermutationGroup)>, String> {
    catalog::entries()
        .iter()
        .filter(|e| (lo..=hi).contains(&e.degree) && e.primitive)
        .map(|e| e.load().map(|g| (e, g)).map_err(text))
        .collect()
}

fn listed(list: &[(usize, &'static str)], lo: usize, hi: usize) -> BTreeSet<&'static str> {
    list.iter()
        .filter(|(d, _)| (lo..=hi).contains(d))
        .map(|&(_, n)| n)
        .collect()
}

struct Battery {
    caps: Caps,
    top: usize,
}

impl Battery {
    fn no_regular_sets(&self) -> Check {
        let expected = listed(&catalog::exceptional_lists().no_regular_set, 5, self.top);
        let mut found = BTreeSet::new();
        for (e, g) in primitive_entries(5, self.top)? {
            if sym_alt_kind(&g) != SymAltKind::Neither || is_set_transitive(&g).map_err(text)? {
                continue;
            }
            if !regular_set_census_with(&g, &self.caps).map_err(text)?.has_regular_set() {
                found.insert(e.name);
            }
        }
        ensure(found == expected, || format!("found {found:?}, listed {expected:?}"))?;
        Ok(format!("{} groups", found.len()))
    }

    fn set_transitive(&self) -> Check {
        let expected = listed(&catalog::exceptional_lists().set_transitive, 2, self.top);
        let mut found = BTreeSet::new();
        for (e, g) in primitive_entries(2, self.top)? {
            if sym_alt_kind(&g) == SymAltKind::Neither && is_set_transitive(&g).map_err(text)? {
                found.insert(e.name);
            }
        }
        ensure(found == expected, || format!("found {found:?}, listed {expected:?}"))?;
        Ok(format!("{found:?}"))
    }

    fn orbit_equivalent_pairs(&self) -> Check {
        let mut pairs = vec![("C5@5", "D10@5")];
        if self.top >= 10 {
            pairs.push(("AGL(1,9)@9", "AGammaL(1,9)@9"));
            pairs.push(("PGL(2,9)@10", "PGammaL(2,9)@10"));
        }
        let mut out = Vec::new();
        for (small, large) in pairs {
            let g = catalog::load(small).map_err(text)?;
            let h = catalog::load(large).map_err(text)?;
            for k in 0..=g.degree() {
                ensure(k_orbit_equivalent(&g, &h, k).map_err(text)?, || {
                    format!("{small} and {large} differ on {k}-sets")
                })?;
            }
            let report = orbit_closure_with(&g, &[], &self.caps).map_err(text)?;
            ensure(report.c_of_g == 2 && report.star.same_group(&h), || {
                format!("c({small}) = {}", report.c_of_g)
            })?;
            out.push(format!("c({small}) = 2"));
        }
        Ok(out.join(", "))
    }

    fn non_closed_groups(&self) -> Check {
        let expected = listed(&catalog::exceptional_lists().non_relation(), 5, self.top);
        let mut found = BTreeSet::new();
        for (e, g) in primitive_entries(5, self.top)? {
            if sym_alt_kind(&g) == SymAltKind::Alt {
                continue;
            }
            if !orbit_closure_with(&g, &[], &self.caps).map_err(text)?.orbit_closed {
                found.insert(e.name);
            }
        }
        ensure(found == expected, || format!("not orbit closed {found:?}, listed {expected:?}"))?;
        Ok(format!("{} groups", found.len()))
    }

    fn klein_group(&self) -> Check {
        let v = catalog::load("V@4").map_err(text)?;
        let c = orbit_closure_with(&v, &[], &self.caps).map_err(text)?.c_of_g;
        let r = relation_closure_with(&v, &self.caps).map_err(text)?.r_of_g;
        ensure(c == 1 && r == 2, || format!("c = {c}, r = {r}"))?;
        Ok("c = 1, r = 2".into())
    }

    fn wreath_relation_order(&self) -> Check {
        let k = catalog::load("D10@5").map_err(text)?;
        let pentagon = Relation::from_masks(5, (0..5).map(|i| 1 << i | 1 << ((i + 1) % 5)).collect()).map_err(text)?;
        let r_sigma = Relation::from_masks(2, vec![0b01, 0b10]).map_err(text)?;
        let block = rela_block_relation(&k, &pentagon, 2, &self.caps).map_err(text)?;
        let r = block.union(&rela_top_relation(&r_sigma, 5).map_err(text)?).map_err(text)?;
        let found = invariance_group_with(&r, &self.caps).map_err(text)?;
        let expected = wreath_product(&k, &PermutationGroup::cyclic(2)).map_err(text)?;
        ensure(found.same_group(&expected.group), || format!("order {}", found.order()))?;
        Ok(format!("D10 wr C2 of order {}", found.order()))
    }

    fn regular_set_sizes(&self) -> Check {
        let mut out = Vec::new();
        for (d, points) in [(3usize, vec![0usize]), (5, vec![0, 1])] {
            let x = Subset::from_points(d, &points).map_err(text)?;
            let w = regular_set_rela4(&x, 1, 2).map_err(text)?;
            let wreath = wreath_product(&PermutationGroup::cyclic(d), &PermutationGroup::cyclic(2)).map_err(text)?;
            let regular = setwise_stabilizer(&wreath.group, &w).map_err(text)?.is_trivial();
            let size = rela4_size(d, 2, x.size(), 1);
            ensure(regular && w.size() == size, || format!("C{d} wr C2: |w| = {}", w.size()))?;
            out.push(format!("C{d} wr C2: |w| = {size}"));
        }
        Ok(out.join(", "))
    }

    fn c3_wreath_products(&self) -> Check {
        let c3 = PermutationGroup::cyclic(3);
        let mut out = Vec::new();
        for s in [2, 3] {
            let w = wreath_product(&c3, &PermutationGroup::cyclic(s)).map_err(text)?;
            let r = relation_closure_with(&w.group, &self.caps).map_err(text)?;
            ensure(!r.is_relation_group, || format!("C3 wr C{s} is a relation group"))?;
            out.push(format!("r(C3 wr C{s}) = {}", r.r_of_g));
        }
        Ok(out.join(", "))
    }

    fn closed_iff_relation(&self) -> Check {
        let groups = primitive_entries(5, self.top)?;
        let mut violations = Vec::new();
        for (e, g) in &groups {
            let closed = orbit_closure_with(g, &[], &self.caps).map_err(text)?.orbit_closed;
            let relation = relation_closure_with(g, &self.caps).map_err(text)?;
            if closed != relation.is_relation_group {
                violations.push(format!("{} (orbit closed: {closed}, r = {})", e.name, relation.r_of_g));
            }
        }
        ensure(violations.is_empty(), || violations.join(", "))?;
        Ok(format!("{} primitive groups", groups.len()))
    }

    fn relation_closure_factors(&self) -> Check {
        let mut checked = 0;
        for e in catalog::entries().iter().filter(|e| e.degree <= self.top.min(8)) {
            let g = e.load().map_err(text)?;
            let r = relation_closure_with(&g, &self.caps).map_err(text)?;
            let star = orbit_closure_with(&g, &[], &self.caps).map_err(text)?;
            let r_star = relation_closure_with(&star.star, &self.caps).map_err(text)?;
            ensure(r.r_of_g == star.c_of_g * r_star.r_of_g, || {
                format!("{}: r = {}, c = {}, r(G*) = {}", e.name, r.r_of_g, star.c_of_g, r_star.r_of_g)
            })?;
            checked += 1;
        }
        Ok(format!("{checked} groups"))
    }

    fn psl28_closure(&self) -> Check {
        let g = catalog::load("PSL(2,8)@9").map_err(text)?;
        let c = orbit_closure_with(&g, &[], &self.caps).map_err(text)?.c_of_g;
        ensure(c == 720, || format!("c = {c}"))?;
        Ok("c(PSL(2,8)@9) = 720".into())
    }

    fn basic_lemma_agl111(&self) -> Check {
        let h = catalog::load("AGL(1,11)@11").map_err(text)?;
        let report = relation_closure_with(&h, &self.caps).map_err(text)?;
        let r = report.witness_relation.ok_or("AGL(1,11) is not a relation group")?;
        let arity = r.arity();
        let w = (1..1u64 << 11)
            .map(|m| Subset::new(11, m).expect("mask below 2^11"))
            .find(|x| !arity.contains(&x.size()) && setwise_stabilizer(&h, x).is_ok_and(|s| s.is_trivial()))
            .ok_or("no regular set of a free size")?;
        let affine = |a: usize, b: usize| {
            Permutation::from_images((0..11).map(|x| (a * x + b) % 11).collect()).expect("affine map")
        };
        let samples = [
            vec![affine(1, 1)],
            vec![affine(1, 1), affine(10, 0)],
            vec![affine(1, 1), affine(4, 0)],
            vec![affine(2, 0)],
            vec![affine(10, 0)],
        ];
        for gens in samples {
            let g = h.subgroup(gens).map_err(text)?;
            let defining = basic_lemma_construct(&h, &r, &w, &g, &self.caps).map_err(text)?;
            let found = invariance_group_with(&defining, &self.caps).map_err(text)?;
            ensure(found.same_group(&g), || format!("order {} instead of {}", found.order(), g.order()))?;
        }
        Ok(format!("5 subgroups, |w| = {}", w.size()))
    }
}

pub fn run(level: Level, caps: &Caps) -> Vec<CheckOutcome> {
    let top = match level {
        Level::Quick => 8,
        Level::Full => 10,
    };
    let battery = Battery { caps: caps.clone(), top };
    let mut checks: Vec<(&'static str, fn(&Battery) -> Check)> = vec![
        ("groups without regular sets", Battery::no_regular_sets),
        ("set-transitive groups", Battery::set_transitive),
        ("orbit-equivalent pairs", Battery::orbit_equivalent_pairs),
        ("groups that are not orbit closed", Battery::non_closed_groups),
        ("Klein group", Battery::klein_group),
        ("wreath relation for D10 wr C2", Battery::wreath_relation_order),
        ("regular set sizes in C3 wr C2 and C5 wr C2", Battery::regular_set_sizes),
        ("C3 wreath products", Battery::c3_wreath_products),
        ("orbit closed iff relation group", Battery::closed_iff_relation),
        ("r(G) = c(G) r(G*)", Battery::relation_closure_factors),
    ];
    if level == Level::Full {
        checks.push(("closure of PSL(2,8)", Battery::psl28_closure));
        checks.push(("Basic Lemma in AGL(1,11)", Battery::basic_lemma_agl111));
    }
    checks
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let result = check(&battery);
            CheckOutcome {
                name,
                passed: result.is_ok(),
                detail: result.unwrap_or_else(|e| e),
                elapsed_ms: start.elapsed().as_millis(),
            }
        })
        .collect()
}
