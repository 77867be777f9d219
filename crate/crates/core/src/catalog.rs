//! Named permutation groups of small degree.
//!
//! Generators are built arithmetically from finite fields, vector spaces and
//! projective spaces, and every declared order and primitivity flag is
//! checked when a group is loaded.

use crate::error::{Error, Result};
use crate::field::{affine_perm, projective_perm, Field};
use crate::group::PermutationGroup;
use crate::notation::format_permutation;
use crate::perm::Permutation;
use crate::relation::{invariance_group_with_candidate, Relation};
use crate::structure::is_primitive;
use crate::Caps;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ListTags {
    /// Set-transitive, other than Sym and Alt.
    pub set_transitive: bool,
    /// Properly contained in an orbit-equivalent group, not set-transitive.
    pub orbit_equivalent: bool,
    /// Primitive without a regular set and not set-transitive.
    pub no_regular_set: bool,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub degree: usize,
    pub declared_order: u128,
    pub primitive: bool,
    pub tags: ListTags,
    build: fn() -> Vec<Permutation>,
}

impl CatalogEntry {
    /// Builds the group and checks its order and primitivity.
    pub fn load(&self) -> Result<PermutationGroup> {
        let gens = (self.build)();
        let group = PermutationGroup::new(self.degree, gens)?;
        if group.order() != self.declared_order {
            return Err(Error::CatalogVerification {
                name: self.name.into(),
                detail: format!("order {} but {} declared", group.order(), self.declared_order),
            });
        }
        let primitive = self.degree >= 2 && group.is_transitive() && is_primitive(&group)?;
        if primitive != self.primitive {
            return Err(Error::CatalogVerification {
                name: self.name.into(),
                detail: format!("primitivity is {primitive}, declared {}", self.primitive),
            });
        }
        Ok(group)
    }

    /// Generators in 1-based cycle notation.
    pub fn generator_strings(&self) -> Vec<String> {
        (self.build)().iter().map(format_permutation).collect()
    }

    pub fn matches(&self, name: &str) -> bool {
        let key = normalize(name);
        normalize(self.name) == key || self.aliases.iter().any(|a| normalize(a) == key)
    }
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
    let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
    Permutation::from_cycles(n, &cycles).expect("valid catalog cycle")
}

fn n_cycle(n: usize) -> Permutation {
    Permutation::from_cycles(n, &[(0..n).collect()]).expect("cycle")
}

fn symmetric(n: usize) -> Vec<Permutation> {
    PermutationGroup::symmetric(n).generators().to_vec()
}

fn alternating(n: usize) -> Vec<Permutation> {
    PermutationGroup::alternating(n).generators().to_vec()
}

/// `<x -> x + 1, x -> a x>` on a prime field, with `a` of order `m`.
fn affine_prime(p: usize, m: usize) -> Vec<Permutation> {
    let f = Field::new(p, 1);
    let w = f.primitive_element();
    let a = f.pow(w, (p - 1) / m);
    let mut gens = vec![n_cycle(p)];
    if m > 1 {
        gens.push(f.affine_map(|x| f.mul(a, x)));
    }
    gens
}

/// `AGL(1, q)`, optionally with the Frobenius map.
fn affine_line(p: usize, e: usize, frobenius: bool) -> Vec<Permutation> {
    let f = Field::new(p, e);
    let w = f.primitive_element();
    let mut gens = vec![f.affine_map(|x| f.add(x, 1)), f.affine_map(|x| f.mul(w, x))];
    if frobenius {
        gens.push(f.affine_map(|x| f.pow(x, p)));
    }
    gens
}

#[derive(Clone, Copy)]
enum Projective {
    Special,
    General,
    SemiSpecial,
    Mathieu10,
    SemiGeneral,
}

/// Subgroups of `PΓL(2, q)` containing `PSL(2, q)`, on `q + 1` points.
fn projective_line(p: usize, e: usize, kind: Projective) -> Vec<Permutation> {
    let f = Field::new(p, e);
    let w = f.primitive_element();
    let minus_one = f.neg(1);
    let square = if p == 2 { w } else { f.mul(w, w) };
    let mut gens = vec![
        f.mobius(1, 1, 0, 1),
        f.mobius(square, 0, 0, 1),
        f.mobius(0, minus_one, 1, 0),
    ];
    let scale = f.mobius(w, 0, 0, 1);
    let frob = f.power_map_projective(p);
    match kind {
        Projective::Special => {}
        Projective::General => gens.push(scale),
        Projective::SemiSpecial => gens.push(frob),
        Projective::Mathieu10 => gens.push(&frob * &scale),
        Projective::SemiGeneral => {
            gens.push(scale);
            gens.push(frob);
        }
    }
    gens
}

fn identity_matrix(dim: usize) -> Vec<Vec<usize>> {
    (0..dim).map(|i| (0..dim).map(|j| usize::from(i == j)).collect()).collect()
}

/// Affine group on `GF(p)^dim` with the given linear generators.
fn affine_space(p: usize, dim: usize, linear: &[Vec<Vec<usize>>]) -> Vec<Permutation> {
    let mut t = vec![0; dim];
    t[0] = 1;
    let mut gens = vec![affine_perm(&identity_matrix(dim), &t, p)];
    gens.extend(linear.iter().map(|m| affine_perm(m, &vec![0; dim], p)));
    gens
}

fn m2(a: usize, b: usize, c: usize, d: usize) -> Vec<Vec<usize>> {
    vec![vec![a, b], vec![c, d]]
}

/// `GL(3, p)` is generated by an elementary transvection, the cyclic
/// coordinate shift, and a diagonal matrix.
fn gl3(p: usize) -> Vec<Vec<Vec<usize>>> {
    let transvection = vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
    let shift = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
    let mut out = vec![transvection, shift];
    if p > 2 {
        out.push(vec![vec![p - 1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }
    out
}

/// A group on 5 points acting on the 10 unordered pairs.
fn on_pairs(gens: Vec<Permutation>) -> Vec<Permutation> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    gens.iter()
        .map(|g| {
            let images = pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (g.apply(a), g.apply(b));
                    let key = (x.min(y), x.max(y));
                    pairs.iter().position(|&q| q == key).expect("pair")
                })
                .collect();
            Permutation::from_images(images).expect("pair action")
        })
        .collect()
}

/// Automorphisms of the biplane whose blocks are the translates of the
/// quadratic residues mod 11.
fn paley_biplane() -> Vec<Permutation> {
    let residues = [1usize, 3, 4, 5, 9];
    let blocks: Vec<u64> = (0..11)
        .map(|t| residues.iter().fold(0u64, |m, &r| m | 1 << ((r + t) % 11)))
        .collect();
    let relation = Relation::from_masks(11, blocks).expect("distinct blocks");
    let seed = PermutationGroup::new(11, affine_prime(11, 5)).expect("11:5");
    invariance_group_with_candidate(&relation, &seed, &Caps::default())
        .expect("biplane search")
        .strong_generators()
        .to_vec()
}

macro_rules! entry {
    ($name:expr, [$($alias:expr),*], $deg:expr, $order:expr, $prim:expr, $tags:expr, $build:expr) => {
        CatalogEntry {
            name: $name,
            aliases: &[$($alias),*],
            degree: $deg,
            declared_order: $order,
            primitive: $prim,
            tags: $tags,
            build: $build,
        }
    };
}

const NONE: ListTags = ListTags {
    set_transitive: false,
    orbit_equivalent: false,
    no_regular_set: false,
};
const ST: ListTags = ListTags {
    set_transitive: true,
    ..NONE
};
const OE: ListTags = ListTags {
    orbit_equivalent: true,
    ..NONE
};
const NR: ListTags = ListTags {
    no_regular_set: true,
    ..NONE
};
const OE_NR: ListTags = ListTags {
    orbit_equivalent: true,
    no_regular_set: true,
    ..NONE
};

static ENTRIES: &[CatalogEntry] = &[
    entry!("S2@2", ["C2@2", "Sym(2)"], 2, 2, true, NONE, || symmetric(2)),
    entry!("C3@3", ["A3@3", "Alt(3)"], 3, 3, true, NONE, || vec![n_cycle(3)]),
    entry!("S3@3", ["Sym(3)"], 3, 6, true, NONE, || symmetric(3)),
    entry!("C4@4", [], 4, 4, false, NONE, || vec![n_cycle(4)]),
    entry!("V@4", ["V4@4", "Klein@4"], 4, 4, false, NONE, || {
        vec![perm(4, &[&[1, 2], &[3, 4]]), perm(4, &[&[1, 3], &[2, 4]])]
    }),
    entry!("D8@4", ["C2wrC2@4"], 4, 8, false, NONE, || {
        vec![n_cycle(4), perm(4, &[&[2, 4]])]
    }),
    entry!("A4@4", ["Alt(4)"], 4, 12, true, NONE, || alternating(4)),
    entry!("S4@4", ["Sym(4)"], 4, 24, true, NONE, || symmetric(4)),
    entry!("C5@5", ["5@5"], 5, 5, true, OE, || affine_prime(5, 1)),
    entry!("D10@5", ["5:2@5"], 5, 10, true, NR, || affine_prime(5, 2)),
    entry!("F20@5", ["AGL(1,5)@5", "5:4@5"], 5, 20, true, ST, || affine_prime(5, 4)),
    entry!("A5@5", ["Alt(5)"], 5, 60, true, NONE, || alternating(5)),
    entry!("S5@5", ["Sym(5)"], 5, 120, true, NONE, || symmetric(5)),
    entry!("PSL(2,5)@6", ["L2(5)@6"], 6, 60, true, NR, || {
        projective_line(5, 1, Projective::Special)
    }),
    entry!("PGL(2,5)@6", ["L2(5).2@6"], 6, 120, true, ST, || {
        projective_line(5, 1, Projective::General)
    }),
    entry!("A6@6", ["Alt(6)"], 6, 360, true, NONE, || alternating(6)),
    entry!("S6@6", ["Sym(6)"], 6, 720, true, NONE, || symmetric(6)),
    entry!("C7@7", ["7@7"], 7, 7, true, NONE, || affine_prime(7, 1)),
    entry!("D14@7", ["7:2@7"], 7, 14, true, NONE, || affine_prime(7, 2)),
    entry!("F21@7", ["7:3@7"], 7, 21, true, NONE, || affine_prime(7, 3)),
    entry!("F42@7", ["AGL(1,7)@7", "7:6@7"], 7, 42, true, NR, || affine_prime(7, 6)),
    entry!("PSL(3,2)@7", ["L3(2)@7", "PSL(2,7)@7"], 7, 168, true, NR, || {
        gl3(2).iter().map(|m| projective_perm(m, 2)).collect()
    }),
    entry!("A7@7", ["Alt(7)"], 7, 2520, true, NONE, || alternating(7)),
    entry!("S7@7", ["Sym(7)"], 7, 5040, true, NONE, || symmetric(7)),
    entry!("AGL(1,8)@8", ["2^3:7@8"], 8, 56, true, OE, || affine_line(2, 3, false)),
    entry!("AGammaL(1,8)@8", ["2^3:7.3@8", "AΓL(1,8)@8"], 8, 168, true, OE_NR, || {
        affine_line(2, 3, true)
    }),
    entry!("AGL(3,2)@8", ["2^3:L3(2)@8", "ASL(3,2)@8"], 8, 1344, true, NR, || {
        affine_space(2, 3, &gl3(2))
    }),
    entry!("PSL(2,7)@8", ["L2(7)@8"], 8, 168, true, NR, || {
        projective_line(7, 1, Projective::Special)
    }),
    entry!("PGL(2,7)@8", ["L2(7).2@8"], 8, 336, true, NR, || {
        projective_line(7, 1, Projective::General)
    }),
    entry!("A8@8", ["Alt(8)"], 8, 20160, true, NONE, || alternating(8)),
    entry!("S8@8", ["Sym(8)"], 8, 40320, true, NONE, || symmetric(8)),
    entry!("3^2:4@9", [], 9, 36, true, NONE, || affine_space(3, 2, &[m2(0, 2, 1, 0)])),
    entry!("3^2:Q8@9", [], 9, 72, true, NONE, || {
        affine_space(3, 2, &[m2(0, 2, 1, 0), m2(1, 1, 1, 2)])
    }),
    entry!("3^2:D8@9", [], 9, 72, true, NR, || {
        affine_space(3, 2, &[m2(1, 0, 0, 2), m2(0, 1, 1, 0)])
    }),
    entry!("AGL(1,9)@9", ["3^2:8@9"], 9, 72, true, OE, || affine_line(3, 2, false)),
    entry!("AGammaL(1,9)@9", ["3^2:8.2@9", "AΓL(1,9)@9"], 9, 144, true, NR, || {
        affine_line(3, 2, true)
    }),
    entry!("ASL(2,3)@9", ["3^2:2.L2(3)@9", "3^2:SL(2,3)@9"], 9, 216, true, OE_NR, || {
        affine_space(3, 2, &[m2(1, 1, 0, 1), m2(1, 0, 1, 1)])
    }),
    entry!("AGL(2,3)@9", ["3^2:2.L2(3).2@9", "3^2:GL(2,3)@9"], 9, 432, true, NR, || {
        affine_space(3, 2, &[m2(1, 1, 0, 1), m2(1, 0, 1, 1), m2(2, 0, 0, 1)])
    }),
    entry!("PSL(2,8)@9", ["L2(8)@9"], 9, 504, true, ST, || {
        projective_line(2, 3, Projective::Special)
    }),
    entry!("PGammaL(2,8)@9", ["L2(8).3@9", "PΓL(2,8)@9"], 9, 1512, true, ST, || {
        projective_line(2, 3, Projective::SemiSpecial)
    }),
    entry!("A9@9", ["Alt(9)"], 9, 181440, true, NONE, || alternating(9)),
    entry!("S9@9", ["Sym(9)"], 9, 362880, true, NONE, || symmetric(9)),
    entry!("A5@10", [], 10, 60, true, NONE, || on_pairs(alternating(5))),
    entry!("S5@10", [], 10, 120, true, NR, || on_pairs(symmetric(5))),
    entry!("PSL(2,9)@10", ["L2(9)@10", "A6@10"], 10, 360, true, NR, || {
        projective_line(3, 2, Projective::Special)
    }),
    entry!("PGL(2,9)@10", ["L2(9).2@10"], 10, 720, true, OE_NR, || {
        projective_line(3, 2, Projective::General)
    }),
    entry!("PSigmaL(2,9)@10", ["PΣL(2,9)@10", "S6@10"], 10, 720, true, NR, || {
        projective_line(3, 2, Projective::SemiSpecial)
    }),
    entry!("M10@10", [], 10, 720, true, NR, || {
        projective_line(3, 2, Projective::Mathieu10)
    }),
    entry!("PGammaL(2,9)@10", ["L2(9).2.2@10", "PΓL(2,9)@10"], 10, 1440, true, NR, || {
        projective_line(3, 2, Projective::SemiGeneral)
    }),
    entry!("A10@10", ["Alt(10)"], 10, 1814400, true, NONE, || alternating(10)),
    entry!("S10@10", ["Sym(10)"], 10, 3628800, true, NONE, || symmetric(10)),
    entry!("C11@11", ["11@11"], 11, 11, true, NONE, || affine_prime(11, 1)),
    entry!("D22@11", ["11:2@11"], 11, 22, true, NONE, || affine_prime(11, 2)),
    entry!("11:5@11", ["F55@11"], 11, 55, true, NONE, || affine_prime(11, 5)),
    entry!("AGL(1,11)@11", ["F110@11", "11:10@11"], 11, 110, true, NONE, || affine_prime(11, 10)),
    entry!("PSL(2,11)@11", ["L2(11)@11"], 11, 660, true, NR, paley_biplane),
    entry!("M11@11", [], 11, 7920, true, NR, || {
        vec![
            n_cycle(11),
            perm(11, &[&[3, 7, 11, 8], &[4, 10, 5, 6]]),
        ]
    }),
    entry!("PSL(2,11)@12", ["L2(11)@12"], 12, 660, true, NONE, || {
        projective_line(11, 1, Projective::Special)
    }),
    entry!("PGL(2,11)@12", ["L2(11).2@12"], 12, 1320, true, NR, || {
        projective_line(11, 1, Projective::General)
    }),
    entry!("C13@13", ["13@13"], 13, 13, true, NONE, || affine_prime(13, 1)),
    entry!("AGL(1,13)@13", ["F156@13", "13:12@13"], 13, 156, true, NONE, || {
        affine_prime(13, 12)
    }),
    entry!("PSL(3,3)@13", ["L3(3)@13"], 13, 5616, true, NR, || {
        gl3(3).iter().map(|m| projective_perm(m, 3)).collect()
    }),
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn find(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.matches(name))
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}

/// Loads and verifies a named group.
pub fn load(name: &str) -> Result<PermutationGroup> {
    find(name)?.load()
}

/// Expected `(degree, name)` pairs of the exceptional lists, up to degree 13.
#[derive(Clone, Debug)]
pub struct ExceptionalLists {
    pub set_transitive: Vec<(usize, &'static str)>,
    pub orbit_equivalent: Vec<(usize, &'static str)>,
    pub no_regular_set: Vec<(usize, &'static str)>,
}

impl ExceptionalLists {
    /// Both exceptional lists of non-relation groups together.
    pub fn non_relation(&self) -> Vec<(usize, &'static str)> {
        let mut out = self.set_transitive.clone();
        out.extend(self.orbit_equivalent.iter().copied());
        out
    }
}

pub fn exceptional_lists() -> ExceptionalLists {
    let pick = |f: fn(&ListTags) -> bool| {
        ENTRIES
            .iter()
            .filter(|e| f(&e.tags))
            .map(|e| (e.degree, e.name))
            .collect::<Vec<_>>()
    };
    ExceptionalLists {
        set_transitive: pick(|t| t.set_transitive),
        orbit_equivalent: pick(|t| t.orbit_equivalent),
        no_regular_set: pick(|t| t.no_regular_set),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for e in entries() {
            let g = e.load().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(g.degree(), e.degree);
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, a) in entries().iter().enumerate() {
            for b in &entries()[i + 1..] {
                assert!(!b.matches(a.name), "{} shadows {}", b.name, a.name);
                for alias in a.aliases {
                    assert!(!b.matches(alias), "alias {alias} of {} hits {}", a.name, b.name);
                }
            }
        }
    }

    #[test]
    fn lookup_is_forgiving_about_case_and_spaces() {
        assert_eq!(load("d10@5").unwrap().order(), 10);
        assert_eq!(load("L2(9).2.2 @10").unwrap().order(), 1440);
        assert!(matches!(load("nope"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn exceptional_lists_shape() {
        let lists = exceptional_lists();
        assert!(lists.set_transitive.contains(&(5, "F20@5")));
        assert!(lists.orbit_equivalent.contains(&(10, "PGL(2,9)@10")));
        let deg7: Vec<_> = lists.no_regular_set.iter().filter(|(d, _)| *d == 7).collect();
        assert_eq!(deg7, vec![&(7, "F42@7"), &(7, "PSL(3,2)@7")]);
    }

    #[test]
    fn degree_ten_extensions_are_distinct() {
        let pgl = load("PGL(2,9)@10").unwrap();
        let psigmal = load("PSigmaL(2,9)@10").unwrap();
        let m10 = load("M10@10").unwrap();
        let pgaml = load("PGammaL(2,9)@10").unwrap();
        assert!(!pgl.same_group(&psigmal) && !pgl.same_group(&m10) && !m10.same_group(&psigmal));
        for g in [&pgl, &psigmal, &m10] {
            assert!(g.is_subgroup_of(&pgaml));
        }
    }
}
