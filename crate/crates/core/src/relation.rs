//! Unordered relations, their invariance groups, and the search for the
//! smallest relation group above a given group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::census::is_regular_set_with;
use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::orbits::{orbit_of_subset, orbits_on_k_subsets_with, setwise_stabilizer_with, OrbitPartition};
use crate::perm::Permutation;
use crate::search::{subgroup_search, ColouringRefiner, SearchSpace};
use crate::subset::{binomial, full_mask, Subset};
use crate::Caps;

/// A finite family of distinct subsets of `{0..n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    degree: usize,
    /// Sorted, without repetitions.
    sets: Vec<u64>,
}

impl Relation {
    pub fn new(degree: usize, sets: Vec<Subset>) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for x in sets {
            if x.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: x.degree(),
                });
            }
            masks.push(x.mask());
        }
        Relation::from_masks(degree, masks)
    }

    /// Rejects out-of-range points and repeated sets.
    pub fn from_masks(degree: usize, mut masks: Vec<u64>) -> Result<Self> {
        for &m in &masks {
            Subset::new(degree, m)?;
        }
        masks.sort_unstable();
        if let Some(w) = masks.windows(2).find(|w| w[0] == w[1]) {
            let points = Subset::new(degree, w[0])?.points();
            return Err(Error::InvalidParameters(format!("set {points:?} listed twice")));
        }
        Ok(Relation { degree, sets: masks })
    }

    pub(crate) fn from_masks_merged(degree: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        Relation { degree, sets: masks }
    }

    pub fn empty(degree: usize) -> Self {
        Relation {
            degree,
            sets: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn sets(&self) -> Vec<Subset> {
        self.sets
            .iter()
            .map(|&m| Subset::new(self.degree, m).expect("valid mask"))
            .collect()
    }

    pub fn contains(&self, x: &Subset) -> bool {
        x.degree() == self.degree && self.sets.binary_search(&x.mask()).is_ok()
    }

    /// The set sizes that occur.
    pub fn arity(&self) -> BTreeSet<usize> {
        self.sets.iter().map(|m| m.count_ones() as usize).collect()
    }

    /// Largest set size, 0 for the empty relation.
    pub fn max_size(&self) -> usize {
        self.arity().last().copied().unwrap_or(0)
    }

    /// Sets grouped by size.
    pub fn layers(&self) -> BTreeMap<usize, Vec<u64>> {
        let mut out: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for &m in &self.sets {
            out.entry(m.count_ones() as usize).or_default().push(m);
        }
        out
    }

    /// A union of complete layers.
    pub fn is_trivial(&self) -> bool {
        self.layers()
            .iter()
            .all(|(&k, sets)| sets.len() as u128 == binomial(self.degree, k))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut masks = self.sets.clone();
        masks.extend_from_slice(&other.sets);
        Ok(Relation::from_masks_merged(self.degree, masks))
    }

    /// Every set replaced by its complement.
    pub fn complemented(&self) -> Relation {
        let full = full_mask(self.degree);
        Relation::from_masks_merged(self.degree, self.sets.iter().map(|m| !m & full).collect())
    }

    pub fn image(&self, g: &Permutation) -> Result<Relation> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        Ok(Relation::from_masks_merged(
            self.degree,
            self.sets.iter().map(|&m| g.apply_mask(m)).collect(),
        ))
    }

    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        g.degree() == self.degree
            && self
                .sets
                .iter()
                .all(|&m| self.sets.binary_search(&g.apply_mask(m)).is_ok())
    }

    pub fn is_preserved_by_group(&self, group: &PermutationGroup) -> bool {
        group.generators().iter().all(|g| self.is_preserved_by(g))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<Vec<usize>> = self.sets.iter().map(|&m| crate::subset::mask_points(m)).collect();
        write!(f, "Relation@{}{:?}", self.degree, sets)
    }
}

/// Size of the decided subsets compared while pruning.
const SIGNATURE_DEPTH: usize = 4;

/// Group of all permutations preserving a colouring of the power set.
pub(crate) fn colouring_group(
    n: usize,
    colour: Vec<u32>,
    seed: &[Permutation],
    depth: usize,
) -> PermutationGroup {
    let refiner = ColouringRefiner::new(n, colour, 0, depth);
    let base = refiner.base_order(n);
    subgroup_search(&SearchSpace::symmetric(n, base), &refiner, seed)
}

fn dense_check(n: usize, caps: &Caps) -> Result<()> {
    if (1u128 << n) > caps.dense_universe_cap {
        return Err(Error::CapExceeded {
            what: "subset table".into(),
            needed: 1u128 << n,
            cap: caps.dense_universe_cap,
        });
    }
    Ok(())
}

fn membership_colouring(n: usize, masks: &[u64]) -> Vec<u32> {
    let mut colour = vec![0u32; 1 << n];
    for &m in masks {
        colour[m as usize] = 1;
    }
    colour
}

fn search_depth(relation: &Relation) -> usize {
    relation.max_size().clamp(1, SIGNATURE_DEPTH)
}

/// `G(R)`: all permutations mapping every member of `R` into `R`, found by
/// an unseeded search over `Sym(n)`.
pub fn invariance_group(relation: &Relation) -> Result<PermutationGroup> {
    invariance_group_with(relation, &Caps::default())
}

pub fn invariance_group_with(relation: &Relation, caps: &Caps) -> Result<PermutationGroup> {
    let n = relation.degree();
    if n > caps.max_degree_exhaustive {
        return Err(Error::DegreeTooLarge {
            degree: n,
            limit: caps.max_degree_exhaustive,
        });
    }
    invariance_group_seeded(relation, &[], caps)
}

/// `G(R)` for a relation known to be preserved by `candidate`. The search
/// starts from the candidate and only has to rule out further elements, so
/// it is not bound by the exhaustive degree cap.
pub fn invariance_group_with_candidate(
    relation: &Relation,
    candidate: &PermutationGroup,
    caps: &Caps,
) -> Result<PermutationGroup> {
    if candidate.degree() != relation.degree() {
        return Err(Error::DegreeMismatch {
            left: relation.degree(),
            right: candidate.degree(),
        });
    }
    if !relation.is_preserved_by_group(candidate) {
        return Err(Error::NotSubgroup(
            "candidate group does not preserve the relation".into(),
        ));
    }
    invariance_group_seeded(relation, candidate.strong_generators(), caps)
}

fn invariance_group_seeded(
    relation: &Relation,
    seed: &[Permutation],
    caps: &Caps,
) -> Result<PermutationGroup> {
    let n = relation.degree();
    if relation.is_empty() || n < 2 {
        return Ok(PermutationGroup::symmetric(n));
    }
    dense_check(n, caps)?;
    Ok(colouring_group(
        n,
        membership_colouring(n, relation.masks()),
        seed,
        search_depth(relation),
    ))
}

/// True when `G(R) = G`.
pub fn defines_group(relation: &Relation, group: &PermutationGroup, caps: &Caps) -> Result<bool> {
    if !relation.is_preserved_by_group(group) {
        return Ok(false);
    }
    Ok(invariance_group_with_candidate(relation, group, caps)?.order() == group.order())
}

#[derive(Clone, Debug)]
pub struct RelationGroupReport {
    pub group_order: u128,
    /// Order of the smallest relation group containing the input.
    pub closure_order: u128,
    pub is_relation_group: bool,
    /// A relation with `G(R) = G`, present exactly when one exists.
    pub witness_relation: Option<Relation>,
    /// A relation whose invariance group is the smallest relation group above `G`.
    pub minimal_relation: Relation,
    pub minimal_group: PermutationGroup,
    pub r_of_g: u128,
    /// False when some layer was searched greedily, making `r_of_g` an upper bound.
    pub exhaustive: bool,
}

/// Candidate invariance groups for relations inside one layer.
struct LayerFamily {
    k: usize,
    /// (orbit set of the union, group), inclusion-minimal and distinct.
    candidates: Vec<(Vec<u64>, PermutationGroup)>,
}

fn union_masks(part: &OrbitPartition, orbit_ids: &[usize]) -> Vec<u64> {
    let mut out = Vec::new();
    for &id in orbit_ids {
        out.extend(part.orbit_masks(id));
    }
    out
}

fn minimal_groups<T: Clone>(items: Vec<(T, PermutationGroup)>) -> Vec<(T, PermutationGroup)> {
    let mut distinct: Vec<(T, PermutationGroup)> = Vec::new();
    for (t, g) in items {
        if !distinct.iter().any(|(_, h)| h.same_group(&g)) {
            distinct.push((t, g));
        }
    }
    let keep: Vec<bool> = distinct
        .iter()
        .map(|(_, g)| {
            !distinct
                .iter()
                .any(|(_, h)| h.order() < g.order() && h.is_subgroup_of(g))
        })
        .collect();
    distinct
        .into_iter()
        .zip(keep)
        .filter_map(|(item, k)| k.then_some(item))
        .collect()
}

fn layer_family(
    group: &PermutationGroup,
    k: usize,
    caps: &Caps,
    exhaustive: &mut bool,
) -> Result<Option<LayerFamily>> {
    let n = group.degree();
    let part = orbits_on_k_subsets_with(group, k, caps)?;
    let m = part.orbit_count();
    if m <= 1 {
        return Ok(None);
    }
    let choices: Vec<Vec<usize>> = if m <= caps.union_orbit_cap {
        // A union and its complement inside the layer define the same group,
        // so the last orbit is never used.
        (1u64..(1u64 << (m - 1)))
            .map(|bits| (0..m - 1).filter(|&i| bits >> i & 1 == 1).collect())
            .collect()
    } else if caps.allow_greedy {
        *exhaustive = false;
        (0..m).map(|i| vec![i]).collect()
    } else {
        return Err(Error::CapExceeded {
            what: format!("orbits on {k}-subsets"),
            needed: m as u128,
            cap: caps.union_orbit_cap as u128,
        });
    };
    let seed = group.strong_generators();
    let found: Vec<(Vec<u64>, PermutationGroup)> = choices
        .par_iter()
        .map(|ids| {
            let masks = union_masks(&part, ids);
            let depth = k.clamp(1, SIGNATURE_DEPTH);
            let g = colouring_group(n, membership_colouring(n, &masks), seed, depth);
            (masks, g)
        })
        .collect();
    Ok(Some(LayerFamily {
        k,
        candidates: minimal_groups(found),
    }))
}

#[derive(Clone)]
struct State {
    masks: Vec<u64>,
    group: PermutationGroup,
}

/// Smallest relation group containing `group`, with a relation defining it.
///
/// Every relation preserved by `G` is a union of `G`-orbits, and its layers
/// have pairwise disjoint arities, so its group is the intersection of the
/// groups of its layers. The search therefore collects, per layer, the
/// inclusion-minimal groups of orbit unions, and then combines one choice per
/// layer. Layers `k` and `n - k` carry the same groups through complements.
pub fn relation_closure(group: &PermutationGroup) -> Result<RelationGroupReport> {
    relation_closure_with(group, &Caps::default())
}

pub fn relation_closure_with(group: &PermutationGroup, caps: &Caps) -> Result<RelationGroupReport> {
    let n = group.degree();
    if n > caps.max_degree_exhaustive {
        return Err(Error::DegreeTooLarge {
            degree: n,
            limit: caps.max_degree_exhaustive,
        });
    }
    dense_check(n, caps)?;
    let target = group.order();
    let mut exhaustive = true;
    let mut slots: Vec<(bool, LayerFamily)> = Vec::new();
    for k in 1..=n / 2 {
        if let Some(family) = layer_family(group, k, caps, &mut exhaustive)? {
            if 2 * k < n {
                let copy = LayerFamily {
                    k,
                    candidates: family.candidates.clone(),
                };
                slots.push((false, family));
                slots.push((true, copy));
            } else {
                slots.push((false, family));
            }
        }
    }

    let full = full_mask(n);
    let seed = group.strong_generators();
    let mut states = vec![State {
        masks: Vec::new(),
        group: PermutationGroup::symmetric(n),
    }];
    for (complemented, family) in &slots {
        if states.iter().any(|s| s.group.order() == target) {
            break;
        }
        let depth_k = if *complemented { n - family.k } else { family.k };
        let work: Vec<(&State, &(Vec<u64>, PermutationGroup))> = states
            .iter()
            .flat_map(|s| family.candidates.iter().map(move |c| (s, c)))
            .filter(|(s, (_, b))| !s.group.is_subgroup_of(b))
            .collect();
        let extended: Vec<State> = work
            .par_iter()
            .map(|(s, (layer, b))| {
                let mut masks = s.masks.clone();
                if *complemented {
                    masks.extend(layer.iter().map(|m| !m & full));
                } else {
                    masks.extend_from_slice(layer);
                }
                let group = if b.is_subgroup_of(&s.group) {
                    b.clone()
                } else {
                    let depth = depth_k.clamp(1, SIGNATURE_DEPTH);
                    colouring_group(n, membership_colouring(n, &masks), seed, depth)
                };
                State { masks, group }
            })
            .collect();
        let mut all: Vec<(Vec<u64>, PermutationGroup)> =
            states.into_iter().map(|s| (s.masks, s.group)).collect();
        all.extend(extended.into_iter().map(|s| (s.masks, s.group)));
        states = minimal_groups(all)
            .into_iter()
            .map(|(masks, group)| State { masks, group })
            .collect();
    }
    let best = states
        .into_iter()
        .min_by_key(|s| s.group.order())
        .expect("at least the start state");
    let minimal_relation = Relation::from_masks_merged(n, best.masks);
    let closure_order = best.group.order();
    let is_relation_group = closure_order == target;
    Ok(RelationGroupReport {
        group_order: target,
        closure_order,
        is_relation_group,
        witness_relation: is_relation_group.then(|| minimal_relation.clone()),
        minimal_relation,
        minimal_group: best.group,
        r_of_g: closure_order / target,
        exhaustive,
    })
}

pub fn is_relation_group(group: &PermutationGroup) -> Result<bool> {
    Ok(relation_closure(group)?.is_relation_group)
}

/// First part of the Basic Lemma: from `H = G(R)`, a regular set `w` of `H`
/// whose size is not in the arity of `R`, and `G <= H`, the relation
/// `R ∪ w^G` defines `G`.
pub fn basic_lemma_construct(
    h: &PermutationGroup,
    relation: &Relation,
    w: &Subset,
    g: &PermutationGroup,
    caps: &Caps,
) -> Result<Relation> {
    if !g.is_subgroup_of(h) {
        return Err(Error::NotSubgroup("G is not contained in H".into()));
    }
    if !relation.is_preserved_by_group(h) {
        return Err(Error::NotInvarianceGroup);
    }
    if invariance_group_with_candidate(relation, h, caps)?.order() != h.order() {
        return Err(Error::NotInvarianceGroup);
    }
    let stabilizer = setwise_stabilizer_with(h, w, caps)?;
    if !stabilizer.is_trivial() {
        return Err(Error::NotRegular {
            stabilizer_order: stabilizer.order(),
        });
    }
    if relation.arity().contains(&w.size()) {
        return Err(Error::ArityClash { size: w.size() });
    }
    let orbit = orbit_of_subset(g, w)?;
    relation.union(&Relation::new(relation.degree(), orbit)?)
}

/// Second part of the Basic Lemma, for `H` maximal among groups that are not
/// set-transitive and having a regular set `w`: picks an orbit `x^H` that is
/// not a full layer with `|x| != |w|`, so that `H = G(x^H)`, and applies the
/// first part. Fails if `H` is not the group of any such orbit.
pub fn basic_lemma_second_part(
    h: &PermutationGroup,
    w: &Subset,
    g: &PermutationGroup,
    caps: &Caps,
) -> Result<Relation> {
    let n = h.degree();
    if !is_regular_set_with(h, w, caps)? {
        let stabilizer = setwise_stabilizer_with(h, w, caps)?;
        return Err(Error::NotRegular {
            stabilizer_order: stabilizer.order(),
        });
    }
    for k in 1..n {
        if k == w.size() {
            continue;
        }
        let part = orbits_on_k_subsets_with(h, k, caps)?;
        if part.orbit_count() < 2 {
            continue;
        }
        for id in 0..part.orbit_count() {
            let r = Relation::from_masks_merged(n, part.orbit_masks(id));
            if defines_group(&r, h, caps)? {
                return basic_lemma_construct(h, &r, w, g, caps);
            }
        }
    }
    Err(Error::Hypothesis(
        "no single orbit of a size other than |w| defines H".into(),
    ))
}
