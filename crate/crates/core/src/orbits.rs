//! Orbits of a permutation group on subsets, and setwise stabilizers.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::search::{subgroup_search, SearchSpace, SetwiseRefiner};
use crate::subset::{binomial, full_mask, k_subsets, BinomialTable, Subset};
use crate::Caps;

/// Which subsets an [`OrbitPartition`] covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Universe {
    /// Every subset of the point set.
    All,
    /// The subsets of one size.
    Layer(usize),
}

/// Partition of a family of subsets into orbits. Orbit ids follow the order
/// of their representatives, which are the numerically least masks.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    degree: usize,
    universe: Universe,
    /// Orbit id per subset, indexed by colex rank (layer) or by mask (all).
    ids: Vec<u32>,
    representatives: Vec<u64>,
    lengths: Vec<u128>,
    table: Option<BinomialTable>,
}

impl OrbitPartition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn orbit_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> Vec<Subset> {
        self.representatives
            .iter()
            .map(|&m| Subset::new(self.degree, m).expect("valid mask"))
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn representative_masks(&self) -> &[u64] {
        &self.representatives
    }

    pub fn lengths(&self) -> &[u128] {
        &self.lengths
    }

    fn index(&self, mask: u64) -> usize {
        match &self.table {
            Some(t) => t.rank(mask),
            None => mask as usize,
        }
    }

    /// Orbit id of a mask, which must lie in the universe.
    pub(crate) fn id_of_mask(&self, mask: u64) -> usize {
        self.ids[self.index(mask)] as usize
    }

    /// Orbit id of a subset, or `None` if it lies outside the universe.
    pub fn orbit_of(&self, x: &Subset) -> Option<usize> {
        if x.degree() != self.degree {
            return None;
        }
        match self.universe {
            Universe::Layer(k) if x.size() != k => None,
            _ => Some(self.id_of_mask(x.mask())),
        }
    }

    /// Members of one orbit in increasing mask order.
    pub fn orbit_masks(&self, id: usize) -> Vec<u64> {
        let members: Box<dyn Iterator<Item = u64>> = match self.universe {
            Universe::Layer(k) => Box::new(k_subsets(self.degree, k)),
            Universe::All => Box::new(0..=full_mask(self.degree)),
        };
        members.filter(|&m| self.id_of_mask(m) == id).collect()
    }

    /// Same orbits as `other`, compared through the canonical numbering.
    pub fn same_partition(&self, other: &OrbitPartition) -> bool {
        self.degree == other.degree
            && self.universe == other.universe
            && self.representatives == other.representatives
            && self.ids == other.ids
    }
}

fn check_degree(group: &PermutationGroup, x: &Subset) -> Result<()> {
    if group.degree() != x.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: x.degree(),
        });
    }
    Ok(())
}

/// The orbit `x^G`, sorted by mask.
pub fn orbit_of_subset(group: &PermutationGroup, x: &Subset) -> Result<Vec<Subset>> {
    check_degree(group, x)?;
    let gens = group.nontrivial_generators();
    let mut seen: HashSet<u64> = HashSet::from([x.mask()]);
    let mut queue = vec![x.mask()];
    while let Some(m) = queue.pop() {
        for g in &gens {
            let y = g.apply_mask(m);
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out
        .into_iter()
        .map(|m| Subset::new(x.degree(), m).expect("valid mask"))
        .collect())
}

fn dense_limit(what: &str, needed: u128, caps: &Caps) -> Result<()> {
    if needed > caps.dense_universe_cap {
        return Err(Error::CapExceeded {
            what: what.to_string(),
            needed,
            cap: caps.dense_universe_cap,
        });
    }
    Ok(())
}

fn partition(
    group: &PermutationGroup,
    universe: Universe,
    members: impl Iterator<Item = u64>,
    size: usize,
    table: Option<BinomialTable>,
) -> OrbitPartition {
    const NONE: u32 = u32::MAX;
    let gens = group.nontrivial_generators();
    let mut ids = vec![NONE; size];
    let index = |t: &Option<BinomialTable>, m: u64| match t {
        Some(t) => t.rank(m),
        None => m as usize,
    };
    let mut representatives = Vec::new();
    let mut lengths = Vec::new();
    let mut queue = Vec::new();
    for m in members {
        if ids[index(&table, m)] != NONE {
            continue;
        }
        let id = representatives.len() as u32;
        representatives.push(m);
        ids[index(&table, m)] = id;
        queue.push(m);
        let mut len: u128 = 0;
        while let Some(y) = queue.pop() {
            len += 1;
            for g in &gens {
                let z = g.apply_mask(y);
                let iz = index(&table, z);
                if ids[iz] == NONE {
                    ids[iz] = id;
                    queue.push(z);
                }
            }
        }
        lengths.push(len);
    }
    OrbitPartition {
        degree: group.degree(),
        universe,
        ids,
        representatives,
        lengths,
        table,
    }
}

/// Orbits on the `k`-subsets.
pub fn orbits_on_k_subsets(group: &PermutationGroup, k: usize) -> Result<OrbitPartition> {
    orbits_on_k_subsets_with(group, k, &Caps::default())
}

pub fn orbits_on_k_subsets_with(group: &PermutationGroup, k: usize, caps: &Caps) -> Result<OrbitPartition> {
    let n = group.degree();
    if k > n {
        return Err(Error::LayerOutOfRange { k, degree: n });
    }
    let size = binomial(n, k);
    dense_limit("subsets in one layer", size, caps)?;
    Ok(partition(
        group,
        Universe::Layer(k),
        k_subsets(n, k),
        size as usize,
        Some(BinomialTable::new(n)),
    ))
}

/// Orbits on the whole power set.
pub fn orbits_on_all_subsets(group: &PermutationGroup, caps: &Caps) -> Result<OrbitPartition> {
    let n = group.degree();
    let size = 1u128 << n;
    dense_limit("subsets of the point set", size, caps)?;
    Ok(partition(group, Universe::All, 0..=full_mask(n), size as usize, None))
}

/// Transitive on the `k`-subsets for every `k`.
pub fn is_set_transitive(group: &PermutationGroup) -> Result<bool> {
    let n = group.degree();
    for k in 0..=n / 2 {
        if orbits_on_k_subsets(group, k)?.orbit_count() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{g in G : x^g = x}`.
pub fn setwise_stabilizer(group: &PermutationGroup, x: &Subset) -> Result<PermutationGroup> {
    setwise_stabilizer_with(group, x, &Caps::default())
}

pub fn setwise_stabilizer_with(group: &PermutationGroup, x: &Subset, caps: &Caps) -> Result<PermutationGroup> {
    check_degree(group, x)?;
    if group.order() <= caps.element_iteration_cap {
        Ok(stabilizer_by_iteration(group, x.mask()))
    } else {
        Ok(stabilizer_by_search(group, x.mask()))
    }
}

pub(crate) fn stabilizer_by_iteration(group: &PermutationGroup, mask: u64) -> PermutationGroup {
    let n = group.degree();
    let mut stab = PermutationGroup::trivial(n);
    let mut gens = Vec::new();
    for g in group.elements() {
        if g.apply_mask(mask) == mask && !stab.has(&g) {
            gens.push(g);
            stab = PermutationGroup::new(n, gens.clone()).expect("same degree");
        }
    }
    stab
}

pub(crate) fn stabilizer_by_search(group: &PermutationGroup, mask: u64) -> PermutationGroup {
    let space = SearchSpace::Group(group.clone());
    subgroup_search(&space, &SetwiseRefiner { mask }, &[])
}

/// Number of orbits on the power set by Burnside's lemma.
pub fn burnside_power_set_orbits(group: &PermutationGroup) -> u128 {
    let total: u128 = group.elements().map(|g| 1u128 << g.cycle_count()).sum();
    total / group.order()
}
