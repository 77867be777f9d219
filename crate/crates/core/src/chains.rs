//! Imprimitivity chains and membership of their links in the exceptional
//! collection `𝒜`.
//!
//! A chain for a transitive imprimitive `H` is found by taking a minimal
//! block system, recording the (primitive) group induced on a block, and
//! recursing into the action on the blocks until that action is primitive.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{regular_set_census_with, RegularSetCensus};
use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::orbits::setwise_stabilizer_with;
use crate::perm::Permutation;
use crate::structure::{is_primitive, minimal_block_systems, sym_alt_kind, BlockSystem, SymAltKind};
use crate::subset::Subset;
use crate::Caps;

/// Primitive links `K^(0), ..., K^(t)` with `H <= K^(0) wr (K^(1) wr ...)`.
#[derive(Clone, Debug)]
pub struct ImprimitivityChain {
    pub links: Vec<PermutationGroup>,
}

impl ImprimitivityChain {
    /// Number of wreath steps, one less than the number of links.
    pub fn length(&self) -> usize {
        self.links.len() - 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.links.iter().map(PermutationGroup::degree).collect()
    }

    pub fn orders(&self) -> Vec<u128> {
        self.links.iter().map(PermutationGroup::order).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ChainEnumeration {
    pub chains: Vec<ImprimitivityChain>,
    /// Chains dropped because their link fingerprints repeat an earlier chain.
    pub merged: usize,
    /// Enumeration stopped at the chain cap.
    pub truncated: bool,
}

/// Group induced on `block` by its setwise stabilizer, on points `0..|block|`
/// in increasing order.
pub fn induced_on_block(
    group: &PermutationGroup,
    block: &[usize],
    caps: &Caps,
) -> Result<PermutationGroup> {
    let n = group.degree();
    let mask = block.iter().fold(0u64, |m, &p| m | 1 << p);
    let stabilizer = setwise_stabilizer_with(group, &Subset::new(n, mask)?, caps)?;
    let mut local = vec![usize::MAX; n];
    for (i, &p) in block.iter().enumerate() {
        local[p] = i;
    }
    let gens = stabilizer
        .nontrivial_generators()
        .iter()
        .map(|g| Permutation::from_images(block.iter().map(|&p| local[g.apply(p)]).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroup::new(block.len(), gens)
}

/// Action of `group` on the blocks of `system`.
pub fn action_on_blocks(group: &PermutationGroup, system: &BlockSystem) -> Result<PermutationGroup> {
    let of = system.block_of();
    let gens = group
        .nontrivial_generators()
        .iter()
        .map(|g| Permutation::from_images(system.blocks.iter().map(|b| of[g.apply(b[0])]).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroup::new(system.block_count(), gens)
}

fn chains_of(group: &PermutationGroup, caps: &Caps, budget: &mut usize) -> Result<Vec<Vec<PermutationGroup>>> {
    if *budget == 0 {
        return Ok(Vec::new());
    }
    if is_primitive(group)? {
        *budget -= 1;
        return Ok(vec![vec![group.clone()]]);
    }
    let mut out = Vec::new();
    for system in minimal_block_systems(group)? {
        let k = induced_on_block(group, &system.blocks[0], caps)?;
        let top = action_on_blocks(group, &system)?;
        for tail in chains_of(&top, caps, budget)? {
            let mut links = vec![k.clone()];
            links.extend(tail);
            out.push(links);
        }
        if *budget == 0 {
            break;
        }
    }
    Ok(out)
}

type Fingerprint = Vec<(usize, u128, Option<Vec<u64>>)>;

fn census_of(group: &PermutationGroup, caps: &Caps) -> Option<RegularSetCensus> {
    regular_set_census_with(group, caps).ok()
}

/// All imprimitivity chains of a transitive imprimitive group, up to
/// `caps.chain_cap` raw chains, deduplicated by the degree, order and
/// regular-set counts of their links.
pub fn imprimitivity_chains(group: &PermutationGroup, caps: &Caps) -> Result<ChainEnumeration> {
    if is_primitive(group)? {
        return Err(Error::Primitive);
    }
    let mut budget = caps.chain_cap.max(1);
    let raw = chains_of(group, caps, &mut budget)?;
    let truncated = budget == 0;
    let fingerprints: Vec<Fingerprint> = raw
        .par_iter()
        .map(|links| {
            links
                .iter()
                .map(|k| {
                    let counts = census_of(k, caps).map(|c| c.regular_count_by_size.values().copied().collect());
                    (k.degree(), k.order(), counts)
                })
                .collect()
        })
        .collect();
    let mut seen: Vec<&Fingerprint> = Vec::new();
    let mut chains = Vec::new();
    let mut merged = 0;
    for (links, fp) in raw.into_iter().zip(&fingerprints) {
        if seen.contains(&fp) {
            merged += 1;
        } else {
            seen.push(fp);
            chains.push(ImprimitivityChain { links });
        }
    }
    Ok(ChainEnumeration {
        chains,
        merged,
        truncated,
    })
}

/// Membership of one primitive link in `𝒜`. Census-based flags are `None`
/// when the census exceeded its caps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAMembership {
    pub degree: usize,
    pub order: u128,
    pub is_sym_or_alt: bool,
    /// No regular set at all.
    pub in_l_nr: Option<bool>,
    /// Regular sets exist, and all have size half the degree.
    pub in_l_sr: Option<bool>,
    /// One of `(5, C5)`, `(8, 2^3:7)`, `(9, 3^2:8)`.
    pub is_explicit_small: bool,
    pub in_a: Option<bool>,
}

fn has_element_of_order(group: &PermutationGroup, m: u64) -> bool {
    group.elements().any(|g| g.order() == m)
}

/// Decides `𝒜`-membership of a primitive group from its order, Sym/Alt
/// status and regular-set census. The order-72 case at degree 9 is pinned
/// to `3^2:8` by requiring an element of order 8.
pub fn list_a_membership(link: &PermutationGroup, caps: &Caps) -> ListAMembership {
    let (n, order) = (link.degree(), link.order());
    let is_sym_or_alt = match sym_alt_kind(link) {
        SymAltKind::Sym => n >= 2,
        SymAltKind::Alt => n >= 3,
        SymAltKind::Neither => false,
    };
    let is_explicit_small = match (n, order) {
        (5, 5) | (8, 56) => true,
        (9, 72) => has_element_of_order(link, 8),
        _ => false,
    };
    let (in_l_nr, in_l_sr) = if is_sym_or_alt {
        (Some(false), Some(false))
    } else {
        match census_of(link, caps) {
            Some(c) => {
                let nr = !c.has_regular_set();
                let sr = !nr && c.sizes_with_regular.iter().all(|&k| 2 * k == n);
                (Some(nr), Some(sr))
            }
            None => (None, None),
        }
    };
    let in_a = if is_sym_or_alt || is_explicit_small || in_l_nr == Some(true) || in_l_sr == Some(true) {
        Some(true)
    } else if in_l_nr.is_none() {
        None
    } else {
        Some(false)
    };
    ListAMembership {
        degree: n,
        order,
        is_sym_or_alt,
        in_l_nr,
        in_l_sr,
        is_explicit_small,
        in_a,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AClass {
    AImprimitive,
    APrimeImprimitive,
    Both,
    Neither,
}

#[derive(Clone, Debug)]
pub struct AClassification {
    pub class: AClass,
    pub chains: Vec<ImprimitivityChain>,
    pub memberships: Vec<Vec<ListAMembership>>,
    /// Some link's membership could not be decided.
    pub unknown: bool,
    pub truncated: bool,
}

/// `𝒜`-imprimitive: some chain has every link in `𝒜`. `𝒜'`-imprimitive:
/// some chain has no link in `𝒜`.
pub fn classify_a_prime(group: &PermutationGroup, caps: &Caps) -> Result<AClassification> {
    let enumeration = imprimitivity_chains(group, caps)?;
    let mut memo: BTreeMap<(usize, Vec<Vec<usize>>), ListAMembership> = BTreeMap::new();
    let mut memberships = Vec::new();
    for chain in &enumeration.chains {
        let mut row = Vec::new();
        for link in &chain.links {
            let key = (
                link.degree(),
                link.strong_generators()
                    .iter()
                    .map(|g| g.images().collect())
                    .collect(),
            );
            let m = memo
                .entry(key)
                .or_insert_with(|| list_a_membership(link, caps))
                .clone();
            row.push(m);
        }
        memberships.push(row);
    }
    let all_in = memberships
        .iter()
        .any(|row| row.iter().all(|m| m.in_a == Some(true)));
    let none_in = memberships
        .iter()
        .any(|row| row.iter().all(|m| m.in_a == Some(false)));
    let unknown = memberships.iter().flatten().any(|m| m.in_a.is_none());
    let class = match (all_in, none_in) {
        (true, true) => AClass::Both,
        (true, false) => AClass::AImprimitive,
        (false, true) => AClass::APrimeImprimitive,
        (false, false) => AClass::Neither,
    };
    Ok(AClassification {
        class,
        chains: enumeration.chains,
        memberships,
        unknown,
        truncated: enumeration.truncated,
    })
}
