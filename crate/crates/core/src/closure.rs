//! k-orbit equivalence, k-closures and the orbit closure `G*`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::orbits::{orbits_on_all_subsets, orbits_on_k_subsets_with};
use crate::relation::colouring_group;
use crate::subset::k_subsets;
use crate::Caps;

const DEPTH: usize = 4;

fn same_degree(g: &PermutationGroup, h: &PermutationGroup) -> Result<()> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    Ok(())
}

/// Same orbits on the `k`-subsets.
pub fn k_orbit_equivalent(g: &PermutationGroup, h: &PermutationGroup, k: usize) -> Result<bool> {
    same_degree(g, h)?;
    let caps = Caps::default();
    let a = orbits_on_k_subsets_with(g, k, &caps)?;
    let b = orbits_on_k_subsets_with(h, k, &caps)?;
    Ok(a.same_partition(&b))
}

fn closure_degree_check(n: usize, caps: &Caps) -> Result<()> {
    if n > caps.closure_max_degree {
        return Err(Error::DegreeTooLarge {
            degree: n,
            limit: caps.closure_max_degree,
        });
    }
    Ok(())
}

/// `G^{k}`: all permutations mapping every `k`-subset into its own `G`-orbit.
pub fn k_closure(group: &PermutationGroup, k: usize) -> Result<PermutationGroup> {
    k_closure_with(group, k, &Caps::default())
}

pub fn k_closure_with(group: &PermutationGroup, k: usize, caps: &Caps) -> Result<PermutationGroup> {
    let n = group.degree();
    if k > n {
        return Err(Error::LayerOutOfRange { k, degree: n });
    }
    closure_degree_check(n, caps)?;
    let part = orbits_on_k_subsets_with(group, k, caps)?;
    if part.orbit_count() <= 1 || n < 2 {
        return Ok(PermutationGroup::symmetric(n));
    }
    let mut colour = vec![0u32; 1 << n];
    for m in k_subsets(n, k) {
        colour[m as usize] = part.id_of_mask(m) as u32 + 1;
    }
    Ok(colouring_group(n, colour, group.strong_generators(), k.clamp(1, DEPTH)))
}

/// All permutations preserving every `G`-orbit on the power set.
pub fn all_layer_closure(group: &PermutationGroup, caps: &Caps) -> Result<PermutationGroup> {
    let n = group.degree();
    closure_degree_check(n, caps)?;
    if n < 2 {
        return Ok(group.clone());
    }
    let part = orbits_on_all_subsets(group, caps)?;
    let colour: Vec<u32> = (0..1u64 << n).map(|m| part.id_of_mask(m) as u32 + 1).collect();
    Ok(colouring_group(n, colour, group.strong_generators(), (n / 2).clamp(1, DEPTH)))
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub group_order: u128,
    /// Order of `G^{k}` for each requested `k`.
    pub k_closures: BTreeMap<usize, u128>,
    pub star_order: u128,
    pub c_of_g: u128,
    pub orbit_closed: bool,
    /// The all-layer closure and `G^{⌊n/2⌋}` coincide.
    pub routes_agree: bool,
    pub star: PermutationGroup,
}

/// `G*` computed both from all layers and as `G^{⌊n/2⌋}`, with the
/// k-closures for the requested `ks`.
pub fn orbit_closure(group: &PermutationGroup) -> Result<ClosureReport> {
    orbit_closure_with(group, &[], &Caps::default())
}

pub fn orbit_closure_with(group: &PermutationGroup, ks: &[usize], caps: &Caps) -> Result<ClosureReport> {
    let n = group.degree();
    let all_layers = all_layer_closure(group, caps)?;
    let half = if n < 2 {
        group.clone()
    } else {
        k_closure_with(group, n / 2, caps)?
    };
    let routes_agree = all_layers.same_group(&half);
    let mut k_closures = BTreeMap::new();
    for &k in ks {
        let order = if k == n / 2 {
            half.order()
        } else {
            k_closure_with(group, k, caps)?.order()
        };
        k_closures.insert(k, order);
    }
    let star_order = all_layers.order();
    let c_of_g = star_order / group.order();
    Ok(ClosureReport {
        group_order: group.order(),
        k_closures,
        star_order,
        c_of_g,
        orbit_closed: c_of_g == 1,
        routes_agree,
        star: all_layers,
    })
}

/// One instance of "ℓ-orbit equivalence implies k-orbit equivalence" for
/// `k <= ℓ` and `k + ℓ <= n`. Returns whether the implication holds.
pub fn monotonicity_check(
    g: &PermutationGroup,
    h: &PermutationGroup,
    k: usize,
    l: usize,
) -> Result<bool> {
    same_degree(g, h)?;
    let n = g.degree();
    if k > l || k + l > n {
        return Err(Error::InvalidParameters(format!(
            "need k <= l and k + l <= n, got k = {k}, l = {l}, n = {n}"
        )));
    }
    Ok(!k_orbit_equivalent(g, h, l)? || k_orbit_equivalent(g, h, k)?)
}

/// Memo of orbit closures keyed by degree and generator images.
#[derive(Default)]
pub struct ClosureCache {
    entries: HashMap<(usize, Vec<Vec<u8>>), PermutationGroup>,
}

impl ClosureCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn fingerprint(group: &PermutationGroup) -> (usize, Vec<Vec<u8>>) {
        let mut gens: Vec<Vec<u8>> = group
            .nontrivial_generators()
            .iter()
            .map(|g| g.images().map(|i| i as u8).collect())
            .collect();
        gens.sort();
        (group.degree(), gens)
    }

    /// `G*`, computed on first request.
    pub fn star(&mut self, group: &PermutationGroup, caps: &Caps) -> Result<PermutationGroup> {
        let key = Self::fingerprint(group);
        if let Some(g) = self.entries.get(&key) {
            return Ok(g.clone());
        }
        let star = all_layer_closure(group, caps)?;
        self.entries.insert(key, star.clone());
        Ok(star)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
