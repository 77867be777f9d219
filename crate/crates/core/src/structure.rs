//! Block systems, primitivity, solvability and Sym/Alt recognition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::Permutation;

/// A partition of the points into blocks of imprimitivity of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockSystem {
    pub degree: usize,
    /// Each block sorted; blocks ordered by least element.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing each point.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        for (b, block) in self.blocks.iter().enumerate() {
            for &p in block {
                out[p] = b;
            }
        }
        out
    }

    /// Checks the partition shape and that every generator permutes the blocks.
    pub fn is_block_system_of(&self, group: &PermutationGroup) -> bool {
        let d = self.block_size();
        if d == 0 || self.blocks.iter().any(|b| b.len() != d) {
            return false;
        }
        let mut seen = vec![false; self.degree];
        for &p in self.blocks.iter().flatten() {
            if p >= self.degree || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        if seen.iter().any(|s| !s) {
            return false;
        }
        let of = self.block_of();
        group.generators().iter().all(|g| {
            self.blocks.iter().all(|block| {
                let target = of[g.apply(block[0])];
                block.iter().all(|&p| of[g.apply(p)] == target)
            })
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest invariant partition in which `a` and `b` share a class.
fn finest_partition_joining(gens: &[Permutation], n: usize, a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    uf.union(a, b);
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for x in 0..n {
        let r = uf.find(x);
        if index[r] == usize::MAX {
            index[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[index[r]].push(x);
    }
    classes
}

fn require_transitive(group: &PermutationGroup) -> Result<()> {
    if group.degree() < 2 {
        return Err(Error::DegreeTooSmall {
            degree: group.degree(),
            min: 2,
        });
    }
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    Ok(())
}

/// Block systems whose blocks are minimal non-trivial blocks, one per
/// minimal block containing point 0. Empty iff the group is primitive.
pub fn minimal_block_systems(group: &PermutationGroup) -> Result<Vec<BlockSystem>> {
    require_transitive(group)?;
    let n = group.degree();
    let gens = group.nontrivial_generators();
    let mut systems: Vec<(u64, Vec<Vec<usize>>)> = Vec::new();
    for i in 1..n {
        let classes = finest_partition_joining(&gens, n, 0, i);
        if classes.len() == 1 {
            continue;
        }
        let mask = classes[0].iter().fold(0u64, |m, &p| m | 1 << p);
        if !systems.iter().any(|(m, _)| *m == mask) {
            systems.push((mask, classes));
        }
    }
    let masks: Vec<u64> = systems.iter().map(|(m, _)| *m).collect();
    let mut out: Vec<BlockSystem> = systems
        .into_iter()
        .filter(|(m, _)| !masks.iter().any(|&o| o != *m && o & *m == o))
        .map(|(_, blocks)| BlockSystem { degree: n, blocks })
        .collect();
    out.sort_by(|a, b| a.blocks.cmp(&b.blocks));
    Ok(out)
}

/// Every block system with non-trivial blocks.
pub fn all_block_systems(group: &PermutationGroup) -> Result<Vec<BlockSystem>> {
    require_transitive(group)?;
    let n = group.degree();
    let gens = group.nontrivial_generators();
    let mut out: Vec<BlockSystem> = Vec::new();
    // Blocks through 0 are closed under "smallest block containing B and i".
    let mut frontier: Vec<Vec<Vec<usize>>> = (1..n)
        .map(|i| finest_partition_joining(&gens, n, 0, i))
        .filter(|c| c.len() > 1)
        .collect();
    while let Some(classes) = frontier.pop() {
        if out.iter().any(|s| s.blocks == classes) {
            continue;
        }
        let block0 = classes[0].clone();
        out.push(BlockSystem {
            degree: n,
            blocks: classes,
        });
        for i in 1..n {
            if block0.contains(&i) {
                continue;
            }
            let mut uf = UnionFind::new(n);
            let mut queue = Vec::new();
            for w in block0.windows(2) {
                if uf.union(w[0], w[1]) {
                    queue.push((w[0], w[1]));
                }
            }
            if uf.union(0, i) {
                queue.push((0, i));
            }
            while let Some((x, y)) = queue.pop() {
                for g in &gens {
                    let (gx, gy) = (g.apply(x), g.apply(y));
                    if uf.union(gx, gy) {
                        queue.push((gx, gy));
                    }
                }
            }
            let mut classes: Vec<Vec<usize>> = Vec::new();
            let mut index = vec![usize::MAX; n];
            for x in 0..n {
                let r = uf.find(x);
                if index[r] == usize::MAX {
                    index[r] = classes.len();
                    classes.push(Vec::new());
                }
                classes[index[r]].push(x);
            }
            if classes.len() > 1 {
                frontier.push(classes);
            }
        }
    }
    out.sort_by(|a, b| a.block_size().cmp(&b.block_size()).then(a.blocks.cmp(&b.blocks)));
    Ok(out)
}

/// Transitive with no non-trivial block. Errors for degree below 2 and for
/// intransitive groups.
pub fn is_primitive(group: &PermutationGroup) -> Result<bool> {
    require_transitive(group)?;
    let n = group.degree();
    let gens = group.nontrivial_generators();
    Ok((1..n).all(|i| finest_partition_joining(&gens, n, 0, i).len() == 1))
}

/// Smallest normal subgroup of `group` containing `elements`.
pub fn normal_closure(group: &PermutationGroup, elements: &[Permutation]) -> PermutationGroup {
    let n = group.degree();
    let mut gens: Vec<Permutation> = elements.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut h = PermutationGroup::new(n, gens.clone()).expect("same degree");
    let mut k = 0;
    while k < gens.len() {
        let x = gens[k].clone();
        k += 1;
        for g in group.nontrivial_generators() {
            let c = &(&g.inverse() * &x) * &g;
            if !h.has(&c) {
                gens.push(c);
                h = PermutationGroup::new(n, gens.clone()).expect("same degree");
            }
        }
    }
    h
}

/// Commutator subgroup.
pub fn derived_subgroup(group: &PermutationGroup) -> PermutationGroup {
    let gens = group.nontrivial_generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(group, &comms)
}

pub fn is_solvable(group: &PermutationGroup) -> bool {
    let mut h = group.clone();
    loop {
        if h.is_trivial() {
            return true;
        }
        let d = derived_subgroup(&h);
        if d.order() == h.order() {
            return false;
        }
        h = d;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymAltKind {
    Sym,
    Alt,
    Neither,
}

pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

/// Recognises the full symmetric or alternating group on the points.
pub fn sym_alt_kind(group: &PermutationGroup) -> SymAltKind {
    let Some(f) = factorial(group.degree()) else {
        return SymAltKind::Neither;
    };
    let order = group.order();
    if order == f {
        SymAltKind::Sym
    } else if 2 * order == f && group.generators().iter().all(Permutation::is_even) {
        SymAltKind::Alt
    } else {
        SymAltKind::Neither
    }
}
