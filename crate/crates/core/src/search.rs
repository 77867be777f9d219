//! Backtrack search for subgroups defined by a property.
//!
//! The search walks base images depth first. At the nodes where every earlier
//! base point is fixed it tests one candidate image per orbit of the subgroup
//! found so far, and below such a node it only looks for a single new element.
//! The property must define a subgroup of the search space.

use crate::group::{point_orbits, PermutationGroup};
use crate::perm::Permutation;

const UNSET: u8 = u8::MAX;

/// Partial image table built while descending the search tree.
pub(crate) struct PartialMap {
    pub img: Vec<u8>,
    used: Vec<bool>,
    /// Points in the order they were mapped; the last one is the newest.
    pub decided: Vec<u8>,
}

impl PartialMap {
    fn new(n: usize) -> Self {
        PartialMap {
            img: vec![UNSET; n],
            used: vec![false; n],
            decided: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, point: usize, image: usize) {
        self.img[point] = image as u8;
        self.used[image] = true;
        self.decided.push(point as u8);
    }

    fn pop(&mut self) {
        let p = self.decided.pop().expect("non-empty") as usize;
        self.used[self.img[p] as usize] = false;
        self.img[p] = UNSET;
    }

    fn clear(&mut self) {
        while !self.decided.is_empty() {
            self.pop();
        }
    }
}

/// Property tested during the search.
pub(crate) trait Refiner: Sync {
    /// Necessary condition, called right after `point` was mapped.
    fn consistent(&self, point: usize, map: &PartialMap) -> bool;
    /// Exact membership test for a complete element.
    fn accept(&self, g: &Permutation) -> bool;
}

pub(crate) enum SearchSpace {
    /// All of `Sym(n)`, with the given order of base points (a permutation
    /// of the point set).
    Symmetric { degree: usize, base: Vec<usize> },
    /// Elements of a group, following its stabilizer chain.
    Group(PermutationGroup),
}

impl SearchSpace {
    pub fn symmetric(degree: usize, base: Vec<usize>) -> Self {
        debug_assert_eq!(base.len(), degree);
        SearchSpace::Symmetric { degree, base }
    }

    fn degree(&self) -> usize {
        match self {
            SearchSpace::Symmetric { degree, .. } => *degree,
            SearchSpace::Group(g) => g.degree(),
        }
    }

    fn base(&self) -> &[usize] {
        match self {
            SearchSpace::Symmetric { base, .. } => base,
            SearchSpace::Group(g) => g.base(),
        }
    }
}

struct Searcher<'a, R: Refiner> {
    space: &'a SearchSpace,
    refiner: &'a R,
    base: Vec<usize>,
    map: PartialMap,
}

impl<'a, R: Refiner> Searcher<'a, R> {
    /// Depth-first search below level `level` for one accepted element.
    fn find_one(&mut self, level: usize, prefix: &Permutation) -> Option<Permutation> {
        let n = self.space.degree();
        if level == self.base.len() {
            let g = match self.space {
                SearchSpace::Symmetric { .. } => Permutation::from_images(
                    self.map.img.iter().map(|&i| i as usize).collect(),
                )
                .expect("complete map is a bijection"),
                SearchSpace::Group(_) => prefix.clone(),
            };
            return self.refiner.accept(&g).then_some(g);
        }
        let point = self.base[level];
        match self.space {
            SearchSpace::Symmetric { .. } => {
                for image in 0..n {
                    if self.map.used[image] {
                        continue;
                    }
                    self.map.push(point, image);
                    if self.refiner.consistent(point, &self.map) {
                        if let Some(g) = self.find_one(level + 1, prefix) {
                            self.map.pop();
                            return Some(g);
                        }
                    }
                    self.map.pop();
                }
            }
            SearchSpace::Group(group) => {
                let lvl = &group.stabilizer_chain().levels[level];
                for &gamma in &lvl.orbit {
                    let image = prefix.apply(gamma);
                    self.map.push(point, image);
                    if self.refiner.consistent(point, &self.map) {
                        let next = lvl.transversal[gamma].as_ref().expect("orbit point") * prefix;
                        if let Some(g) = self.find_one(level + 1, &next) {
                            self.map.pop();
                            return Some(g);
                        }
                    }
                    self.map.pop();
                }
            }
        }
        None
    }

    /// Candidate images of `base[level]` when all earlier base points are fixed.
    fn identity_candidates(&self, level: usize) -> Vec<usize> {
        match self.space {
            SearchSpace::Symmetric { .. } => {
                let mut c: Vec<usize> = self.base[level..].to_vec();
                c.sort_unstable();
                c
            }
            SearchSpace::Group(g) => {
                let mut c = g.stabilizer_chain().levels[level].orbit.clone();
                c.sort_unstable();
                c
            }
        }
    }

    fn transversal(&self, level: usize, gamma: usize) -> Permutation {
        match self.space {
            SearchSpace::Symmetric { degree, .. } => Permutation::identity(*degree),
            SearchSpace::Group(g) => g.stabilizer_chain().levels[level].transversal[gamma]
                .clone()
                .expect("orbit point"),
        }
    }

    fn fix_prefix(&mut self, level: usize) {
        self.map.clear();
        for j in 0..level {
            let b = self.base[j];
            self.map.push(b, b);
        }
    }
}

fn orbit_ids(group: &PermutationGroup, level: usize) -> Vec<usize> {
    let n = group.degree();
    let mut ids = vec![0; n];
    for (k, orbit) in point_orbits(n, group.level_generators(level)).iter().enumerate() {
        for &x in orbit {
            ids[x] = k;
        }
    }
    ids
}

/// The subgroup of `space` of elements accepted by `refiner`. Elements of
/// `seed` must already satisfy the property.
pub(crate) fn subgroup_search<R: Refiner>(
    space: &SearchSpace,
    refiner: &R,
    seed: &[Permutation],
) -> PermutationGroup {
    let n = space.degree();
    let base = space.base().to_vec();
    let mut found = PermutationGroup::with_base(n, seed.to_vec(), &base).expect("seed degree");
    let mut s = Searcher {
        space,
        refiner,
        base: base.clone(),
        map: PartialMap::new(n),
    };
    for level in (0..base.len()).rev() {
        s.fix_prefix(level);
        let bp = base[level];
        let mut ids = orbit_ids(&found, level);
        let mut tested: Vec<usize> = Vec::new();
        for gamma in s.identity_candidates(level) {
            if gamma == bp || ids[gamma] == ids[bp] || tested.iter().any(|&t| ids[t] == ids[gamma]) {
                continue;
            }
            tested.push(gamma);
            s.map.push(bp, gamma);
            if refiner.consistent(bp, &s.map) {
                let prefix = s.transversal(level, gamma);
                if let Some(g) = s.find_one(level + 1, &prefix) {
                    let mut gens = found.strong_generators().to_vec();
                    gens.push(g);
                    found = PermutationGroup::with_base(n, gens, &base).expect("same degree");
                    ids = orbit_ids(&found, level);
                }
            }
            s.map.pop();
        }
    }
    found
}

/// Some non-identity element with the property, if one exists.
#[cfg(test)]
pub(crate) fn find_nontrivial<R: Refiner>(space: &SearchSpace, refiner: &R) -> Option<Permutation> {
    let n = space.degree();
    let base = space.base().to_vec();
    let mut s = Searcher {
        space,
        refiner,
        base: base.clone(),
        map: PartialMap::new(n),
    };
    for level in (0..base.len()).rev() {
        s.fix_prefix(level);
        let bp = base[level];
        for gamma in s.identity_candidates(level) {
            if gamma == bp {
                continue;
            }
            s.map.push(bp, gamma);
            if refiner.consistent(bp, &s.map) {
                let prefix = s.transversal(level, gamma);
                if let Some(g) = s.find_one(level + 1, &prefix) {
                    return Some(g);
                }
            }
            s.map.pop();
        }
    }
    None
}

/// Elements mapping a subset onto itself.
pub(crate) struct SetwiseRefiner {
    pub mask: u64,
}

impl Refiner for SetwiseRefiner {
    fn consistent(&self, point: usize, map: &PartialMap) -> bool {
        let image = map.img[point] as usize;
        (self.mask >> point & 1) == (self.mask >> image & 1)
    }

    fn accept(&self, g: &Permutation) -> bool {
        g.apply_mask(self.mask) == self.mask
    }
}

/// Elements preserving a colouring of the power set: `c(x^g) = c(x)` for
/// every subset `x`. Pruning compares, for small decided subsets `y`, a
/// multiset hash of the (colour, size) pairs of the coloured sets containing
/// `y`; equal multisets always give equal hashes, so pruning never loses
/// solutions.
pub(crate) struct ColouringRefiner {
    colour: Vec<u32>,
    background: u32,
    signature: Vec<u64>,
    cap: usize,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl ColouringRefiner {
    /// `colour` is indexed by mask and has length `2^n`. `cap` bounds the size
    /// of the decided subsets compared during pruning.
    pub fn new(n: usize, colour: Vec<u32>, background: u32, cap: usize) -> Self {
        assert_eq!(colour.len(), 1usize << n);
        let cap = cap.max(1).min(n.max(1));
        let mut signature = vec![0u64; colour.len()];
        for (x, &c) in colour.iter().enumerate() {
            if c == background {
                continue;
            }
            let x = x as u64;
            let h = mix((c as u64) << 8 | x.count_ones() as u64);
            let pts = crate::subset::mask_points(x);
            add_submasks(&mut signature, &pts, 0, 0, 0, cap, h);
        }
        ColouringRefiner {
            colour,
            background,
            signature,
            cap,
        }
    }

    /// Points ordered by decreasing number of coloured sets containing them.
    pub fn base_order(&self, n: usize) -> Vec<usize> {
        let mut degree = vec![0u64; n];
        for (x, &c) in self.colour.iter().enumerate() {
            if c != self.background {
                for p in crate::subset::mask_points(x as u64) {
                    degree[p] += 1;
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
        order
    }

    fn check(&self, others: &[u8], img: &[u8], start: usize, size: usize, y: u64, iy: u64) -> bool {
        if self.signature[y as usize] != self.signature[iy as usize] {
            return false;
        }
        if size == self.cap {
            return true;
        }
        for t in start..others.len() {
            let q = others[t] as usize;
            let ny = y | 1 << q;
            let niy = iy | 1 << img[q];
            if !self.check(others, img, t + 1, size + 1, ny, niy) {
                return false;
            }
        }
        true
    }
}

fn add_submasks(sig: &mut [u64], pts: &[usize], start: usize, size: usize, y: u64, cap: usize, h: u64) {
    sig[y as usize] = sig[y as usize].wrapping_add(h);
    if size == cap {
        return;
    }
    for t in start..pts.len() {
        add_submasks(sig, pts, t + 1, size + 1, y | 1 << pts[t], cap, h);
    }
}

impl Refiner for ColouringRefiner {
    fn consistent(&self, point: usize, map: &PartialMap) -> bool {
        let (last, others) = map.decided.split_last().expect("just pushed");
        debug_assert_eq!(*last as usize, point);
        let image = map.img[point] as usize;
        self.check(others, &map.img, 0, 1, 1 << point, 1 << image)
    }

    fn accept(&self, g: &Permutation) -> bool {
        debug_assert!(self.colour.len() == 1 << g.degree());
        self.colour
            .iter()
            .enumerate()
            .all(|(x, &c)| c == self.background || self.colour[g.apply_mask(x as u64) as usize] == c)
    }
}
