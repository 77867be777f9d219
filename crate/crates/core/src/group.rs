//! Finitely generated permutation groups backed by a stabilizer chain.
//!
//! The chain is built with the deterministic Schreier–Sims algorithm. Base
//! points are taken from an optional prescribed prefix and are otherwise
//! appended as the least point moved by a residue, so the result depends only
//! on the generator list.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

#[derive(Clone)]
pub(crate) struct Level {
    pub base_point: usize,
    /// Indices into the chain's strong generating set.
    pub gens: Vec<usize>,
    pub orbit: Vec<usize>,
    /// `transversal[g]` maps the base point to `g`.
    pub transversal: Vec<Option<Permutation>>,
    pub inverse: Vec<Option<Permutation>>,
}

#[derive(Clone)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub base: Vec<usize>,
    pub strong: Vec<Permutation>,
    pub levels: Vec<Level>,
}

impl StabChain {
    fn build(degree: usize, gens: &[Permutation], base_prefix: &[usize]) -> StabChain {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base = base_prefix.to_vec();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let mut chain = StabChain {
            degree,
            base,
            strong,
            levels: Vec::new(),
        };
        chain.levels = (0..chain.base.len()).map(|l| chain.make_level(l)).collect();

        let mut i = chain.base.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match chain.unsifted_schreier_generator(lvl) {
                Some((residue, j)) => {
                    if j == chain.base.len() {
                        chain.base.push(residue.first_moved().expect("non-identity residue"));
                    }
                    chain.strong.push(residue);
                    let idx = chain.strong.len() - 1;
                    for l in 0..=lvl {
                        chain.levels[l].gens.push(idx);
                    }
                    for l in (lvl + 1)..=j {
                        let level = chain.make_level(l);
                        if l < chain.levels.len() {
                            chain.levels[l] = level;
                        } else {
                            chain.levels.push(level);
                        }
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    fn make_level(&self, l: usize) -> Level {
        let n = self.degree;
        let fixed = &self.base[..l];
        let gens: Vec<usize> = (0..self.strong.len())
            .filter(|&s| fixed.iter().all(|&b| self.strong[s].apply(b) == b))
            .collect();
        let bp = self.base[l];
        let mut transversal: Vec<Option<Permutation>> = vec![None; n];
        transversal[bp] = Some(Permutation::identity(n));
        let mut orbit = vec![bp];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for &s in &gens {
                let g = &self.strong[s];
                let y = g.apply(x);
                if transversal[y].is_none() {
                    let t = transversal[x].as_ref().expect("orbit point") * g;
                    transversal[y] = Some(t);
                    orbit.push(y);
                }
            }
        }
        let inverse = transversal
            .iter()
            .map(|t| t.as_ref().map(Permutation::inverse))
            .collect();
        Level {
            base_point: bp,
            gens,
            orbit,
            transversal,
            inverse,
        }
    }

    /// Finds a Schreier generator of level `l` that does not sift through the
    /// levels below it. Returns the residue and the level where sifting stopped.
    fn unsifted_schreier_generator(&self, l: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[l];
        for &x in &level.orbit {
            let ux = level.transversal[x].as_ref().expect("orbit point");
            for &s in &level.gens {
                let g = &self.strong[s];
                let y = g.apply(x);
                let h = &(ux * g) * level.inverse[y].as_ref().expect("orbit point");
                if h.is_identity() {
                    continue;
                }
                let (res, j) = self.sift_from(h, l + 1);
                if !res.is_identity() {
                    return Some((res, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `from..`. Returns the residue and the index of
    /// the first level whose orbit does not contain the image of its base
    /// point (or `levels.len()` if every level was passed).
    pub fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let y = g.apply(level.base_point);
            match &level.inverse[y] {
                Some(inv) => g = &g * inv,
                None => return (g, l),
            }
        }
        let l = self.levels.len();
        (g, l)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Element with mixed-radix coordinates `index` (level 0 least significant).
    pub fn element(&self, mut index: u128) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let len = level.orbit.len() as u128;
            let point = level.orbit[(index % len) as usize];
            index /= len;
            g = level.transversal[point].as_ref().expect("orbit point") * &g;
        }
        g
    }
}

/// A permutation group given by generators, with its stabilizer chain.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    pub(crate) chain: StabChain,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_base(degree, generators, &[])
    }

    /// Builds the chain with `base_prefix` as the first base points. Every
    /// prefix point gets a level even when its orbit is trivial.
    pub fn with_base(
        degree: usize,
        generators: Vec<Permutation>,
        base_prefix: &[usize],
    ) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                limit: MAX_DEGREE,
            });
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        if let Some(&p) = base_prefix.iter().find(|&&p| p >= degree) {
            return Err(Error::PointOutOfRange { point: p, degree });
        }
        let chain = StabChain::build(degree, &generators, base_prefix);
        Ok(PermutationGroup {
            degree,
            generators,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("trivial group")
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        if degree >= 3 {
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        Self::new(degree, gens).expect("symmetric group")
    }

    pub fn alternating(degree: usize) -> Self {
        let gens = (2..degree)
            .map(|i| Permutation::from_cycles(degree, &[vec![0, 1, i]]).unwrap())
            .collect();
        Self::new(degree, gens).expect("alternating group")
    }

    pub fn cyclic(degree: usize) -> Self {
        let gens = if degree >= 2 {
            vec![Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap()]
        } else {
            Vec::new()
        };
        Self::new(degree, gens).expect("cyclic group")
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Generators with identities and duplicates removed.
    pub fn nontrivial_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for g in &self.generators {
            if !g.is_identity() && !out.contains(g) {
                out.push(g.clone());
            }
        }
        out
    }

    pub fn base(&self) -> &[usize] {
        &self.chain.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.chain.strong
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.has(p))
    }

    /// Membership for a permutation known to have the right degree.
    pub(crate) fn has(&self, p: &Permutation) -> bool {
        let (res, l) = self.chain.sift_from(p.clone(), 0);
        l == self.chain.levels.len() && res.is_identity()
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn element(&self, index: u128) -> Permutation {
        self.chain.element(index)
    }

    /// All elements, each exactly once.
    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.order()).map(move |i| self.chain.element(i))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let idx = rng.gen_range(0..self.order());
        self.chain.element(idx)
    }

    /// Orbit of a point, in discovery order.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit
    }

    /// Orbits on points, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        point_orbits(self.degree, &self.generators)
    }

    /// Transitive on points. Degrees 0 and 1 count as transitive.
    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup(&self, generators: Vec<Permutation>) -> Result<PermutationGroup> {
        let h = PermutationGroup::new(self.degree, generators)?;
        if !h.is_subgroup_of(self) {
            return Err(Error::NotSubgroup("generator outside the group".into()));
        }
        Ok(h)
    }

    /// Group generated by `self` and extra elements.
    pub fn extended(&self, extra: &[Permutation]) -> Result<PermutationGroup> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        PermutationGroup::new(self.degree, gens)
    }

    pub(crate) fn stabilizer_chain(&self) -> &StabChain {
        &self.chain
    }

    /// Pointwise stabilizer of the first `depth` base points, as strong generators.
    pub(crate) fn level_generators(&self, depth: usize) -> Vec<&Permutation> {
        if depth < self.chain.levels.len() {
            self.chain.levels[depth]
                .gens
                .iter()
                .map(|&s| &self.chain.strong[s])
                .collect()
        } else {
            Vec::new()
        }
    }
}

/// Orbits of a generated group on points, each sorted, ordered by least element.
pub(crate) fn point_orbits<'a, I>(degree: usize, gens: I) -> Vec<Vec<usize>>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for x in 0..degree {
            let a = find(&mut parent, x);
            let b = find(&mut parent, g.apply(x));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; degree];
    for x in 0..degree {
        let r = find(&mut parent, x);
        if index[r] == usize::MAX {
            index[r] = out.len();
            out.push(Vec::new());
        }
        out[index[r]].push(x);
    }
    out
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Closure of the generators under multiplication.
    fn brute_force_elements(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let mut set = HashSet::new();
        let mut frontier = vec![Permutation::identity(n)];
        set.insert(Permutation::identity(n));
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = &x * g;
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn small_orders() {
        let c5 = PermutationGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(c5.order(), 5);
        let f20 = PermutationGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[1, 2, 4, 3]])])
            .unwrap();
        assert_eq!(f20.order(), 20);
        let v = PermutationGroup::new(4, vec![p(4, &[&[0, 1], &[2, 3]]), p(4, &[&[0, 2], &[1, 3]])])
            .unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(PermutationGroup::symmetric(7).order(), 5040);
        assert_eq!(PermutationGroup::alternating(7).order(), 2520);
        assert_eq!(PermutationGroup::symmetric(1).order(), 1);
        assert_eq!(PermutationGroup::trivial(0).order(), 1);
    }

    #[test]
    fn membership() {
        let c3 = PermutationGroup::cyclic(3);
        assert!(c3.contains(&p(3, &[&[0, 2, 1]])).unwrap());
        assert!(!c3.contains(&p(3, &[&[0, 1]])).unwrap());
        let f20 = PermutationGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[1, 2, 4, 3]])])
            .unwrap();
        // Oracle: explicit enumeration of all 20 elements.
        let all = brute_force_elements(5, f20.generators());
        assert_eq!(all.len(), 20);
        let t = p(5, &[&[1, 4], &[2, 3]]);
        assert_eq!(all.contains(&t), f20.contains(&t).unwrap());
        assert!(f20.contains(&t).unwrap());
        let u = p(5, &[&[0, 1], &[2, 3]]);
        assert_eq!(all.contains(&u), f20.contains(&u).unwrap());
        assert!(!f20.contains(&u).unwrap());
        assert!(matches!(
            c3.contains(&Permutation::identity(4)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let gens = vec![p(6, &[&[0, 1, 2]]), p(6, &[&[0, 3], &[1, 4], &[2, 5]])];
        let g = PermutationGroup::new(6, gens.clone()).unwrap();
        let brute = brute_force_elements(6, &gens);
        let listed: HashSet<Permutation> = g.elements().collect();
        assert_eq!(listed.len() as u128, g.order());
        assert_eq!(listed, brute);
    }

    #[test]
    fn prescribed_base_keeps_trivial_levels() {
        let g = PermutationGroup::with_base(4, vec![p(4, &[&[2, 3]])], &[0, 1, 2, 3]).unwrap();
        assert_eq!(g.base(), &[0, 1, 2, 3]);
        assert_eq!(g.order(), 2);
    }
}
