//! Imprimitive wreath products `K wr L` on `Δ × Σ` and the relations and
//! regular sets built blockwise from those of `K` and `L`.
//!
//! The point `(δ, i)` is numbered `δ + d * i`, so block `i` is the interval
//! `d*i .. d*(i+1)`.

use std::collections::BTreeSet;

use crate::census::is_regular_set_with;
use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::orbits::setwise_stabilizer_with;
use crate::perm::{Permutation, MAX_DEGREE};
use crate::relation::{basic_lemma_construct, defines_group, Relation};
use crate::structure::{is_primitive, BlockSystem};
use crate::subset::{full_mask, Subset};
use crate::Caps;

#[derive(Clone, Debug)]
pub struct WreathAction {
    /// Degree of `K`, the size of a block.
    pub d: usize,
    /// Degree of `L`, the number of blocks.
    pub s: usize,
    pub k: PermutationGroup,
    pub l: PermutationGroup,
    pub group: PermutationGroup,
}

impl WreathAction {
    pub fn degree(&self) -> usize {
        self.d * self.s
    }

    /// `|K|^s |L|`, or `None` on overflow.
    pub fn expected_order(&self) -> Option<u128> {
        (0..self.s)
            .try_fold(1u128, |acc, _| acc.checked_mul(self.k.order()))
            .and_then(|x| x.checked_mul(self.l.order()))
    }

    /// The blocks `Δ × {i}`.
    pub fn block_system(&self) -> BlockSystem {
        BlockSystem {
            degree: self.degree(),
            blocks: (0..self.s)
                .map(|i| (i * self.d..(i + 1) * self.d).collect())
                .collect(),
        }
    }

    /// Mask of block `i`.
    pub fn block_mask(&self, i: usize) -> u64 {
        full_mask(self.d) << (self.d * i)
    }
}

/// `K wr L` generated by `K` acting on block 0 and `L` permuting blocks.
/// `L` must be transitive for these to generate the whole product.
pub fn wreath_product(k: &PermutationGroup, l: &PermutationGroup) -> Result<WreathAction> {
    let (d, s) = (k.degree(), l.degree());
    if d == 0 || s == 0 {
        return Err(Error::InvalidParameters("wreath factors need positive degree".into()));
    }
    if d * s > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d * s,
            limit: MAX_DEGREE,
        });
    }
    if !l.is_transitive() {
        return Err(Error::Intransitive);
    }
    let n = d * s;
    let mut gens = Vec::new();
    for g in k.nontrivial_generators() {
        let images = (0..n).map(|x| if x < d { g.apply(x) } else { x }).collect();
        gens.push(Permutation::from_images(images)?);
    }
    for h in l.nontrivial_generators() {
        let images = (0..n).map(|x| x % d + d * h.apply(x / d)).collect();
        gens.push(Permutation::from_images(images)?);
    }
    Ok(WreathAction {
        d,
        s,
        k: k.clone(),
        l: l.clone(),
        group: PermutationGroup::new(n, gens)?,
    })
}

fn spread(mask: u64, d: usize, block: usize) -> u64 {
    mask << (d * block)
}

/// Copies of `R_Δ` in every block. When `K` is primitive and `K = G(R_Δ)`
/// with all sets of size between 2 and `d - 2`, the invariance group of the
/// result is `K wr Sym(s)`.
pub fn rela_block_relation(
    k: &PermutationGroup,
    r_delta: &Relation,
    s: usize,
    caps: &Caps,
) -> Result<Relation> {
    let d = k.degree();
    if r_delta.degree() != d {
        return Err(Error::DegreeMismatch {
            left: d,
            right: r_delta.degree(),
        });
    }
    if s == 0 || d * s > MAX_DEGREE {
        return Err(Error::InvalidParameters(format!("cannot place {s} blocks of size {d}")));
    }
    if d < 2 || !is_primitive(k)? {
        return Err(Error::NotPrimitive);
    }
    for x in r_delta.sets() {
        if x.size() < 2 || x.size() + 2 > d {
            return Err(Error::BlockRelationSize {
                size: x.size(),
                max: d.saturating_sub(2),
            });
        }
    }
    if r_delta.is_empty() && s > 1 {
        return Err(Error::EmptyBlockRelation);
    }
    if !defines_group(r_delta, k, caps)? {
        return Err(Error::NotInvarianceGroup);
    }
    let masks = (0..s)
        .flat_map(|i| r_delta.masks().iter().map(move |&m| spread(m, d, i)))
        .collect();
    Relation::from_masks(d * s, masks)
}

/// Unions of the blocks indexed by the sets of `R_Σ`.
pub fn rela_top_relation(r_sigma: &Relation, d: usize) -> Result<Relation> {
    let s = r_sigma.degree();
    if d == 0 || d * s > MAX_DEGREE {
        return Err(Error::InvalidParameters(format!("cannot place {s} blocks of size {d}")));
    }
    let block = full_mask(d);
    let masks = r_sigma
        .masks()
        .iter()
        .map(|&m| {
            (0..s)
                .filter(|i| m >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | spread(block, d, i))
        })
        .collect();
    Relation::from_masks(d * s, masks)
}

/// `R ∪ R''` for `K wr L`, from relations defining `K` and `L`.
pub fn wreath_relation(
    k: &PermutationGroup,
    r_delta: &Relation,
    r_sigma: &Relation,
    caps: &Caps,
) -> Result<Relation> {
    let s = r_sigma.degree();
    let block = rela_block_relation(k, r_delta, s, caps)?;
    block.union(&rela_top_relation(r_sigma, k.degree())?)
}

/// `r_Σ d + (s - 2 r_Σ)(d - r_Δ)`.
pub fn rela4_size(d: usize, s: usize, r_delta: usize, r_sigma: usize) -> usize {
    let (d, s, rd, rs) = (d as i64, s as i64, r_delta as i64, r_sigma as i64);
    (rs * d + (s - 2 * rs) * (d - rd)) as usize
}

/// `x` in the first `r_sigma` blocks and its complement in the others.
pub fn regular_set_rela4(x: &Subset, r_sigma: usize, s: usize) -> Result<Subset> {
    let d = x.degree();
    if 2 * x.size() == d {
        return Err(Error::HalfSizeRegular { size: x.size(), degree: d });
    }
    if r_sigma > s || d * s > MAX_DEGREE {
        return Err(Error::InvalidParameters(format!(
            "need r_sigma <= s and d * s <= {MAX_DEGREE}, got r_sigma = {r_sigma}, s = {s}, d = {d}"
        )));
    }
    let inside = x.mask();
    let outside = !inside & full_mask(d);
    let mask = (0..s).fold(0u64, |acc, i| {
        acc | spread(if i < r_sigma { inside } else { outside }, d, i)
    });
    Subset::new(d * s, mask)
}

/// `x_1 × {1} ∪ ... ∪ x_s × {s}` from regular sets of `K` of distinct sizes.
pub fn regular_set_rela15(k: &PermutationGroup, xs: &[Subset], caps: &Caps) -> Result<Subset> {
    let d = k.degree();
    if xs.is_empty() || d * xs.len() > MAX_DEGREE {
        return Err(Error::InvalidParameters(format!("cannot place {} pieces of size {d}", xs.len())));
    }
    let mut sizes = BTreeSet::new();
    for x in xs {
        if x.degree() != d {
            return Err(Error::DegreeMismatch {
                left: d,
                right: x.degree(),
            });
        }
        if !sizes.insert(x.size()) {
            return Err(Error::SizeCollision { size: x.size() });
        }
        if !is_regular_set_with(k, x, caps)? {
            let stabilizer = setwise_stabilizer_with(k, x, caps)?;
            return Err(Error::NotRegular {
                stabilizer_order: stabilizer.order(),
            });
        }
    }
    let mask = xs
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, x)| acc | spread(x.mask(), d, i));
    Subset::new(d * xs.len(), mask)
}

/// A relation defining `G <= K wr L`: `R ∪ R'' ∪ w^G`, where `R ∪ R''`
/// defines the wreath product and `w` is one of its regular sets whose size
/// is not an arity of `R ∪ R''`.
#[allow(clippy::too_many_arguments)]
pub fn rela5_define_subgroup(
    k: &PermutationGroup,
    l: &PermutationGroup,
    r_delta: &Relation,
    r_sigma: &Relation,
    w: &Subset,
    g: &PermutationGroup,
    caps: &Caps,
) -> Result<Relation> {
    if !defines_group(r_sigma, l, caps)? {
        return Err(Error::Hypothesis("R_Σ does not define L".into()));
    }
    let wreath = wreath_product(k, l)?;
    let base = wreath_relation(k, r_delta, r_sigma, caps)?;
    if g.degree() != wreath.degree() || w.degree() != wreath.degree() {
        return Err(Error::DegreeMismatch {
            left: wreath.degree(),
            right: g.degree().max(w.degree()),
        });
    }
    let d = wreath.d;
    for i in 0..wreath.s {
        let piece = (w.mask() & wreath.block_mask(i)).count_ones() as usize;
        if 2 * piece == d {
            return Err(Error::HalfSizeRegular { size: piece, degree: d });
        }
    }
    basic_lemma_construct(&wreath.group, &base, w, g, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::invariance_group;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn d10() -> PermutationGroup {
        PermutationGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[1, 4], &[2, 3]])]).unwrap()
    }

    fn pentagon() -> Relation {
        Relation::from_masks(5, (0..5).map(|i| 1 << i | 1 << ((i + 1) % 5)).collect()).unwrap()
    }

    #[test]
    fn wreath_orders() {
        let c2 = PermutationGroup::cyclic(2);
        let w = wreath_product(&c2, &c2).unwrap();
        assert_eq!(w.group.order(), 8);
        assert_eq!(w.expected_order(), Some(8));
        assert!(w.block_system().is_block_system_of(&w.group));
        let w = wreath_product(&PermutationGroup::cyclic(3), &c2).unwrap();
        assert_eq!(w.group.order(), 18);
        let w = wreath_product(&PermutationGroup::symmetric(2), &PermutationGroup::symmetric(3)).unwrap();
        assert_eq!(w.group.order(), 48);
        assert!(matches!(
            wreath_product(&c2, &PermutationGroup::trivial(2)),
            Err(Error::Intransitive)
        ));
    }

    #[test]
    fn block_relation_for_d10() {
        let r = rela_block_relation(&d10(), &pentagon(), 2, &Caps::default()).unwrap();
        assert_eq!(r.len(), 10);
        let single = rela_block_relation(&d10(), &pentagon(), 1, &Caps::default()).unwrap();
        assert_eq!(single, pentagon());
        let c3 = PermutationGroup::cyclic(3);
        let edge = Relation::from_masks(3, vec![0b011]).unwrap();
        assert!(matches!(
            rela_block_relation(&c3, &edge, 2, &Caps::default()),
            Err(Error::BlockRelationSize { .. })
        ));
        assert!(matches!(
            rela_block_relation(&d10(), &Relation::empty(5), 2, &Caps::default()),
            Err(Error::EmptyBlockRelation)
        ));
    }

    #[test]
    fn top_relation_shapes() {
        let r_sigma = Relation::from_masks(3, vec![0b011]).unwrap();
        let r = rela_top_relation(&r_sigma, 2).unwrap();
        assert_eq!(r.masks(), &[0b1111]);
        assert_eq!(r.max_size(), 2 * r_sigma.max_size());
        assert!(rela_top_relation(&Relation::empty(3), 2).unwrap().is_empty());
    }

    #[test]
    fn s2_top_defines_wreath_with_s2() {
        // With L = Sym(2) the empty relation defines L.
        let r = wreath_relation(&d10(), &pentagon(), &Relation::empty(2), &Caps::default()).unwrap();
        let w = wreath_product(&d10(), &PermutationGroup::symmetric(2)).unwrap();
        assert!(defines_group(&r, &w.group, &Caps::default()).unwrap());
    }

    #[test]
    fn rela4_size_matches_construction() {
        let x = Subset::from_points(3, &[0]).unwrap();
        let w = regular_set_rela4(&x, 1, 2).unwrap();
        assert_eq!(w.size(), rela4_size(3, 2, 1, 1));
        assert_eq!(w.size(), 3);
        let c3wrc2 = wreath_product(&PermutationGroup::cyclic(3), &PermutationGroup::cyclic(2)).unwrap();
        assert!(is_regular_set_with(&c3wrc2.group, &w, &Caps::default()).unwrap());
        for (d, s, rd) in [(5, 3, 2), (7, 2, 3), (4, 4, 1)] {
            for rs in 0..=s {
                let x = Subset::new(d, full_mask(rd)).unwrap();
                let w = regular_set_rela4(&x, rs, s).unwrap();
                assert_eq!(w.size(), rela4_size(d, s, rd, rs));
            }
        }
        let half = Subset::from_points(4, &[0, 1]).unwrap();
        assert!(matches!(regular_set_rela4(&half, 1, 2), Err(Error::HalfSizeRegular { .. })));
    }

    #[test]
    fn rela15_pieces() {
        let c5 = PermutationGroup::cyclic(5);
        let xs = [Subset::from_points(5, &[0]).unwrap(), Subset::from_points(5, &[0, 1]).unwrap()];
        let w = regular_set_rela15(&c5, &xs, &Caps::default()).unwrap();
        assert_eq!(w.size(), 3);
        let wr = wreath_product(&c5, &PermutationGroup::cyclic(2)).unwrap();
        assert!(is_regular_set_with(&wr.group, &w, &Caps::default()).unwrap());
        let same = [xs[0].clone(), Subset::from_points(5, &[3]).unwrap()];
        assert!(matches!(
            regular_set_rela15(&c5, &same, &Caps::default()),
            Err(Error::SizeCollision { size: 1 })
        ));
        let d10_piece = [Subset::from_points(5, &[0]).unwrap()];
        assert!(matches!(
            regular_set_rela15(&d10(), &d10_piece, &Caps::default()),
            Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn rela5_needs_a_regular_set() {
        let s2 = PermutationGroup::symmetric(2);
        let w = Subset::from_points(10, &[0]).unwrap();
        let wr = wreath_product(&d10(), &s2).unwrap();
        let err = rela5_define_subgroup(&d10(), &s2, &pentagon(), &Relation::empty(2), &w, &wr.group, &Caps::default())
            .unwrap_err();
        assert!(matches!(err, Error::NotRegular { .. }), "{err:?}");
    }

    #[test]
    fn block_relation_small_oracle() {
        // Sym(4) is defined by all 2-subsets of a 4-set; two copies give S4 wr S2.
        let s4 = PermutationGroup::symmetric(4);
        let layer = Relation::from_masks(4, crate::subset::k_subsets(4, 2).collect()).unwrap();
        let r = rela_block_relation(&s4, &layer, 2, &Caps::default()).unwrap();
        let g = invariance_group(&r).unwrap();
        assert_eq!(g.order(), 24 * 24 * 2);
    }
}
