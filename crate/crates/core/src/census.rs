//! Regular sets: subsets whose setwise stabilizer is trivial.
//!
//! A permutation with `c` cycles fixes exactly the `2^c` unions of its
//! cycles. The census marks those sets for every element of prime order
//! (any element fixing a set has a power of prime order fixing it too) and
//! reads the regular sets off the unmarked bits.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::orbits::setwise_stabilizer_with;
use crate::perm::Permutation;
use crate::subset::{full_mask, Subset};
use crate::Caps;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSetCensus {
    pub degree: usize,
    /// Number of regular `k`-subsets for every `k` in `0..=n`.
    pub regular_count_by_size: BTreeMap<usize, u64>,
    pub sizes_with_regular: Vec<usize>,
    pub non_regular_total: u64,
}

impl RegularSetCensus {
    pub fn regular_total(&self) -> u64 {
        self.regular_count_by_size.values().sum()
    }

    pub fn has_regular_set(&self) -> bool {
        !self.sizes_with_regular.is_empty()
    }

    fn from_bitmap(degree: usize, marked: &[u64]) -> Self {
        let mut counts: BTreeMap<usize, u64> = (0..=degree).map(|k| (k, 0)).collect();
        let mut non_regular = 0u64;
        for mask in 0..=full_mask(degree) {
            if marked[(mask >> 6) as usize] >> (mask & 63) & 1 == 1 {
                non_regular += 1;
            } else {
                *counts.get_mut(&(mask.count_ones() as usize)).expect("size in range") += 1;
            }
        }
        let sizes_with_regular = counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
        RegularSetCensus {
            degree,
            regular_count_by_size: counts,
            sizes_with_regular,
            non_regular_total: non_regular,
        }
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)
}

fn index_ranges(total: u128, parts: usize) -> Vec<(u128, u128)> {
    let parts = (parts.max(1) as u128).min(total.max(1));
    let step = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * step, ((i + 1) * step).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// `sum over g != 1 of 2^c(g)`, the work measure of the census.
pub fn census_work(group: &PermutationGroup) -> u128 {
    let ranges = index_ranges(group.order(), rayon::current_num_threads() * 4);
    ranges
        .par_iter()
        .map(|&(a, b)| {
            (a..b)
                .map(|i| group.element(i))
                .filter(|g| !g.is_identity())
                .map(|g| 1u128 << g.cycle_count())
                .sum::<u128>()
        })
        .sum()
}

fn mark_fixed_sets(g: &Permutation, bitmap: &mut [u64]) {
    let cycles = g.cycle_masks();
    let mut current = 0u64;
    bitmap[0] |= 1;
    for i in 1u64..(1u64 << cycles.len()) {
        current ^= cycles[i.trailing_zeros() as usize];
        bitmap[(current >> 6) as usize] |= 1 << (current & 63);
    }
}

/// Exact count of regular sets of every size.
pub fn regular_set_census(group: &PermutationGroup) -> Result<RegularSetCensus> {
    regular_set_census_with(group, &Caps::default())
}

pub fn regular_set_census_with(group: &PermutationGroup, caps: &Caps) -> Result<RegularSetCensus> {
    let n = group.degree();
    if n > caps.census_max_degree {
        return Err(Error::DegreeTooLarge {
            degree: n,
            limit: caps.census_max_degree,
        });
    }
    let order = group.order();
    if order.saturating_sub(1).saturating_mul(2) > caps.census_work_cap {
        return Err(Error::CapExceeded {
            what: "census work".into(),
            needed: order.saturating_sub(1).saturating_mul(2),
            cap: caps.census_work_cap,
        });
    }
    let work = census_work(group);
    if work > caps.census_work_cap {
        return Err(Error::CapExceeded {
            what: "census work".into(),
            needed: work,
            cap: caps.census_work_cap,
        });
    }
    let words = ((1u128 << n) as usize).div_ceil(64);
    // Private bitmaps cost 2^n bits each, so large degrees use fewer workers.
    let budget_words = (1usize << 27) / words.max(1);
    let workers = rayon::current_num_threads().min(budget_words.max(1));
    let ranges = index_ranges(order, workers);
    let marked = ranges
        .par_iter()
        .map(|&(a, b)| {
            let mut bitmap = vec![0u64; words];
            for i in a..b {
                let g = group.element(i);
                if is_prime(g.order()) {
                    mark_fixed_sets(&g, &mut bitmap);
                }
            }
            bitmap
        })
        .reduce(
            || vec![0u64; words],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a |= b;
                }
                x
            },
        );
    Ok(RegularSetCensus::from_bitmap(n, &marked))
}

/// Census computed by testing every subset against every non-identity element.
pub fn naive_census(group: &PermutationGroup) -> RegularSetCensus {
    let n = group.degree();
    let words = ((1u128 << n) as usize).div_ceil(64);
    let mut marked = vec![0u64; words];
    let elements: Vec<Permutation> = group.elements().filter(|g| !g.is_identity()).collect();
    for mask in 0..=full_mask(n) {
        if elements.iter().any(|g| g.apply_mask(mask) == mask) {
            marked[(mask >> 6) as usize] |= 1 << (mask & 63);
        }
    }
    RegularSetCensus::from_bitmap(n, &marked)
}

/// Regular sets exist in at least two distinct sizes. A complementary pair
/// `k != n - k` counts as two sizes.
pub fn has_regular_set_two_sizes(group: &PermutationGroup) -> Result<bool> {
    Ok(regular_set_census(group)?.sizes_with_regular.len() >= 2)
}

pub fn is_regular_set(group: &PermutationGroup, x: &Subset) -> Result<bool> {
    is_regular_set_with(group, x, &Caps::default())
}

pub fn is_regular_set_with(group: &PermutationGroup, x: &Subset, caps: &Caps) -> Result<bool> {
    Ok(setwise_stabilizer_with(group, x, caps)?.is_trivial())
}

/// Looks for a regular set among random subsets; `None` proves nothing.
pub fn has_regular_set_sampling(
    group: &PermutationGroup,
    samples: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Option<Subset>> {
    let n = group.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mask = rng.gen::<u64>() & full_mask(n);
        let x = Subset::new(n, mask)?;
        if is_regular_set_with(group, &x, caps)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn d10_has_no_regular_set() {
        let d10 = PermutationGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[1, 4], &[2, 3]])])
            .unwrap();
        let c = regular_set_census(&d10).unwrap();
        assert!(c.sizes_with_regular.is_empty());
        assert_eq!(c, naive_census(&d10));
    }

    #[test]
    fn c5_counts() {
        let c = regular_set_census(&PermutationGroup::cyclic(5)).unwrap();
        let counts: Vec<u64> = (1..=4).map(|k| c.regular_count_by_size[&k]).collect();
        assert_eq!(counts, vec![5, 10, 10, 5]);
        assert_eq!(c.sizes_with_regular, vec![1, 2, 3, 4]);
        assert!(has_regular_set_two_sizes(&PermutationGroup::cyclic(5)).unwrap());
        assert!(!has_regular_set_two_sizes(&PermutationGroup::symmetric(3)).unwrap());
    }

    #[test]
    fn trivial_group_everything_regular() {
        let c = regular_set_census(&PermutationGroup::trivial(4)).unwrap();
        assert_eq!(c.regular_total(), 16);
        assert_eq!(c.non_regular_total, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps {
            census_work_cap: 100,
            ..Caps::default()
        };
        assert!(matches!(
            regular_set_census_with(&PermutationGroup::symmetric(6), &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn sampling_finds_regular_set_of_c7() {
        let g = PermutationGroup::cyclic(7);
        let found = has_regular_set_sampling(&g, 200, 7, &Caps::default()).unwrap().unwrap();
        assert!(is_regular_set(&g, &found).unwrap());
    }
}
