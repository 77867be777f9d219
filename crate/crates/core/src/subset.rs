//! Subsets of `{0..n-1}` as bit masks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset {
    degree: u8,
    mask: u64,
}

impl Subset {
    pub fn new(degree: usize, mask: u64) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                limit: MAX_DEGREE,
            });
        }
        if mask & !full_mask(degree) != 0 {
            let point = 63 - mask.leading_zeros() as usize;
            return Err(Error::PointOutOfRange { point, degree });
        }
        Ok(Subset {
            degree: degree as u8,
            mask,
        })
    }

    pub fn from_points(degree: usize, points: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &p in points {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            mask |= 1 << p;
        }
        Subset::new(degree, mask)
    }

    pub fn empty(degree: usize) -> Self {
        Subset::new(degree, 0).expect("valid degree")
    }

    pub fn full(degree: usize) -> Self {
        Subset::new(degree, full_mask(degree)).expect("valid degree")
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, point: usize) -> bool {
        point < self.degree() && self.mask >> point & 1 == 1
    }

    pub fn complement(&self) -> Subset {
        Subset {
            degree: self.degree,
            mask: !self.mask & full_mask(self.degree()),
        }
    }

    pub fn points(&self) -> Vec<usize> {
        mask_points(self.mask)
    }

    /// Image `x^g`.
    pub fn image(&self, g: &Permutation) -> Result<Subset> {
        if g.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        Ok(Subset {
            degree: self.degree,
            mask: g.apply_mask(self.mask),
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.points(), self.degree)
    }
}

#[inline]
pub fn full_mask(degree: usize) -> u64 {
    if degree >= 64 {
        u64::MAX
    } else {
        (1u64 << degree) - 1
    }
}

pub fn mask_points(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Pascal table `table[n][k]` for `n <= 64`, as `u64`.
#[derive(Clone, Debug)]
pub(crate) struct BinomialTable {
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(n: usize) -> Self {
        let mut rows = vec![vec![0u64; n + 2]; n + 1];
        for i in 0..=n {
            rows[i][0] = 1;
            for k in 1..=i {
                rows[i][k] = rows[i - 1][k - 1].saturating_add(if k < i { rows[i - 1][k] } else { 0 });
            }
        }
        BinomialTable { rows }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }

    /// Colex rank of a mask among masks of the same popcount.
    #[inline]
    pub fn rank(&self, mut mask: u64) -> usize {
        let mut r = 0u64;
        let mut j = 1;
        while mask != 0 {
            let p = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            r += self.get(p, j);
            j += 1;
        }
        r as usize
    }
}

/// All `k`-subsets of `{0..n-1}` in increasing mask order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = full_mask(n);
    let start: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(full_mask(k))
    };
    std::iter::successors(start, move |&x| {
        if x == 0 {
            return None;
        }
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 {
            return None;
        }
        let next = (((r ^ x) >> 2) / c) | r;
        if next & !limit != 0 {
            None
        } else {
            Some(next)
        }
    })
}
