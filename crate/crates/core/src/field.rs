//! Small finite fields and the permutation actions built from them.

use crate::perm::Permutation;

/// `GF(p^e)` with elements numbered by their base-`p` coefficient digits.
pub(crate) struct Field {
    pub q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

/// Lowest-degree-first coefficients of a monic irreducible polynomial.
fn modulus(p: usize, e: usize) -> Vec<usize> {
    match (p, e) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        _ => panic!("no modulus stored for GF({p}^{e})"),
    }
}

impl Field {
    pub fn new(p: usize, e: usize) -> Field {
        let q = p.pow(e as u32);
        let digits = |mut x: usize| -> Vec<usize> {
            (0..e)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let number = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
        let m = modulus(p, e);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = number(&sum);
                let mut prod = vec![0; 2 * e];
                for i in 0..e {
                    for j in 0..e {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for deg in (e..2 * e).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (k, &mk) in m.iter().enumerate() {
                            let idx = deg - e + k;
                            prod[idx] = (prod[idx] + p * p - c * mk % p) % p;
                        }
                    }
                }
                mul[a * q + b] = number(&prod[..e]);
            }
        }
        Field { q, add, mul }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn inv(&self, a: usize) -> usize {
        (1..self.q).find(|&b| self.mul(a, b) == 1).expect("non-zero element")
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Least generator of the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        (2..self.q)
            .find(|&a| (1..self.q - 1).all(|k| self.pow(a, k) != 1))
            .unwrap_or(1)
    }

    /// Permutation of the field given by a map on elements.
    pub fn affine_map(&self, f: impl Fn(usize) -> usize) -> Permutation {
        Permutation::from_images((0..self.q).map(f).collect()).expect("bijective field map")
    }

    /// `x -> (a x + b) / (c x + d)` on the projective line, with the point at
    /// infinity numbered `q`.
    pub fn mobius(&self, a: usize, b: usize, c: usize, d: usize) -> Permutation {
        let inf = self.q;
        let images = (0..=self.q)
            .map(|x| {
                if x == inf {
                    if c == 0 {
                        inf
                    } else {
                        self.mul(a, self.inv(c))
                    }
                } else {
                    let num = self.add(self.mul(a, x), b);
                    let den = self.add(self.mul(c, x), d);
                    if den == 0 {
                        inf
                    } else {
                        self.mul(num, self.inv(den))
                    }
                }
            })
            .collect();
        Permutation::from_images(images).expect("invertible Möbius map")
    }

    /// `x -> x^k` extended to the projective line, fixing infinity.
    pub fn power_map_projective(&self, k: usize) -> Permutation {
        let images = (0..=self.q)
            .map(|x| if x == self.q { x } else { self.pow(x, k) })
            .collect();
        Permutation::from_images(images).expect("field automorphism")
    }
}

/// Vectors of `GF(p)^dim` numbered by their coordinates in base `p`.
pub(crate) fn vector_index(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub(crate) fn index_vector(mut x: usize, p: usize, dim: usize) -> Vec<usize> {
    (0..dim)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Row vector times matrix over `GF(p)`.
pub(crate) fn mat_apply(v: &[usize], m: &[Vec<usize>], p: usize) -> Vec<usize> {
    (0..m[0].len())
        .map(|j| v.iter().enumerate().map(|(i, &vi)| vi * m[i][j]).sum::<usize>() % p)
        .collect()
}

/// Affine map `v -> v M + t` on `GF(p)^dim`.
pub(crate) fn affine_perm(m: &[Vec<usize>], t: &[usize], p: usize) -> Permutation {
    let dim = m.len();
    let q = p.pow(dim as u32);
    let images = (0..q)
        .map(|x| {
            let v = mat_apply(&index_vector(x, p, dim), m, p);
            let w: Vec<usize> = v.iter().zip(t).map(|(a, b)| (a + b) % p).collect();
            vector_index(&w, p)
        })
        .collect();
    Permutation::from_images(images).expect("invertible affine map")
}

/// Linear map on the points of the projective space `PG(dim-1, p)`, whose
/// points are the non-zero vectors with first non-zero coordinate 1, in
/// increasing index order.
pub(crate) fn projective_perm(m: &[Vec<usize>], p: usize) -> Permutation {
    let dim = m.len();
    let points = projective_points(dim, p);
    let normalize = |v: Vec<usize>| -> Vec<usize> {
        let lead = *v.iter().find(|&&x| x != 0).expect("non-zero vector");
        let inv = (1..p).find(|&b| lead * b % p == 1).expect("unit");
        v.into_iter().map(|x| x * inv % p).collect()
    };
    let images = points
        .iter()
        .map(|v| {
            let w = normalize(mat_apply(v, m, p));
            points.iter().position(|u| *u == w).expect("projective point")
        })
        .collect();
    Permutation::from_images(images).expect("invertible projective map")
}

pub(crate) fn projective_points(dim: usize, p: usize) -> Vec<Vec<usize>> {
    let q = p.pow(dim as u32);
    (1..q)
        .map(|x| index_vector(x, p, dim))
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2, 3), (3, 2), (7, 1), (2, 2)] {
            let f = Field::new(p, e);
            for a in 0..f.q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..f.q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..f.q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            let w = f.primitive_element();
            assert_eq!(f.pow(w, f.q - 1), 1);
        }
    }

    #[test]
    fn projective_plane_of_order_two() {
        assert_eq!(projective_points(3, 2).len(), 7);
        assert_eq!(projective_points(3, 3).len(), 13);
    }
}
