//! Permutations of `0..degree` stored as image arrays.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u16]>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u16).collect())
    }

    /// Build from an image array, checking that it is a bijection of `0..len`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d > u16::MAX as usize {
            return Err(Error::InvalidInput(format!("permutation degree {d} too large")));
        }
        let mut seen = vec![false; d];
        for &x in images {
            if x >= d || seen[x] {
                return Err(Error::InvalidInput(format!(
                    "image array {images:?} is not a permutation of 0..{d}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(images.iter().map(|&x| x as u16).collect()))
    }

    /// Build from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p: Vec<usize> = (0..degree).collect();
        for c in cycles {
            for i in 0..c.len() {
                p[c[i]] = c[(i + 1) % c.len()];
            }
        }
        Self::from_images(&p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut r = vec![0u16; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u16;
        }
        Permutation(r.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    /// Sign as +1 / -1.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.degree()];
        let mut transpositions = 0usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let q = Permutation::from_cycles(4, &[&[2, 3]]).unwrap();
        // 0 -> 1 -> 1, 2 -> 0 -> 0, 1 -> 2 -> 3
        let pq = p.then(&q);
        assert_eq!(pq.apply(0), 1);
        assert_eq!(pq.apply(1), 3);
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_err());
        assert!(Permutation::from_images(&[0, 3, 1]).is_err());
    }

    #[test]
    fn sign_of_transposition() {
        let t = Permutation::from_cycles(5, &[&[1, 4]]).unwrap();
        assert_eq!(t.sign(), -1);
        let c = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        assert_eq!(c.sign(), 1);
    }
}
