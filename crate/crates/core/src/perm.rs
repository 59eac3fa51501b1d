//! Permutations of `[m]` in one-line notation, lexicographic ranking and
//! random sampling.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::count::factorial;
use crate::error::{Error, Result};
use crate::matching::Vertex;

/// `images[k - 1]` is the image of position `k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<Vertex>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self { images: (1..=m as Vertex).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        if m == 0 || m > Vertex::MAX as usize {
            return Err(Error::InvalidPermutation(format!("length {m} unsupported")));
        }
        let mut seen = vec![false; m + 1];
        for &x in &images {
            if x == 0 || x > m || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 1..={m}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images: images.into_iter().map(|x| x as Vertex).collect() })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[Vertex] {
        &self.images
    }

    /// Image of the 1-based position `pos`.
    #[inline]
    pub fn at(&self, pos: usize) -> Vertex {
        self.images[pos - 1]
    }

    /// `inv[v]` is the position holding vertex `v`; `inv[0]` is unused.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len() + 1];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i + 1;
        }
        inv
    }

    /// A copy with the contents of 1-based positions `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.images.swap(a - 1, b - 1);
        out
    }

    /// Advances to the lexicographic successor. Returns false (leaving the
    /// permutation unchanged) at the last one.
    pub fn advance(&mut self) -> bool {
        let a = &mut self.images;
        let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
            return false;
        };
        let pivot = i - 1;
        let j = (i..a.len()).rev().find(|&j| a[j] > a[pivot]).unwrap();
        a.swap(pivot, j);
        a[i..].reverse();
        true
    }

    /// Lexicographic rank in `0..m!`.
    pub fn rank(&self) -> u64 {
        let m = self.len();
        let mut rank = 0u64;
        for i in 0..m {
            let smaller_later = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank = rank * (m - i) as u64 + smaller_later as u64;
        }
        rank
    }

    pub fn unrank(m: usize, mut rank: u64) -> Result<Self> {
        let total = factorial(m as u64)?;
        if rank as u128 >= total {
            return Err(Error::IndexOutOfRange { index: rank as usize, lo: 0, hi: total as usize - 1 });
        }
        let mut pool: Vec<Vertex> = (1..=m as Vertex).collect();
        let mut digits = vec![0usize; m];
        for (i, d) in digits.iter_mut().enumerate().rev() {
            let base = (m - i) as u64;
            *d = (rank % base) as usize;
            rank /= base;
        }
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Self { images })
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(m);
        p.images.shuffle(rng);
        p
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Parses a comma-separated image list such as `2,1,3,4`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(images)
    }
}

/// Every permutation of `[m]` in lexicographic order.
pub fn all_permutations(m: usize) -> impl Iterator<Item = Permutation> {
    let mut next = Some(Permutation::identity(m));
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if succ.advance() {
            next = Some(succ);
        }
        Some(cur)
    })
}
