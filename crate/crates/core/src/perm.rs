//! Dense permutations of `0..n`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("image list of length {len} is not a bijection of 0..{len}")]
pub struct NotBijection {
    pub len: usize,
}

/// A permutation stored by its image list: `self.apply(i) == images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, NotBijection> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(NotBijection { len: n });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds the permutation whose nontrivial cycles are `cycles`; points not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self, NotBijection> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x as usize >= n || next as usize >= n || touched[x as usize] {
                    return Err(NotBijection { len: n });
                }
                touched[x as usize] = true;
                images[x as usize] = next;
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.len());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Cycle decomposition, each cycle starting at its smallest point, cycles
    /// ordered by that point. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            out.push(cycle);
        }
        out
    }

    /// The cycle through `start`, beginning at `start`.
    pub fn cycle_of(&self, start: u32) -> Vec<u32> {
        let mut cycle = vec![start];
        let mut x = self.apply(start);
        while x != start {
            cycle.push(x);
            x = self.apply(x);
        }
        cycle
    }

    /// Order as a group element (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, len| acc / crate::algebra::gcd(acc, len) * len)
    }

    /// Cycle notation with fixed points omitted, `()` for the identity. Points
    /// are printed through `label`.
    pub fn cycle_notation_with(&self, label: impl Fn(u32) -> String) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.into_iter().map(&label).collect();
                format!("({})", inner.join(", "))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation_with(|x| x.to_string()))
    }
}
