//! Deterministic, key-seeded global permutation and its inverse.
//!
//! The keystream is pinned to SplitMix64 so a given seed reproduces the same
//! permutation on every platform and release. This is a determinism device,
//! not a cryptographic strength claim; the container format carries a
//! keystream-algorithm byte so a stronger generator can be swapped in later.

use crate::error::{Error, Result};

/// SplitMix64 keystream; the output sequence is a pure function of the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeystreamState {
    state: u64,
}

impl KeystreamState {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// One SplitMix64 step.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

/// A bijection on `[0, n)`: `mapping[i]` is the source index for destination `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// Fisher–Yates shuffle of `[0, n)` driven by the seeded keystream:
    /// at step i from n−1 down to 1, swap index i with `next() mod (i+1)`.
    pub fn from_seed(seed: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("permutation length must be at least 1"));
        }
        let mut ks = KeystreamState::new(seed);
        let mut mapping: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (ks.next_u64() % (i as u64 + 1)) as usize;
            mapping.swap(i, j);
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Shuffle: `out[i] = data[mapping[i]]`.
    pub fn apply<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check_len(data.len())?;
        Ok(self.mapping.iter().map(|&src| data[src]).collect())
    }

    /// Unshuffle: `out[mapping[i]] = data[i]`; inverse of [`apply`](Self::apply).
    pub fn invert<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check_len(data.len())?;
        let mut out = vec![data[0]; data.len()];
        for (i, &src) in self.mapping.iter().enumerate() {
            out[src] = data[i];
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.mapping.len() {
            return Err(Error::precondition(format!(
                "data length {len} does not match permutation length {}",
                self.mapping.len()
            )));
        }
        Ok(())
    }
}
