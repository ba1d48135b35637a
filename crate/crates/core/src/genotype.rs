//! Fixed-length binary genotypes, stored as packed 64-bit words.

use std::fmt;

/// A fixed-length bitstring, the search-space element. Bits are addressed
/// 0-based; the length is fixed at construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    len: usize,
    words: Vec<u64>,
}

impl Bitstring {
    /// The all-zeros string of length `n >= 1`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "bitstring length must be at least 1");
        Self {
            len: n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    /// The all-ones string of length `n >= 1`.
    pub fn ones(n: usize) -> Self {
        let mut s = Self::zeros(n);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.mask_tail();
        s
    }

    /// Builds a bitstring from an ASCII string of `0`/`1` characters.
    /// Convenient in tests; returns `None` on any other character or on
    /// an empty string.
    pub fn from_binary_str(s: &str) -> Option<Self> {
        if s.is_empty() {
            return None;
        }
        let mut out = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let (w, b) = (i / 64, i % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Number of ones in the whole string.
    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of ones in the half-open index range `[start, end)`.
    pub fn count_ones_in(&self, start: usize, end: usize) -> u32 {
        debug_assert!(start <= end && end <= self.len);
        (start..end).map(|i| self.get(i) as u32).sum()
    }

    /// Iterator over bits, front to back.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    fn mask_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}
