//! Words over the infinite alphabet `{X0, X1, X2, ...}`.
//!
//! A word is a finite string of letters, stored as the sequence of letter
//! indices. Two statistics drive everything else in the crate:
//!
//! - the *length* `len`, the number of letters, and
//! - the *weight*, the sum of the letter indices.
//!
//! Both are additive under concatenation. Words order canonically by
//! `(length, weight, lexicographic)`, which is the iteration and
//! serialization order used throughout.

use std::cmp::Ordering;
use std::fmt;

/// A word `X_{k1} X_{k2} ... X_{kl}`, identified with the sequence
/// `(k1, ..., kl)` of letter indices. The empty word plays the role of `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: impl Into<Vec<u32>>) -> Self {
        Word(letters.into())
    }

    /// The empty word `1`.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The single-letter word `X_k`.
    pub fn letter(k: u32) -> Self {
        Word(vec![k])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the letter indices.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&k| u64::from(k)).sum()
    }

    /// Length and weight in one call.
    pub fn stats(&self) -> (usize, u64) {
        (self.len(), self.weight())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// `X_k -> X_{k+s}` applied to every letter.
    pub fn shift(&self, s: u32) -> Word {
        Word(self.0.iter().map(|&k| k + s).collect())
    }
}

/// Statistics `(length, weight)` of a word.
pub fn word_stats(w: &Word) -> (usize, u64) {
    w.stats()
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for k in &self.0 {
            write!(f, "X{k}")?;
        }
        Ok(())
    }
}

impl From<Vec<u32>> for Word {
    fn from(letters: Vec<u32>) -> Self {
        Word(letters)
    }
}

impl From<&[u32]> for Word {
    fn from(letters: &[u32]) -> Self {
        Word(letters.to_vec())
    }
}
