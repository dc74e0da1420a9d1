use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{precondition, Result};

/// Reduced word in the free group. Letter `i > 0` is the generator `g_i`,
/// letter `-i` its inverse; the empty word is the identity.
///
/// Words are ordered by length first, then lexicographically, so maps keyed
/// by words list lower-degree terms first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Validates that `letters` is reduced and free of zeros.
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(precondition("0 is not a letter"));
        }
        if let Some(w) = letters.windows(2).find(|w| w[0] == -w[1]) {
            return Err(precondition(format!(
                "word is not reduced: {} is followed by {}",
                w[0], w[1]
            )));
        }
        Ok(Word(letters))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Result<Self> {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(precondition("0 is not a letter"));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Word(out))
    }

    pub fn generator(i: i32) -> Self {
        assert!(i != 0, "0 is not a letter");
        Word(vec![i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    /// Word length `|g|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index occurring in the word.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Group product with cancellation at the junction.
    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
            k += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All reduced words of length exactly `k` in `F_n`, in word order.
///
/// There are `2n(2n−1)^{k−1}` of them for `k ≥ 1`.
pub fn sphere(rank: usize, k: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut layer = vec![Word::identity()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in &letters {
                if w.0.last() != Some(&-l) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        layer = next;
    }
    layer.sort();
    layer
}

/// Number of reduced words of length at most `radius` in `F_n`.
pub fn ball_size(rank: usize, radius: usize) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * rank as u128;
    for _ in 0..radius {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * rank as u128 - 1);
    }
    total
}

/// All reduced words of length at most `radius`, in word order.
pub fn ball(rank: usize, radius: usize) -> Vec<Word> {
    (0..=radius).flat_map(|k| sphere(rank, k)).collect()
}

/// Uniformly random reduced word of length in `0..=max_len`.
pub fn random_word<R: Rng + ?Sized>(rank: usize, max_len: usize, rng: &mut R) -> Word {
    let len = rng.random_range(0..=max_len);
    let mut v: Vec<i32> = Vec::with_capacity(len);
    while v.len() < len {
        let g = rng.random_range(1..=rank as i32);
        let l = if rng.random_bool(0.5) { g } else { -g };
        if v.last() != Some(&-l) {
            v.push(l);
        }
    }
    Word(v)
}
