use std::cmp::Ordering;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A 0/1 vector stored as a bitset with a cached popcount.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    dim: usize,
    words: Vec<u64>,
    popcount: usize,
}

impl BinaryVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, words: vec![0; dim.div_ceil(64)], popcount: 0 }
    }

    pub fn ones(dim: usize) -> Self {
        let mut v = Self::zeros(dim);
        for i in 0..dim {
            v.set(i);
        }
        v
    }

    pub fn singleton(dim: usize, idx: usize) -> Result<Self> {
        Self::from_indices(dim, [idx])
    }

    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = Self::zeros(dim);
        for i in indices {
            if i >= dim {
                return Err(Error::OutOfRange(format!("index {i} >= dimension {dim}")));
            }
            v.set(i);
        }
        Ok(v)
    }

    /// Low `dim` bits of `mask`; bit `i` is coordinate `i`.
    pub fn from_mask(dim: usize, mask: u64) -> Self {
        assert!(dim <= 64, "from_mask supports dim <= 64");
        let mut v = Self::zeros(dim);
        if dim > 0 {
            let keep = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
            v.words[0] = mask & keep;
            v.popcount = v.words[0].count_ones() as usize;
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn popcount(&self) -> usize {
        self.popcount
    }

    pub fn is_empty(&self) -> bool {
        self.popcount == 0
    }

    /// Euclidean norm, `sqrt(popcount)`.
    pub fn norm(&self) -> f64 {
        (self.popcount as f64).sqrt()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.dim && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.dim);
        let (w, b) = (i / 64, i % 64);
        if self.words[w] >> b & 1 == 0 {
            self.words[w] |= 1 << b;
            self.popcount += 1;
        }
    }

    pub fn clear(&mut self, i: usize) {
        assert!(i < self.dim);
        let (w, b) = (i / 64, i % 64);
        if self.words[w] >> b & 1 == 1 {
            self.words[w] &= !(1 << b);
            self.popcount -= 1;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| Complex64::new(if self.contains(i) { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    /// Hex of the integer `sum_{i in support} 2^i`, most significant digit
    /// first, zero-padded to `ceil(dim / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.dim.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nibble = 0u8;
            for b in 0..4 {
                if self.contains(d * 4 + b) {
                    nibble |= 1 << b;
                }
            }
            let _ = write!(out, "{nibble:x}");
        }
        out
    }

    pub fn from_hex(dim: usize, hex: &str) -> Result<Self> {
        let mut v = Self::zeros(dim);
        for (d, ch) in hex.chars().rev().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| Error::InvalidArgument(format!("bad hex digit '{ch}'")))?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= dim {
                        return Err(Error::OutOfRange(format!("hex bit {i} >= dimension {dim}")));
                    }
                    v.set(i);
                }
            }
        }
        Ok(v)
    }

    /// Lexicographic order on sorted supports: the set holding the smallest
    /// index where the two differ comes first.
    pub fn support_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let bit = (a ^ b).trailing_zeros();
                return if a >> bit & 1 == 1 { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.words.len().cmp(&other.words.len())
    }

    /// Deterministic preference among equal-scoring witnesses: smaller
    /// popcount first, then lexicographically smaller support.
    pub fn preference_cmp(&self, other: &Self) -> Ordering {
        self.popcount.cmp(&other.popcount).then_with(|| self.support_cmp(other))
    }
}

/// Relative tolerance below which two objective values count as tied.
pub const TIE_REL_TOL: f64 = 1e-12;

/// Three-way comparison of scores with the tie tolerance applied.
pub fn score_cmp(a: f64, b: f64) -> Ordering {
    let scale = a.abs().max(b.abs());
    if a == b || (scale.is_finite() && (a - b).abs() <= TIE_REL_TOL * scale) {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Whether `(score, x)` should replace the incumbent `(best_score, best)`.
pub fn beats(score: f64, x: &BinaryVector, best_score: f64, best: &BinaryVector) -> bool {
    match score_cmp(score, best_score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => x.preference_cmp(best) == Ordering::Less,
    }
}

/// Pair version of [`beats`]: ties broken on the first vector, then the second.
pub fn beats_pair(
    score: f64,
    x: (&BinaryVector, &BinaryVector),
    best_score: f64,
    best: (&BinaryVector, &BinaryVector),
) -> bool {
    match score_cmp(score, best_score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => x.0.preference_cmp(best.0).then_with(|| x.1.preference_cmp(best.1)) == Ordering::Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        let mut v = BinaryVector::from_indices(70, [0, 3, 65]).unwrap();
        assert_eq!(v.popcount(), 3);
        assert!(v.contains(65) && !v.contains(64));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 3, 65]);
        v.set(3);
        assert_eq!(v.popcount(), 3);
        v.clear(0);
        assert_eq!(v.popcount(), 2);
        assert!(BinaryVector::from_indices(3, [3]).is_err());
        assert_eq!(BinaryVector::ones(5).popcount(), 5);
    }

    #[test]
    fn hex_layout() {
        assert_eq!(BinaryVector::from_indices(2, [0]).unwrap().to_hex(), "1");
        assert_eq!(BinaryVector::from_indices(8, [0, 4, 7]).unwrap().to_hex(), "91");
        assert_eq!(BinaryVector::from_indices(9, [8]).unwrap().to_hex(), "100");
    }

    #[test]
    fn preference() {
        let a = BinaryVector::from_indices(3, [0]).unwrap();
        let b = BinaryVector::from_indices(3, [1]).unwrap();
        let ab = BinaryVector::from_indices(3, [0, 1]).unwrap();
        assert_eq!(a.preference_cmp(&b), Ordering::Less);
        assert_eq!(b.preference_cmp(&ab), Ordering::Less);
        let x = BinaryVector::from_indices(3, [0, 2]).unwrap();
        let y = BinaryVector::from_indices(3, [1, 2]).unwrap();
        assert_eq!(x.support_cmp(&y), Ordering::Less);
        assert!(beats(1.0, &a, 1.0 + 1e-14, &b));
        assert!(!beats(1.0, &b, 1.0 + 1e-14, &a));
        assert!(beats(1.1, &ab, 1.0, &a));
    }

    proptest! {
        #[test]
        fn hex_round_trip(dim in 1usize..130, seed in any::<u64>()) {
            let idx: Vec<usize> = (0..dim).filter(|i| (seed.rotate_left(*i as u32 % 64) ^ *i as u64) & 1 == 1).collect();
            let v = BinaryVector::from_indices(dim, idx).unwrap();
            prop_assert_eq!(BinaryVector::from_hex(dim, &v.to_hex()).unwrap(), v);
        }

        #[test]
        fn support_cmp_matches_sorted_index_lists(
            (la, lb) in (1usize..12).prop_flat_map(|k| {
                let pool: Vec<usize> = (0..12).collect();
                (proptest::sample::subsequence(pool.clone(), k), proptest::sample::subsequence(pool, k))
            })
        ) {
            let a = BinaryVector::from_indices(12, la.iter().copied()).unwrap();
            let b = BinaryVector::from_indices(12, lb.iter().copied()).unwrap();
            prop_assert_eq!(a.support_cmp(&b), la.cmp(&lb));
        }
    }
}
