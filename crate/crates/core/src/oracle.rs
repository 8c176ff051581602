//! Exhaustive evaluation of the discrete norms on small instances.
//!
//! All walks use the reflected binary Gray code: state `s` is the mask
//! `s ^ (s >> 1)` and moving from `s` to `s + 1` flips bit
//! `trailing_zeros(s + 1)`. The index range is cut into fixed blocks of
//! `2^BLOCK_BITS` steps; each block seeds its incremental state by direct
//! computation, so blocks can be walked in any order or on any thread and
//! still produce bit-identical scores. The winner is a function of the set
//! of offered scores (see [`Front`]), which makes the merge independent of
//! how blocks are grouped.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm2, ComplexMatrix};
use crate::witness::{exact_rank1_binary, BinaryVector, TIE_REL_TOL};

pub const DEFAULT_DELTA_CAP: usize = 24;
pub const DEFAULT_RHO_REAL_CAP: usize = 20;
pub const DEFAULT_RHO_PAIR_CAP: usize = 26;
pub const DEFAULT_COSINE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub delta: usize,
    pub rho_real: usize,
    pub rho_pair: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { delta: DEFAULT_DELTA_CAP, rho_real: DEFAULT_RHO_REAL_CAP, rho_pair: DEFAULT_RHO_PAIR_CAP }
    }
}

/// Hard ceiling from the 64-bit mask representation.
const MAX_BITS: usize = 40;
const BLOCK_BITS: u32 = 12;
/// Outer block size for the pair walk, whose inner loop is itself exponential.
const PAIR_BLOCK_BITS: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Objective re-evaluated directly at the argmax.
    pub value: f64,
    pub argmax_xi: BinaryVector,
    pub argmax_eta: Option<BinaryVector>,
    /// Number of candidates evaluated: `2^n - 1` for the discrete norm and
    /// the cosine, `2^m - 1` rank-one solves for the real Rayleigh path,
    /// `(2^m - 1)(2^n - 1)` pairs for the complex one.
    pub enumerated: u64,
    /// Largest gap between the incremental state and a fresh recomputation,
    /// measured at every block end.
    pub drift: f64,
    pub method: &'static str,
}

trait Prefer {
    fn prefer_cmp(&self, other: &Self) -> Ordering;
}

impl Prefer for u64 {
    fn prefer_cmp(&self, other: &Self) -> Ordering {
        self.count_ones().cmp(&other.count_ones()).then_with(|| {
            let diff = self ^ other;
            if diff == 0 {
                Ordering::Equal
            } else if self >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl Prefer for BinaryVector {
    fn prefer_cmp(&self, other: &Self) -> Ordering {
        self.preference_cmp(other)
    }
}

impl<A: Prefer, B: Prefer> Prefer for (A, B) {
    fn prefer_cmp(&self, other: &Self) -> Ordering {
        self.0.prefer_cmp(&other.0).then_with(|| self.1.prefer_cmp(&other.1))
    }
}

/// Items within the tie band `[max (1 - TIE_REL_TOL), max]` that are not
/// dominated in both score and preference. The preferred item of the final
/// band is the same whatever order items were offered in.
struct Front<T> {
    max: f64,
    items: Vec<(f64, T)>,
}

impl<T: Prefer> Front<T> {
    fn new() -> Self {
        Self { max: f64::NEG_INFINITY, items: Vec::new() }
    }

    fn floor(&self) -> f64 {
        self.max - TIE_REL_TOL * self.max.abs()
    }

    fn offer(&mut self, score: f64, item: impl FnOnce() -> T) {
        if score < self.floor() {
            return;
        }
        let item = item();
        if score > self.max {
            self.max = score;
            let floor = self.floor();
            self.items.retain(|(s, _)| *s >= floor);
        }
        if self.items.iter().any(|(s, t)| *s >= score && t.prefer_cmp(&item) != Ordering::Greater) {
            return;
        }
        self.items.retain(|(s, t)| !(*s <= score && t.prefer_cmp(&item) != Ordering::Less));
        self.items.push((score, item));
    }

    fn merge(mut self, other: Self) -> Self {
        for (s, t) in other.items {
            self.offer(s, || t);
        }
        self
    }

    fn winner(self) -> Option<T> {
        let floor = self.floor();
        self.items
            .into_iter()
            .filter(|(s, _)| *s >= floor)
            .min_by(|a, b| a.1.prefer_cmp(&b.1))
            .map(|(_, t)| t)
    }
}

struct BlockOutcome<T> {
    front: Front<T>,
    drift: f64,
}

fn gray(s: u64) -> u64 {
    s ^ (s >> 1)
}

/// Block index ranges `[lo, hi)` covering `s = 1 .. 2^bits`.
fn blocks(bits: usize, block_bits: u32) -> Vec<(u64, u64)> {
    let end = 1u64 << bits;
    let size = 1u64 << block_bits;
    (0..end.div_ceil(size))
        .map(|b| ((b * size).max(1), ((b + 1) * size).min(end)))
        .filter(|(lo, hi)| lo < hi)
        .collect()
}

/// Walks the given blocks, `parts` contiguous groups at a time in parallel.
fn run_blocks<T: Prefer + Send>(
    ranges: &[(u64, u64)],
    parts: usize,
    block: impl Fn(u64, u64) -> BlockOutcome<T> + Sync,
) -> (Front<T>, f64) {
    let parts = parts.clamp(1, ranges.len().max(1));
    let chunk = ranges.len().div_ceil(parts).max(1);
    let groups: Vec<BlockOutcome<T>> = ranges
        .par_chunks(chunk)
        .map(|group| {
            let mut acc = BlockOutcome { front: Front::new(), drift: 0.0 };
            for &(lo, hi) in group {
                let out = block(lo, hi);
                acc.front = acc.front.merge(out.front);
                acc.drift = acc.drift.max(out.drift);
            }
            acc
        })
        .collect();
    groups.into_iter().fold((Front::new(), 0.0), |(f, d), g| (f.merge(g.front), d.max(g.drift)))
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap || size > MAX_BITS {
        return Err(Error::CapExceeded { size, cap: cap.min(MAX_BITS) });
    }
    Ok(())
}

fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn sum_columns(a: &ComplexMatrix, mask: u64) -> Vec<Complex64> {
    a.column_sum((0..a.cols()).filter(|&j| mask >> j & 1 == 1))
}

fn sum_rows(a: &ComplexMatrix, mask: u64) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); a.cols()];
    for i in (0..a.rows()).filter(|&i| mask >> i & 1 == 1) {
        w.iter_mut().zip(a.row(i)).for_each(|(x, y)| *x += y);
    }
    w
}

/// Exact `max ||A xi|| / ||xi||` over nonempty binary `xi`.
pub fn exact_delta(a: &ComplexMatrix, cap: usize) -> Result<OracleResult> {
    exact_delta_partitioned(a, cap, rayon::current_num_threads() * 4)
}

/// [`exact_delta`] with the walk split into `parts` contiguous ranges. The
/// result does not depend on `parts`.
pub fn exact_delta_partitioned(a: &ComplexMatrix, cap: usize, parts: usize) -> Result<OracleResult> {
    let n = a.cols();
    check_cap(n, cap)?;
    let columns: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let col_sq: Vec<f64> = columns.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();

    let block = |lo: u64, hi: u64| {
        let mut front = Front::new();
        let mut y = sum_columns(a, gray(lo));
        let mut sq: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        for s in lo..hi {
            let mask = gray(s);
            let k = mask.count_ones() as f64;
            front.offer((sq.max(0.0) / k).sqrt(), || mask);
            if s + 1 < hi {
                let j = (s + 1).trailing_zeros() as usize;
                let c = &columns[j];
                let dot: f64 = y.iter().zip(c).map(|(u, v)| u.re * v.re + u.im * v.im).sum();
                if mask >> j & 1 == 0 {
                    sq += 2.0 * dot + col_sq[j];
                    y.iter_mut().zip(c).for_each(|(u, v)| *u += v);
                } else {
                    sq += col_sq[j] - 2.0 * dot;
                    y.iter_mut().zip(c).for_each(|(u, v)| *u -= v);
                }
            }
        }
        let drift = diff_norm(&y, &sum_columns(a, gray(hi - 1)));
        BlockOutcome { front, drift }
    };
    let (front, drift) = run_blocks(&blocks(n, BLOCK_BITS), parts, block);
    let mask = front.winner().expect("at least one column");
    let xi = BinaryVector::from_mask(n, mask);
    let value = norm2(&sum_columns(a, mask)) / xi.norm();
    Ok(OracleResult {
        value,
        argmax_xi: xi,
        argmax_eta: None,
        enumerated: (1u64 << n) - 1,
        drift,
        method: "gray-delta",
    })
}

fn bilinear(a: &ComplexMatrix, xi: &BinaryVector, eta: &BinaryVector) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in xi.iter_ones() {
        let row = a.row(i);
        for j in eta.iter_ones() {
            s += row[j];
        }
    }
    s.norm() / (xi.norm() * eta.norm())
}

/// Exact `max |xi^t A eta| / (||xi|| ||eta||)` with `xi` over the rows
/// (dimension `m`) and `eta` over the columns (dimension `n`).
///
/// Real matrices take the rank-one path: every row combination `A^t xi` is
/// solved exactly over `eta`, so only `m <= cap_real` is required. Complex
/// matrices enumerate both vectors and need `m + n <= cap_pair`.
pub fn exact_rho(a: &ComplexMatrix, cap_real: usize, cap_pair: usize) -> Result<OracleResult> {
    if a.is_real() {
        exact_rho_real(a, cap_real, rayon::current_num_threads() * 4)
    } else {
        exact_rho_pairs(a, cap_pair, rayon::current_num_threads() * 4)
    }
}

/// Rank-one path of [`exact_rho`]; `A` must be real.
pub fn exact_rho_real(a: &ComplexMatrix, cap: usize, parts: usize) -> Result<OracleResult> {
    if let Some(k) = a.data().iter().position(|z| z.im != 0.0) {
        return Err(Error::NotReal(k));
    }
    let (m, n) = a.shape();
    check_cap(m, cap)?;
    let block = |lo: u64, hi: u64| {
        let mut front: Front<(u64, BinaryVector)> = Front::new();
        let mut w = sum_rows(a, gray(lo));
        for s in lo..hi {
            let mask = gray(s);
            let k = (mask.count_ones() as f64).sqrt();
            match exact_rank1_binary(&w) {
                Ok((eta, v)) => front.offer(v / k, || (mask, eta)),
                Err(_) => front.offer(0.0, || (mask, BinaryVector::singleton(n, 0).expect("n >= 1"))),
            }
            if s + 1 < hi {
                let i = (s + 1).trailing_zeros() as usize;
                let row = a.row(i);
                if mask >> i & 1 == 0 {
                    w.iter_mut().zip(row).for_each(|(u, v)| *u += v);
                } else {
                    w.iter_mut().zip(row).for_each(|(u, v)| *u -= v);
                }
            }
        }
        let drift = diff_norm(&w, &sum_rows(a, gray(hi - 1)));
        BlockOutcome { front, drift }
    };
    let (front, drift) = run_blocks(&blocks(m, BLOCK_BITS), parts, block);
    let (mask, eta) = front.winner().expect("at least one row");
    let xi = BinaryVector::from_mask(m, mask);
    Ok(OracleResult {
        value: bilinear(a, &xi, &eta),
        argmax_xi: xi,
        argmax_eta: Some(eta),
        enumerated: (1u64 << m) - 1,
        drift,
        method: "gray-rank1",
    })
}

/// Double enumeration path of [`exact_rho`]; valid for any matrix.
pub fn exact_rho_pairs(a: &ComplexMatrix, cap: usize, parts: usize) -> Result<OracleResult> {
    let (m, n) = a.shape();
    check_cap(m + n, cap)?;
    let inv_sqrt: Vec<f64> = (0..=64).map(|k| if k == 0 { 0.0 } else { 1.0 / (k as f64).sqrt() }).collect();
    let block = |lo: u64, hi: u64| {
        let mut front: Front<(u64, u64)> = Front::new();
        let mut w = sum_rows(a, gray(lo));
        for s in lo..hi {
            let x = gray(s);
            let kx = inv_sqrt[x.count_ones() as usize];
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 1..1u64 << n {
                let j = t.trailing_zeros() as usize;
                let e = gray(t);
                if e >> j & 1 == 1 {
                    sum += w[j];
                } else {
                    sum -= w[j];
                }
                front.offer(sum.norm() * kx * inv_sqrt[e.count_ones() as usize], || (x, e));
            }
            if s + 1 < hi {
                let i = (s + 1).trailing_zeros() as usize;
                let row = a.row(i);
                if x >> i & 1 == 0 {
                    w.iter_mut().zip(row).for_each(|(u, v)| *u += v);
                } else {
                    w.iter_mut().zip(row).for_each(|(u, v)| *u -= v);
                }
            }
        }
        let drift = diff_norm(&w, &sum_rows(a, gray(hi - 1)));
        BlockOutcome { front, drift }
    };
    let (front, drift) = run_blocks(&blocks(m, PAIR_BLOCK_BITS), parts, block);
    let (x, e) = front.winner().expect("at least one pair");
    let xi = BinaryVector::from_mask(m, x);
    let eta = BinaryVector::from_mask(n, e);
    Ok(OracleResult {
        value: bilinear(a, &xi, &eta),
        argmax_xi: xi,
        argmax_eta: Some(eta),
        enumerated: ((1u64 << m) - 1) * ((1u64 << n) - 1),
        drift,
        method: "gray-pair",
    })
}

/// Exact `max |<z, xi>| / (||z|| ||xi||)` over nonempty binary `xi`.
pub fn exact_cosine(z: &[Complex64], cap: usize) -> Result<OracleResult> {
    let n = z.len();
    check_cap(n, cap)?;
    let norm = norm2(z);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut front: Front<u64> = Front::new();
    let mut sum = Complex64::new(0.0, 0.0);
    for s in 1..1u64 << n {
        let j = s.trailing_zeros() as usize;
        let mask = gray(s);
        if mask >> j & 1 == 1 {
            sum += z[j];
        } else {
            sum -= z[j];
        }
        front.offer(sum.norm() / (mask.count_ones() as f64).sqrt(), || mask);
    }
    let drift = {
        let fresh: Complex64 = (0..n).filter(|&i| gray((1 << n) - 1) >> i & 1 == 1).map(|i| z[i]).sum();
        (fresh - sum).norm()
    };
    let mask = front.winner().expect("dimension >= 1");
    let xi = BinaryVector::from_mask(n, mask);
    let s: Complex64 = xi.iter_ones().map(|i| z[i]).sum();
    Ok(OracleResult {
        value: s.norm() / (norm * xi.norm()),
        argmax_xi: xi,
        argmax_eta: None,
        enumerated: (1u64 << n) - 1,
        drift,
        method: "gray-cosine",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn ones(r: &OracleResult) -> Vec<usize> {
        r.argmax_xi.iter_ones().collect()
    }

    #[test]
    fn gray_transitions_flip_one_bit() {
        for s in 1u64..1000 {
            let d = gray(s) ^ gray(s - 1);
            assert_eq!(d, 1 << s.trailing_zeros());
        }
    }

    #[test]
    fn front_is_order_independent() {
        let items = [(1.0, 0b100u64), (1.0 + 1e-14, 0b010), (0.5, 0b001), (1.0, 0b011)];
        let mut f1 = Front::new();
        for &(s, t) in &items {
            f1.offer(s, || t);
        }
        let mut f2 = Front::new();
        for &(s, t) in items.iter().rev() {
            f2.offer(s, || t);
        }
        assert_eq!(f1.winner(), Some(0b010));
        assert_eq!(f2.winner(), Some(0b010));
    }

    #[test]
    fn delta_examples() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        let r = exact_delta(&i2, DEFAULT_DELTA_CAP).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(ones(&r), vec![0]);
        assert_eq!(r.enumerated, 3);

        let j = ComplexMatrix::ones(3, 4).unwrap();
        let r = exact_delta(&j, DEFAULT_DELTA_CAP).unwrap();
        assert!((r.value - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.argmax_xi.popcount(), 4);

        let a = ComplexMatrix::from_fn(4, 4, |i, j| c(1.0 / (((i + 1) * (j + 1)) as f64).sqrt())).unwrap();
        let r = exact_delta(&a, DEFAULT_DELTA_CAP).unwrap();
        assert_eq!(r.argmax_xi.popcount(), 4);
        assert!((r.value - 2.0096).abs() < 1e-4);
    }

    #[test]
    fn rho_examples() {
        let j = ComplexMatrix::ones(2, 3).unwrap();
        for r in [exact_rho(&j, 20, 26).unwrap(), exact_rho_pairs(&j, 26, 1).unwrap()] {
            assert!((r.value - 6f64.sqrt()).abs() < 1e-12);
            assert_eq!(r.argmax_xi.popcount(), 2);
            assert_eq!(r.argmax_eta.unwrap().popcount(), 3);
        }
        let i2 = ComplexMatrix::identity(2).unwrap();
        let r = exact_rho(&i2, 20, 26).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(ones(&r), vec![0]);
        assert_eq!(r.argmax_eta.unwrap().iter_ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn cosine_examples() {
        assert!((exact_cosine(&[c(1.0), c(1.0)], 16).unwrap().value - 1.0).abs() < 1e-15);
        let r = exact_cosine(&[c(1.0), c(-1.0)], 16).unwrap();
        assert!((r.value - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(ones(&r), vec![0]);
        let r = exact_cosine(&[c(3.0), c(-1.0), c(2.0)], 16).unwrap();
        assert_eq!(ones(&r), vec![0, 2]);
        assert!((r.value - 0.9449).abs() < 1e-4);
        assert!(matches!(exact_cosine(&[c(0.0)], 16), Err(Error::ZeroVector)));
    }

    #[test]
    fn caps() {
        let a = ComplexMatrix::ones(2, 5).unwrap();
        assert!(matches!(exact_delta(&a, 4), Err(Error::CapExceeded { size: 5, cap: 4 })));
        assert!(matches!(exact_rho(&a, 1, 26), Err(Error::CapExceeded { .. })));
        let z = ComplexMatrix::new(2, 5, vec![Complex64::new(0.0, 1.0); 10]).unwrap();
        assert!(matches!(exact_rho(&z, 20, 6), Err(Error::CapExceeded { size: 7, cap: 6 })));
        assert!(matches!(exact_cosine(&[c(1.0); 17], 16), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn partitions_agree() {
        let a = ComplexMatrix::from_fn(5, 14, |i, j| Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, (j % 3) as f64))
            .unwrap();
        let base = exact_delta_partitioned(&a, 24, 1).unwrap();
        for parts in [2, 3, 7] {
            assert_eq!(exact_delta_partitioned(&a, 24, parts).unwrap(), base);
        }
        assert!(base.drift <= 1e-9 * a.frobenius());
    }
}
