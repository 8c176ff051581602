//! Binary approximations of a complex vector.
//!
//! A vector of low height cannot be nearly orthogonal to every binary
//! vector. The proof of that fact only ever inspects superlevel sets of
//! the positive and negative parts of the real and imaginary components,
//! so that closed family is what we enumerate here.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bits::{beats, BinaryVector};
use crate::error::{Error, Result};
use crate::linalg::{norm2, pairwise_sum};

/// Tolerance for treating a coordinate's imaginary part as zero.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    RePos,
    ReNeg,
    ImPos,
    ImNeg,
}

impl Part {
    pub const ALL: [Part; 4] = [Part::RePos, Part::ReNeg, Part::ImPos, Part::ImNeg];

    fn extract(self, z: Complex64) -> f64 {
        match self {
            Part::RePos => z.re.max(0.0),
            Part::ReNeg => (-z.re).max(0.0),
            Part::ImPos => z.im.max(0.0),
            Part::ImNeg => (-z.im).max(0.0),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Part::RePos => "re+",
            Part::ReNeg => "re-",
            Part::ImPos => "im+",
            Part::ImNeg => "im-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    /// `{i : p_i >= t}` for a value `t` taken by the part.
    Level,
    /// `{i : p_i >= ||p||^2 / (2 ||p||_1)}`.
    Truncation,
    /// Optimal prefix from the exact rank-one scan.
    ExactPrefix,
}

/// Which family member produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Source {
    pub part: Part,
    pub kind: SetKind,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SetKind::Level => "level",
            SetKind::Truncation => "truncation",
            SetKind::ExactPrefix => "exact-prefix",
        };
        write!(f, "{}:{}", self.part.tag(), kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub bits: BinaryVector,
    pub source: Source,
}

/// The closed candidate family of `z`, deduplicated, in a fixed order:
/// parts `re+, re-, im+, im-`, each contributing its superlevel sets by
/// decreasing threshold followed by its truncation set.
pub fn binary_candidates(z: &[Complex64]) -> Result<Vec<Candidate>> {
    if z.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
        return Err(Error::ZeroVector);
    }
    let dim = z.len();
    let mut seen: HashSet<BinaryVector> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |bits: BinaryVector, source: Source, out: &mut Vec<Candidate>| {
        if !bits.is_empty() && seen.insert(bits.clone()) {
            out.push(Candidate { bits, source });
        }
    };

    for part in Part::ALL {
        let p: Vec<f64> = z.iter().map(|&c| part.extract(c)).collect();
        let mut order: Vec<usize> = (0..dim).filter(|&i| p[i] > 0.0).collect();
        if order.is_empty() {
            continue;
        }
        order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));

        let mut acc = BinaryVector::zeros(dim);
        for (k, &i) in order.iter().enumerate() {
            acc.set(i);
            let group_ends = order.get(k + 1).is_none_or(|&next| p[next] != p[i]);
            if group_ends {
                push(acc.clone(), Source { part, kind: SetKind::Level }, &mut out);
            }
        }

        let sq: Vec<f64> = p.iter().map(|x| x * x).collect();
        let threshold = pairwise_sum(&sq) / (2.0 * pairwise_sum(&p));
        let trunc = BinaryVector::from_indices(dim, (0..dim).filter(|&i| p[i] >= threshold && p[i] > 0.0))
            .expect("indices are in range");
        push(trunc, Source { part, kind: SetKind::Truncation }, &mut out);
    }
    Ok(out)
}

/// `|<z, xi>| / (||z|| ||xi||)` for a nonempty binary `xi`.
pub fn binary_cosine(z: &[Complex64], xi: &BinaryVector) -> f64 {
    let s: Complex64 = xi.iter_ones().map(|i| z[i]).sum();
    s.norm() / (norm2(z) * xi.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosineWitness {
    pub xi: BinaryVector,
    pub value: f64,
    pub source: Source,
}

/// Best member of [`binary_cosine`] over the candidate family. For real `z`
/// the result is the exact maximum over all nonempty binary vectors.
pub fn best_binary_cosine(z: &[Complex64]) -> Result<CosineWitness> {
    let family = binary_candidates(z)?;
    let mut best: Option<CosineWitness> = None;
    for c in family {
        let value = binary_cosine(z, &c.bits);
        let better = match &best {
            None => true,
            Some(b) => beats(value, &c.bits, b.value, &b.xi),
        };
        if better {
            best = Some(CosineWitness { xi: c.bits, value, source: c.source });
        }
    }
    Ok(best.expect("a nonzero vector has a nonempty family"))
}

/// Exact `max |<w, eta>| / ||eta||` over nonempty binary `eta`, for real `w`.
///
/// For a fixed popcount the optimum takes the largest positive entries or
/// the largest-magnitude negative ones, so scanning prefixes of both sorted
/// lists is exhaustive. Ties inside equal values are resolved towards
/// smaller indices.
pub fn exact_rank1_binary(w: &[Complex64]) -> Result<(BinaryVector, f64)> {
    if let Some(i) = w.iter().position(|c| c.im.abs() > REAL_TOL) {
        return Err(Error::NotReal(i));
    }
    if w.iter().all(|c| c.re == 0.0) {
        return Err(Error::ZeroVector);
    }
    let dim = w.len();
    let mut best: Option<(BinaryVector, f64)> = None;
    for sign in [1.0, -1.0] {
        let mut order: Vec<usize> = (0..dim).filter(|&i| sign * w[i].re > 0.0).collect();
        order.sort_by(|&a, &b| (sign * w[b].re).total_cmp(&(sign * w[a].re)).then(a.cmp(&b)));
        let mut sum = 0.0;
        let mut best_len = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (k, &i) in order.iter().enumerate() {
            sum += sign * w[i].re;
            let val = sum / ((k + 1) as f64).sqrt();
            // strict improvement only: earlier prefixes have smaller popcount
            if super::bits::score_cmp(val, best_val) == std::cmp::Ordering::Greater {
                best_val = val;
                best_len = k + 1;
            }
        }
        if best_len == 0 {
            continue;
        }
        let eta = BinaryVector::from_indices(dim, order[..best_len].iter().copied()).expect("in range");
        let replace = match &best {
            None => true,
            Some((b, v)) => beats(best_val, &eta, *v, b),
        };
        if replace {
            best = Some((eta, best_val));
        }
    }
    Ok(best.expect("nonzero real vector has a positive or negative part"))
}
