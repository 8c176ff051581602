//! Constructive lower bounds for the discrete norm and the discrete
//! Rayleigh norm.
//!
//! The pipeline slices a top singular vector into a band of bounded
//! logarithmic diameter, maps it back through `A*`, and searches the binary
//! candidate family of the result. Every step is constructive, so the
//! returned binary vectors come with a certified floor.

mod bits;
mod candidates;
mod slice;

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

pub use bits::{beats, beats_pair, score_cmp, BinaryVector, TIE_REL_TOL};
pub use candidates::{
    best_binary_cosine, binary_candidates, binary_cosine, exact_rank1_binary, Candidate, CosineWitness, Part,
    SetKind, Source, REAL_TOL,
};
pub use slice::{dyadic_slice, hermitian_slice, SliceResult};

use crate::error::{Error, Result};
use crate::linalg::{norm2, top_singular, ComplexMatrix, NormProfile, SolverOptions};

/// Multiplicative slack applied when checking certified floors.
pub const CERT_SLACK: f64 = 1e-9;

/// `||A|| / (8 sqrt2 sqrt(ln h + 2))`.
pub fn delta_floor_thm(spectral: f64, h: f64) -> f64 {
    spectral / (8.0 * SQRT_2 * (h.ln() + 2.0).sqrt())
}

/// `4 sqrt(4 ln(12 K^2) + 2)`.
pub fn sharp_denominator(k: f64) -> f64 {
    4.0 * (4.0 * (12.0 * k * k).ln() + 2.0).sqrt()
}

/// `||A|| / (4 sqrt(4 ln(12 K^2) + 2))` with `K = max(h, 1)`.
pub fn delta_floor_sharp(spectral: f64, h: f64) -> f64 {
    spectral / sharp_denominator(h.max(1.0))
}

/// `||A|| / (32 sqrt2 (ln h + 4))`.
pub fn rho_floor_thm(spectral: f64, h: f64) -> f64 {
    spectral / (32.0 * SQRT_2 * (h.ln() + 4.0))
}

/// The two sides `(2 f(K) sqrt(4 ln(2 K f(K)) + 2), 32 sqrt2 (ln K + 4))` of
/// the denominator comparison behind [`rho_floor_thm`], where `f` is
/// [`sharp_denominator`].
pub fn rho_denominator_chain(k: f64) -> (f64, f64) {
    let f = sharp_denominator(k);
    let chain = 2.0 * f * (4.0 * (2.0 * k * f).ln() + 2.0).sqrt();
    (chain, 32.0 * SQRT_2 * (k.ln() + 4.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaWitness {
    pub profile: NormProfile,
    pub xi: BinaryVector,
    /// `||A xi|| / ||xi||`.
    pub ratio: f64,
    pub floor_thm: f64,
    pub floor_sharp: f64,
    /// Family member that won, e.g. `re+:level`.
    pub provenance: String,
    pub family_size: usize,
    pub slice: SliceResult,
}

impl DeltaWitness {
    /// Checks `floor_thm <= ratio <= ||A||` and `floor_thm <= floor_sharp`,
    /// each with relative slack `slack`.
    pub fn certify(&self, slack: f64) -> Result<()> {
        let spectral = self.profile.spectral;
        if self.ratio < self.floor_thm * (1.0 - slack) {
            return Err(Error::InvariantViolation(format!(
                "delta ratio {} below floor {}",
                self.ratio, self.floor_thm
            )));
        }
        if self.ratio > spectral * (1.0 + slack) {
            return Err(Error::InvariantViolation(format!(
                "delta ratio {} above spectral norm {spectral}",
                self.ratio
            )));
        }
        if self.floor_sharp < self.floor_thm * (1.0 - slack) {
            return Err(Error::InvariantViolation(format!(
                "sharp floor {} below general floor {}",
                self.floor_sharp, self.floor_thm
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoWitness {
    pub profile: NormProfile,
    /// Column-side vector (dimension `n`).
    pub xi: BinaryVector,
    /// Row-side vector (dimension `m`).
    pub eta: BinaryVector,
    /// `|eta^t A xi| / (||xi|| ||eta||)`, no conjugation.
    pub value: f64,
    pub floor_thm: f64,
    pub provenance: String,
    pub pairs_evaluated: usize,
}

impl RhoWitness {
    pub fn certify(&self, slack: f64) -> Result<()> {
        let spectral = self.profile.spectral;
        if self.value < self.floor_thm * (1.0 - slack) {
            return Err(Error::InvariantViolation(format!(
                "rho value {} below floor {}",
                self.value, self.floor_thm
            )));
        }
        if self.value > spectral * (1.0 + slack) {
            return Err(Error::InvariantViolation(format!(
                "rho value {} above spectral norm {spectral}",
                self.value
            )));
        }
        Ok(())
    }
}

struct DeltaFamily {
    profile: NormProfile,
    slice: SliceResult,
    family: Vec<Candidate>,
}

fn delta_family(a: &ComplexMatrix, opts: &SolverOptions) -> Result<DeltaFamily> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let top = top_singular(a, opts)?;
    let profile = NormProfile::from_top(a, &top)?;
    let k = profile.height.max(1.0);
    let slice = dyadic_slice(&a.adjoint(), &top.left, k)?;
    let w = a.adjoint_matvec(&slice.slice);
    let family = binary_candidates(&w)?;
    Ok(DeltaFamily { profile, slice, family })
}

/// Index of the best score, ties resolved by [`beats`].
fn argmax(scores: &[f64], bits: impl Fn(usize) -> BinaryVector) -> usize {
    let mut best = 0;
    for i in 1..scores.len() {
        if beats(scores[i], &bits(i), scores[best], &bits(best)) {
            best = i;
        }
    }
    best
}

/// Binary vector `xi` with `||A xi|| / ||xi||` at least the certified floor.
pub fn delta_witness(a: &ComplexMatrix, opts: &SolverOptions) -> Result<DeltaWitness> {
    let DeltaFamily { profile, slice, family } = delta_family(a, opts)?;
    let scores: Vec<f64> = family
        .par_iter()
        .map(|c| norm2(&a.column_sum(c.bits.iter_ones())) / c.bits.norm())
        .collect();
    let best = argmax(&scores, |i| family[i].bits.clone());
    let spectral = profile.spectral;
    let h = profile.height;
    Ok(DeltaWitness {
        xi: family[best].bits.clone(),
        ratio: scores[best],
        floor_thm: delta_floor_thm(spectral, h),
        floor_sharp: delta_floor_sharp(spectral, h),
        provenance: family[best].source.to_string(),
        family_size: family.len(),
        profile,
        slice,
    })
}

struct RhoCandidate {
    xi: usize,
    eta: BinaryVector,
    eta_source: Source,
    value: f64,
}

fn eta_candidates(v: &[Complex64]) -> Vec<Candidate> {
    if v.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
        return Vec::new();
    }
    let mut out = binary_candidates(v).expect("nonzero vector");
    if let Ok((eta, _)) = exact_rank1_binary(v) {
        if !out.iter().any(|c| c.bits == eta) {
            let part = if v.iter().zip(0..).any(|(c, i)| eta.contains(i) && c.re > 0.0) {
                Part::RePos
            } else {
                Part::ReNeg
            };
            out.push(Candidate { bits: eta, source: Source { part, kind: SetKind::ExactPrefix } });
        }
    }
    out
}

/// Pair `(xi, eta)` with `|eta^t A xi| / (||xi|| ||eta||)` at least the
/// certified floor. `xi` ranges over the family built for
/// [`delta_witness`] and `eta` over the family of `A xi`.
pub fn rho_witness(a: &ComplexMatrix, opts: &SolverOptions) -> Result<RhoWitness> {
    let DeltaFamily { profile, family, .. } = delta_family(a, opts)?;
    let per_xi: Vec<Vec<RhoCandidate>> = family
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let v = a.column_sum(c.bits.iter_ones());
            eta_candidates(&v)
                .into_iter()
                .map(|e| {
                    let s: Complex64 = e.bits.iter_ones().map(|i| v[i]).sum();
                    let value = s.norm() / (c.bits.norm() * e.bits.norm());
                    RhoCandidate { xi: k, eta: e.bits, eta_source: e.source, value }
                })
                .collect()
        })
        .collect();
    let all: Vec<RhoCandidate> = per_xi.into_iter().flatten().collect();
    if all.is_empty() {
        return Err(Error::InvariantViolation("no nonzero column combination in the family".into()));
    }
    let mut best = 0;
    for i in 1..all.len() {
        let (x, y) = (&all[i], &all[best]);
        if beats_pair(x.value, (&family[x.xi].bits, &x.eta), y.value, (&family[y.xi].bits, &y.eta)) {
            best = i;
        }
    }
    let w = &all[best];
    let spectral = profile.spectral;
    let h = profile.height;
    Ok(RhoWitness {
        xi: family[w.xi].bits.clone(),
        eta: w.eta.clone(),
        value: w.value,
        floor_thm: rho_floor_thm(spectral, h),
        provenance: format!("xi={};eta={}", family[w.xi].source, w.eta_source),
        pairs_evaluated: all.len(),
        profile,
    })
}
