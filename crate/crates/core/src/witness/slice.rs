//! Dyadic slicing of a near-maximizing vector into magnitude bands.
//!
//! Coordinates of `x` are grouped into levels `[M^k, M^(k+1))`; each
//! nonempty level has logarithmic diameter below `M`, and for the right
//! choice of `M` at least one level keeps a constant fraction of `||A x||`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{log_diameter, norm2, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceResult {
    /// The selected level `x^(k)`: coordinates of `x` in the band, zero elsewhere.
    pub slice: Vec<Complex64>,
    pub level: i64,
    /// Band ratio `M`.
    pub base: f64,
    /// `||A slice|| / ||slice||`.
    pub achieved_ratio: f64,
    pub log_diam: f64,
    /// Number of nonempty levels scanned.
    pub levels: usize,
}

fn validate(a: &ComplexMatrix, x: &[Complex64], k: f64) -> Result<()> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), got: x.len() });
    }
    if k.is_nan() || k < 1.0 || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("K must be a finite real >= 1, got {k}")));
    }
    if norm2(x) == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

fn best_level(a: &ComplexMatrix, x: &[Complex64], base: f64) -> SliceResult {
    let ln_base = base.ln();
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, z) in x.iter().enumerate() {
        let r = z.norm();
        if r > 0.0 {
            let k = (r.ln() / ln_base).floor() as i64;
            levels.entry(k).or_default().push(i);
        }
    }
    let count = levels.len();
    let mut best: Option<SliceResult> = None;
    for (k, members) in levels {
        let mut s = vec![Complex64::new(0.0, 0.0); x.len()];
        for &i in &members {
            s[i] = x[i];
        }
        let ratio = norm2(&a.matvec(&s)) / norm2(&s);
        if best.as_ref().is_none_or(|b| ratio > b.achieved_ratio) {
            let log_diam = log_diameter(&s).expect("level is nonempty");
            best = Some(SliceResult { slice: s, level: k, base, achieved_ratio: ratio, log_diam, levels: count });
        }
    }
    best.expect("nonzero vector has a nonempty level")
}

/// Slicing with base `M = 8K^2 + 1` for `x` close to a top right singular
/// vector of `A` and `K >= h(A)`. The selected level satisfies
/// `||A x^(k)|| > ||A|| ||x^(k)|| / 2` up to the accuracy of `x`.
pub fn dyadic_slice(a: &ComplexMatrix, x: &[Complex64], k: f64) -> Result<SliceResult> {
    validate(a, x, k)?;
    Ok(best_level(a, x, 8.0 * k * k + 1.0))
}

/// Hermitian variant with base `M = 8K + 1`, for `K >= ||A||_inf / ||A||`
/// and `x` close to an eigenvector of largest modulus. The selected level
/// satisfies `||A x^(k)|| > ||A|| ||x^(k)|| / 4`.
pub fn hermitian_slice(a: &ComplexMatrix, x: &[Complex64], k: f64) -> Result<SliceResult> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    validate(a, x, k)?;
    Ok(best_level(a, x, 8.0 * k + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{row_norm, top_two_singular, NormProfile, SolverOptions};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_single_level() {
        let a = ComplexMatrix::identity(2).unwrap();
        let s = dyadic_slice(&a, &[c(1.0), c(0.0)], 1.0).unwrap();
        assert_eq!(s.slice, vec![c(1.0), c(0.0)]);
        assert_eq!(s.achieved_ratio, 1.0);
        assert_eq!(s.base, 9.0);
    }

    #[test]
    fn constant_vector_is_one_level() {
        let a = ComplexMatrix::ones(4, 4).unwrap();
        let x = vec![c(0.25); 4];
        let s = dyadic_slice(&a, &x, 1.0).unwrap();
        assert_eq!(s.slice, x);
        assert!((s.achieved_ratio - 4.0).abs() < 1e-15);
        assert_eq!(s.levels, 1);
    }

    #[test]
    fn invsqrt_postconditions() {
        let n = 8;
        let a = ComplexMatrix::from_fn(n, n, |i, j| c(1.0 / (((i + 1) * (j + 1)) as f64).sqrt())).unwrap();
        let opts = SolverOptions::default();
        let p = NormProfile::compute(&a, &opts).unwrap();
        let (top, _) = top_two_singular(&a, &opts).unwrap();
        let s = dyadic_slice(&a, &top.right, p.height).unwrap();
        assert!(s.achieved_ratio > 0.5 * p.spectral);
        assert!(s.log_diam < 8.0 * p.height * p.height + 1.0);

        let k = row_norm(&a) / p.spectral;
        let s = hermitian_slice(&a, &top.right, k).unwrap();
        assert!(s.achieved_ratio > 0.25 * p.spectral);
        assert!(s.log_diam < 8.0 * k + 1.0);
    }

    #[test]
    fn hermitian_examples() {
        let a = ComplexMatrix::diag(&[1.0, 1.0]).unwrap();
        let s = hermitian_slice(&a, &[c(1.0), c(0.0)], 1.0).unwrap();
        assert_eq!(s.achieved_ratio, 1.0);

        let k4 = ComplexMatrix::from_fn(4, 4, |i, j| c(if i == j { 0.0 } else { 1.0 })).unwrap();
        let x = vec![c(0.5); 4];
        let s = hermitian_slice(&k4, &x, 1.0).unwrap();
        assert_eq!(s.slice, x);
        assert!((s.achieved_ratio - 3.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let z = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(matches!(dyadic_slice(&z, &[c(1.0), c(0.0)], 1.0), Err(Error::ZeroMatrix)));
        let a = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(dyadic_slice(&a, &[c(0.0), c(0.0)], 1.0), Err(Error::ZeroVector)));
        assert!(matches!(dyadic_slice(&a, &[c(1.0), c(0.0)], 0.5), Err(Error::InvalidArgument(_))));
        let nh = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_slice(&nh, &[c(1.0), c(0.0)], 1.0), Err(Error::NotHermitian)));
        assert!(matches!(hermitian_slice(&z, &[c(1.0), c(0.0)], 1.0), Err(Error::ZeroMatrix)));
    }
}
