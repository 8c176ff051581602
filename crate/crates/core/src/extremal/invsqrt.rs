//! The rank-one matrix `A = x x^t` with `x_i = 1/sqrt(i)`.
//!
//! Its height grows like `sqrt(n) / ln n` while its discrete norms stay
//! within `O(1/sqrt(ln h))` and `O(1/ln h)` of the spectral norm, so it
//! shows the floors cannot be improved beyond constant factors. Every
//! quantity below has a closed form or an exact prefix scan, so nothing
//! here materializes the `n x n` matrix unless asked to.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pairwise_sum, ComplexMatrix};
use crate::witness::exact_rank1_binary;

/// Dense materialization limit for [`InvSqrt::matrix`].
pub const INVSQRT_DENSE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvSqrt {
    pub n: usize,
    /// `||A|| = sum 1/i`.
    pub spectral: f64,
    /// `||A||_1 = ||A||_inf = sum i^(-1/2)`.
    pub col_norm: f64,
    pub height: f64,
    /// `||A||_Delta = ||x|| max |<x, xi>| / ||xi||`.
    pub delta_norm: f64,
    /// `||A||_P = (max |<x, xi>| / ||xi||)^2`.
    pub rho_norm: f64,
    /// Size of the optimal prefix `{1, ..., k}`.
    pub prefix: usize,
}

impl InvSqrt {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::OutOfRange(format!("invsqrt needs n >= 4, got {n}")));
        }
        let x = Self::vector(n);
        let inv: Vec<f64> = (1..=n).map(|i| 1.0 / i as f64).collect();
        let spectral = pairwise_sum(&inv);
        let col_norm = pairwise_sum(&x);
        let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let (eta, best) = exact_rank1_binary(&z)?;
        Ok(Self {
            n,
            spectral,
            col_norm,
            height: col_norm / spectral,
            delta_norm: spectral.sqrt() * best,
            rho_norm: best * best,
            prefix: eta.popcount(),
        })
    }

    /// `x_i = 1/sqrt(i)`, `i = 1..n`.
    pub fn vector(n: usize) -> Vec<f64> {
        (1..=n).map(|i| 1.0 / (i as f64).sqrt()).collect()
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        if self.n > INVSQRT_DENSE_CAP {
            return Err(Error::CapExceeded { size: self.n, cap: INVSQRT_DENSE_CAP });
        }
        let x = Self::vector(self.n);
        ComplexMatrix::from_fn(self.n, self.n, |i, j| Complex64::new(x[i] * x[j], 0.0))
    }

    /// `(||A||_Delta, 2 ||A|| / sqrt(ln h))`; the first is below the second.
    pub fn delta_sharpness(&self) -> (f64, f64) {
        (self.delta_norm, 2.0 * self.spectral / self.height.ln().sqrt())
    }

    /// `(||A||_P, 4 ||A|| / ln h)`; the first is below the second.
    pub fn rho_sharpness(&self) -> (f64, f64) {
        (self.rho_norm, 4.0 * self.spectral / self.height.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_n4() {
        let a = InvSqrt::new(4).unwrap();
        assert!((a.spectral - 25.0 / 12.0).abs() < 1e-15);
        assert!((a.height - 1.3365).abs() < 1e-4);
        assert_eq!(a.prefix, 4);
        assert!((a.delta_norm - 2.0096).abs() < 1e-4);
        assert!(matches!(InvSqrt::new(3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn sharpness_small_n() {
        for n in [4, 8, 16, 100] {
            let a = InvSqrt::new(n).unwrap();
            let (d, db) = a.delta_sharpness();
            let (r, rb) = a.rho_sharpness();
            assert!(d < db && r < rb, "n = {n}");
            assert!(r <= d * (1.0 + 1e-12) && d <= a.spectral * (1.0 + 1e-12));
        }
    }
}
