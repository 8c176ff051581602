//! Tensor powers `A_m = [[1, 1], [1, 0]]^{⊗m}`, the adjacency matrices of
//! the graphs `Γ_m` on `{0,1}^m` where `u ~ v` iff `u & v == 0`. The zero
//! vector carries a loop.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tau::tau_table;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::oracle::{exact_delta, exact_rho, OracleCaps};
use crate::witness::{delta_witness, rho_witness};
use crate::linalg::SolverOptions;

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Largest `m` accepted by [`TensorPower::new`] (matvec only).
pub const TENSOR_MAX_M: usize = 24;
/// Largest `m` for which [`TensorPower::dense`] materializes `A_m`.
pub const TENSOR_DENSE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorPower {
    pub m: usize,
    pub phi_power: f64,
}

impl TensorPower {
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=TENSOR_MAX_M).contains(&m) {
            return Err(Error::OutOfRange(format!("tensor power needs 1 <= m <= {TENSOR_MAX_M}, got {m}")));
        }
        Ok(Self { m, phi_power: PHI.powi(m as i32) })
    }

    pub fn order(&self) -> usize {
        1 << self.m
    }

    /// Entry `(u, v)`: 1 iff the supports of `u` and `v` are disjoint.
    pub fn entry(&self, u: usize, v: usize) -> bool {
        u & v == 0
    }

    pub fn dense(&self) -> Result<ComplexMatrix> {
        if self.m > TENSOR_DENSE_CAP {
            return Err(Error::CapExceeded { size: self.m, cap: TENSOR_DENSE_CAP });
        }
        let n = self.order();
        ComplexMatrix::from_fn(n, n, |u, v| Complex64::new(if u & v == 0 { 1.0 } else { 0.0 }, 0.0))
    }

    /// `A_m x` by `m` successive 2x2 contractions, `O(m 2^m)`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), got: x.len() });
        }
        let mut y = x.to_vec();
        for bit in 0..self.m {
            let stride = 1 << bit;
            for base in (0..y.len()).filter(|i| i & stride == 0) {
                let (lo, hi) = (y[base], y[base | stride]);
                y[base] = lo + hi;
                y[base | stride] = lo;
            }
        }
        Ok(y)
    }

    /// `A_m x` summing `x_v` over `v & u == 0` for every `u`, `O(4^m)`.
    pub fn apply_direct(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), got: x.len() });
        }
        Ok((0..x.len()).map(|u| (0..x.len()).filter(|v| u & v == 0).map(|v| x[v]).sum()).collect())
    }

    /// Power iteration from the all-ones vector; returns the Rayleigh quotient.
    pub fn spectral_by_power(&self, max_iter: usize) -> f64 {
        let n = self.order();
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut lambda = 0.0;
        for _ in 0..max_iter {
            let y = self.apply(&x).expect("dimension matches");
            let next: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.into_iter().map(|v| v / norm).collect();
            let done = (next - lambda).abs() <= 1e-15 * next;
            lambda = next;
            if done {
                break;
            }
        }
        lambda
    }
}

/// `|N(v)|` in `Γ_m` by direct bitmask count (the loop at 0 included).
pub fn gamma_degree(m: usize, v: usize) -> usize {
    (0..1usize << m).filter(|u| u & v == 0).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneserAudit {
    pub m: usize,
    pub phi_power: f64,
    pub exact_delta: Option<f64>,
    pub exact_rho: Option<f64>,
    /// `||A_m||_Delta m^(1/4) / phi^m`.
    pub r_delta: Option<f64>,
    /// `||A_m||_P sqrt(m) / phi^m`.
    pub r_rho: Option<f64>,
    pub witness_delta: f64,
    pub witness_rho: f64,
    /// `||A_m 1|| / ||1|| = (5/2)^(m/2)`.
    pub full_set_delta: f64,
    /// `1^t A_m 1 / 2^m = (3/2)^m`.
    pub full_set_rho: f64,
    pub tau_max_scaled: f64,
}

/// Exact discrete norms of `A_m` (when `2^m` fits the caps), constructive
/// witnesses, full-set values and the scaled `tau` maximum.
pub fn kneser_norm_audit(m: usize, caps: &OracleCaps, opts: &SolverOptions) -> Result<KneserAudit> {
    let t = TensorPower::new(m)?;
    let a = t.dense()?;
    let n = t.order();
    let exact_delta = if n <= caps.delta { Some(exact_delta(&a, caps.delta)?.value) } else { None };
    let exact_rho = if n <= caps.rho_real { Some(exact_rho(&a, caps.rho_real, caps.rho_pair)?.value) } else { None };
    let phi_power = t.phi_power;
    let ones = vec![1.0; n];
    let image = t.apply(&ones)?;
    let full_set_delta = (image.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    let full_set_rho = image.iter().sum::<f64>() / n as f64;
    Ok(KneserAudit {
        m,
        phi_power,
        exact_delta,
        exact_rho,
        r_delta: exact_delta.map(|v| v * (m as f64).powf(0.25) / phi_power),
        r_rho: exact_rho.map(|v| v * (m as f64).sqrt() / phi_power),
        witness_delta: delta_witness(&a, opts)?.ratio,
        witness_rho: rho_witness(&a, opts)?.value,
        full_set_delta,
        full_set_rho,
        tau_max_scaled: tau_table(m)?.max_scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::top_two_singular;

    #[test]
    fn first_powers() {
        let a1 = TensorPower::new(1).unwrap().dense().unwrap();
        assert_eq!(a1.data().iter().map(|z| z.re).collect::<Vec<_>>(), vec![1.0, 1.0, 1.0, 0.0]);
        let s = top_two_singular(&a1, &SolverOptions::default()).unwrap().0.value;
        assert!((s - 1.6180339887).abs() < 1e-9);
        let a3 = TensorPower::new(3).unwrap();
        let s = top_two_singular(&a3.dense().unwrap(), &SolverOptions::default()).unwrap().0.value;
        assert!((s - 4.2360679775).abs() < 1e-9);
        assert!((a3.spectral_by_power(500) / a3.phi_power - 1.0).abs() < 1e-12);
        assert!(TensorPower::new(0).is_err() && TensorPower::new(25).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(gamma_degree(2, 0b01), 2);
        for m in 1..=8 {
            let total: usize = (0..1 << m).map(|v| gamma_degree(m, v)).sum();
            assert_eq!(total, 3usize.pow(m as u32));
        }
    }

    #[test]
    fn contraction_matches_direct() {
        for m in 1..=6 {
            let t = TensorPower::new(m).unwrap();
            let x: Vec<f64> = (0..t.order()).map(|i| ((i * 37) % 11) as f64 - 4.5).collect();
            let fast = t.apply(&x).unwrap();
            let slow = t.apply_direct(&x).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn audit_m2() {
        let r = kneser_norm_audit(2, &OracleCaps::default(), &SolverOptions::default()).unwrap();
        assert!((r.full_set_delta - 2.5).abs() < 1e-15);
        assert!((r.full_set_rho - 2.25).abs() < 1e-15);
        let d = r.exact_delta.unwrap();
        assert!(r.witness_delta <= d * (1.0 + 1e-12) && d >= r.full_set_delta);
        assert!(r.exact_rho.unwrap() >= r.full_set_rho);
    }
}
