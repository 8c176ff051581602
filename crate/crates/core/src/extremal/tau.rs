//! Exact binomial combinatorics behind the tensor-power norms: the
//! double-binomial sums `tau_m(j)`, Hamming-sphere neighbourhood energies in
//! `Γ_m`, and the entropy sandwich for binomial tails.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropy::entropy;
use super::tensor::PHI;
use crate::error::{Error, Result};

pub const TAU_MAX_M: usize = 3000;
/// Largest `m` for the direct bitmask count in [`sphere_energy_identity`].
pub const SPHERE_MAX_M: usize = 14;

/// `C(n, k)` by the multiplicative formula; every partial product divides exactly.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= (n - i) as u64;
        c /= (i + 1) as u64;
    }
    c
}

/// Natural logarithm of a positive big integer, from its top 64 bits.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_m(m: usize) -> Result<()> {
    if m > TAU_MAX_M {
        return Err(Error::OutOfRange(format!("m = {m} exceeds {TAU_MAX_M}")));
    }
    Ok(())
}

/// `sum_{i=0}^{m-j} C(m-i, j) C(m-j, i)`, walking the terms with
/// `t_{i+1} = t_i (m-i-j)^2 / ((m-i)(i+1))`.
fn tau_unchecked(m: usize, j: usize) -> BigUint {
    let mut term = binomial(m, j);
    let mut total = term.clone();
    for i in 0..m - j {
        let a = (m - i - j) as u64;
        term *= a * a;
        term /= ((m - i) * (i + 1)) as u64;
        total += &term;
    }
    total
}

pub fn tau(m: usize, j: usize) -> Result<BigUint> {
    check_m(m)?;
    if j > m {
        return Err(Error::OutOfRange(format!("j = {j} exceeds m = {m}")));
    }
    Ok(tau_unchecked(m, j))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauTable {
    pub m: usize,
    /// Decimal strings of `tau_m(0..=m)`.
    pub values: Vec<String>,
    pub argmax: usize,
    /// `max_j tau_m(j) sqrt(m) / phi^(2m)`.
    pub max_scaled: f64,
}

/// `ln(max_j tau_m(j)) + ln(m)/2 - 2m ln(phi)`, exponentiated.
fn scaled(m: usize, max: &BigUint) -> f64 {
    (big_ln(max) + 0.5 * (m as f64).ln() - 2.0 * m as f64 * PHI.ln()).exp()
}

pub fn tau_table(m: usize) -> Result<TauTable> {
    check_m(m)?;
    let values: Vec<BigUint> = (0..=m).into_par_iter().map(|j| tau_unchecked(m, j)).collect();
    let argmax = (0..=m).fold(0, |b, j| if values[j] > values[b] { j } else { b });
    Ok(TauTable {
        m,
        max_scaled: scaled(m, &values[argmax]),
        argmax,
        values: values.iter().map(|v| v.to_string()).collect(),
    })
}

/// `ln tau_m(j)` in floating point, from log-factorials and log-sum-exp.
fn tau_ln_approx(m: usize, j: usize, ln_fact: &[f64]) -> f64 {
    let ln_c = |n: usize, k: usize| ln_fact[n] - ln_fact[k] - ln_fact[n - k];
    let logs: Vec<f64> = (0..=m - j).map(|i| ln_c(m - i, j) + ln_c(m - j, i)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

/// `(m, argmax_j, max_scaled)` for every `m` in `lo..=hi`.
///
/// A floating-point pass ranks the `j`; only those within a relative
/// `1e-6` of the approximate maximum are evaluated exactly, which is far
/// wider than the pass's own error.
pub fn tau_max_scan(lo: usize, hi: usize) -> Result<Vec<(usize, usize, f64)>> {
    check_m(hi)?;
    let mut ln_fact = vec![0.0; hi + 1];
    for k in 1..=hi {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    Ok((lo..=hi)
        .into_par_iter()
        .map(|m| {
            let approx: Vec<f64> = (0..=m).map(|j| tau_ln_approx(m, j, &ln_fact)).collect();
            let top = approx.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (argmax, max) = (0..=m)
                .filter(|&j| approx[j] >= top - 1e-6)
                .map(|j| (j, tau_unchecked(m, j)))
                .fold((0, BigUint::zero()), |b, (j, v)| if v > b.1 { (j, v) } else { b });
            (m, argmax, scaled(m.max(1), &max))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereEnergy {
    pub m: usize,
    pub r: usize,
    /// `sum_v |N_{S_r}(v)|^2`, counted over all `v` and all `u in S_r`.
    pub energy: u64,
    pub sphere_size: u64,
    /// `energy / |S_r|`; the division is exact.
    pub lhs: u64,
    /// `sum_i C(m-i, r) C(m-r, i)`.
    pub rhs: u64,
    /// `sum_i C(m, i) C(m-i, r)^2 / C(m, r)`, grouping vertices by weight.
    pub by_weight: u64,
}

fn small_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |c, i| c * (n - i) as u64 / (i + 1) as u64)
}

/// Neighbourhood energy per vertex of the Hamming sphere `S_r` in `Γ_m`,
/// three ways.
pub fn sphere_energy_identity(m: usize, r: usize) -> Result<SphereEnergy> {
    if m > SPHERE_MAX_M || r > m {
        return Err(Error::OutOfRange(format!("need r <= m <= {SPHERE_MAX_M}, got m = {m}, r = {r}")));
    }
    let sphere: Vec<usize> = (0..1usize << m).filter(|u| u.count_ones() as usize == r).collect();
    let energy: u64 = (0..1usize << m)
        .map(|v| {
            let c = sphere.iter().filter(|&&u| u & v == 0).count() as u64;
            c * c
        })
        .sum();
    let size = sphere.len() as u64;
    if !energy.is_multiple_of(size) {
        return Err(Error::InvariantViolation(format!("energy {energy} not divisible by |S_r| = {size}")));
    }
    let rhs = (0..=m - r).map(|i| small_binomial(m - i, r) * small_binomial(m - r, i)).sum();
    let weighted: u64 = (0..=m).map(|i| small_binomial(m, i) * small_binomial(m - i, r).pow(2)).sum();
    Ok(SphereEnergy { m, r, energy, sphere_size: size, lhs: energy / size, rhs, by_weight: weighted / size })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialSandwich {
    pub m: usize,
    pub k: usize,
    /// `m H(k/m) - ln(2m)/2`.
    pub ln_lower: f64,
    pub ln_binomial: f64,
    /// `ln sum_{i<=k} C(m, i)`.
    pub ln_tail: f64,
    /// `m H(k/m)`.
    pub ln_upper: f64,
    pub tail: String,
    /// `lower <= C(m,k) <= tail <= upper`, compared in log space with
    /// relative slack `1e-12` (equality occurs, e.g. `m = 2, k = 1`).
    pub holds: bool,
}

pub fn binomial_tail_check(m: usize, k: usize) -> Result<BinomialSandwich> {
    check_m(m)?;
    if m == 0 || 2 * k > m {
        return Err(Error::OutOfRange(format!("need 1 <= m and 0 <= k <= m/2, got m = {m}, k = {k}")));
    }
    let exponent = m as f64 * entropy(k as f64 / m as f64);
    let c = binomial(m, k);
    let tail = (0..=k).fold(BigUint::zero(), |acc, i| acc + binomial(m, i));
    let ln_lower = exponent - 0.5 * (2.0 * m as f64).ln();
    let ln_binomial = big_ln(&c);
    let ln_tail = big_ln(&tail);
    let le = |a: f64, b: f64| a <= b + 1e-12 * a.abs().max(b.abs()).max(1.0);
    let holds = le(ln_lower, ln_binomial) && c <= tail && le(ln_tail, exponent);
    Ok(BinomialSandwich { m, k, ln_lower, ln_binomial, ln_tail, ln_upper: exponent, tail: tail.to_string(), holds })
}
