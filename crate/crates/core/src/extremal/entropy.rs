//! The binary entropy `H` and the exponent `f(x, y)` controlling
//! `C(m-i, j) C(m-j, i) <= exp(m f(i/m, j/m))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tensor::PHI;
use crate::error::{Error, Result};

/// `(5 - sqrt5) / 10`, the maximizer `x0 = y0` of `f`.
pub fn x0() -> f64 {
    (5.0 - 5f64.sqrt()) / 10.0
}

/// `2 - phi = x0 / (1 - x0)`.
pub fn z0() -> f64 {
    2.0 - PHI
}

/// `-x ln x - (1-x) ln(1-x)`, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() };
    term(x) + term(1.0 - x)
}

/// `H'(z) = ln(1/z - 1)`.
pub fn entropy_prime(z: f64) -> f64 {
    (1.0 / z - 1.0).ln()
}

/// `H''(z) = -1 / (z (1 - z))`.
pub fn entropy_second(z: f64) -> f64 {
    -1.0 / (z * (1.0 - z))
}

/// `(1-x) H(y/(1-x)) + (1-y) H(x/(1-y))` on `x, y >= 0, x + y <= 1`,
/// vanishing at the three corners.
pub fn f(x: f64, y: f64) -> f64 {
    let part = |a: f64, b: f64| if a >= 1.0 { 0.0 } else { (1.0 - a) * entropy((b / (1.0 - a)).min(1.0)) };
    part(x, y) + part(y, x)
}

/// `f(i/n, j/n)` evaluated through the exact ratios `j/(n-i)` and `i/(n-j)`.
fn f_grid(i: usize, j: usize, n: usize) -> f64 {
    let nf = n as f64;
    let part = |a: usize, b: usize| if a == n { 0.0 } else { (n - a) as f64 / nf * entropy(b as f64 / (n - a) as f64) };
    part(i, j) + part(j, i)
}

/// `-(1 - x - y + 2xy) / (x (1 - x) (1 - x - y))`.
pub fn f_xx(x: f64, y: f64) -> f64 {
    -(1.0 - x - y + 2.0 * x * y) / (x * (1.0 - x) * (1.0 - x - y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyAnalysis {
    pub grid_step: f64,
    pub nodes: u64,
    pub x0: f64,
    pub z0: f64,
    /// `f(x0, x0)`.
    pub fmax: f64,
    /// `2 ln phi`.
    pub two_ln_phi: f64,
    /// `H'(z0)`.
    pub h_prime_z0: f64,
    /// Largest `H''` over the interior grid, at most `-4`.
    pub max_h_second: f64,
    /// Largest second difference of `f` along `x` or `y` over interior nodes.
    pub max_second_difference: f64,
    /// Largest analytic `f_xx` over interior nodes, negative.
    pub max_f_xx: f64,
    /// Largest `f(x, y) - (2 ln phi - 2/3 (x - x0)^2)` over the grid, clamped at 0.
    pub grid_margin: f64,
    /// Largest `f` over the grid.
    pub grid_max: f64,
}

#[derive(Clone, Copy)]
struct RowStats {
    margin: f64,
    second: f64,
    fxx: f64,
    fmax: f64,
}

/// Sweeps the grid `{(i, j) / N : i + j <= N}` with `N = round(1/step)`.
pub fn entropy_analysis(grid_step: f64) -> Result<EntropyAnalysis> {
    if !(grid_step > 0.0 && grid_step <= 1e-2) {
        return Err(Error::OutOfRange(format!("grid step must lie in (0, 0.01], got {grid_step}")));
    }
    let n = (1.0 / grid_step).round() as usize;
    let x0 = x0();
    let two_ln_phi = 2.0 * PHI.ln();
    let h = 1.0 / n as f64;
    let rows: Vec<RowStats> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / n as f64;
            let mut s = RowStats { margin: f64::NEG_INFINITY, second: f64::NEG_INFINITY, fxx: f64::NEG_INFINITY, fmax: 0.0 };
            for j in 0..=n - i {
                let v = f_grid(i, j, n);
                s.fmax = s.fmax.max(v);
                s.margin = s.margin.max(v - (two_ln_phi - 2.0 / 3.0 * (x - x0).powi(2)));
                let interior = i > 0 && j > 0 && i + j < n;
                if interior {
                    let dx = f_grid(i + 1, j, n) - 2.0 * v + f_grid(i - 1, j, n);
                    let dy = f_grid(i, j + 1, n) - 2.0 * v + f_grid(i, j - 1, n);
                    s.second = s.second.max(dx).max(dy);
                    s.fxx = s.fxx.max(f_xx(x, j as f64 / n as f64));
                }
            }
            s
        })
        .collect();
    let fold = |g: fn(&RowStats) -> f64| rows.iter().map(g).fold(f64::NEG_INFINITY, f64::max);
    let max_h_second = (1..n).map(|k| entropy_second(k as f64 * h)).fold(f64::NEG_INFINITY, f64::max);
    Ok(EntropyAnalysis {
        grid_step,
        nodes: ((n + 1) * (n + 2) / 2) as u64,
        x0,
        z0: z0(),
        fmax: f(x0, x0),
        two_ln_phi,
        h_prime_z0: entropy_prime(z0()),
        max_h_second,
        max_second_difference: fold(|r| r.second),
        max_f_xx: fold(|r| r.fxx),
        grid_margin: fold(|r| r.margin).max(0.0),
        grid_max: fold(|r| r.fmax),
    })
}
