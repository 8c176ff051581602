//! Top two singular triplets by block-2 subspace iteration on `A* A`.
//!
//! Each sweep multiplies the current orthonormal pair `V` by `A* A`,
//! re-orthonormalizes, and rotates the pair onto Ritz vectors of the 2x2
//! projected Gram matrix. Convergence is declared on the Gram residuals
//! `||A* A v_k - sigma_k^2 v_k||`, never on gaps between Ritz values, so
//! repeated or clustered singular values are handled without special cases.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{inner, norm2, ComplexMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, seed: DEFAULT_SEED }
    }
}

/// One singular triplet `(sigma, v, u)` with `A v ~ sigma u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPair {
    pub value: f64,
    /// Unit right singular vector (dimension = columns).
    pub right: Vec<Complex64>,
    /// Unit left singular vector (dimension = rows).
    pub left: Vec<Complex64>,
    /// Upper bound for `||A right - value left||` and for
    /// `||A* A right - value^2 right|| / sigma_1`.
    pub residual: f64,
    pub iterations: usize,
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// `v -= <v, u> u`, applied twice for stability.
fn project_out(v: &mut [Complex64], u: &[Complex64]) {
    for _ in 0..2 {
        let c = inner(v, u);
        v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
    }
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Unit vector orthogonal to `u` (which must be unit), drawn from `rng`.
fn orthogonal_unit(rng: &mut ChaCha8Rng, u: &[Complex64]) -> Vec<Complex64> {
    loop {
        let mut w = random_vector(rng, u.len());
        project_out(&mut w, u);
        if normalize(&mut w) > 1e-8 {
            return w;
        }
    }
}

/// Eigen-decomposition of the 2x2 Hermitian matrix `[[a, b], [conj(b), c]]`.
/// Returns the unitary `Q` (columns are eigenvectors, descending eigenvalues)
/// as `[[q00, q01], [q10, q11]]`.
fn hermitian2_eigvecs(a: f64, b: Complex64, c: f64) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let bn = b.norm();
    if bn == 0.0 {
        return if a >= c { [[one, zero], [zero, one]] } else { [[zero, one], [one, zero]] };
    }
    let half_diff = 0.5 * (a - c);
    let lambda1 = 0.5 * (a + c) + half_diff.hypot(bn);
    // Two algebraically equivalent eigenvector formulas; pick the better conditioned.
    let (mut p, mut q) = if (lambda1 - c).abs() >= (lambda1 - a).abs() {
        (Complex64::new(lambda1 - c, 0.0), b.conj())
    } else {
        (b, Complex64::new(lambda1 - a, 0.0))
    };
    let norm = (p.norm_sqr() + q.norm_sqr()).sqrt();
    p /= norm;
    q /= norm;
    // Second column (-conj(q), conj(p)) is orthogonal to (p, q).
    [[p, -q.conj()], [q, p.conj()]]
}

struct Iterate {
    right: [Vec<Complex64>; 2],
    image: [Vec<Complex64>; 2],
    values: [f64; 2],
    gram_residual: [f64; 2],
}

/// Returns the top two singular triplets `(sigma_1, sigma_2)`.
///
/// For a single-column matrix there is no second right singular direction;
/// the second triplet is then reported with value 0, the first right
/// vector, a left vector orthogonal to the first one, and residual 0.
pub fn top_two_singular(a: &ComplexMatrix, opts: &SolverOptions) -> Result<(SingularPair, SingularPair)> {
    solve(a, opts, false)
}

fn solve(a: &ComplexMatrix, opts: &SolverOptions, top_only: bool) -> Result<(SingularPair, SingularPair)> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {}", opts.tol)));
    }
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = a.cols();
    if n == 1 {
        return Ok(single_column(a, &mut rng));
    }

    let mut v0 = random_vector(&mut rng, n);
    normalize(&mut v0);
    let mut v1 = orthogonal_unit(&mut rng, &v0);
    let mut best: Option<(Iterate, f64)> = None;

    for iter in 1..=opts.max_iter.max(1) {
        let it = rayleigh_ritz(a, [v0, v1]);
        let sigma1 = it.values[0];
        let watched = if top_only { it.gram_residual[0] } else { it.gram_residual[0].max(it.gram_residual[1]) };
        let worst = watched / (sigma1 * sigma1);
        let converged = worst <= opts.tol;

        if converged {
            return Ok(finish(a, &it, iter, &mut rng));
        }
        if iter == opts.max_iter.max(1) {
            let keep = match best {
                Some((prev, w)) if w <= worst => prev,
                _ => it,
            };
            let pairs = finish(a, &keep, iter, &mut rng);
            let residual = pairs.0.residual.max(pairs.1.residual);
            return Err(Error::NonConvergence { iterations: iter, residual, best: Box::new(pairs) });
        }

        // Next block: A* A V, re-orthonormalized.
        let mut z0 = a.adjoint_matvec(&it.image[0]);
        let mut z1 = a.adjoint_matvec(&it.image[1]);
        if normalize(&mut z0) == 0.0 {
            z0 = it.right[0].clone();
        }
        let before = norm2(&z1);
        project_out(&mut z1, &z0);
        let after = normalize(&mut z1);
        if after <= 1e-12 * before.max(f64::MIN_POSITIVE) || after == 0.0 {
            // Numerical rank one: any direction orthogonal to the top one is a
            // valid (near-)null direction.
            z1 = orthogonal_unit(&mut rng, &z0);
        }
        let keep_best = match &best {
            Some((_, w)) => worst < *w,
            None => true,
        };
        if keep_best {
            best = Some((it, worst));
        }
        v0 = z0;
        v1 = z1;
    }
    unreachable!("loop always returns on its final iteration")
}

/// Top triplet only: iteration stops once `sigma_1` is certified, whatever
/// the state of the second direction.
pub fn top_singular(a: &ComplexMatrix, opts: &SolverOptions) -> Result<SingularPair> {
    match solve(a, opts, true) {
        Ok((top, _)) => Ok(top),
        Err(Error::NonConvergence { best, iterations, residual }) => {
            if best.0.residual <= opts.tol * best.0.value {
                Ok(best.0)
            } else {
                Err(Error::NonConvergence { best, iterations, residual })
            }
        }
        Err(e) => Err(e),
    }
}

fn rayleigh_ritz(a: &ComplexMatrix, v: [Vec<Complex64>; 2]) -> Iterate {
    let [v0, v1] = v;
    let w0 = a.matvec(&v0);
    let w1 = a.matvec(&v1);
    let g00 = inner(&w0, &w0).re;
    let g11 = inner(&w1, &w1).re;
    // G = W* W, G[0][1] = <w1, w0>
    let g01 = inner(&w1, &w0);
    let q = hermitian2_eigvecs(g00, g01, g11);
    let combine = |x: &[Complex64], y: &[Complex64], c0: Complex64, c1: Complex64| -> Vec<Complex64> {
        x.iter().zip(y).map(|(a, b)| a * c0 + b * c1).collect()
    };
    let r0 = combine(&v0, &v1, q[0][0], q[1][0]);
    let r1 = combine(&v0, &v1, q[0][1], q[1][1]);
    let i0 = combine(&w0, &w1, q[0][0], q[1][0]);
    let i1 = combine(&w0, &w1, q[0][1], q[1][1]);
    let s0 = norm2(&i0);
    let s1 = norm2(&i1);
    let res = |r: &[Complex64], img: &[Complex64], s: f64| -> f64 {
        let z = a.adjoint_matvec(img);
        let diff: Vec<Complex64> = z.iter().zip(r).map(|(zi, ri)| zi - ri * (s * s)).collect();
        norm2(&diff)
    };
    let gram_residual = [res(&r0, &i0, s0), res(&r1, &i1, s1)];
    let (right, image, values, gram_residual) = if s0 >= s1 {
        ([r0, r1], [i0, i1], [s0, s1], gram_residual)
    } else {
        ([r1, r0], [i1, i0], [s1, s0], [gram_residual[1], gram_residual[0]])
    };
    Iterate { right, image, values, gram_residual }
}

fn finish(a: &ComplexMatrix, it: &Iterate, iterations: usize, rng: &mut ChaCha8Rng) -> (SingularPair, SingularPair) {
    let sigma1 = it.values[0];
    let mut lefts: Vec<Vec<Complex64>> = Vec::with_capacity(2);
    for k in 0..2 {
        let mut u = it.image[k].clone();
        if normalize(&mut u) == 0.0 {
            u = if k == 0 || a.rows() == 1 { lefts.first().cloned().unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]) } else { orthogonal_unit(rng, &lefts[0]) };
        }
        lefts.push(u);
    }
    let mk = |k: usize, left: Vec<Complex64>| {
        let right = it.right[k].clone();
        let av = a.matvec(&right);
        let diff: Vec<Complex64> = av.iter().zip(&left).map(|(x, u)| x - u * it.values[k]).collect();
        SingularPair {
            value: it.values[k],
            residual: (it.gram_residual[k] / sigma1).max(norm2(&diff)),
            right,
            left,
            iterations,
        }
    };
    let second_left = lefts.pop().unwrap();
    let first_left = lefts.pop().unwrap();
    (mk(0, first_left), mk(1, second_left))
}

fn single_column(a: &ComplexMatrix, rng: &mut ChaCha8Rng) -> (SingularPair, SingularPair) {
    let mut u = a.column(0);
    let sigma = normalize(&mut u);
    let right = vec![Complex64::new(1.0, 0.0)];
    let second_left = if a.rows() > 1 { orthogonal_unit(rng, &u) } else { u.clone() };
    let first = SingularPair { value: sigma, right: right.clone(), left: u, residual: 0.0, iterations: 0 };
    let second = SingularPair { value: 0.0, right, left: second_left, residual: 0.0, iterations: 0 };
    (first, second)
}
