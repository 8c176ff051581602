#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specnorm::extremal::TensorPower;
use specnorm::graph::{adjacency, Graph};
use specnorm::linalg::{norm2, row_norm, top_singular, ComplexMatrix, SolverOptions};

pub struct Case {
    pub name: String,
    pub a: ComplexMatrix,
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn invsqrt(n: usize) -> ComplexMatrix {
    let x: Vec<f64> = (1..=n).map(|i| 1.0 / (i as f64).sqrt()).collect();
    ComplexMatrix::from_fn(n, n, |i, j| c(x[i] * x[j])).unwrap()
}

fn magnitude(rng: &mut ChaCha8Rng, heavy: bool) -> f64 {
    let base: f64 = rng.gen_range(0.05..1.0);
    if heavy {
        base * rng.gen_range(-4.0f64..4.0).exp()
    } else {
        base
    }
}

/// Seeded random matrix: class 0 real signed, 1 nonnegative, 2 complex,
/// 3 sparse signed, 4 Hermitian.
pub fn random_matrix(seed: u64, max_dim: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class = seed % 5;
    let heavy = rng.gen_bool(0.3);
    let m = rng.gen_range(1..=max_dim);
    let n = if class == 4 { m } else { rng.gen_range(1..=max_dim) };
    loop {
        let mut data = vec![Complex64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for j in 0..n {
                if class == 4 && j < i {
                    continue;
                }
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let z = match class {
                    0 => c(sign * magnitude(&mut rng, heavy)),
                    1 => c(magnitude(&mut rng, heavy)),
                    2 => Complex64::from_polar(magnitude(&mut rng, heavy), rng.gen_range(0.0..std::f64::consts::TAU)),
                    3 => {
                        if rng.gen_bool(0.25) {
                            c(sign * magnitude(&mut rng, heavy))
                        } else {
                            c(0.0)
                        }
                    }
                    _ => {
                        if i == j {
                            c(sign * magnitude(&mut rng, heavy))
                        } else if rng.gen_bool(0.5) {
                            Complex64::from_polar(magnitude(&mut rng, heavy), rng.gen_range(0.0..std::f64::consts::TAU))
                        } else {
                            c(sign * magnitude(&mut rng, heavy))
                        }
                    }
                };
                data[i * n + j] = z;
                if class == 4 && j > i {
                    data[j * n + i] = z.conj();
                }
            }
        }
        if data.iter().any(|z| z.norm() > 0.0) {
            return ComplexMatrix::new(m, n, data).unwrap();
        }
    }
}

pub fn fixtures() -> Vec<Case> {
    let mut out = Vec::new();
    let mut push = |name: String, a: ComplexMatrix| out.push(Case { name, a });
    for n in [1, 2, 3, 5, 8] {
        push(format!("I{n}"), ComplexMatrix::identity(n).unwrap());
    }
    for (m, n) in [(1, 1), (3, 4), (4, 4), (6, 2)] {
        push(format!("J{m}x{n}"), ComplexMatrix::ones(m, n).unwrap());
    }
    for n in [2, 4, 8, 16] {
        push(format!("invsqrt{n}"), invsqrt(n));
    }
    for m in 1..=4 {
        push(format!("A_{m}"), TensorPower::new(m).unwrap().dense().unwrap());
    }
    push("K4".into(), adjacency(&Graph::complete(4).unwrap()));
    for leaves in [1, 3, 5, 9] {
        push(format!("star{leaves}"), adjacency(&Graph::star(leaves).unwrap()));
    }
    for n in [2, 3, 5, 8] {
        push(format!("path{n}"), adjacency(&Graph::path(n).unwrap()));
    }
    out
}

/// Fixtures followed by `count` seeded random matrices with sides up to 12.
pub fn corpus(count: u64) -> Vec<Case> {
    let mut out = fixtures();
    for seed in 0..count {
        out.push(Case { name: format!("random{seed}"), a: random_matrix(seed, 12) });
    }
    out
}

/// Unit eigenvector of a Hermitian `A` for an eigenvalue of modulus `||A||`,
/// obtained from a top singular vector by splitting it along `A`.
pub fn top_eigenvector(a: &ComplexMatrix, opts: &SolverOptions) -> (Vec<Complex64>, f64) {
    let top = top_singular(a, opts).unwrap();
    let v = &top.right;
    let av = a.matvec(v);
    let plus: Vec<Complex64> = v.iter().zip(&av).map(|(x, y)| x + y / top.value).collect();
    let minus: Vec<Complex64> = v.iter().zip(&av).map(|(x, y)| x - y / top.value).collect();
    let mut x = if norm2(&plus) >= norm2(&minus) { plus } else { minus };
    let n = norm2(&x);
    x.iter_mut().for_each(|z| *z /= n);
    (x, top.value)
}

pub fn hermitian_k(a: &ComplexMatrix, spectral: f64) -> f64 {
    (row_norm(a) / spectral).max(1.0)
}

pub fn real_vector(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x)).collect()
}

/// Random vector whose nonzero coordinates have moduli in `[1, k]`.
pub fn bounded_diameter(rng: &mut ChaCha8Rng, dim: usize, k: f64, signed: bool) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.15) {
                    return c(0.0);
                }
                let r = (rng.gen::<f64>() * k.ln()).exp().min(k);
                let s = if signed && rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                c(s * r)
            })
            .collect();
        if v.iter().any(|z| z.re != 0.0) {
            return v;
        }
    }
}

/// Random vector with heavy-tailed moduli, real or complex.
pub fn heavy_vector(rng: &mut ChaCha8Rng, dim: usize, complex: bool) -> Vec<Complex64> {
    let spread: f64 = rng.gen_range(0.0..8.0);
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    return c(0.0);
                }
                let r = (rng.gen::<f64>() * spread).exp();
                if complex {
                    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
                } else {
                    c(if rng.gen_bool(0.5) { r } else { -r })
                }
            })
            .collect();
        if v.iter().any(|z| z.norm() > 0.0) {
            return v;
        }
    }
}

pub fn brute_cosine(z: &[Complex64]) -> f64 {
    let n = z.len();
    let nz = norm2(z);
    let mut best = 0.0f64;
    for mask in 1u64..(1 << n) {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, zi) in z.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s += zi;
            }
        }
        best = best.max(s.norm() / (nz * (mask.count_ones() as f64).sqrt()));
    }
    best
}
