use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{norm1, pairwise_sum, ComplexMatrix, ComplexVector};
use super::svd::{top_singular, SingularPair, SolverOptions};
use crate::error::{Error, Result};

/// Relative tolerance absorbing iterative-solver error in norm inequalities.
pub const PROFILE_REL_EPS: f64 = 1e-9;

/// Relative threshold under which `sigma2 / sigma1` counts as numerical rank one.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Largest absolute column sum, `||A||_1`.
pub fn col_norm(a: &ComplexMatrix) -> f64 {
    (0..a.cols())
        .map(|j| {
            let abs: Vec<f64> = (0..a.rows()).map(|i| a.get(i, j).norm()).collect();
            pairwise_sum(&abs)
        })
        .fold(0.0, f64::max)
}

/// Largest absolute row sum, `||A||_inf`.
pub fn row_norm(a: &ComplexMatrix) -> f64 {
    (0..a.rows()).map(|i| norm1(a.row(i))).fold(0.0, f64::max)
}

/// `sqrt(col * row) / spectral`.
pub fn height_from_norms(col: f64, row: f64, spectral: f64) -> Result<f64> {
    if spectral <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok((col * row).sqrt() / spectral)
}

/// Column, row and spectral norms of a matrix together with its height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub rows: usize,
    pub cols: usize,
    pub col_norm: f64,
    pub row_norm: f64,
    pub spectral: f64,
    pub spectral_residual: f64,
    pub iterations: usize,
    pub height: f64,
}

impl NormProfile {
    pub fn compute(a: &ComplexMatrix, opts: &SolverOptions) -> Result<Self> {
        Self::from_top(a, &top_singular(a, opts)?)
    }

    /// Profile from an already computed top singular triplet of `a`.
    pub fn from_top(a: &ComplexMatrix, top: &SingularPair) -> Result<Self> {
        let col = col_norm(a);
        let row = row_norm(a);
        Ok(Self {
            rows: a.rows(),
            cols: a.cols(),
            col_norm: col,
            row_norm: row,
            spectral: top.value,
            spectral_residual: top.residual,
            iterations: top.iterations,
            height: height_from_norms(col, row, top.value)?,
        })
    }

    /// Checks `||A||^2 <= ||A||_1 ||A||_inf`, `||A||_1 <= sqrt(m) ||A||`,
    /// `||A||_inf <= sqrt(n) ||A||` and `1 <= h <= (mn)^(1/4)`, each with
    /// relative slack `eps`.
    pub fn check_inequalities(&self, eps: f64) -> std::result::Result<(), String> {
        let (m, n) = (self.rows as f64, self.cols as f64);
        let s = self.spectral;
        if s * s > self.col_norm * self.row_norm * (1.0 + eps) {
            return Err(format!("spectral^2 {} exceeds col*row {}", s * s, self.col_norm * self.row_norm));
        }
        if self.col_norm > m.sqrt() * s * (1.0 + eps) {
            return Err(format!("col norm {} exceeds sqrt(m)*spectral {}", self.col_norm, m.sqrt() * s));
        }
        if self.row_norm > n.sqrt() * s * (1.0 + eps) {
            return Err(format!("row norm {} exceeds sqrt(n)*spectral {}", self.row_norm, n.sqrt() * s));
        }
        if self.height < 1.0 - eps || self.height > (m * n).powf(0.25) * (1.0 + eps) {
            return Err(format!("height {} outside [1, (mn)^(1/4)]", self.height));
        }
        Ok(())
    }
}

/// Height of `A` from an already computed profile.
pub fn height(a: &ComplexMatrix, profile: &NormProfile) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    height_from_norms(profile.col_norm, profile.row_norm, profile.spectral)
}

/// `sqrt(||z||_1 ||z||_inf) / ||z||_2`.
pub fn vector_height(z: &ComplexVector) -> Result<f64> {
    let two = z.norm();
    if two == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((z.norm1() * z.norm_inf()).sqrt() / two)
}

/// Ratio of the largest coordinate modulus to the smallest nonzero one.
pub fn log_diameter(z: &[Complex64]) -> Result<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in z {
        let r = v.norm();
        if r > 0.0 {
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if hi == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(hi / lo)
}

/// Constant matrix whose entries all equal the mean entry of `A`.
pub fn mean_matrix(a: &ComplexMatrix) -> ComplexMatrix {
    let re: Vec<f64> = a.data().iter().map(|z| z.re).collect();
    let im: Vec<f64> = a.data().iter().map(|z| z.im).collect();
    let count = (a.rows() * a.cols()) as f64;
    let mean = Complex64::new(pairwise_sum(&re) / count, pairwise_sum(&im) / count);
    ComplexMatrix::new(a.rows(), a.cols(), vec![mean; a.rows() * a.cols()])
        .expect("mean of finite entries is finite")
}

/// `K = 2 sqrt(||A||_1 ||A||_inf) / sigma2`, an upper bound for the height
/// of `A - mean(A)`.
pub fn centered_height_bound(a: &ComplexMatrix, sigma1: f64, sigma2: f64) -> Result<f64> {
    if sigma2 <= RANK_REL_TOL * sigma1 || sigma2 <= 0.0 {
        return Err(Error::RankDeficient { sigma1, sigma2 });
    }
    Ok(2.0 * (col_norm(a) * row_norm(a)).sqrt() / sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invsqrt(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(1.0 / (((i + 1) * (j + 1)) as f64).sqrt(), 0.0))
            .unwrap()
    }

    fn k4() -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { 0.0 } else { 1.0 }, 0.0)).unwrap()
    }

    #[test]
    fn col_and_row_norms() {
        let j = ComplexMatrix::ones(3, 4).unwrap();
        assert_eq!(col_norm(&j), 3.0);
        assert_eq!(row_norm(&j), 4.0);
        let id = ComplexMatrix::identity(5).unwrap();
        assert_eq!(col_norm(&id), 1.0);
        assert_eq!(row_norm(&id), 1.0);
        // sum_{i<=4} i^{-1/2}
        let expected = 1.0 + 0.5f64.sqrt() + (1.0f64 / 3.0).sqrt() + 0.5;
        assert!((col_norm(&invsqrt(4)) - expected).abs() < 1e-14);
        assert!((row_norm(&invsqrt(4)) - 2.7844571).abs() < 1e-7);
    }

    #[test]
    fn hermitian_row_equals_col() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, -1.0),
                Complex64::new(2.0, 1.0),
                Complex64::new(-3.0, 0.0),
            ],
        )
        .unwrap();
        assert!(a.is_hermitian());
        assert_eq!(col_norm(&a), row_norm(&a));
    }

    #[test]
    fn heights() {
        let opts = SolverOptions::default();
        let p = NormProfile::compute(&ComplexMatrix::identity(4).unwrap(), &opts).unwrap();
        assert!((p.height - 1.0).abs() < 1e-12);
        let p = NormProfile::compute(&ComplexMatrix::ones(3, 5).unwrap(), &opts).unwrap();
        assert!((p.height - 1.0).abs() < 1e-12);
        let a = invsqrt(4);
        let p = NormProfile::compute(&a, &opts).unwrap();
        assert!((p.spectral - 25.0 / 12.0).abs() < 1e-12);
        assert!((height(&a, &p).unwrap() - 2.784_457_050_376_173 / (25.0 / 12.0)).abs() < 1e-12);
        assert!((p.height - 1.3365).abs() < 1e-4);
        assert!(p.check_inequalities(PROFILE_REL_EPS).is_ok());
    }

    #[test]
    fn height_of_zero_matrix_fails() {
        let z = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(matches!(NormProfile::compute(&z, &SolverOptions::default()), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn vector_heights() {
        let ones = ComplexVector::from_real(&[1.0; 16]).unwrap();
        // sqrt(16 * 1) / sqrt(16)
        assert!((vector_height(&ones).unwrap() - 1.0).abs() < 1e-15);
        let e = ComplexVector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(vector_height(&e).unwrap(), 1.0);
        let v = ComplexVector::from_real(&[2.0, 1.0, 1.0]).unwrap();
        assert!((vector_height(&v).unwrap() - (8.0f64).sqrt() / 6.0f64.sqrt()).abs() < 1e-15);
        assert!((vector_height(&v).unwrap() - 1.1547).abs() < 1e-4);
        let zero = ComplexVector::from_real(&[0.0, 0.0]).unwrap();
        assert!(matches!(vector_height(&zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn log_diameters() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(log_diameter(&[c(1.0), c(0.0), c(1.0)]).unwrap(), 1.0);
        assert_eq!(log_diameter(&[c(4.0), c(-1.0)]).unwrap(), 4.0);
        let v = [c(1.0), c(0.5f64.sqrt()), c((1.0f64 / 3.0).sqrt()), c(0.5)];
        assert_eq!(log_diameter(&v).unwrap(), 2.0);
        assert!(matches!(log_diameter(&[c(0.0)]), Err(Error::ZeroVector)));
    }

    #[test]
    fn mean_matrices() {
        let j = ComplexMatrix::ones(3, 2).unwrap();
        assert_eq!(mean_matrix(&j), j);
        let z = ComplexMatrix::zeros(2, 3).unwrap();
        assert_eq!(mean_matrix(&z), z);
        let m = mean_matrix(&k4());
        assert!(m.data().iter().all(|&z| z == Complex64::new(0.75, 0.0)));
    }

    #[test]
    fn centered_bounds() {
        assert!((centered_height_bound(&k4(), 3.0, 1.0).unwrap() - 6.0).abs() < 1e-15);
        let d = ComplexMatrix::diag(&[2.0, 1.0]).unwrap();
        assert_eq!(centered_height_bound(&d, 2.0, 1.0).unwrap(), 4.0);
        let j = ComplexMatrix::ones(3, 3).unwrap();
        let (s1, s2) = super::super::svd::top_two_singular(&j, &SolverOptions::default()).unwrap();
        assert!(matches!(
            centered_height_bound(&j, s1.value, s2.value),
            Err(Error::RankDeficient { .. })
        ));
    }
}
