//! Dense complex linear algebra: induced norms, heights and the top two
//! singular triplets.

mod io;
mod matrix;
mod norms;
mod svd;

pub use io::{format_matrix, parse_matrix};
pub use matrix::{inner, norm1, norm2, norm_inf, pairwise_sum, ComplexMatrix, ComplexVector};
pub use norms::{
    centered_height_bound, col_norm, height, height_from_norms, log_diameter, mean_matrix, row_norm,
    vector_height, NormProfile, PROFILE_REL_EPS, RANK_REL_TOL,
};
pub use svd::{top_singular, top_two_singular, SingularPair, SolverOptions, DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL};
