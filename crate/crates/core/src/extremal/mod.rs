//! Extremal constructions: the rank-one `1/sqrt(ij)` matrix, tensor powers
//! of `[[1, 1], [1, 0]]`, and the binomial and entropy estimates used to
//! bound their discrete norms.

mod entropy;
mod invsqrt;
mod tau;
mod tensor;

pub use entropy::{entropy, entropy_analysis, entropy_prime, entropy_second, f, f_xx, x0, z0, EntropyAnalysis};
pub use invsqrt::{InvSqrt, INVSQRT_DENSE_CAP};
pub use tau::{
    big_ln, binomial, binomial_tail_check, sphere_energy_identity, tau, tau_max_scan, tau_table, BinomialSandwich,
    SphereEnergy, TauTable, SPHERE_MAX_M, TAU_MAX_M,
};
pub use tensor::{gamma_degree, kneser_norm_audit, KneserAudit, TensorPower, PHI, TENSOR_DENSE_CAP, TENSOR_MAX_M};
