use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

use specnorm::extremal::{
    binomial, entropy, entropy_analysis, f, gamma_degree, kneser_norm_audit, tau, tau_max_scan, tau_table, x0,
    InvSqrt, TensorPower, PHI,
};
use specnorm::linalg::{top_singular, SolverOptions};
use specnorm::oracle::OracleCaps;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_product_matches_direct(m in 1usize..8, seed in proptest::collection::vec(-3.0f64..3.0, 256)) {
        let t = TensorPower::new(m).unwrap();
        let x = &seed[..t.order()];
        let fast = t.apply(x).unwrap();
        let direct = t.apply_direct(x).unwrap();
        for (a, b) in fast.iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn degree_is_power_of_two(m in 0usize..10, v in any::<usize>()) {
        let v = v % (1 << m);
        prop_assert_eq!(gamma_degree(m, v), 1 << (m - v.count_ones() as usize));
    }

    #[test]
    fn entropy_symmetric(x in 0.0f64..=1.0) {
        prop_assert!((entropy(x) - entropy(1.0 - x)).abs() <= 1e-15);
        prop_assert!(entropy(x) <= 2f64.ln() + 1e-15);
    }

    #[test]
    fn tau_matches_defining_sum(m in 0usize..40, j in 0usize..40) {
        prop_assume!(j <= m);
        let direct = (0..=m - j).fold(BigUint::zero(), |acc, i| acc + binomial(m - i, j) * binomial(m - j, i));
        prop_assert_eq!(tau(m, j).unwrap(), direct);
    }
}

#[test]
fn dense_tensor_entries_and_norm() {
    let opts = SolverOptions::default();
    for m in 1..=5 {
        let t = TensorPower::new(m).unwrap();
        let a = t.dense().unwrap();
        for u in 0..t.order() {
            for v in 0..t.order() {
                assert_eq!(a.get(u, v).re == 1.0, u & v == 0);
            }
        }
        let s = top_singular(&a, &opts).unwrap().value;
        assert!((s - PHI.powi(m as i32)).abs() < 1e-9 * s);
        assert!((t.spectral_by_power(1000) - PHI.powi(m as i32)).abs() < 1e-9 * s);
    }
}

#[test]
fn kneser_audit_small_orders() {
    let opts = SolverOptions::default();
    for m in 1..=4 {
        let a = kneser_norm_audit(m, &OracleCaps::default(), &opts).unwrap();
        let delta = a.exact_delta.unwrap();
        let rho = a.exact_rho.unwrap();
        assert!(a.witness_delta <= delta * (1.0 + 1e-12));
        assert!(a.witness_rho <= rho * (1.0 + 1e-12));
        assert!(rho <= delta * (1.0 + 1e-12) && delta <= a.phi_power * (1.0 + 1e-12));
        assert!((a.full_set_delta - 2.5f64.powf(m as f64 / 2.0)).abs() < 1e-9);
        assert!((a.full_set_rho - 1.5f64.powi(m as i32)).abs() < 1e-9);
        assert!(a.full_set_delta <= delta * (1.0 + 1e-12));
    }
    let a = kneser_norm_audit(5, &OracleCaps::default(), &opts).unwrap();
    assert!(a.exact_delta.is_none() && a.exact_rho.is_none());
    assert!(a.witness_delta <= a.phi_power * (1.0 + 1e-12));
}

#[test]
fn tau_tables_agree_with_scan() {
    let scan = tau_max_scan(1, 40).unwrap();
    for (m, argmax, scaled) in scan {
        let t = tau_table(m).unwrap();
        assert_eq!(t.argmax, argmax);
        assert!((t.max_scaled - scaled).abs() <= 1e-12 * scaled);
    }
}

#[test]
fn saddle_point_constants() {
    assert!((x0() - (5.0 - 5f64.sqrt()) / 10.0).abs() < 1e-15);
    assert!((f(x0(), x0()) - 2.0 * PHI.ln()).abs() < 1e-12);
    let e = entropy_analysis(1e-2).unwrap();
    assert!(e.grid_margin <= 1e-10);
    assert!(e.grid_max <= 2.0 * PHI.ln() + 1e-12);
}

#[test]
fn invsqrt_sharpness_small() {
    for n in [4, 16, 256] {
        let a = InvSqrt::new(n).unwrap();
        let (d, db) = a.delta_sharpness();
        let (r, rb) = a.rho_sharpness();
        assert!(d < db && r < rb);
        assert!(r <= d * (1.0 + 1e-12) && d <= a.spectral * (1.0 + 1e-12));
    }
    assert!(InvSqrt::new(3).is_err());
}
