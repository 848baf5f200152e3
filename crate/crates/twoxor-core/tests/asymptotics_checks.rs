use proptest::prelude::*;
use twoxor_core::asymptotics::*;
use twoxor_core::census::{connected_count, prob_function_exact};
use twoxor_core::partition::IntegerPartition;
use twoxor_core::rational::{ln_abs, q, q_frac};
use twoxor_core::special::{airy_a, lambda_solve, zcoth_minus_one, zeta_solve};

const GAMMA_1_3: f64 = 2.678_938_534_707_747_6;
const GAMMA_2_3: f64 = 1.354_117_939_426_400_4;

/// Ai by its Maclaurin series, independent of the `A(y, μ)` code.
fn airy_ai(x: f64) -> f64 {
    let c1 = 1.0 / (3f64.powf(2.0 / 3.0) * GAMMA_2_3);
    let c2 = 1.0 / (3f64.powf(1.0 / 3.0) * GAMMA_1_3);
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    let x3 = x * x * x;
    for k in 0..60 {
        f += tf;
        g += tg;
        let k = k as f64;
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    }
    c1 * f - c2 * g
}

#[test]
fn airy_values_at_zero() {
    let a1 = 3f64.powf(-2.0 / 3.0) / GAMMA_2_3;
    let a0 = 3f64.powf(-1.0 / 3.0) / GAMMA_1_3;
    assert!((airy_a(1.0, 0.0) - a1).abs() < 1e-12);
    assert!((airy_a(0.0, 0.0) - a0).abs() < 1e-12);
    assert!((airy_a(1.0, 0.0) - 0.355_028_053_887_817_2).abs() < 1e-12);
}

#[test]
fn airy_relation_away_from_zero() {
    for mu in [-2.0, -1.0, -0.3, 0.5, 1.0, 2.0, 3.0] {
        let lhs = airy_a(1.0, mu);
        let rhs = (-mu * mu * mu / 12.0f64).exp() * airy_ai(mu * mu / 4.0);
        assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1e-3), "μ={mu}: {lhs} vs {rhs}");
    }
}

#[test]
fn cubic_kernel_constants() {
    assert!((k_r(-1).unwrap() - 1.0).abs() < 1e-15);
    assert!((k_r(0).unwrap() - (2.0 * std::f64::consts::PI).sqrt() / 4.0).abs() < 1e-12);
    assert!((k_r(1).unwrap() - 5.0 / 24.0).abs() < 1e-12);
    assert!(k_r(-2).is_err());
    assert_eq!(e_sigma_r(&q_frac(1, 2), 1), q_frac(5, 48));
    assert_eq!(e_sigma_r(&q(2), 0), q(1));
    assert_eq!(e_sigma_r(&q(1), 1), q_frac(5, 24));
}

#[test]
fn critical_sums() {
    let (sum, last) = critical_sum(&q_frac(1, 2), 0.0, DEFAULT_R_MAX);
    assert!(last.abs() < 1e-8 * sum.abs());
    // σ = 1 collapses to the total mass of all multigraphs
    let (one, _) = critical_sum(&q(1), 0.0, 25);
    assert!((one - 1.0).abs() < 1e-7, "{one}");
}

#[test]
fn subcritical_limits() {
    assert!((prob_sat_limit(1000, 375).unwrap() - 0.25f64.powf(0.25)).abs() < 1e-6);
    assert!((prob_sat_limit(1000, 250).unwrap() - 0.840_896_415).abs() < 1e-6);
    assert!(prob_sat_limit(100, 60).is_err());
    let (v, _) = prob_input_limit(1000, 375, DEFAULT_R_MAX, InputCriticalVariant::Derived).unwrap();
    assert!((v.log2() - (-375.0 + 0.5)).abs() < 1e-9);
    let (v, _) = prob_input_limit(1000, 0, DEFAULT_R_MAX, InputCriticalVariant::Derived).unwrap();
    assert!(v.ln.abs() < 1e-12);
}

#[test]
fn lambda_for_ratio_three_halves() {
    let s = lambda_solve(1.5);
    // root of (λ/2) coth(λ/2) = 3/2, by bisection in f64 outside the solver
    let (mut lo, mut hi) = (0.1f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (mid / 2.0) / (mid / 2.0).tanh() < 1.5 { lo = mid } else { hi = mid }
    }
    assert!((s.root - lo).abs() < 1e-10, "{s:?}");
    assert!((s.root - 2.5757).abs() < 1e-4);
    let z = s.root / 2.0;
    assert!((zcoth_minus_one(z) - 0.5).abs() < 1e-12);
}

proptest! {
    #[test]
    fn zeta_bounds(x in 1e-6f64..200.0) {
        let s = zeta_solve(x);
        prop_assert!(s.residual.abs() < 1e-12 * (1.0 + x));
        prop_assert!(s.root > (x * (1.0 + x)).sqrt());
    }

    #[test]
    fn single_block_dispatch_is_total(n in 1usize..5000, extra in 0usize..20000) {
        let m = n - 1 + extra;
        let (v, _) = single_block_asympt(n, m).unwrap();
        prop_assert!(v.ln.is_finite());
    }

    #[test]
    fn two_block_slope_decreases(gamma in 0.05f64..0.95, c in 0.05f64..5.0) {
        let grid: Vec<f64> = (1..40).map(|k| k as f64 / 40.0).collect();
        let slopes: Vec<f64> = grid.iter().map(|&a| two_block_log_slope(gamma, c, a)).collect();
        for w in slopes.windows(2) {
            prop_assert!(w[1] < w[0]);
        }
        let a0 = two_block_optimum(gamma, c);
        prop_assert!(a0.residual < 1e-10);
        prop_assert!(two_block_log_slope(gamma, c, a0.root - 1e-9) > 0.0);
        prop_assert!(two_block_log_slope(gamma, c, a0.root + 1e-9) < 0.0);
    }
}

#[test]
fn symmetric_blocks_split_evenly() {
    for c in [0.2, 1.0, 3.0] {
        assert!((two_block_optimum(0.5, c).root - 0.5).abs() < 1e-9);
    }
    assert!(two_block_log_slope(0.3, 1.0, 1e-9) > 5.0);
    assert!(two_block_log_slope(0.3, 1.0, 1.0 - 1e-9) < -5.0);
}

#[test]
fn saddle_bootstrap_has_a_cubic_remainder() {
    for x in [0.01, 0.02, 0.05] {
        let n = 10_000;
        let kappa = (x * n as f64).round() as usize;
        let (s, _) = saddle_g2(n, kappa).unwrap();
        assert!(s.residual.abs() < 1e-12);
        assert!((s.root - g2_bootstrap(x)).abs() <= 0.02 * x * x * x, "x={x}");
    }
    let (s, _) = saddle_g2(1000, 10).unwrap();
    assert!((s.root - 4.0 / 3.0 * 0.01).abs() < 1e-5);
}

#[test]
fn connected_asymptotics_regimes() {
    let (v, tag) = connected_asympt(49, 50).unwrap();
    assert_eq!(tag, RegimeTag::FixedExcess { r: -1 });
    let exact = ln_abs(&connected_count(49, 50).unwrap());
    assert!((v.ln - exact).abs() < 0.05);
    let n = 50;
    let m = (n as f64 * (n as f64).ln() * 4.0) as usize;
    let (v, tag) = connected_asympt(m, n).unwrap();
    assert_eq!(tag, RegimeTag::Dense);
    assert!((v.ln - ln_multigraph_count(m, n)).abs() < 1e-9);
    assert!(connected_asympt(3, 5).is_err());
    let (_, tag) = connected_asympt(90, 40).unwrap();
    assert_eq!(tag, RegimeTag::LargeExcess);
}

#[test]
fn large_excess_connected_trend() {
    // m = 1.5 n
    let mut prev = f64::INFINITY;
    for n in [20, 40, 80] {
        let m = 3 * n / 2;
        let exact = ln_abs(&connected_count(m, n).unwrap());
        let dev = (ln_connected_large_excess(m as f64, n as f64) - exact).abs();
        assert!(dev < prev, "n={n}: {dev}");
        prev = dev;
    }
    assert!(prev < 0.05);
}

#[test]
fn fixed_function_limit_of_true() {
    // exact Pr(TRUE) = (2n)^{-m} equals the limit form
    for (n, m) in [(5, 3), (40, 17)] {
        let v = prob_fixed_function_limit(&[], m as f64 / n as f64, n).unwrap();
        let exact = prob_function_exact(&IntegerPartition::singletons(n), m).unwrap();
        assert!((v.ln - ln_abs(&exact.prob_per_function)).abs() < 1e-9);
    }
}

#[test]
fn fixed_function_with_a_pair_converges() {
    let mut prev = f64::INFINITY;
    for n in [50usize, 100] {
        let m = 3 * n / 4;
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, n - 2));
        let exact = prob_function_exact(&IntegerPartition::from_parts(&parts), m).unwrap();
        let v = prob_fixed_function_limit(&[(2, 1)], m as f64 / n as f64, n).unwrap();
        let dev = (ln_abs(&exact.prob_per_function) - v.ln).exp() - 1.0;
        assert!(dev.abs() < prev);
        prev = dev.abs();
    }
    assert!(prev < 0.1);
}

#[test]
fn single_block_cases_by_number() {
    let case = |n: usize, m: usize| single_block_asympt(n, m).unwrap().1.number();
    assert_eq!(case(30, 29), 1);
    assert_eq!(case(30, 30), 2);
    assert_eq!(case(30, 33), 3);
    assert_eq!(case(10_000, 10_020), 4);
    assert_eq!(case(100, 150), 5);
    assert_eq!(case(100, 300), 6);
    assert_eq!(case(100, 2000), 7);
    // dense case is 2^{-m}
    let (v, _) = single_block_asympt(100, 2000).unwrap();
    assert!((v.log2() + 2000.0).abs() < 1e-9);
}

#[test]
fn single_block_tree_case() {
    let n = 30;
    let exact = prob_function_exact(&IntegerPartition::single_block(n), n - 1).unwrap();
    let (v, _) = single_block_asympt(n, n - 1).unwrap();
    assert!(((ln_abs(&exact.prob_per_function) - v.ln).exp() - 1.0).abs() < 0.01);
}

#[test]
fn two_block_regimes_against_exact() {
    use TwoBlockRegime::*;
    for (n, p, m, regime, tol) in [
        (60, 2, 62, FixedExcessSingleLarge, 0.2),
        (60, 24, 61, FixedExcessTwoLarge, 0.15),
        (60, 2, 90, LargeExcessSingleLarge, 0.1),
        (60, 30, 90, LargeExcessTwoLarge, 0.1),
    ] {
        let exact = prob_function_exact(&IntegerPartition::from_parts(&[n - p, p]), m).unwrap();
        let v = two_block_asympt(n, p, m, regime).unwrap();
        let ratio = (ln_abs(&exact.prob_per_function) - v.ln).exp();
        assert!((ratio - 1.0).abs() < tol, "{regime:?}: {ratio}");
    }
}

#[test]
fn critical_input_constant_variants() {
    let n = 400;
    let exact = twoxor_core::rational::to_f64(&twoxor_core::census::prob_input_satisfies_exact(n / 2, n).unwrap());
    let (d, _) = prob_input_limit(n, n / 2, DEFAULT_R_MAX, InputCriticalVariant::Derived).unwrap();
    assert!((exact.ln() - d.ln).abs() < 0.2f64.ln_1p());
    let (p, _) = prob_input_limit(n, n / 2, DEFAULT_R_MAX, InputCriticalVariant::AsPrinted).unwrap();
    assert!((exact.ln() - p.ln).abs() > 0.5);
}
