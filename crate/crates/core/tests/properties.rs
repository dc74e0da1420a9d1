//! Cross-module invariants on random inputs.

use ncconvex::freegrp::{khintchine_ratio, lq_norm_even, GroupPolynomial};
use ncconvex::hyper::{
    growth_tail_estimate, growth_time_bound, khintchine_upper, optimal_time, poisson_ratio, q_zero, rq_value,
    slq_f_second_derivative, GrowthParams,
};
use ncconvex::quadrature::integrate_interval;
use ncconvex::rng::trial_rng;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_cauchy_schwarz(seed in any::<u64>(), rank in 1usize..4, r in 0usize..3) {
        let mut rng = trial_rng(seed, 0);
        let x = GroupPolynomial::random_on_ball(rank, r, &mut rng);
        let y = GroupPolynomial::random_on_ball(rank, r + 1, &mut rng);
        let pairing = x.adjoint().trace_pairing(&y).unwrap().norm();
        prop_assert!(pairing <= x.l2_norm() * y.l2_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn khintchine_bound_dominates(seed in any::<u64>(), rank in 2usize..4, k in 1usize..4, density in 0.05f64..1.0) {
        let x = GroupPolynomial::random_homogeneous(rank, k, density, &mut trial_rng(seed, 1));
        let ratio = khintchine_ratio(&x, 4).unwrap();
        prop_assert!(ratio.powi(2) <= khintchine_upper(k as u32, 4.0).unwrap().powi(2) + 1e-10);
    }

    #[test]
    fn norms_increase_in_q(seed in any::<u64>(), rank in 1usize..3) {
        let x = GroupPolynomial::random_on_ball(rank, 1, &mut trial_rng(seed, 2));
        let n: Vec<f64> = [2, 4, 6].iter().map(|&q| lq_norm_even(&x, q).unwrap()).collect();
        prop_assert!(n[0] <= n[1] * (1.0 + 1e-12) && n[1] <= n[2] * (1.0 + 1e-12));
    }

    #[test]
    fn positive_elements_contract_beyond_optimal_time(seed in any::<u64>(), extra in 0.0f64..1.0) {
        let y = GroupPolynomial::random_on_ball(2, 1, &mut trial_rng(seed, 3));
        let x = y.adjoint().multiply(&y).unwrap();
        for q in [4u32, 6] {
            let t = optimal_time(q as f64) + extra;
            prop_assert!(poisson_ratio(&x, q, t).unwrap() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn growth_bound_never_beats_optimal_time(c in 1.0f64..100.0, rho in 1.0001f64..1e4, q in 2.0001f64..200.0) {
        let g = GrowthParams::new(c, rho).unwrap();
        prop_assert!(growth_time_bound(q, g).unwrap() >= optimal_time(q));
    }

    #[test]
    fn growth_tail_decreases(c in 1.0f64..10.0, rho in 1.01f64..100.0, d in 1e-3f64..5.0, step in 1e-3f64..1.0) {
        let g = GrowthParams::new(c, rho).unwrap();
        let t = rho.ln() + d;
        prop_assert!(growth_tail_estimate(t + step, g).unwrap() < growth_tail_estimate(t, g).unwrap());
    }

    #[test]
    fn slq_second_derivative_is_nonnegative(log_u in -10.0f64..10.0, theta in 0.001f64..0.999) {
        prop_assert!(slq_f_second_derivative(log_u.exp(), theta).unwrap() >= -1e-9);
    }
}

#[test]
fn rq_decreases_above_q0_and_stays_below_one() {
    let q0 = q_zero();
    let grid: Vec<f64> = (0..50).map(|i| q0 + (40.0 - q0) * i as f64 / 49.0).collect();
    let values: Vec<f64> = grid.iter().map(|&q| rq_value(q, 1e-13).unwrap().value_upper).collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0] + 1e-13);
    }
    for i in 0..50 {
        let q = 4.0 + 36.0 * i as f64 / 49.0;
        assert!(rq_value(q, 1e-12).unwrap().value_upper < 1.0, "q = {q}");
    }
}

/// The fourth moment of the k-th Chebyshev polynomial of the second kind
/// under the semicircle law is k + 1, matching `K_{k,4}⁴` from the bound.
#[test]
fn semicircle_chebyshev_moments_match_the_degree_bound() {
    let chebyshev = |k: usize, x: f64| {
        // U_k(x/2) by the three-term recurrence
        let (mut a, mut b) = (1.0, x);
        if k == 0 {
            return a;
        }
        for _ in 1..k {
            let c = x * b - a;
            a = b;
            b = c;
        }
        b
    };
    for k in 1..8 {
        // x = 2 cos φ turns the semicircle density into (2/π) sin² φ dφ on [0, π]
        let m4 = integrate_interval(
            |phi| {
                let s = phi.sin();
                chebyshev(k, 2.0 * phi.cos()).powi(4) * 2.0 / std::f64::consts::PI * s * s
            },
            0.0,
            std::f64::consts::PI,
            1e-13,
        )
        .unwrap();
        let bound = khintchine_upper(k as u32, 4.0).unwrap().powi(4);
        assert!((m4 - (k as f64 + 1.0)).abs() < 1e-10, "k={k}: {m4}");
        assert!((m4 - bound).abs() < 1e-10);
    }
}
