use super::*;
use crate::condexp::{block_averaging, random_pinching, walsh_expectations};
use crate::matalg::{random_ginibre, random_hermitian, random_psd, selfadjoint_dilation, abs_selfadjoint};
use crate::rng::trial_rng;
use proptest::prelude::*;

fn sp(p: f64) -> SchattenExponent {
    SchattenExponent::new(p).unwrap()
}

fn campaign(dim: usize, p: f64, trials: usize, seed: u64) -> Campaign {
    Campaign {
        dim,
        p: sp(p),
        trials,
        seed,
        tol: 1e-9,
    }
}

#[test]
fn bcl_scalar_and_degenerate_examples() {
    let one = ComplexMatrix::scalar(1.0);
    let d = bcl_deficit(&one, &one, sp(1.5)).unwrap();
    assert!((d.deficit - 1.0).abs() < 1e-14);
    assert_eq!(d.term("|x+y|^2"), Some(4.0));

    let mut rng = trial_rng(1, 0);
    let x = random_ginibre(3, &mut rng);
    for p in [1.2, 2.0, 3.5] {
        let d = bcl_deficit(&x, &ComplexMatrix::zeros(3), sp(p)).unwrap();
        assert!(d.deficit.abs() <= 1e-12 * d.scale * d.scale, "{p}: {}", d.deficit);
    }
    assert!(bcl_deficit(&x, &ComplexMatrix::zeros(2), sp(1.5)).is_err());
}

#[test]
fn orientation_flips_sign_above_two() {
    let x = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    let y = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
    let lo = bcl_deficit(&x, &y, sp(1.5)).unwrap();
    let hi = bcl_deficit(&x, &y, sp(3.0)).unwrap();
    assert_eq!(lo.deficit, lo.raw);
    assert_eq!(hi.deficit, -hi.raw);
    // disjoint supports: ‖x ± y‖² = 2^{2/p}, so raw = 2·2^{2/p} − 2 − 2(p−1)
    for d in [&lo, &hi] {
        let p = d.p.value();
        let expected = 2.0 * 2f64.powf(2.0 / p) - 2.0 - 2.0 * (p - 1.0);
        assert!((d.raw - expected).abs() < 1e-13);
    }
    assert!(lo.deficit > 0.0 && hi.deficit > 0.0);
}

#[test]
fn martingale_examples() {
    let x = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    let d = martingale_deficit(&x, &ExpectationSpec::FullTrace, sp(1.5)).unwrap();
    assert!((d.deficit - 0.5 * 2f64.powf(2.0 / 1.5)).abs() < 1e-13);
    assert_eq!(d.term("|E(x)|^2"), Some(0.0));

    let xd = ComplexMatrix::from_real_diag(&[0.3, -2.0, 1.5]);
    for p in [1.2, 2.5] {
        let d = martingale_deficit(&xd, &ExpectationSpec::Diagonal, sp(p)).unwrap();
        assert!(d.deficit.abs() < 1e-13);
    }
}

#[test]
fn single_step_filtration_equals_martingale() {
    let mut rng = trial_rng(2, 0);
    let x = random_ginibre(4, &mut rng);
    let e = random_pinching(4, &[1, 3], &mut rng).unwrap();
    let f = Filtration::new(4, vec![e.clone(), ExpectationSpec::identity(4)]).unwrap();
    for p in [1.3, 3.0] {
        let a = filtration_deficit(&x, &f, sp(p)).unwrap();
        let b = martingale_deficit(&x, &e, sp(p)).unwrap();
        assert!((a.deficit - b.deficit).abs() < 1e-12);
    }
}

#[test]
fn filtration_fixed_point_and_errors() {
    let x = ComplexMatrix::identity(4).scale(2.5);
    let f = canonical_chain(4).unwrap();
    assert!(filtration_deficit(&x, &f, sp(1.5)).unwrap().deficit.abs() < 1e-12);

    let no_identity = Filtration::new(4, vec![ExpectationSpec::FullTrace, ExpectationSpec::Diagonal]).unwrap();
    assert!(filtration_deficit(&x, &no_identity, sp(1.5)).is_err());

    let reversed = Filtration::new(
        4,
        vec![ExpectationSpec::Diagonal, ExpectationSpec::FullTrace, ExpectationSpec::identity(4)],
    )
    .unwrap();
    assert!(filtration_deficit(&x, &reversed, sp(1.5)).is_err());
}

#[test]
fn canonical_chain_holds_at_p_one_point_five() {
    let f = canonical_chain(4).unwrap();
    for t in 0..50 {
        let x = random_ginibre(4, &mut trial_rng(4, t));
        assert!(filtration_deficit(&x, &f, sp(1.5)).unwrap().holds(1e-9));
    }
}

#[test]
fn sign_pattern_reductions() {
    let mut rng = trial_rng(5, 0);
    let x = random_ginibre(4, &mut rng);
    let e = random_pinching(4, &[2, 2], &mut rng).unwrap();
    let one = sign_pattern_deficit(&x, std::slice::from_ref(&e), sp(1.4)).unwrap();
    let m = martingale_deficit(&x, &e, sp(1.4)).unwrap();
    assert!((one.deficit - m.deficit).abs() < 1e-12);

    let ids = vec![ExpectationSpec::identity(4); 3];
    assert!(sign_pattern_deficit(&x, &ids, sp(1.4)).unwrap().deficit.abs() < 1e-12);

    let too_many = vec![ExpectationSpec::Diagonal; MAX_SIGN_SPECS + 1];
    assert!(sign_pattern_deficit(&x, &too_many, sp(1.4)).is_err());
    assert!(sign_pattern_deficit(&x, &[ExpectationSpec::identity(3)], sp(1.4)).is_err());
}

#[test]
fn walsh_sign_patterns_on_functions() {
    let w = walsh_expectations(2).unwrap();
    for t in 0..50 {
        let mut rng = trial_rng(6, t);
        let g = random_ginibre(4, &mut rng);
        let x = ComplexMatrix::from_fn(4, |i, j| if i == j { g.get(i, i) } else { Default::default() });
        assert!(sign_pattern_deficit(&x, &w, sp(1.5)).unwrap().holds(1e-9));
    }
}

#[test]
fn sign_pattern_at_two_is_pythagoras_for_commuting_walsh() {
    // the four Walsh pieces are orthogonal in L_2 and sum to x
    let w = walsh_expectations(3).unwrap();
    let x = random_ginibre(8, &mut trial_rng(7, 0));
    let d = sign_pattern_deficit(&x, &w, sp(2.0)).unwrap();
    assert!(d.normalized().abs() < 1e-12);
}

#[test]
fn campaigns_pass_at_small_scale() {
    for p in [1.1, 2.0, 3.5] {
        assert!(verify_bcl(&campaign(3, p, 40, 9)).unwrap().passed());
        for kind in SpecKind::ALL {
            let r = verify_martingale(&campaign(4, p, 30, 10), kind).unwrap();
            assert!(r.passed(), "{kind} {p}\n{r}");
        }
        assert!(verify_filtration(&campaign(4, p, 20, 11)).unwrap().passed());
        let r = verify_sign_patterns(&campaign(4, p, 20, 12), 2).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.outcome("walsh_general_min_deficit").is_some());
        if p == 2.0 {
            assert!(r.outcome("pinching_max_abs_deficit").is_some());
        }
    }
}

#[test]
fn campaigns_are_deterministic() {
    let a = verify_martingale(&campaign(5, 1.7, 25, 77), SpecKind::Pinching).unwrap();
    let b = verify_martingale(&campaign(5, 1.7, 25, 77), SpecKind::Pinching).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn campaign_detects_a_wrong_constant() {
    // with constant 1.2·(p−1) the two-point inequality fails near x = 1
    let p = sp(1.5);
    let x = ComplexMatrix::identity(2);
    let y = ComplexMatrix::from_real_diag(&[0.01, -0.01]);
    assert!(bcl_deficit_with_constant(&x, &y, p, 0.6).unwrap().deficit < 0.0);
    assert!(bcl_deficit(&x, &y, p).unwrap().deficit >= 0.0);
}

#[test]
fn kernel_constants_match_closed_forms() {
    for p in [1.05, 1.2, 1.5, 1.8, 1.95] {
        let c = kernel_constant_resolvent(sp(p)).unwrap();
        assert!((c - (std::f64::consts::PI * p / 2.0).sin() / std::f64::consts::PI).abs() < 1e-9);
        let d = kernel_constant_positive(sp(p)).unwrap();
        assert!((d - (std::f64::consts::PI * (p - 1.0)).sin() / std::f64::consts::PI).abs() < 1e-9);
    }
    assert!(kernel_constant_resolvent(sp(2.0)).is_err());
}

#[test]
fn psi_scalar_and_identity_examples() {
    let one = ComplexMatrix::scalar(1.0);
    for p in [1.2, 1.5, 1.8] {
        let expect = p * (p - 1.0);
        let g = psi_second_derivative(&one, &one, sp(p)).unwrap();
        let pos = psi_second_derivative_positive(&one, &one, sp(p)).unwrap();
        assert!((g - expect).abs() < 1e-9 * expect, "{p}: {g}");
        assert!((pos - expect).abs() < 1e-9 * expect, "{p}: {pos}");
        let neg = psi_second_derivative(&ComplexMatrix::scalar(-1.0), &one, sp(p)).unwrap();
        assert!((neg - expect).abs() < 1e-9 * expect);
    }
    let b = random_hermitian(3, &mut trial_rng(8, 0));
    let tr_b2 = crate::matalg::trace(&(&b * &b)).re;
    let g = psi_second_derivative(&ComplexMatrix::identity(3), &b, sp(1.5)).unwrap();
    assert!((g - 0.75 * tr_b2).abs() < 1e-9 * tr_b2);
}

#[test]
fn psi_positive_route_example_matches_finite_differences() {
    let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let q = psi_second_derivative_positive(&a, &b, sp(1.5)).unwrap();
    let fd = psi_finite_difference(&a, &b, sp(1.5), 1e-3, 1e-4).unwrap();
    assert!((q - fd).abs() < 1e-6 * fd.abs(), "{q} vs {fd}");
    // off-diagonal b: ψ''(0) = 2p·Σ (μ_i^{p−1} − μ_j^{p−1})/(μ_i − μ_j) with i ≠ j
    let divided = 2.0 * 1.5 * (2f64.powf(0.5) - 1.0) / (2.0 - 1.0);
    assert!((q - divided).abs() < 1e-9 * divided, "{q} vs {divided}");
}

#[test]
fn psi_general_route_agrees_with_finite_differences() {
    for t in 0..6 {
        let mut rng = trial_rng(9, t);
        let a = sample_invertible(4, &mut rng);
        let b = random_hermitian(4, &mut rng);
        let q = psi_second_derivative(&a, &b, sp(1.5)).unwrap();
        let fd = psi_finite_difference(&a, &b, sp(1.5), 1e-3, 1e-4).unwrap();
        assert!((q - fd).abs() <= 1e-6 * fd.abs(), "{q} vs {fd}");
        // coarser steps escape eigenvalue rounding and agree far more closely
        let coarse = psi_finite_difference(&a, &b, sp(1.5), FD_STEPS.0, FD_STEPS.1).unwrap();
        assert!((q - coarse).abs() <= 1e-7 * coarse.abs(), "{q} vs {coarse}");
    }
}

#[test]
fn psi_routes_agree_on_positive_a() {
    for t in 0..6 {
        let mut rng = trial_rng(10, t);
        let a = &random_psd(4, &mut rng) + &ComplexMatrix::identity(4).scale(0.2);
        let b = random_hermitian(4, &mut rng);
        let g = psi_second_derivative(&a, &b, sp(1.3)).unwrap();
        let pos = psi_second_derivative_positive(&a, &b, sp(1.3)).unwrap();
        assert!((g - pos).abs() <= 1e-6 * pos.abs(), "{g} vs {pos}");
    }
}

#[test]
fn psi_preconditions() {
    let b = ComplexMatrix::identity(2);
    let singular = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    assert!(psi_second_derivative(&singular, &b, sp(1.5)).is_err());
    assert!(psi_second_derivative(&b, &b, sp(2.0)).is_err());
    let indefinite = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    assert!(psi_second_derivative_positive(&indefinite, &b, sp(1.5)).is_err());
    let not_sa = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    assert!(psi_second_derivative(&b, &not_sa, sp(1.5)).is_err());
}

#[test]
fn absolute_value_lowers_psi_on_a_sign_change() {
    // a = diag(1, −1), b = flip: the divided difference of p·sign(x)|x|^{p−1}
    // across opposite signs is p, against p(p−1) for |a| = 1
    let a = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let p = 1.5;
    let g = psi_second_derivative(&a, &b, sp(p)).unwrap();
    let h = psi_second_derivative(&abs_selfadjoint(&a).unwrap(), &b, sp(p)).unwrap();
    assert!((g - 2.0 * p).abs() < 1e-9);
    assert!((h - 2.0 * p * (p - 1.0)).abs() < 1e-9);
    assert!(g > h);
}

#[test]
fn df1_examples() {
    let n = 3usize;
    let id = ComplexMatrix::identity(n);
    for p in [1.2, 1.5, 1.8] {
        let r = df1_check(&id, &id, sp(p), 1e-9).unwrap();
        let lhs = r.outcome("lhs").unwrap().value;
        let rhs = r.outcome("rhs").unwrap().value;
        let nf = n as f64;
        assert!((lhs - nf.powf((2.0 - p) / p) * (p - 1.0) * nf).abs() < 1e-9);
        assert!((rhs - (p - 1.0) * nf.powf(2.0 / p)).abs() < 1e-12);
        assert!((lhs - rhs).abs() < 1e-9);
        assert!(r.passed());

        let t = 0.7;
        let r = df1_check(&ComplexMatrix::scalar(1.0), &ComplexMatrix::scalar(t), sp(p), 1e-9).unwrap();
        let (lhs, rhs) = (r.outcome("lhs").unwrap().value, r.outcome("rhs").unwrap().value);
        assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn oracle_campaign_small() {
    let r = psi_oracle_campaign(&OracleConfig {
        dim: 3,
        p: sp(1.5),
        trials: 8,
        seed: 1,
        rel_tol: 1e-6,
        tol: 1e-9,
    })
    .unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn sharpness_examples() {
    let p = sp(1.5);
    let sharp = sharpness_probe(p, 0.5, 0.05, 100).unwrap();
    assert!(sharp.passed(), "{sharp}");
    let loose = sharpness_probe(p, 0.51, 0.05, 100).unwrap();
    assert!(loose.passed(), "{loose}");
    assert!(loose.outcome("violation_t").unwrap().value <= 0.05);
    let par = sharpness_probe(sp(2.0), 1.0, 0.5, 50).unwrap();
    assert!(par.outcome("min_deficit").unwrap().value.abs() < 1e-14);
    assert!(par.passed());
    assert!(sharpness_probe(sp(3.0), 1.0, 0.5, 10).is_err());
    assert!(sharpness_probe(p, 0.0, 0.5, 10).is_err());
}

#[test]
fn two_point_deficit_matches_taylor_expansion() {
    // ((1+t)^p + (1−t)^p)/2)^{2/p} = 1 + (p−1)t² + κ t⁴ + O(t⁶)
    let p = 1.5;
    let a = p * (p - 1.0) / 2.0;
    let kappa = (2.0 / p) * p * (p - 1.0) * (p - 2.0) * (p - 3.0) / 24.0
        + (2.0 / p) * (2.0 / p - 1.0) / 2.0 * a * a;
    for t in [1e-2, 3e-3] {
        let d = two_point_deficit(sp(p), p - 1.0, t).unwrap();
        let expect = 2.0 * kappa * t.powi(4);
        assert!((d - expect).abs() < 1e-2 * expect, "{d} vs {expect}");
    }
}

#[test]
fn normalized_trace_rescales_deficits() {
    let mut rng = trial_rng(11, 0);
    let x = random_ginibre(3, &mut rng);
    let y = random_ginibre(3, &mut rng);
    let p = sp(1.7);
    let d = bcl_deficit(&x, &y, p).unwrap();
    let normalized = |m: &ComplexMatrix| crate::matalg::schatten_norm_normalized(m, 1.7).powi(2);
    let direct = normalized(&(&x + &y)) + normalized(&(&x - &y)) - 2.0 * normalized(&x) - 2.0 * 0.7 * normalized(&y);
    assert!((d.deficit * normalized_trace_scaling(3, p) - direct).abs() < 1e-12 * d.scale * d.scale);
}

#[test]
fn block_averaging_chain_member_is_expectation() {
    let e = block_averaging(&[2, 2]).unwrap();
    let x = random_ginibre(4, &mut trial_rng(12, 0));
    assert!(martingale_deficit(&x, &e, sp(1.5)).unwrap().holds(1e-9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dilation_preserves_deficit_sign(seed in any::<u64>(), p in 1.05f64..4.0, n in 1usize..4) {
        let mut rng = trial_rng(seed, 0);
        let x = random_ginibre(n, &mut rng);
        let y = random_ginibre(n, &mut rng);
        let (a, b) = selfadjoint_dilation(&x, &y).unwrap();
        let d = bcl_deficit(&x, &y, sp(p)).unwrap();
        let da = bcl_deficit(&a, &b, sp(p)).unwrap();
        prop_assert!(d.holds(1e-9));
        prop_assert!(da.holds(1e-9));
        prop_assert_eq!(d.normalized() >= -1e-9, da.normalized() >= -1e-9);
    }

    #[test]
    fn martingale_endpoint_monotonicity(seed in any::<u64>(), p in 1.05f64..2.0, n in 2usize..5) {
        // f(t) = ‖E x + t(x − E x)‖² − (p−1)t²‖x − E x‖² has f(1) ≥ f(0)
        let mut rng = trial_rng(seed, 1);
        let x = random_ginibre(n, &mut rng);
        let e = SpecKind::Pinching.build(n, &mut rng).unwrap();
        let a = crate::condexp::apply_expectation(&e, &x).unwrap();
        let b = &x - &a;
        let sq = |m: &ComplexMatrix| crate::matalg::schatten_norm(m, p).powi(2);
        let f1 = sq(&x) - (p - 1.0) * sq(&b);
        let f0 = sq(&a);
        prop_assert!(f1 >= f0 - 1e-9 * x.op_norm().max(1.0).powi(2));
    }

    #[test]
    fn psi_is_even_and_quadratic_in_b(seed in any::<u64>(), beta in 0.2f64..3.0) {
        let mut rng = trial_rng(seed, 2);
        let a = sample_invertible(3, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let p = sp(1.6);
        let base = psi_second_derivative(&a, &b, p).unwrap();
        let neg = psi_second_derivative(&a, &b.scale(-1.0), p).unwrap();
        let scaled = psi_second_derivative(&a, &b.scale(beta), p).unwrap();
        prop_assert!((neg - base).abs() <= 1e-9 * base.abs());
        prop_assert!((scaled - beta * beta * base).abs() <= 1e-9 * beta * beta * base.abs());
    }

    #[test]
    fn psi_drops_under_absolute_value(seed in any::<u64>(), p in 1.1f64..1.9) {
        let mut rng = trial_rng(seed, 3);
        let a = sample_invertible(3, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let g = psi_second_derivative(&a, &b, sp(p)).unwrap();
        let h = psi_second_derivative(&abs_selfadjoint(&a).unwrap(), &b, sp(p)).unwrap();
        prop_assert!(g >= h - 1e-9 * g.abs().max(1.0));
    }
}
