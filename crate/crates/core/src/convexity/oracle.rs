//! Second derivative of `ψ(t) = ‖a + t b‖_p^p` at `t = 0` for self-adjoint
//! `a` (invertible) and `b`, `1 < p < 2`.
//!
//! Two integral representations are evaluated by quadrature:
//!
//! * general self-adjoint `a`, through the resolvent of `a²`:
//!   `ψ''(0) = p·tr(|a|^{p−2} b²) − (p/2)·c_p ∫₀^∞ s^{p/2−1}
//!   tr[(s+a²)^{-1} C (s+a²)^{-1} C] ds` with `C = ab + ba` and
//!   `c_p⁻¹ = ∫₀^∞ s^{p/2−1}/(s+1) ds`;
//! * positive definite `a`, through the resolvent of `a`:
//!   `ψ''(0) = p·d_p ∫₀^∞ s^{p−1} tr[(s+a)^{-1} b (s+a)^{-1} b] ds` with
//!   `d_p⁻¹ = ∫₀^∞ s^{p−2}/(s+1) ds`.
//!
//! Both traces are evaluated in the eigenbasis of `a`, where the resolvents
//! are diagonal. The independent check is [`psi_finite_difference`], a
//! Richardson-extrapolated central difference of exact eigenvalue sums.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::matalg::{
    abs_selfadjoint, hermitian_eig, random_hermitian, schatten_norm, with_spectrum, ComplexMatrix,
    SchattenExponent, DEFAULT_TOL,
};
use crate::quadrature::{integrate_half_line, Asymptotics};
use crate::report::{Outcome, VerificationReport};
use crate::rng::trial_rng;

/// Smallest admissible `min |λ(a)| / scale` for the oracle.
pub const INVERTIBILITY_FLOOR: f64 = 1e-6;

const QUAD_TOL: f64 = 1e-11;
const CONSTANT_CHECK: f64 = 1e-8;

fn check_p(p: SchattenExponent) -> Result<f64> {
    let pv = p.value();
    if pv >= 2.0 {
        return Err(precondition(format!(
            "the integral representation needs 1 < p < 2, got {pv}"
        )));
    }
    Ok(pv)
}

/// `c_p = 1 / ∫₀^∞ s^{p/2−1}/(s+1) ds`, by quadrature.
///
/// The quadrature value is returned; it is cross-checked against the Beta
/// integral closed form `sin(πp/2)/π` and an error is raised if they differ.
pub fn kernel_constant_resolvent(p: SchattenExponent) -> Result<f64> {
    let pv = check_p(p)?;
    let alpha = pv / 2.0 - 1.0;
    let integral = integrate_half_line(
        |s| s.powf(alpha) / (s + 1.0),
        1.0,
        Asymptotics {
            at_zero: alpha,
            at_infinity: alpha - 1.0,
        },
        QUAD_TOL,
    )?;
    let quad = 1.0 / integral;
    let closed = (PI * pv / 2.0).sin() / PI;
    if (quad - closed).abs() > CONSTANT_CHECK * closed {
        return Err(precondition(format!(
            "c_p self-test failed at p={pv}: quadrature {quad} vs closed form {closed}"
        )));
    }
    Ok(quad)
}

/// `d_p = 1 / ∫₀^∞ s^{p−1}[1/s − 1/(s+1)] ds`, by quadrature, cross-checked
/// against `sin(π(p−1))/π`.
pub fn kernel_constant_positive(p: SchattenExponent) -> Result<f64> {
    let pv = check_p(p)?;
    let alpha = pv - 2.0;
    let integral = integrate_half_line(
        |s| s.powf(alpha) / (s + 1.0),
        1.0,
        Asymptotics {
            at_zero: alpha,
            at_infinity: alpha - 1.0,
        },
        QUAD_TOL,
    )?;
    let quad = 1.0 / integral;
    let closed = (PI * (pv - 1.0)).sin() / PI;
    if (quad - closed).abs() > CONSTANT_CHECK * closed {
        return Err(precondition(format!(
            "d_p self-test failed at p={pv}: quadrature {quad} vs closed form {closed}"
        )));
    }
    Ok(quad)
}

/// `a` and `b` expressed in the eigenbasis of `a`.
struct Eigenframe {
    mu: Vec<f64>,
    /// `|B_ij|²` with `B = V* b V`, row-major.
    b_sq: Vec<f64>,
}

fn eigenframe(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Eigenframe> {
    b.expect_dim(a.dim())?;
    if !b.is_selfadjoint(DEFAULT_TOL) {
        return Err(precondition("b must be self-adjoint"));
    }
    let eig = hermitian_eig(a)?;
    let n = a.dim();
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    let min_abs = eig.eigenvalues.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
    if min_abs <= INVERTIBILITY_FLOOR * scale {
        return Err(precondition(format!(
            "a is too close to singular: min |eigenvalue| = {min_abs:e}"
        )));
    }
    let v = &eig.eigenvectors;
    let bb = &(&v.adjoint() * b) * v;
    let b_sq = (0..n * n).map(|k| bb.get(k / n, k % n).norm_sqr()).collect();
    Ok(Eigenframe {
        mu: eig.eigenvalues,
        b_sq,
    })
}

fn geometric_mean(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp()
}

/// `ψ''(0)` for self-adjoint invertible `a`, self-adjoint `b`, `1 < p < 2`,
/// from the resolvent-of-`a²` representation.
pub fn psi_second_derivative(a: &ComplexMatrix, b: &ComplexMatrix, p: SchattenExponent) -> Result<f64> {
    let pv = check_p(p)?;
    let frame = eigenframe(a, b)?;
    let n = frame.mu.len();
    let mut direct = 0.0;
    let mut pairs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let w = frame.b_sq[i * n + j];
            direct += frame.mu[i].abs().powf(pv - 2.0) * w;
            // |C_ij|² with C = ab + ba in the eigenbasis
            let c_sq = (frame.mu[i] + frame.mu[j]).powi(2) * w;
            if c_sq > 0.0 {
                pairs.push((frame.mu[i] * frame.mu[i], frame.mu[j] * frame.mu[j], c_sq));
            }
        }
    }
    direct *= pv;
    if pairs.is_empty() {
        return Ok(direct);
    }
    let alpha = pv / 2.0 - 1.0;
    let squares: Vec<f64> = frame.mu.iter().map(|m| m * m).collect();
    let integral = integrate_half_line(
        |s| {
            let kernel: f64 = pairs.iter().map(|&(mi, mj, w)| w / ((s + mi) * (s + mj))).sum();
            s.powf(alpha) * kernel
        },
        geometric_mean(&squares),
        Asymptotics {
            at_zero: alpha,
            at_infinity: alpha - 2.0,
        },
        QUAD_TOL,
    )?;
    let c = kernel_constant_resolvent(p)?;
    Ok(direct - 0.5 * pv * c * integral)
}

/// `ψ''(0)` for positive definite `a`, from the resolvent-of-`a`
/// representation.
pub fn psi_second_derivative_positive(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: SchattenExponent,
) -> Result<f64> {
    let pv = check_p(p)?;
    let frame = eigenframe(a, b)?;
    if frame.mu.iter().any(|&m| m <= 0.0) {
        return Err(precondition("a must be positive definite"));
    }
    let n = frame.mu.len();
    let pairs: Vec<(f64, f64, f64)> = (0..n * n)
        .filter(|k| frame.b_sq[*k] > 0.0)
        .map(|k| (frame.mu[k / n], frame.mu[k % n], frame.b_sq[k]))
        .collect();
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let alpha = pv - 1.0;
    let integral = integrate_half_line(
        |s| {
            let kernel: f64 = pairs.iter().map(|&(mi, mj, w)| w / ((s + mi) * (s + mj))).sum();
            s.powf(alpha) * kernel
        },
        geometric_mean(&frame.mu),
        Asymptotics {
            at_zero: alpha,
            at_infinity: alpha - 2.0,
        },
        QUAD_TOL,
    )?;
    Ok(pv * kernel_constant_positive(p)? * integral)
}

/// `ψ(t) = Σ |λ_i(a + t b)|^p` from an eigendecomposition.
fn psi_exact(a: &ComplexMatrix, b: &ComplexMatrix, t: f64, p: f64) -> Result<f64> {
    let m = (a + &b.scale(t)).hermitian_part();
    Ok(hermitian_eig(&m)?.eigenvalues.iter().map(|l| l.abs().powf(p)).sum())
}

/// Richardson-extrapolated central second difference of `ψ` at 0 with
/// steps `h1 > h2`.
pub fn psi_finite_difference(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: SchattenExponent,
    h1: f64,
    h2: f64,
) -> Result<f64> {
    b.expect_dim(a.dim())?;
    let pv = p.value();
    let centre = psi_exact(a, b, 0.0, pv)?;
    let second = |h: f64| -> Result<f64> {
        Ok((psi_exact(a, b, h, pv)? + psi_exact(a, b, -h, pv)? - 2.0 * centre) / (h * h))
    };
    let (d1, d2) = (second(h1)?, second(h2)?);
    let r = (h1 / h2).powi(2);
    Ok((r * d2 - d1) / (r - 1.0))
}

/// Checks `(1/p)‖a‖_p^{2−p} ψ''(0) ≥ (p−1)‖b‖_p² − tol·scale²`.
pub fn df1_check(a: &ComplexMatrix, b: &ComplexMatrix, p: SchattenExponent, tol: f64) -> Result<VerificationReport> {
    let pv = p.value();
    let second = psi_second_derivative(a, b, p)?;
    let lhs = schatten_norm(a, pv).powf(2.0 - pv) * second / pv;
    let rhs = (pv - 1.0) * schatten_norm(b, pv).powi(2);
    let scale = a.op_norm().max(b.op_norm()).max(1.0);
    let mut report = VerificationReport::new("df1-check", 0);
    report.param("p", pv).param("dim", a.dim()).param("tol", tol);
    report.push(Outcome::info("lhs", lhs));
    report.push(Outcome::info("rhs", rhs));
    report.push(Outcome::at_least("margin", lhs - rhs, -tol * scale * scale));
    Ok(report)
}

/// Self-adjoint `a` with Haar eigenbasis and eigenvalues of random sign and
/// modulus uniform in `[0.5, 2]`.
pub fn sample_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let spectrum: Vec<f64> = (0..n)
        .map(|_| {
            let m: f64 = rng.random_range(0.5..2.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect();
    with_spectrum(&spectrum, rng)
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub dim: usize,
    pub p: SchattenExponent,
    pub trials: usize,
    pub seed: u64,
    /// Relative agreement required between quadrature and finite differences.
    pub rel_tol: f64,
    /// Deficit tolerance for the df1 and monotonicity checks.
    pub tol: f64,
}

/// Richardson steps for the finite-difference oracle. Steps of `1e−4` and
/// below are dominated by eigenvalue rounding.
pub const FD_STEPS: (f64, f64) = (1e-2, 1e-3);

struct OracleTrial {
    rel_err: f64,
    small_step_rel_err: f64,
    df1_margin: f64,
    monotone_margin: f64,
    positive_rel_err: f64,
}

fn oracle_trial(cfg: &OracleConfig, trial: usize) -> Result<OracleTrial> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let a = sample_invertible(cfg.dim, &mut rng);
    let b = random_hermitian(cfg.dim, &mut rng);
    let quad = psi_second_derivative(&a, &b, cfg.p)?;
    let fd = psi_finite_difference(&a, &b, cfg.p, FD_STEPS.0, FD_STEPS.1)?;
    let rel_err = (quad - fd).abs() / fd.abs().max(f64::MIN_POSITIVE);
    let fd_small = psi_finite_difference(&a, &b, cfg.p, 1e-3, 1e-4)?;
    let small_step_rel_err = (quad - fd_small).abs() / fd_small.abs().max(f64::MIN_POSITIVE);

    let df1 = df1_check(&a, &b, cfg.p, cfg.tol)?;
    let lhs = df1.outcome("lhs").map(|o| o.value).unwrap_or(f64::NAN);
    let rhs = df1.outcome("rhs").map(|o| o.value).unwrap_or(f64::NAN);
    let scale = a.op_norm().max(b.op_norm()).max(1.0);
    let df1_margin = (lhs - rhs) / (scale * scale);

    let abs_a = abs_selfadjoint(&a)?;
    let at_abs = psi_second_derivative(&abs_a, &b, cfg.p)?;
    // replacing a by |a| enlarges the subtracted integral, so ψ''(0) can only drop
    let monotone_margin = (quad - at_abs) / quad.abs().max(1.0);

    let positive = psi_second_derivative_positive(&abs_a, &b, cfg.p)?;
    let positive_rel_err = (positive - at_abs).abs() / at_abs.abs().max(f64::MIN_POSITIVE);
    Ok(OracleTrial {
        rel_err,
        small_step_rel_err,
        df1_margin,
        monotone_margin,
        positive_rel_err,
    })
}

/// Random `(a, b)` trials comparing the quadrature routes with finite
/// differences, plus df1 and the monotonicity `ψ''_a(0) ≥ ψ''_{|a|}(0)`.
pub fn psi_oracle_campaign(cfg: &OracleConfig) -> Result<VerificationReport> {
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|t| oracle_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let max_rel = trials.iter().map(|t| t.rel_err).fold(0.0, f64::max);
    let max_small = trials.iter().map(|t| t.small_step_rel_err).fold(0.0, f64::max);
    let max_pos = trials.iter().map(|t| t.positive_rel_err).fold(0.0, f64::max);
    let min_df1 = trials.iter().map(|t| t.df1_margin).fold(f64::INFINITY, f64::min);
    let min_mono = trials.iter().map(|t| t.monotone_margin).fold(f64::INFINITY, f64::min);
    let mut report = VerificationReport::new("psi-oracle", cfg.seed);
    report
        .param("dim", cfg.dim)
        .param("p", cfg.p.value())
        .param("trials", cfg.trials)
        .param("tol", cfg.tol);
    report.push(Outcome::at_most("max_rel_err_quadrature_vs_fd", max_rel, cfg.rel_tol));
    // steps 1e-3/1e-4 lose about ε·ψ/h² ≈ 1e-7 to rounding; shown for comparison
    report.push(Outcome::info("max_rel_err_vs_fd_small_steps", max_small));
    report.push(Outcome::at_most("max_rel_err_positive_vs_general", max_pos, cfg.rel_tol));
    report.push(Outcome::at_least("min_df1_margin", min_df1, -cfg.tol));
    report.push(Outcome::at_least("min_abs_monotonicity_margin", min_mono, -cfg.tol));
    Ok(report)
}
