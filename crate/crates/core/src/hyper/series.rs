//! Khintchine-type upper bounds and the certification series `R_q`.

use crate::error::{precondition, Error, Result};
use crate::report::{Outcome, VerificationReport};

/// Terms summed before [`rq_value`] gives up.
pub const MAX_TERMS: usize = 1_000_000;
/// Iteration cap for the bisection in [`epsilon_zero`].
pub const BISECTION_STEPS: usize = 60;

/// Upper bound for the best constant in `‖x‖_q ≤ K ‖x‖₂` over polynomials
/// supported on `S_k`: `(k+1)^{1−3/q}` for `q ≥ 4` and `(k+1)^{1/2−1/q}`
/// for `2 ≤ q ≤ 4`. Both branches give `(k+1)^{1/4}` at `q = 4`.
pub fn khintchine_upper(k: u32, q: f64) -> Result<f64> {
    Ok((k as f64 + 1.0).powf(exponent(q)?))
}

fn exponent(q: f64) -> Result<f64> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(precondition(format!("q must be finite and at least 2, got {q}")));
    }
    Ok(if q >= 4.0 { 1.0 - 3.0 / q } else { 0.5 - 1.0 / q })
}

/// Partial sum of a positive series together with a certified bound on
/// what was left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesBound {
    pub q: f64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// Index `K` of the last term included.
    pub terms_used: usize,
    /// `partial_sum + tail_bound`, the only value ever reported.
    pub value_upper: f64,
}

/// Term `k ≥ 2` of `R_q`: `(q−1) K_{k,q}² (q−1)^{−k}`.
pub fn rq_term(k: u32, q: f64) -> Result<f64> {
    if k < 2 {
        return Err(precondition("the series starts at k = 2"));
    }
    Ok((q - 1.0) * khintchine_upper(k, q)?.powi(2) * (q - 1.0).powi(-(k as i32)))
}

/// `R_q = (q−1) Σ_{k≥2} K_{k,q}² (q−1)^{−k}` with `K_{k,q}` from
/// [`khintchine_upper`], summed until the geometric tail majorant drops
/// below `tol`.
///
/// The term ratio `t_{k+1}/t_k = ((k+2)/(k+1))^{2α}/(q−1)` decreases in `k`,
/// so once `r = t_{K+1}/t_K < 1` the tail after `K` is at most `t_K r/(1−r)`.
pub fn rq_value(q: f64, tol: f64) -> Result<SeriesBound> {
    if !(q > 2.0) {
        return Err(precondition(format!("R_q needs q > 2, got {q}")));
    }
    if !(tol > 0.0) {
        return Err(precondition("tolerance must be positive"));
    }
    let two_alpha = 2.0 * exponent(q)?;
    let log_qm1 = (q - 1.0).ln();
    let mut partial = 0.0;
    for k in 2..MAX_TERMS + 2 {
        let kf = k as f64;
        let term = (two_alpha * (kf + 1.0).ln() - (kf - 1.0) * log_qm1).exp();
        partial += term;
        let ratio = ((kf + 2.0) / (kf + 1.0)).powf(two_alpha) / (q - 1.0);
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio);
            if tail <= tol {
                return Ok(SeriesBound {
                    q,
                    partial_sum: partial,
                    tail_bound: tail,
                    terms_used: k,
                    value_upper: partial + tail,
                });
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "R_q at q={q} did not reach tolerance {tol:e} within {MAX_TERMS} terms"
    )))
}

/// `√(3 log 3)(√(3 log 3) + √(3 log 3 − 2))`, the larger root of
/// `6(q−1)/q² = 1/log 3`.
pub fn q_zero() -> f64 {
    let a = 3.0 * 3f64.ln();
    a.sqrt() * (a.sqrt() + (a - 2.0).sqrt())
}

/// `|6(q−1)/q² − (k−1)/log(k+1)|` at `k = 2`.
pub fn q_zero_residual(q: f64) -> f64 {
    (6.0 * (q - 1.0) / (q * q) - 1.0 / 3f64.ln()).abs()
}

/// Published value of `q₀` and the accepted distance from it.
pub const Q_ZERO_PUBLISHED: f64 = 5.36244;
const Q_ZERO_WINDOW: f64 = 1e-5;
/// Lower edge of the window accepted for the computed `R_4`.
pub const R4_FLOOR: f64 = 0.9290;

/// Report for a single `R_q`. At `q = 4` the value is compared with the
/// published bound; for other `q ≥ 4` it must stay below 1.
pub fn rq_report(q: f64, tol: f64) -> Result<VerificationReport> {
    let s = rq_value(q, tol)?;
    let mut report = VerificationReport::new("rq", 0);
    report.param("q", q).param("tol", tol);
    report.push(Outcome::info("partial_sum", s.partial_sum));
    report.push(Outcome::info("tail_bound", s.tail_bound));
    report.push(Outcome::info("terms_used", s.terms_used as f64));
    if q == 4.0 {
        report.push(Outcome::at_most("value_upper", s.value_upper, R4_PUBLISHED + PUBLISHED_SLACK));
        report.push(Outcome::at_least("value_upper_floor", s.value_upper, R4_FLOOR));
    } else if q >= 4.0 {
        report.push(Outcome::at_most("value_upper", s.value_upper, 1.0));
    } else {
        report.push(Outcome::info("value_upper", s.value_upper));
    }
    Ok(report)
}

/// `q₀`, the residual of its defining equation, and the `k = 3` criterion
/// `6(q−1)/q² ≤ 2/log 4` at `q = 4`.
pub fn q_zero_report() -> VerificationReport {
    let q0 = q_zero();
    let mut report = VerificationReport::new("q0", 0);
    report.push(Outcome::within("q0", q0, Q_ZERO_PUBLISHED, Q_ZERO_WINDOW));
    report.push(Outcome::at_most("k2_residual", q_zero_residual(q0), 1e-9));
    report.push(Outcome::at_most("k3_criterion_at_4", 6.0 * 3.0 / 16.0, 2.0 / 4f64.ln()));
    report
}

/// Published upper value for `R_4` and for the `k = 2` increment between
/// `q = 4` and `q₀`; comparisons allow `1e−5` in the safe direction.
pub const R4_PUBLISHED: f64 = 0.92952;
pub const BRIDGE_PUBLISHED: f64 = 0.02613;
pub const PUBLISHED_SLACK: f64 = 1e-5;

/// `3^{2(1−3/q₀)}/(q₀−1) − 3^{1/2}/3`: the growth of the `k = 2` term of
/// `R_q` from `q = 4` to `q = q₀`.
pub fn bridge_value() -> f64 {
    let q0 = q_zero();
    3f64.powf(2.0 * (1.0 - 3.0 / q0)) / (q0 - 1.0) - 3f64.sqrt() / 3.0
}

/// `R_4` upper value, the `k = 2` bridge between `q = 4` and `q₀`, and
/// their sum staying below 1.
pub fn bridge_check() -> Result<VerificationReport> {
    let r4 = rq_value(4.0, 1e-12)?;
    let bridge = bridge_value();
    let mut report = VerificationReport::new("bridge", 0);
    report.push(Outcome::at_most("r4_value_upper", r4.value_upper, R4_PUBLISHED + PUBLISHED_SLACK));
    report.push(Outcome::at_most("bridge", bridge, BRIDGE_PUBLISHED + PUBLISHED_SLACK));
    report.push(Outcome::at_most("r4_plus_published_bridge", r4.value_upper + BRIDGE_PUBLISHED, 1.0 - f64::EPSILON));
    report.push(Outcome::at_most("r4_plus_bridge", r4.value_upper + bridge, 1.0 - f64::EPSILON));
    Ok(report)
}

/// `4 − q*` where `q* ∈ (2, 4)` solves `R_q = 1` for the `q ≤ 4` branch,
/// located by bisection to within `tol`.
pub fn epsilon_zero(tol: f64) -> Result<f64> {
    if !(1e-12..=0.1).contains(&tol) {
        return Err(precondition(format!("tolerance must lie in [1e-12, 0.1], got {tol}")));
    }
    let series_tol = (tol * 1e-3).max(1e-14);
    let excess = |q: f64| rq_value(q, series_tol).map(|s| s.value_upper - 1.0);
    let (mut lo, mut hi) = (2.05, 4.0);
    let (f_lo, f_hi) = (excess(lo)?, excess(hi)?);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoConvergence(format!(
            "no sign change of R_q − 1 on [{lo}, {hi}]: {f_lo:e}, {f_hi:e}"
        )));
    }
    for _ in 0..BISECTION_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // hi is the smallest certified point with R_q < 1
    Ok(4.0 - hi)
}

/// Report wrapper for [`epsilon_zero`] with the bracketing checks.
pub fn epsilon_zero_check(tol: f64) -> Result<VerificationReport> {
    let eps = epsilon_zero(tol)?;
    let refined = epsilon_zero((tol / 10.0).max(1e-12))?;
    let mut report = VerificationReport::new("eps0", 0);
    report.param("tol", tol);
    report.push(Outcome::within("eps0", eps, 0.18, 0.02));
    report.push(Outcome::at_most("r_after_root", rq_value(4.0 - eps + 0.01, 1e-12)?.value_upper, 1.0));
    report.push(Outcome::at_least("r_before_root", rq_value(4.0 - eps - 0.05, 1e-12)?.value_upper, 1.0));
    report.push(Outcome::at_most("refinement_shift", (eps - refined).abs(), tol));
    Ok(report)
}

/// `R_q` on an even grid of `q`. Rows with `q ≥ 4` must stay below 1; rows
/// with `q ≥ q₀` must not increase.
pub fn rq_table(q_min: f64, q_max: f64, points: usize) -> Result<VerificationReport> {
    if !(q_min > 2.0 && q_max >= q_min) || points == 0 {
        return Err(precondition("need 2 < q_min ≤ q_max and at least one point"));
    }
    let q0 = q_zero();
    let mut report = VerificationReport::new("rq-table", 0);
    report.param("qmin", q_min).param("qmax", q_max).param("points", points);
    let mut prev: Option<f64> = None;
    let mut worst_rise = 0.0f64;
    for i in 0..points {
        let q = if points == 1 {
            q_min
        } else {
            q_min + (q_max - q_min) * i as f64 / (points - 1) as f64
        };
        let s = rq_value(q, 1e-12)?;
        let name = format!("R(q={q:.6})");
        if q >= 4.0 {
            report.push(Outcome::at_most(name, s.value_upper, 1.0));
        } else {
            report.push(Outcome::info(name, s.value_upper));
        }
        if q >= q0 {
            if let Some(p) = prev {
                worst_rise = worst_rise.max(s.value_upper - p);
            }
            prev = Some(s.value_upper);
        }
    }
    report.push(Outcome::at_most("max_rise_above_q0", worst_rise, 1e-12));
    Ok(report)
}
