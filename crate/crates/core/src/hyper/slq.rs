//! Convexity of `f(θ) = (1 + u − u^θ − u^{1−θ}) / (θ(1−θ))` on `(0, 1)`.
//!
//! The numerator factors as `(1 − u^θ)(1 − u^{1−θ})`, which is evaluated as
//! `expm1(θ log u)·expm1((1−θ) log u)` to avoid cancellation near `u = 1`
//! and near the endpoints.

use crate::error::{precondition, Result};
use crate::quadrature::integrate_interval;
use crate::report::{Outcome, VerificationReport};

const QUAD_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;
const CONVEXITY_TOL: f64 = 1e-9;
/// Relative agreement required between the integral forms and the closed
/// form (for `f`) or scaled second differences (for `f''`).
const FORM_TOL: f64 = 1e-9;
const SECOND_DERIVATIVE_TOL: f64 = 1e-3;

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(precondition(format!("u must be positive and finite, got {u}")));
    }
    Ok(())
}

/// `f` at `θ`, given `θ` and `1 − θ` separately so that both are exact
/// grid values. The expression is symmetric in the two arguments.
pub fn slq_f_split(u: f64, theta: f64, rest: f64) -> f64 {
    let l = u.ln();
    (l * theta).exp_m1() * (l * rest).exp_m1() / (theta * rest)
}

pub fn slq_f(u: f64, theta: f64) -> f64 {
    slq_f_split(u, theta, 1.0 - theta)
}

/// `f(θ) = ∫₀¹ log u · (u^{θ+(1−θ)(1−t)} − u^{θt} + u^{1−θ+θt} − u^{(1−θ)(1−t)}) dt`.
pub fn slq_f_integral(u: f64, theta: f64) -> Result<f64> {
    check_u(u)?;
    let l = u.ln();
    let r = 1.0 - theta;
    integrate_interval(
        |t| {
            l * ((l * (theta + r * (1.0 - t))).exp() - (l * theta * t).exp() + (l * (r + theta * t)).exp()
                - (l * r * (1.0 - t)).exp())
        },
        0.0,
        1.0,
        QUAD_TOL,
    )
}

/// `f''(θ) = ∫₀¹ log(u)³ (t²(u^{θ+(1−θ)(1−t)} − u^{θt}) + (1−t)²(u^{1−θ+θt} − u^{(1−θ)(1−t)})) dt`.
pub fn slq_f_second_derivative(u: f64, theta: f64) -> Result<f64> {
    check_u(u)?;
    let l = u.ln();
    let r = 1.0 - theta;
    integrate_interval(
        |t| {
            let s = 1.0 - t;
            l.powi(3)
                * (t * t * ((l * (theta + r * s)).exp() - (l * theta * t).exp())
                    + s * s * ((l * (r + theta * t)).exp() - (l * r * s).exp()))
        },
        0.0,
        1.0,
        QUAD_TOL,
    )
}

/// Evaluates `f` on `θ_i = i/(N+1)`, `i = 1..=N`, and checks symmetry,
/// nonnegative second differences, and the sign of `f''` from its integral
/// form. The integral forms of `f` and `f''` are also compared with the
/// closed form and with scaled second differences.
pub fn slq_f_convexity(u: f64, grid_size: usize) -> Result<VerificationReport> {
    check_u(u)?;
    if grid_size < 3 {
        return Err(precondition("grid needs at least 3 points"));
    }
    let m = (grid_size + 1) as f64;
    let h = 1.0 / m;
    let values: Vec<f64> = (1..=grid_size)
        .map(|i| slq_f_split(u, i as f64 / m, (grid_size + 1 - i) as f64 / m))
        .collect();

    // independent evaluations at θ and at the mirrored grid point, each
    // with 1 − θ formed by subtraction
    let symmetry = (1..=grid_size)
        .map(|i| {
            let a = slq_f(u, i as f64 / m);
            let b = slq_f(u, (grid_size + 1 - i) as f64 / m);
            (a - b).abs() / a.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let second: Vec<f64> = values.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
    let min_second = second.iter().copied().fold(f64::INFINITY, f64::min);

    let mut min_fpp = f64::INFINITY;
    let mut f_gap: f64 = 0.0;
    let mut fpp_gap: f64 = 0.0;
    for (i, d) in second.iter().enumerate() {
        let theta = (i + 2) as f64 / m;
        let fpp = slq_f_second_derivative(u, theta)?;
        min_fpp = min_fpp.min(fpp);
        fpp_gap = fpp_gap.max((d / (h * h) - fpp).abs() / fpp.abs().max(1.0));
        let fi = slq_f_integral(u, theta)?;
        f_gap = f_gap.max((fi - values[i + 1]).abs() / values[i + 1].abs().max(1.0));
    }

    let mut report = VerificationReport::new("slq", 0);
    report.param("u", u).param("grid_size", grid_size);
    report.push(Outcome::at_most("symmetry_residual", symmetry, SYMMETRY_TOL));
    report.push(Outcome::at_least("min_second_difference", min_second, -CONVEXITY_TOL));
    report.push(Outcome::at_least("min_second_derivative_integral", min_fpp, -CONVEXITY_TOL));
    report.push(Outcome::at_most("integral_form_gap", f_gap, FORM_TOL));
    report.push(Outcome::at_most("second_derivative_gap", fpp_gap, SECOND_DERIVATIVE_TOL));
    Ok(report)
}
