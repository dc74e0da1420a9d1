//! Two-point probe of the constant in the two-point inequality.
//!
//! With `x = diag(1, 1)` and `y = diag(t, −t)` under the normalized trace,
//! `‖x ± y‖_p² = (((1+t)^p + (1−t)^p)/2)^{2/p} = 1 + (p−1)t² + O(t⁴)`, so the
//! deficit with constant `c` behaves like `2(p−1−c)t²` near zero.

use super::{bcl_deficit_with_constant, normalized_trace_scaling};
use crate::error::{precondition, Result};
use crate::matalg::{ComplexMatrix, SchattenExponent};
use crate::report::{Outcome, VerificationReport};

/// Ratio bound expected at the smallest grid point when `c = p − 1`.
const VANISHING_RATIO: f64 = 1e-3;
/// Largest `t` at which a violation counts as "near zero".
const VIOLATION_WINDOW: f64 = 0.05;
/// Deficits below `−NOISE` count as violations.
const NOISE: f64 = 1e-13;

/// Deficit with constant `c` at `t` for the two-point family, under the
/// normalized trace.
pub fn two_point_deficit(p: SchattenExponent, c: f64, t: f64) -> Result<f64> {
    let x = ComplexMatrix::identity(2);
    let y = ComplexMatrix::from_real_diag(&[t, -t]);
    let d = bcl_deficit_with_constant(&x, &y, p, c)?;
    Ok(d.deficit * normalized_trace_scaling(2, p))
}

/// Evaluates `deficit(t)/t²` on `t = t_max·k/steps`, `k = steps, …, 1`.
///
/// * `c = p − 1`: passes iff the ratio at the smallest `t` is at most `1e−3`
///   and no deficit is negative.
/// * `c > p − 1`: passes iff some `t ≤ 0.05` on the grid gives a negative
///   deficit, exhibiting that `c` is too large.
/// * `c < p − 1`: passes iff no deficit is negative.
pub fn sharpness_probe(p: SchattenExponent, c: f64, t_max: f64, steps: usize) -> Result<VerificationReport> {
    let pv = p.value();
    if pv > 2.0 {
        return Err(precondition("the sharpness probe is defined for p ≤ 2"));
    }
    if !(c > 0.0) {
        return Err(precondition(format!("constant must be positive, got {c}")));
    }
    if !(t_max > 0.0 && t_max < 1.0) || steps == 0 {
        return Err(precondition("need 0 < t_max < 1 and at least one step"));
    }
    let mut report = VerificationReport::new("sharpness", 0);
    report
        .param("p", pv)
        .param("c", c)
        .param("t_max", t_max)
        .param("steps", steps);

    let mut min_deficit = f64::INFINITY;
    let mut first_violation: Option<f64> = None;
    let mut last_ratio = f64::NAN;
    for k in (1..=steps).rev() {
        let t = t_max * k as f64 / steps as f64;
        let d = two_point_deficit(p, c, t)?;
        min_deficit = min_deficit.min(d);
        if d < -NOISE && t <= VIOLATION_WINDOW {
            first_violation.get_or_insert(t);
        }
        last_ratio = d / (t * t);
    }
    let sharp = pv - 1.0;
    report.push(Outcome::info("t_min", t_max / steps as f64));
    report.push(Outcome::info("min_deficit", min_deficit));
    if (c - sharp).abs() <= 1e-12 {
        report.push(Outcome::at_most("final_ratio", last_ratio.abs(), VANISHING_RATIO));
        report.push(Outcome::at_least("min_deficit_nonnegative", min_deficit, -NOISE));
    } else if c > sharp {
        report.push(Outcome::info("final_ratio", last_ratio));
        report.push(Outcome::at_most(
            "violation_t",
            // 1.0 lies outside every admissible grid and marks "none found"
            first_violation.unwrap_or(1.0),
            VIOLATION_WINDOW,
        ));
    } else {
        report.push(Outcome::info("final_ratio", last_ratio));
        report.push(Outcome::at_least("min_deficit_nonnegative", min_deficit, -NOISE));
    }
    Ok(report)
}
