//! Time bound for groups of exponential growth.
//!
//! A length function `ψ` satisfies the growth condition with `(C, ρ)` when
//! `|{g : ψ(g) ≤ R}| ≤ C ρ^R` for every `R > 0`.

use crate::error::{precondition, Result};
use crate::report::{Outcome, VerificationReport};

use super::direct::optimal_time;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthParams {
    c: f64,
    rho: f64,
}

impl GrowthParams {
    /// Requires `C ≥ 1` and `ρ > 1`. Letting `R → 0` in the growth condition
    /// (the identity is always counted) forces `C ≥ 1`.
    pub fn new(c: f64, rho: f64) -> Result<Self> {
        if !(c >= 1.0) || !c.is_finite() {
            return Err(precondition(format!(
                "growth constant C must be finite and at least 1 (the identity alone gives C ≥ 1), got {c}"
            )));
        }
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(precondition(format!("growth rate must be finite and exceed 1, got {rho}")));
        }
        Ok(GrowthParams { c, rho })
    }

    /// Word length on `F_n`, `n ≥ 2`: `|B_R| = (n(2n−1)^R − 1)/(n−1)`, so
    /// `C = n/(n−1)` and `ρ = 2n−1`.
    pub fn free_group(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(precondition("free group growth needs rank at least 2"));
        }
        let n = rank as f64;
        Self::new(n / (n - 1.0), 2.0 * n - 1.0)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// `(q−2)/q · log√(2Cρ) + log√(q−1)`.
pub fn growth_first_branch(q: f64, g: GrowthParams) -> f64 {
    (q - 2.0) / q * (2.0 * g.c * g.rho).sqrt().ln() + optimal_time(q)
}

/// `max((q−2)/q · log√(2Cρ) + log√(q−1), log ρ)`.
pub fn growth_time_bound(q: f64, g: GrowthParams) -> Result<f64> {
    if !(q > 2.0) || !q.is_finite() {
        return Err(precondition(format!("q must be finite and exceed 2, got {q}")));
    }
    Ok(growth_first_branch(q, g).max(g.rho.ln()))
}

/// `2C e^{−(2t − log ρ)}`, majorizing `Σ_{k≥1} e^{−2t n_k} |S_k|` for
/// `t > log ρ`.
pub fn growth_tail_estimate(t: f64, g: GrowthParams) -> Result<f64> {
    check_tail_time(t, g)?;
    Ok(2.0 * g.c * (-(2.0 * t - g.rho.ln())).exp())
}

/// `2C t/(2t − log ρ) · e^{−(2t − log ρ)}`, the sharper intermediate form.
pub fn growth_tail_integral_form(t: f64, g: GrowthParams) -> Result<f64> {
    check_tail_time(t, g)?;
    let gap = 2.0 * t - g.rho.ln();
    Ok(2.0 * g.c * t / gap * (-gap).exp())
}

fn check_tail_time(t: f64, g: GrowthParams) -> Result<()> {
    if !(t > g.rho.ln()) {
        return Err(precondition(format!("tail estimate needs t > log ρ = {}, got {t}", g.rho.ln())));
    }
    Ok(())
}

/// `Σ_{k≥1} e^{−2tk} |S_k|` for word length on `F_n`, in closed form
/// `2n e^{−2t} / (1 − (2n−1) e^{−2t})`.
pub fn free_group_tail_sum(rank: usize, t: f64) -> f64 {
    let n = rank as f64;
    let z = (-2.0 * t).exp();
    2.0 * n * z / (1.0 - (2.0 * n - 1.0) * z)
}

pub fn growth_bound_report(q: f64, g: GrowthParams) -> Result<VerificationReport> {
    let bound = growth_time_bound(q, g)?;
    let mut report = VerificationReport::new("growth-bound", 0);
    report.param("q", q).param("C", g.c).param("rho", g.rho);
    report.push(Outcome::info("first_branch", growth_first_branch(q, g)));
    report.push(Outcome::info("log_rho", g.rho.ln()));
    report.push(Outcome::info("time_bound", bound));
    report.push(Outcome::at_least("excess_over_optimal_time", bound - optimal_time(q), 0.0));
    Ok(report)
}
