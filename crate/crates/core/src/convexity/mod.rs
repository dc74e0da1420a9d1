//! Deficits of the sharp two-point and martingale convexity inequalities.
//!
//! For `1 < p <= 2` and any trace-preserving conditional expectation `E`,
//!
//! ```text
//! ‖x+y‖² + ‖x−y‖² ≥ 2‖x‖² + 2(p−1)‖y‖²
//! ‖x‖² ≥ ‖E x‖² + (p−1)‖x − E x‖²
//! ```
//!
//! in Schatten `p`-norms, with both inequalities reversed for `p > 2`. A
//! [`DeficitResult`] carries `LHS − RHS` multiplied by the orientation sign,
//! so a non-negative deficit always means the inequality holds.

mod campaign;
mod oracle;
mod sharpness;

pub use campaign::{
    canonical_chain, verify_bcl, verify_filtration, verify_martingale, verify_sign_patterns,
    Campaign, SpecKind, PARALLELOGRAM_TOL,
};
pub use oracle::{
    df1_check, kernel_constant_resolvent, kernel_constant_positive, psi_finite_difference,
    psi_oracle_campaign, psi_second_derivative, psi_second_derivative_positive, sample_invertible,
    OracleConfig, FD_STEPS, INVERTIBILITY_FLOOR,
};
pub use sharpness::{sharpness_probe, two_point_deficit};

use crate::condexp::{apply_complement, apply_expectation, is_identity_expectation, validate_filtration, ExpectationSpec, Filtration};
use crate::error::{precondition, Result};
use crate::matalg::{schatten_norm, singular_values, ComplexMatrix, SchattenExponent};

/// Largest number of expectations accepted by [`sign_pattern_deficit`].
pub const MAX_SIGN_SPECS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DeficitResult {
    /// Orientation-adjusted: `>= 0` iff the inequality holds.
    pub deficit: f64,
    /// `LHS − RHS` before orientation.
    pub raw: f64,
    /// Each squared norm entering the inequality.
    pub terms: Vec<(String, f64)>,
    pub p: SchattenExponent,
    /// `max(1, largest singular value involved)`.
    pub scale: f64,
}

impl DeficitResult {
    fn assemble(p: SchattenExponent, lhs: f64, rhs: f64, terms: Vec<(String, f64)>, scale: f64) -> Self {
        let raw = lhs - rhs;
        DeficitResult {
            deficit: p.orientation().sign() * raw,
            raw,
            terms,
            p,
            scale,
        }
    }

    /// `deficit / scale²`.
    pub fn normalized(&self) -> f64 {
        self.deficit / (self.scale * self.scale)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.normalized() >= -tol
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Squared Schatten norm together with the largest singular value.
fn sq_norm_and_top(m: &ComplexMatrix, p: f64) -> (f64, f64) {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let norm = if p == 2.0 {
        m.frobenius_norm()
    } else if top == 0.0 {
        0.0
    } else {
        top * s.iter().map(|&v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
    };
    (norm * norm, top)
}

/// Two-point deficit with the constant `p − 1`.
pub fn bcl_deficit(x: &ComplexMatrix, y: &ComplexMatrix, p: SchattenExponent) -> Result<DeficitResult> {
    bcl_deficit_with_constant(x, y, p, p.value() - 1.0)
}

/// Two-point deficit `‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2c‖y‖²` (orientation-adjusted).
pub fn bcl_deficit_with_constant(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    p: SchattenExponent,
    c: f64,
) -> Result<DeficitResult> {
    y.expect_dim(x.dim())?;
    let pv = p.value();
    let (sum, t1) = sq_norm_and_top(&(x + y), pv);
    let (diff, t2) = sq_norm_and_top(&(x - y), pv);
    let (nx, t3) = sq_norm_and_top(x, pv);
    let (ny, t4) = sq_norm_and_top(y, pv);
    let scale = [t1, t2, t3, t4].into_iter().fold(1.0, f64::max);
    Ok(DeficitResult::assemble(
        p,
        sum + diff,
        2.0 * nx + 2.0 * c * ny,
        vec![
            ("|x+y|^2".into(), sum),
            ("|x-y|^2".into(), diff),
            ("|x|^2".into(), nx),
            ("|y|^2".into(), ny),
        ],
        scale,
    ))
}

/// `‖x‖² − ‖E x‖² − (p−1)‖x − E x‖²` (orientation-adjusted).
pub fn martingale_deficit(x: &ComplexMatrix, e: &ExpectationSpec, p: SchattenExponent) -> Result<DeficitResult> {
    let ex = apply_expectation(e, x)?;
    let rest = x - &ex;
    let pv = p.value();
    let (nx, t1) = sq_norm_and_top(x, pv);
    let (ne, t2) = sq_norm_and_top(&ex, pv);
    let (nr, t3) = sq_norm_and_top(&rest, pv);
    let scale = [t1, t2, t3].into_iter().fold(1.0, f64::max);
    Ok(DeficitResult::assemble(
        p,
        nx,
        ne + (pv - 1.0) * nr,
        vec![
            ("|x|^2".into(), nx),
            ("|E(x)|^2".into(), ne),
            ("|x-E(x)|^2".into(), nr),
        ],
        scale,
    ))
}

/// `‖x‖² − ‖E_0 x‖² − (p−1) Σ_{n≥1} ‖E_n x − E_{n−1} x‖²` (orientation-adjusted).
///
/// The filtration must end with the identity and satisfy the tower property
/// (checked on a few random inputs).
pub fn filtration_deficit(x: &ComplexMatrix, f: &Filtration, p: SchattenExponent) -> Result<DeficitResult> {
    x.expect_dim(f.dim())?;
    let last = f.specs().last().expect("filtration is non-empty");
    if !is_identity_expectation(last, f.dim(), 1e-9)? {
        return Err(precondition("the last step of the filtration must be the identity"));
    }
    if !validate_filtration(f, 2, 0xf11, 1e-9)?.passed() {
        return Err(precondition("filtration violates the tower property"));
    }
    let pv = p.value();
    let images = f
        .specs()
        .iter()
        .map(|s| apply_expectation(s, x))
        .collect::<Result<Vec<_>>>()?;
    let (nx, mut scale) = sq_norm_and_top(x, pv);
    let (n0, t0) = sq_norm_and_top(&images[0], pv);
    scale = scale.max(t0).max(1.0);
    let mut terms = vec![("|x|^2".to_string(), nx), ("|E_0(x)|^2".to_string(), n0)];
    let mut increments = 0.0;
    for (k, w) in images.windows(2).enumerate() {
        let (d, t) = sq_norm_and_top(&(&w[1] - &w[0]), pv);
        scale = scale.max(t);
        increments += d;
        terms.push((format!("|dE_{}(x)|^2", k + 1), d));
    }
    Ok(DeficitResult::assemble(p, nx, n0 + (pv - 1.0) * increments, terms, scale))
}

/// `‖x‖² − Σ_{ε ∈ {±}^N} (p−1)^{#−} ‖(Π_i E_i^{ε_i}) x‖²` (orientation-adjusted),
/// with `E⁺ = E`, `E⁻ = Id − E` and `E_1` applied first.
pub fn sign_pattern_deficit(
    x: &ComplexMatrix,
    specs: &[ExpectationSpec],
    p: SchattenExponent,
) -> Result<DeficitResult> {
    if specs.len() > MAX_SIGN_SPECS {
        return Err(precondition(format!(
            "sign-pattern sum over {} expectations exceeds the limit of {MAX_SIGN_SPECS}",
            specs.len()
        )));
    }
    for s in specs {
        s.check_dim(x.dim())?;
    }
    let pv = p.value();
    let (nx, top) = sq_norm_and_top(x, pv);
    let mut acc = PatternSum {
        p: pv,
        total: 0.0,
        scale: top.max(1.0),
    };
    acc.descend(x.clone(), specs, 0)?;
    Ok(DeficitResult::assemble(
        p,
        nx,
        acc.total,
        vec![("|x|^2".into(), nx), ("pattern_sum".into(), acc.total)],
        acc.scale,
    ))
}

struct PatternSum {
    p: f64,
    total: f64,
    scale: f64,
}

impl PatternSum {
    fn descend(&mut self, z: ComplexMatrix, specs: &[ExpectationSpec], minus: i32) -> Result<()> {
        match specs.split_first() {
            None => {
                let (n, top) = sq_norm_and_top(&z, self.p);
                self.scale = self.scale.max(top);
                self.total += (self.p - 1.0).powi(minus) * n;
                Ok(())
            }
            Some((e, rest)) => {
                let plus = apply_expectation(e, &z)?;
                let minus_part = apply_complement(e, &z)?;
                self.descend(plus, rest, minus)?;
                self.descend(minus_part, rest, minus + 1)
            }
        }
    }
}

/// Same Schatten norm under the tracial state `tr / n`; used to confirm the
/// trace normalization only rescales deficits.
pub fn normalized_trace_scaling(n: usize, p: SchattenExponent) -> f64 {
    (n as f64).powf(-2.0 / p.value())
}

/// `‖·‖_p` shortcut for callers holding a [`SchattenExponent`].
pub fn norm(m: &ComplexMatrix, p: SchattenExponent) -> f64 {
    schatten_norm(m, p.value())
}

#[cfg(test)]
mod tests;
