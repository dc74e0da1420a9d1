//! Even moments for the canonical trace.

use num_complex::Complex64;

use super::coeff::Coeff;
use super::poly::GroupPolynomial;
use super::word::Word;
use crate::error::{precondition, Error, Result};

/// Largest admissible `|supp x|^m` for `τ((x*x)^m)`.
pub const TERM_BUDGET: f64 = 1e7;

/// Largest admissible `|supp x|^{2m}` for [`trace_moment_enumerated`].
pub const ENUMERATION_BUDGET: f64 = 1e8;

/// Imaginary residue tolerated in a floating-point moment, relative to its
/// real part.
const IMAG_RESIDUE: f64 = 1e-12;

fn power<C: Coeff>(y: &GroupPolynomial<C>, k: u32) -> Result<GroupPolynomial<C>> {
    let mut acc = GroupPolynomial::unit(y.rank());
    for _ in 0..k {
        acc = acc.multiply(y)?;
    }
    Ok(acc)
}

/// `τ((x*x)^m)`, evaluated as `⟨y^{⌈m/2⌉}, y^{⌊m/2⌋}⟩` with `y = x*x`.
pub fn trace_moment<C: Coeff>(x: &GroupPolynomial<C>, m: u32) -> Result<C> {
    if m == 0 {
        return Err(precondition("moment order must be at least 1"));
    }
    let work = (x.len() as f64).powi(m as i32);
    if work > TERM_BUDGET {
        return Err(Error::Budget(format!(
            "|supp x|^m = {work:e} exceeds the budget of {TERM_BUDGET:e} terms"
        )));
    }
    let y = x.adjoint().multiply(x)?;
    let hi = power(&y, m.div_ceil(2))?;
    if m % 2 == 0 {
        let lo = hi.clone();
        hi.trace_pairing(&lo)
    } else {
        hi.trace_pairing(&power(&y, m / 2)?)
    }
}

/// `τ((x*x)^m)` by enumerating every `2m`-tuple of support words whose
/// product is the identity. Exponential; meant as an independent oracle.
pub fn trace_moment_enumerated<C: Coeff>(x: &GroupPolynomial<C>, m: u32) -> Result<C> {
    let work = (x.len() as f64).powi(2 * m as i32);
    if work > ENUMERATION_BUDGET {
        return Err(Error::Budget(format!(
            "enumeration of {work:e} tuples exceeds the budget of {ENUMERATION_BUDGET:e}"
        )));
    }
    let plain: Vec<(Word, C)> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    let starred: Vec<(Word, C)> = x.iter().map(|(w, c)| (w.inverse(), c.conj())).collect();
    let max_len = x.max_length();
    let factors = 2 * m as usize;

    fn walk<C: Coeff>(
        depth: usize,
        current: &Word,
        weight: C,
        factors: usize,
        max_len: usize,
        sides: [&[(Word, C)]; 2],
        acc: &mut C,
    ) {
        if depth == factors {
            if current.is_identity() {
                *acc += weight;
            }
            return;
        }
        if current.len() > (factors - depth) * max_len {
            return;
        }
        for (w, c) in sides[depth % 2] {
            walk(depth + 1, &current.mul(w), weight.clone() * c.clone(), factors, max_len, sides, acc);
        }
    }

    let mut acc = C::zero();
    walk(0, &Word::identity(), C::one(), factors, max_len, [&starred, &plain], &mut acc);
    Ok(acc)
}

fn real_moment(v: Complex64) -> Result<f64> {
    if v.im.abs() > IMAG_RESIDUE * v.re.abs().max(1.0) {
        return Err(Error::NoConvergence(format!(
            "trace moment has imaginary part {:e} against real part {:e}",
            v.im, v.re
        )));
    }
    Ok(v.re.max(0.0))
}

/// `‖x‖_q = τ((x*x)^{q/2})^{1/q}` for even `q ≥ 2`.
pub fn lq_norm_even<C: Coeff>(x: &GroupPolynomial<C>, q: u32) -> Result<f64> {
    if q < 2 || q % 2 != 0 {
        return Err(precondition(format!("q must be an even integer ≥ 2, got {q}")));
    }
    let moment = if q == 2 { x.l2_norm_sq() } else { trace_moment(x, q / 2)? };
    Ok(real_moment(moment.to_complex())?.powf(1.0 / q as f64))
}

/// `‖x‖_q / ‖x‖_2` for non-zero `x` supported on a single sphere `S_k`.
pub fn khintchine_ratio<C: Coeff>(x: &GroupPolynomial<C>, q: u32) -> Result<f64> {
    if x.degree().is_none() {
        return Err(precondition("Khintchine ratio needs a non-zero homogeneous polynomial"));
    }
    Ok(lq_norm_even(x, q)? / lq_norm_even(x, 2)?)
}
