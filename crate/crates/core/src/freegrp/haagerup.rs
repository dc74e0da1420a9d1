//! Lower bounds on the operator norm of left convolution.

use std::collections::HashMap;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::poly::GroupPolynomial;
use super::word::{ball, ball_size};
use crate::error::{precondition, Error, Result};
use crate::report::{Outcome, VerificationReport};
use crate::rng::trial_rng;

/// Largest admissible `|ball| · |supp x|` (non-zero operator entries).
pub const OPERATOR_BUDGET: f64 = 1e7;
const MAX_ITERATIONS: usize = 500;
const REL_CHANGE: f64 = 1e-10;

/// Outcome of power iteration on `T*T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerIteration {
    /// Largest `‖Tv‖/‖v‖` seen; never exceeds `‖T‖`.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Compression `T = P λ(x) P` of left convolution to `ℓ₂` of the ball of
/// the given radius, as `(row, col, value)` triples.
struct Compression {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl Compression {
    fn new(x: &GroupPolynomial, radius: usize) -> Result<Self> {
        let size = ball_size(x.rank(), radius);
        let work = size as f64 * x.len() as f64;
        if work > OPERATOR_BUDGET {
            return Err(Error::Budget(format!(
                "ball of radius {radius} in F_{} has {size} words; {work:e} operator entries exceed {OPERATOR_BUDGET:e}",
                x.rank()
            )));
        }
        let words = ball(x.rank(), radius);
        let index: HashMap<_, _> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut entries = Vec::new();
        for (col, w) in words.iter().enumerate() {
            for (g, c) in x.iter() {
                if let Some(&row) = index.get(&g.mul(w)) {
                    entries.push((row, col, *c));
                }
            }
        }
        Ok(Compression {
            dim: words.len(),
            entries,
        })
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, a) in &self.entries {
            out[c] += a.conj() * v[r];
        }
        out
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration for `‖P λ(x) P‖` on the ball of radius `radius`, from a
/// random start drawn with `seed`. Each iterate gives a valid lower bound
/// on `‖λ(x)‖`.
pub fn convolution_norm_lower_bound(x: &GroupPolynomial, radius: usize, seed: u64) -> Result<PowerIteration> {
    let op = Compression::new(x, radius)?;
    let mut rng = trial_rng(seed, 0);
    let mut v: Vec<Complex64> = (0..op.dim)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|z| *z /= n0);
    let mut best = 0.0f64;
    let mut prev = 0.0f64;
    for it in 1..=MAX_ITERATIONS {
        let tv = op.apply(&v);
        let est = norm(&tv);
        best = best.max(est);
        if est == 0.0 {
            return Ok(PowerIteration {
                value: best,
                iterations: it,
                converged: true,
            });
        }
        if it > 1 && (est - prev).abs() <= REL_CHANGE * est {
            return Ok(PowerIteration {
                value: best,
                iterations: it,
                converged: true,
            });
        }
        prev = est;
        let mut w = op.apply_adjoint(&tv);
        let nw = norm(&w);
        w.iter_mut().for_each(|z| *z /= nw);
        v = w;
    }
    Ok(PowerIteration {
        value: best,
        iterations: MAX_ITERATIONS,
        converged: false,
    })
}

/// Checks the lower bound on `‖x‖_∞` against `(k+1)‖x‖₂` for `x` supported
/// on `S_k`.
pub fn haagerup_lower_check(x: &GroupPolynomial, radius: usize, seed: u64) -> Result<VerificationReport> {
    let k = x
        .degree()
        .ok_or_else(|| precondition("Haagerup check needs a non-zero homogeneous polynomial"))?;
    if radius < k + 2 {
        return Err(precondition(format!("radius must be at least k + 2 = {}", k + 2)));
    }
    let it = convolution_norm_lower_bound(x, radius, seed)?;
    let l2 = x.l2_norm();
    let mut report = VerificationReport::new("haagerup", seed);
    report
        .param("rank", x.rank())
        .param("degree", k)
        .param("radius", radius)
        .param("support", x.len());
    report.push(Outcome::info("l2_norm", l2));
    report.push(Outcome::info("iterations", it.iterations as f64));
    report.push(Outcome::info("converged", if it.converged { 1.0 } else { 0.0 }));
    report.push(Outcome::at_most("lower_bound", it.value, (k as f64 + 1.0) * l2 + 1e-9));
    Ok(report)
}
