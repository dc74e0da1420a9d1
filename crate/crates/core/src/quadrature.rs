//! Gauss–Legendre quadrature on geometrically graded panels.
//!
//! The integrals this crate needs have integrable algebraic singularities at
//! an endpoint (`s^{α}` with `-1 < α < 0`) and algebraic decay at infinity.
//! Half-line integrals are split at a scale `σ` and each piece is mapped to
//! `(0, 1]` by a power substitution that flattens the known leading
//! exponent. The unit interval is cut into panels that shrink geometrically
//! toward both ends, and each panel gets an `m`-point Gauss–Legendre rule;
//! `m` is doubled until two successive values agree.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule; nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel layout and convergence policy for [`integrate_unit`].
#[derive(Clone, Copy, Debug)]
pub struct GradedRule {
    /// Ratio between successive panel widths toward each endpoint.
    pub grading: f64,
    /// Number of graded levels on each side of the midpoint.
    pub levels: usize,
    /// Nodes per panel on the first pass.
    pub initial_nodes: usize,
    /// Give up once the per-panel node count would exceed this.
    pub max_nodes: usize,
}

impl Default for GradedRule {
    fn default() -> Self {
        GradedRule {
            grading: 0.25,
            levels: 40,
            initial_nodes: 12,
            max_nodes: 192,
        }
    }
}

impl GradedRule {
    /// Breakpoints of `[0, 1/2]`, graded toward 0.
    fn half_breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.levels + 2);
        let mut w = 0.5;
        pts.push(w);
        for _ in 0..self.levels {
            w *= self.grading;
            pts.push(w);
        }
        pts.push(0.0);
        pts.reverse();
        pts
    }

    /// One pass with `m` nodes per panel. The left half is graded toward 0
    /// in `u`, the right half toward 0 in `v = 1 - u`, so `f(u, v)` always
    /// receives both coordinates at full relative precision.
    fn pass(&self, m: usize, f: &mut impl FnMut(f64, f64) -> f64) -> (f64, f64) {
        let rule = GaussLegendre::new(m);
        let pts = self.half_breakpoints();
        let mut total = 0.0;
        let mut total_abs = 0.0;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let t = mid + half * x;
                let left = f(t, 1.0 - t);
                let right = f(1.0 - t, t);
                total += wt * half * (left + right);
                total_abs += wt * half * (left.abs() + right.abs());
            }
        }
        (total, total_abs)
    }
}

/// `∫_0^1 f(u) du` for `f` with integrable endpoint singularities.
///
/// Converged when successive values differ by at most
/// `rel_tol * ∫|f|`.
pub fn integrate_unit(mut f: impl FnMut(f64) -> f64, rel_tol: f64, rule: GradedRule) -> Result<f64> {
    integrate_unit_split(|u, _| f(u), rel_tol, rule)
}

/// Like [`integrate_unit`], but `f(u, v)` also receives `v = 1 - u`
/// computed without cancellation.
pub fn integrate_unit_split(
    mut f: impl FnMut(f64, f64) -> f64,
    rel_tol: f64,
    rule: GradedRule,
) -> Result<f64> {
    let mut m = rule.initial_nodes;
    let (mut prev, _) = rule.pass(m, &mut f);
    while m * 2 <= rule.max_nodes {
        m *= 2;
        let (cur, cur_abs) = rule.pass(m, &mut f);
        if !cur.is_finite() {
            return Err(Error::NoConvergence(format!("quadrature produced {cur}")));
        }
        if (cur - prev).abs() <= rel_tol * cur_abs.max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!(
        "graded quadrature did not reach relative tolerance {rel_tol:e} with {} nodes per panel",
        rule.max_nodes
    )))
}

/// `∫_a^b f(x) dx` on a finite interval.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let width = b - a;
    integrate_unit(|u| width * f(a + width * u), rel_tol, GradedRule::default())
}

/// Leading power-law exponents of a half-line integrand: `f(s) ~ s^{at_zero}`
/// as `s → 0` and `f(s) ~ s^{at_infinity}` as `s → ∞`.
#[derive(Clone, Copy, Debug)]
pub struct Asymptotics {
    pub at_zero: f64,
    pub at_infinity: f64,
}

/// `∫_0^∞ f(s) ds` for `f` with known algebraic behaviour at both ends.
///
/// The integral is split at `s = σ`. On `(0, σ]` the substitution
/// `s = σ r^{1/(1+α₀)}` and on `[σ, ∞)` the substitution
/// `s = σ r^{-1/(-1-α∞)}` turn the leading power laws into bounded
/// integrands on `(0, 1]`, which the graded rule then resolves. `sigma`
/// should sit where `f` changes character (for resolvent integrands, the
/// typical eigenvalue scale).
pub fn integrate_half_line(
    f: impl Fn(f64) -> f64,
    sigma: f64,
    asymptotics: Asymptotics,
    rel_tol: f64,
) -> Result<f64> {
    assert!(sigma > 0.0 && sigma.is_finite(), "sigma must be positive");
    let Asymptotics {
        at_zero,
        at_infinity,
    } = asymptotics;
    if at_zero <= -1.0 || at_infinity >= -1.0 {
        return Err(Error::Precondition(format!(
            "integrand with exponents ({at_zero}, {at_infinity}) is not integrable on (0, inf)"
        )));
    }
    let k0 = 1.0 / (1.0 + at_zero);
    let k1 = 1.0 / (-1.0 - at_infinity);
    // After substitution the integrand tends to a constant as r → 0. Below
    // r_min the value at r_min is used, keeping s/σ inside [1e-100, 1e100]
    // where nothing under- or overflows.
    let r0 = 1e-100f64.powf(1.0 / k0);
    let r1 = 1e-100f64.powf(1.0 / k1);
    let near = integrate_unit(
        |r| {
            let r = r.max(r0);
            let s = sigma * r.powf(k0);
            f(s) * sigma * k0 * r.powf(k0 - 1.0)
        },
        rel_tol,
        GradedRule::default(),
    )?;
    let far = integrate_unit(
        |r| {
            let r = r.max(r1);
            let s = sigma * r.powf(-k1);
            f(s) * sigma * k1 * r.powf(-k1 - 1.0)
        },
        rel_tol,
        GradedRule::default(),
    )?;
    Ok(near + far)
}
