//! Dense complex matrices as the finite-dimensional model of a tracial
//! von Neumann algebra.
//!
//! `M_n` carries the standard (non-normalized) trace. Every inequality the
//! crate verifies is homogeneous under rescaling the trace, so the tracial
//! state `tr / n` would only multiply squared norms by `n^{-2/p}`.
//!
//! Schatten norms are computed from singular values; hermitian functional
//! calculus goes through an eigendecomposition with ascending eigenvalues.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{precondition, Error, Result};

/// Default relative tolerance for self-adjointness checks and deficit signs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues below `EIG_CLIP * scale` in magnitude are treated as zero by
/// [`psd_power`].
pub const EIG_CLIP: f64 = 1e-13;

/// A dense square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    /// Wraps an nalgebra matrix. Panics if it is not square or has a
    /// non-finite entry.
    pub fn new(inner: DMatrix<Complex64>) -> Self {
        assert!(inner.is_square(), "ComplexMatrix must be square");
        assert!(
            inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "ComplexMatrix entries must be finite"
        );
        ComplexMatrix(inner)
    }

    pub fn zeros(n: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square");
        Self::from_fn(n, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn scalar(z: f64) -> Self {
        Self::from_real_diag(&[z])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        let scale = self.op_norm().max(1.0);
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if (self.0[(i, j)] - self.0[(j, i)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_selfadjoint(tol) {
            return false;
        }
        let scale = self.op_norm().max(1.0);
        match hermitian_eig(self) {
            Ok(eig) => eig.eigenvalues.first().is_none_or(|&l| l >= -tol * scale),
            Err(_) => false,
        }
    }

    /// Hermitian part `(m + m*)/2`; used to scrub rounding asymmetry.
    pub fn hermitian_part(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    /// Kronecker product `self ⊗ other`, row index `i * other.dim() + k`.
    pub fn kron(&self, other: &Self) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Dimension check helper returning [`Error::DimensionMismatch`].
    pub fn expect_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Exponent `p` of a Schatten class, restricted to `1 < p < inf`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SchattenExponent(f64);

/// Which direction the convexity inequalities point for a given exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `1 < p <= 2`: the stated inequality.
    Direct,
    /// `p > 2`: the reversed inequality.
    Reversed,
}

impl Orientation {
    /// `+1` for [`Orientation::Direct`], `-1` for [`Orientation::Reversed`].
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Direct => 1.0,
            Orientation::Reversed => -1.0,
        }
    }
}

impl SchattenExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(SchattenExponent(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn orientation(self) -> Orientation {
        if self.0 <= 2.0 {
            Orientation::Direct
        } else {
            Orientation::Reversed
        }
    }

    /// Hölder conjugate `p' = p/(p-1)`.
    pub fn conjugate(self) -> Self {
        SchattenExponent(self.0 / (self.0 - 1.0))
    }
}

impl TryFrom<f64> for SchattenExponent {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        SchattenExponent::new(p)
    }
}

impl From<SchattenExponent> for f64 {
    fn from(p: SchattenExponent) -> f64 {
        p.0
    }
}

/// Spectral decomposition `m = U diag(λ) U*` of a self-adjoint matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the corresponding orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `U diag(f(λ)) U*`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors.0;
        let n = u.nrows();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut scaled = u.clone();
        for (j, v) in vals.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= *v;
            }
        }
        ComplexMatrix(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }
}

/// Eigendecomposition of a self-adjoint matrix with ascending eigenvalues.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    if !m.is_selfadjoint(DEFAULT_TOL) {
        return Err(precondition("hermitian_eig requires a self-adjoint matrix"));
    }
    let eig = m.hermitian_part().0.symmetric_eigen();
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors: ComplexMatrix(eigenvectors),
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.dim() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.0.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Schatten `p`-norm `(Σ s_i^p)^{1/p}` under the standard trace.
///
/// Accepts any `p >= 1` including `f64::INFINITY`. `p = 2` is evaluated as
/// the Frobenius norm, which avoids the SVD.
pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> f64 {
    assert!(p >= 1.0, "Schatten exponent must be >= 1, got {p}");
    if p == 2.0 {
        return m.frobenius_norm();
    }
    let s = singular_values(m);
    if p.is_infinite() {
        return s.first().copied().unwrap_or(0.0);
    }
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0.0;
    }
    // factor out the largest value to keep s^p in range
    let sum: f64 = s.iter().map(|&x| (x / top).powf(p)).sum();
    top * sum.powf(1.0 / p)
}

/// Schatten norm under the normalized trace `tr / n`.
pub fn schatten_norm_normalized(m: &ComplexMatrix, p: f64) -> f64 {
    if p.is_infinite() {
        return schatten_norm(m, p);
    }
    schatten_norm(m, p) * (m.dim() as f64).powf(-1.0 / p)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.0.trace()
}

/// The self-adjoint 2×2 block dilations `[[0,x],[x*,0]]` and `[[0,y],[y*,0]]`.
pub fn selfadjoint_dilation(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    y.expect_dim(x.dim())?;
    Ok((dilate(x), dilate(y)))
}

fn dilate(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.dim();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, n), (n, n)).copy_from(&x.0);
    out.view_mut((n, 0), (n, n)).copy_from(&x.0.adjoint());
    ComplexMatrix(out)
}

/// Functional calculus `m^α` for positive semidefinite `m`.
///
/// Negative exponents require `m` to be invertible: its smallest eigenvalue
/// must exceed `tol * scale`.
pub fn psd_power(m: &ComplexMatrix, alpha: f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, l| acc.max(l.abs()))
        .max(1.0);
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol * scale {
        return Err(precondition(format!(
            "psd_power: negative eigenvalue {min:e}"
        )));
    }
    if alpha < 0.0 && min <= tol * scale {
        return Err(precondition(format!(
            "psd_power: singular input (min eigenvalue {min:e}) with negative exponent"
        )));
    }
    let clip = EIG_CLIP * scale;
    Ok(eig.map(|l| {
        if l.abs() < clip {
            if alpha == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            l.max(0.0).powf(alpha)
        }
    }))
}

/// Absolute value `|a| = (a*a)^{1/2}` of a self-adjoint matrix.
pub fn abs_selfadjoint(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(a)?.map(f64::abs))
}

/// `max(1, largest singular value among the inputs)`.
pub fn scale_of(ms: &[&ComplexMatrix]) -> f64 {
    ms.iter().map(|m| m.op_norm()).fold(1.0, f64::max)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries (`E|z|^2 = 1`).
pub fn random_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix(DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng)))
}

/// GUE-style hermitian matrix: Ginibre, symmetrized.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_ginibre(n, rng).hermitian_part()
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(n, rng).0;
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix(q)
}

/// Random positive semidefinite `g g*` with Ginibre `g`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(n, rng);
    (&g * &g.adjoint()).hermitian_part()
}

/// Self-adjoint `U diag(λ) U*` with Haar `U` and the given spectrum.
pub fn with_spectrum<R: Rng + ?Sized>(eigenvalues: &[f64], rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(eigenvalues.len(), rng);
    let d = ComplexMatrix::from_real_diag(eigenvalues);
    (&(&u * &d) * &u.adjoint()).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eig_of_diagonal_is_sorted() {
        let m = ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        let eig = hermitian_eig(&m).unwrap();
        assert_eq!(eig.eigenvalues.len(), 3);
        for (got, want) in eig.eigenvalues.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_of_flip() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = hermitian_eig(&m).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = trial_rng(11, 0);
        let m = random_hermitian(6, &mut rng);
        let eig = hermitian_eig(&m).unwrap();
        let resid = (&eig.reconstruct() - &m).frobenius_norm() / m.frobenius_norm();
        assert!(resid <= 1e-12, "residual {resid}");
        let u = &eig.eigenvectors;
        let gram = &u.adjoint() * u;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-12);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eig_rejects_non_selfadjoint() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn schatten_examples() {
        for &p in &[1.0, 1.5, 2.0, 3.0] {
            let got = schatten_norm(&ComplexMatrix::identity(5), p);
            assert!((got - 5f64.powf(1.0 / p)).abs() < 1e-13);
            let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
            assert!((schatten_norm(&nil, p) - 1.0).abs() < 1e-14);
        }
        assert_eq!(schatten_norm(&ComplexMatrix::identity(5), f64::INFINITY), 1.0);
        let d = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert!((schatten_norm(&d, 2.0) - 5.0).abs() < 1e-14);
        assert!((schatten_norm(&d, 2.0000001) - 5.0).abs() < 1e-5);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&ComplexMatrix::identity(4)), c(4.0));
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(trace(&nil), c(0.0));
        let mut rng = trial_rng(3, 1);
        let a = random_ginibre(5, &mut rng);
        let b = random_ginibre(5, &mut rng);
        let scale = scale_of(&[&a, &b]).powi(2);
        assert!((trace(&(&a * &b)) - trace(&(&b * &a))).norm() <= 1e-12 * scale);
    }

    #[test]
    fn dilation_examples() {
        let one = ComplexMatrix::scalar(1.0);
        let (a, _) = selfadjoint_dilation(&one, &one).unwrap();
        assert_eq!(a, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!((schatten_norm(&a, 1.7).powf(1.7) - 2.0).abs() < 1e-14);

        let zero = ComplexMatrix::zeros(3);
        let (z, _) = selfadjoint_dilation(&zero, &zero).unwrap();
        assert_eq!(z, ComplexMatrix::zeros(6));

        let mut rng = trial_rng(5, 0);
        let x = random_ginibre(3, &mut rng);
        let (a, b) = selfadjoint_dilation(&x, &x).unwrap();
        assert!(a.is_selfadjoint(1e-14) && b.is_selfadjoint(1e-14));
        let ratio = schatten_norm(&a, 1.5).powf(1.5) / schatten_norm(&x, 1.5).powf(1.5);
        assert!((ratio - 2.0).abs() < 1e-12, "ratio {ratio}");

        assert!(matches!(
            selfadjoint_dilation(&x, &ComplexMatrix::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psd_power_examples() {
        let id = ComplexMatrix::identity(3);
        for &alpha in &[-1.5, 0.0, 0.3, 2.0] {
            assert!(psd_power(&id, alpha, DEFAULT_TOL).unwrap().max_abs_diff(&id) < 1e-14);
        }
        let d = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let r = psd_power(&d, 0.5, DEFAULT_TOL).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);

        let mut rng = trial_rng(9, 0);
        let m = random_psd(4, &mut rng);
        let back = psd_power(&psd_power(&m, 1.0 / 3.0, DEFAULT_TOL).unwrap(), 3.0, DEFAULT_TOL)
            .unwrap();
        assert!(back.max_abs_diff(&m) < 1e-10);

        let inv = psd_power(&m, -0.7, DEFAULT_TOL).unwrap();
        let fwd = psd_power(&m, 0.7, DEFAULT_TOL).unwrap();
        assert!((&inv * &fwd).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-9);
    }

    #[test]
    fn psd_power_errors() {
        let neg = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(psd_power(&neg, 0.5, DEFAULT_TOL).is_err());
        let singular = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(psd_power(&singular, -1.0, DEFAULT_TOL).is_err());
        let half = psd_power(&singular, 0.5, DEFAULT_TOL).unwrap();
        assert!(half.max_abs_diff(&singular) < 1e-15);
    }

    #[test]
    fn predicates() {
        let h = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, 1.0),
            (1, 0) => Complex64::new(0.0, -1.0),
            _ => c(1.0),
        });
        assert!(h.is_selfadjoint(1e-12));
        assert!(h.is_psd(1e-12)); // eigenvalues 0 and 2
        assert!(!ComplexMatrix::from_real_diag(&[1.0, -0.5]).is_psd(1e-12));
    }

    #[test]
    fn exponent_validation() {
        assert!(SchattenExponent::new(1.0).is_err());
        assert!(SchattenExponent::new(f64::INFINITY).is_err());
        let p = SchattenExponent::new(1.5).unwrap();
        assert_eq!(p.orientation(), Orientation::Direct);
        assert!((p.conjugate().value() - 3.0).abs() < 1e-15);
        assert_eq!(SchattenExponent::new(2.0).unwrap().orientation(), Orientation::Direct);
        assert_eq!(SchattenExponent::new(2.5).unwrap().orientation(), Orientation::Reversed);
    }
}
