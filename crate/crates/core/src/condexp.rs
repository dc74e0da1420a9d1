//! Trace-preserving conditional expectations on `M_n` and filtrations of them.
//!
//! Every [`ExpectationSpec`] denotes the unique trace-preserving conditional
//! expectation onto some unital *-subalgebra of `M_n`:
//!
//! * [`ExpectationSpec::Pinching`]: `x ↦ Σ p_i x p_i`, onto the block-diagonal
//!   algebra `⊕ p_i M_n p_i`.
//! * [`ExpectationSpec::Averaging`]: `x ↦ Σ tr(p_i x)/tr(p_i) · p_i`, onto the
//!   abelian algebra spanned by the `p_i`.
//! * [`ExpectationSpec::Diagonal`]: pinching by coordinate projections.
//! * [`ExpectationSpec::PartialTraceRight`]: `A ⊗ B ↦ A ⊗ (tr B / m) 1_m`.
//! * [`ExpectationSpec::FullTrace`]: `x ↦ (tr x / n) 1_n`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{precondition, Error, Result};
use crate::matalg::{random_ginibre, random_unitary, trace, ComplexMatrix, DEFAULT_TOL};
use crate::report::{Outcome, VerificationReport};
use crate::rng::trial_rng;

/// Mutually orthogonal self-adjoint idempotents summing to the identity.
///
/// Construction validates the family; it is never repaired.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionFamily {
    dim: usize,
    projections: Vec<ComplexMatrix>,
}

impl ProjectionFamily {
    pub fn new(projections: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(projections, DEFAULT_TOL)
    }

    pub fn with_tolerance(projections: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let Some(first) = projections.first() else {
            return Err(precondition("projection family is empty"));
        };
        let dim = first.dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for (i, p) in projections.iter().enumerate() {
            p.expect_dim(dim)?;
            if !p.is_selfadjoint(tol) {
                return Err(precondition(format!("projection {i} is not self-adjoint")));
            }
            if (p * p).max_abs_diff(p) > tol {
                return Err(precondition(format!("projection {i} is not idempotent")));
            }
            if p.frobenius_norm() <= tol {
                return Err(precondition(format!("projection {i} is zero")));
            }
            for (j, q) in projections.iter().enumerate().skip(i + 1) {
                if (p * q).frobenius_norm() > tol {
                    return Err(precondition(format!(
                        "projections {i} and {j} are not orthogonal"
                    )));
                }
            }
            sum = &sum + p;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > tol {
            return Err(precondition("projections do not sum to the identity"));
        }
        Ok(ProjectionFamily { dim, projections })
    }

    /// Projections onto consecutive column blocks of the unitary `u`.
    pub fn from_unitary_blocks(u: &ComplexMatrix, block_sizes: &[usize]) -> Result<Self> {
        let n = u.dim();
        if block_sizes.iter().sum::<usize>() != n || block_sizes.contains(&0) {
            return Err(precondition(format!(
                "block sizes {block_sizes:?} do not partition dimension {n}"
            )));
        }
        let mut projections = Vec::with_capacity(block_sizes.len());
        let mut start = 0;
        for &size in block_sizes {
            let cols = u.inner().columns(start, size);
            let p = ComplexMatrix::new(cols * cols.adjoint()).hermitian_part();
            projections.push(p);
            start += size;
        }
        // rounding from u is ~1e-15; validate loosely but still validate
        Self::with_tolerance(projections, 1e-10)
    }

    /// Coordinate projections onto the given index sets.
    pub fn from_index_sets(dim: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let projections = sets
            .iter()
            .map(|set| {
                let mut d = vec![0.0; dim];
                for &i in set {
                    if i >= dim {
                        return Err(precondition(format!("index {i} out of range {dim}")));
                    }
                    d[i] = 1.0;
                }
                Ok(ComplexMatrix::from_real_diag(&d))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(projections)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpectationSpec {
    Pinching(ProjectionFamily),
    Averaging(ProjectionFamily),
    Diagonal,
    PartialTraceRight { left_dim: usize, right_dim: usize },
    FullTrace,
}

impl ExpectationSpec {
    /// The identity map, as the pinching by the single projection `1_n`.
    pub fn identity(n: usize) -> Self {
        ExpectationSpec::Pinching(ProjectionFamily {
            dim: n,
            projections: vec![ComplexMatrix::identity(n)],
        })
    }

    /// The dimension this spec is tied to, if any.
    pub fn ambient_dim(&self) -> Option<usize> {
        match self {
            ExpectationSpec::Pinching(f) | ExpectationSpec::Averaging(f) => Some(f.dim()),
            ExpectationSpec::PartialTraceRight {
                left_dim,
                right_dim,
            } => Some(left_dim * right_dim),
            ExpectationSpec::Diagonal | ExpectationSpec::FullTrace => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExpectationSpec::Pinching(_) => "pinching",
            ExpectationSpec::Averaging(_) => "averaging",
            ExpectationSpec::Diagonal => "diagonal",
            ExpectationSpec::PartialTraceRight { .. } => "partial-trace",
            ExpectationSpec::FullTrace => "full-trace",
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.ambient_dim() {
            Some(d) if d != n => Err(Error::DimensionMismatch {
                expected: d,
                found: n,
            }),
            _ => Ok(()),
        }
    }
}

/// `E(x)` for the expectation described by `e`.
pub fn apply_expectation(e: &ExpectationSpec, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = x.dim();
    e.check_dim(n)?;
    Ok(match e {
        ExpectationSpec::Pinching(family) => {
            let mut out = ComplexMatrix::zeros(n);
            for p in family.projections() {
                out = &out + &(&(p * x) * p);
            }
            out
        }
        ExpectationSpec::Averaging(family) => {
            let mut out = ComplexMatrix::zeros(n);
            for p in family.projections() {
                let weight = trace(&(p * x)) / trace(p).re;
                out = &out + &p.scale_complex(weight);
            }
            out
        }
        ExpectationSpec::Diagonal => ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                x.get(i, i)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
        ExpectationSpec::PartialTraceRight {
            left_dim: _,
            right_dim,
        } => {
            let m = *right_dim;
            let scale = 1.0 / m as f64;
            ComplexMatrix::from_fn(n, |i, j| {
                let (a, b) = (i / m, i % m);
                let (a2, b2) = (j / m, j % m);
                if b != b2 {
                    return Complex64::new(0.0, 0.0);
                }
                (0..m).map(|c| x.get(a * m + c, a2 * m + c)).sum::<Complex64>() * scale
            })
        }
        ExpectationSpec::FullTrace => {
            ComplexMatrix::identity(n).scale_complex(trace(x) / n as f64)
        }
    })
}

/// `(Id - E)(x)`.
pub fn apply_complement(e: &ExpectationSpec, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(x - &apply_expectation(e, x)?)
}

/// Whether `e` acts as the identity on `M_n`, judged on a few random inputs.
pub fn is_identity_expectation(e: &ExpectationSpec, n: usize, tol: f64) -> Result<bool> {
    let mut rng = trial_rng(0x1d, 0);
    for _ in 0..3 {
        let x = random_ginibre(n, &mut rng);
        if (&apply_expectation(e, &x)? - &x).frobenius_norm() > tol * x.frobenius_norm() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An increasing sequence of subalgebras, smallest first.
#[derive(Clone, Debug)]
pub struct Filtration {
    dim: usize,
    specs: Vec<ExpectationSpec>,
}

impl Filtration {
    /// Checks only dimensional consistency; use [`validate_filtration`] for
    /// the tower property.
    pub fn new(dim: usize, specs: Vec<ExpectationSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(precondition("filtration has no steps"));
        }
        for s in &specs {
            s.check_dim(dim)?;
        }
        Ok(Filtration { dim, specs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn specs(&self) -> &[ExpectationSpec] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }
}

/// Checks `E_i ∘ E_j = E_{min(i,j)}` on random inputs.
///
/// Pairs with `i < j` are reported as `tower_residual` and pairs with
/// `i > j` (range of `E_j` inside range of `E_i`) as `nesting_residual`.
/// Residuals are relative to `‖x‖_F`.
pub fn validate_filtration(
    f: &Filtration,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut tower = 0.0_f64;
    let mut nesting = 0.0_f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let x = random_ginibre(f.dim, &mut rng);
        let norm = x.frobenius_norm().max(f64::MIN_POSITIVE);
        let images = f
            .specs
            .iter()
            .map(|s| apply_expectation(s, &x))
            .collect::<Result<Vec<_>>>()?;
        for (i, ei) in f.specs.iter().enumerate() {
            for (j, img_j) in images.iter().enumerate() {
                if i == j {
                    continue;
                }
                let composed = apply_expectation(ei, img_j)?;
                let resid = (&composed - &images[i.min(j)]).frobenius_norm() / norm;
                if i < j {
                    tower = tower.max(resid);
                } else {
                    nesting = nesting.max(resid);
                }
            }
        }
    }
    let mut report = VerificationReport::new("verify-filtration", seed);
    report
        .param("dim", f.dim)
        .param("steps", f.specs.len())
        .param("trials", trials)
        .param("tol", tol);
    report.push(Outcome::at_most("tower_residual", tower, tol));
    report.push(Outcome::at_most("nesting_residual", nesting, tol));
    Ok(report)
}

/// Pinching onto random blocks: `block_sizes` partitions `n`.
pub fn random_pinching<R: Rng + ?Sized>(
    n: usize,
    block_sizes: &[usize],
    rng: &mut R,
) -> Result<ExpectationSpec> {
    let u = random_unitary(n, rng);
    Ok(ExpectationSpec::Pinching(ProjectionFamily::from_unitary_blocks(
        &u,
        block_sizes,
    )?))
}

/// A nested chain of pinchings sharing one random eigenbasis.
///
/// `partitions` lists block sizes from finest (smallest algebra) to
/// coarsest; each must be a refinement-compatible coarsening of the
/// previous one (adjacent blocks merged). The identity is appended.
pub fn nested_pinchings<R: Rng + ?Sized>(
    n: usize,
    partitions: &[Vec<usize>],
    rng: &mut R,
) -> Result<Filtration> {
    let u = random_unitary(n, rng);
    let mut specs = Vec::with_capacity(partitions.len() + 1);
    let mut prev_cuts: Option<Vec<usize>> = None;
    for sizes in partitions {
        let cuts: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        if let Some(prev) = &prev_cuts {
            if !cuts.iter().all(|c| prev.contains(c)) {
                return Err(precondition(format!(
                    "partition {sizes:?} is not a coarsening of the previous one"
                )));
            }
        }
        specs.push(ExpectationSpec::Pinching(
            ProjectionFamily::from_unitary_blocks(&u, sizes)?,
        ));
        prev_cuts = Some(cuts);
    }
    specs.push(ExpectationSpec::identity(n));
    Filtration::new(n, specs)
}

/// On `M_{2^N}` with basis indexed by `{0,1}^N` (bit `i` = coordinate `i`),
/// the expectations onto diagonal functions independent of coordinate `i`,
/// for `i = 0..N`.
pub fn walsh_expectations(coords: usize) -> Result<Vec<ExpectationSpec>> {
    let dim = 1usize << coords;
    (0..coords)
        .map(|i| {
            let bit = 1usize << i;
            let sets: Vec<Vec<usize>> = (0..dim)
                .filter(|s| s & bit == 0)
                .map(|s| vec![s, s | bit])
                .collect();
            Ok(ExpectationSpec::Averaging(ProjectionFamily::from_index_sets(
                dim, &sets,
            )?))
        })
        .collect()
}

/// Block-scalar averaging on consecutive coordinate blocks.
pub fn block_averaging(block_sizes: &[usize]) -> Result<ExpectationSpec> {
    let dim: usize = block_sizes.iter().sum();
    let mut sets = Vec::with_capacity(block_sizes.len());
    let mut start = 0;
    for &s in block_sizes {
        sets.push((start..start + s).collect());
        start += s;
    }
    Ok(ExpectationSpec::Averaging(ProjectionFamily::from_index_sets(
        dim, &sets,
    )?))
}
