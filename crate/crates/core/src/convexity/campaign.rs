//! Seeded Monte-Carlo campaigns over the deficit functions.
//!
//! Trial `i` draws everything from `trial_rng(seed, i)`, so a campaign is
//! reproducible whatever the thread schedule.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::{bcl_deficit, filtration_deficit, martingale_deficit, sign_pattern_deficit, DeficitResult, MAX_SIGN_SPECS};
use crate::condexp::{block_averaging, nested_pinchings, random_pinching, walsh_expectations, ExpectationSpec, Filtration};
use crate::error::{precondition, Error, Result};
use crate::matalg::{random_ginibre, ComplexMatrix, SchattenExponent};
use crate::report::{Outcome, VerificationReport};
use crate::rng::{trial_rng, TrialRng};

/// Bound on `|deficit| / scale²` at `p = 2`, where every inequality here is
/// an identity.
pub const PARALLELOGRAM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub struct Campaign {
    pub dim: usize,
    pub p: SchattenExponent,
    pub trials: usize,
    pub seed: u64,
    /// Accepted `−deficit / scale²`.
    pub tol: f64,
}

impl Campaign {
    fn check(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(precondition("dimension must be positive"));
        }
        if self.trials == 0 {
            return Err(precondition("at least one trial is required"));
        }
        Ok(())
    }

    fn report(&self, command: &str) -> VerificationReport {
        let mut r = VerificationReport::new(command, self.seed);
        r.param("dim", self.dim)
            .param("p", self.p.value())
            .param("trials", self.trials)
            .param("tol", self.tol);
        r
    }

    fn run<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut TrialRng) -> Result<T> + Sync,
    {
        (0..self.trials)
            .into_par_iter()
            .map(|i| f(&mut trial_rng(self.seed, i as u64)))
            .collect()
    }
}

/// Family of expectations used by [`verify_martingale`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    Diagonal,
    /// Fresh random eigenbasis and block sizes in every trial.
    Pinching,
    FullTrace,
    /// `M_n = M_{n/m} ⊗ M_m` with `m` the smallest prime factor of `n`.
    PartialTrace,
}

impl SpecKind {
    pub const ALL: [SpecKind; 4] = [
        SpecKind::Diagonal,
        SpecKind::Pinching,
        SpecKind::FullTrace,
        SpecKind::PartialTrace,
    ];

    pub fn build<R: Rng + ?Sized>(self, dim: usize, rng: &mut R) -> Result<ExpectationSpec> {
        Ok(match self {
            SpecKind::Diagonal => ExpectationSpec::Diagonal,
            SpecKind::FullTrace => ExpectationSpec::FullTrace,
            SpecKind::Pinching => random_pinching(dim, &random_composition(dim, rng), rng)?,
            SpecKind::PartialTrace => {
                let right_dim = (2..=dim).find(|d| dim % d == 0).unwrap_or(1);
                ExpectationSpec::PartialTraceRight {
                    left_dim: dim / right_dim,
                    right_dim,
                }
            }
        })
    }
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecKind::Diagonal => "diagonal",
            SpecKind::Pinching => "pinching",
            SpecKind::FullTrace => "full-trace",
            SpecKind::PartialTrace => "partial-trace",
        })
    }
}

impl FromStr for SpecKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| precondition(format!("unknown expectation kind '{s}'")))
    }
}

/// Block sizes summing to `n`, at least two blocks when `n ≥ 2`.
fn random_composition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    if n < 2 {
        return vec![n];
    }
    let forced = rng.random_range(1..n);
    let mut sizes = Vec::new();
    let mut last = 0;
    for cut in 1..n {
        if cut == forced || rng.random_bool(0.5) {
            sizes.push(cut - last);
            last = cut;
        }
    }
    sizes.push(n - last);
    sizes
}

/// Finest-first chain of up to three partitions, each obtained by merging
/// adjacent blocks of the previous one.
fn random_partition_chain<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut parts = random_composition(n, rng);
    let mut chain = vec![parts.clone()];
    while parts.len() > 2 && chain.len() < 3 {
        let merges = (parts.len() / 3).max(1);
        for _ in 0..merges {
            let i = rng.random_range(0..parts.len() - 1);
            let merged = parts[i] + parts[i + 1];
            parts.splice(i..i + 2, [merged]);
        }
        chain.push(parts.clone());
    }
    chain
}

/// `FullTrace ⊂ block averaging ⊂ Diagonal ⊂ M_n`.
pub fn canonical_chain(dim: usize) -> Result<Filtration> {
    let mut specs = vec![ExpectationSpec::FullTrace];
    if dim >= 2 {
        specs.push(block_averaging(&[dim / 2, dim - dim / 2])?);
    }
    specs.push(ExpectationSpec::Diagonal);
    specs.push(ExpectationSpec::identity(dim));
    Filtration::new(dim, specs)
}

/// Aggregates one family of deficits into `min_deficit` (and at `p = 2`
/// `max_abs_deficit`) outcomes, normalized by `scale²`.
fn summarize(report: &mut VerificationReport, prefix: &str, cfg: &Campaign, results: &[DeficitResult]) {
    let (worst, min) = results
        .iter()
        .map(DeficitResult::normalized)
        .enumerate()
        .fold((0, f64::INFINITY), |(wi, wv), (i, v)| if v < wv { (i, v) } else { (wi, wv) });
    report.push(Outcome::at_least(format!("{prefix}min_deficit"), min, -cfg.tol));
    report.push(Outcome::info(format!("{prefix}worst_trial"), worst as f64));
    if cfg.p.value() == 2.0 {
        let max_abs = results.iter().map(|r| r.normalized().abs()).fold(0.0, f64::max);
        report.push(Outcome::at_most(format!("{prefix}max_abs_deficit"), max_abs, PARALLELOGRAM_TOL));
    }
}

/// Two-point inequality on independent Ginibre pairs.
pub fn verify_bcl(cfg: &Campaign) -> Result<VerificationReport> {
    cfg.check()?;
    let results = cfg.run(|rng| {
        let x = random_ginibre(cfg.dim, rng);
        let y = random_ginibre(cfg.dim, rng);
        bcl_deficit(&x, &y, cfg.p)
    })?;
    let mut report = cfg.report("verify-bcl");
    summarize(&mut report, "", cfg, &results);
    Ok(report)
}

/// One-step martingale inequality for a Ginibre `x` and an expectation of
/// the given kind.
pub fn verify_martingale(cfg: &Campaign, kind: SpecKind) -> Result<VerificationReport> {
    cfg.check()?;
    let results = cfg.run(|rng| {
        let e = kind.build(cfg.dim, rng)?;
        let x = random_ginibre(cfg.dim, rng);
        martingale_deficit(&x, &e, cfg.p)
    })?;
    let mut report = cfg.report("verify-martingale");
    report.param("spec", kind.to_string());
    summarize(&mut report, "", cfg, &results);
    Ok(report)
}

/// Filtration inequality on the canonical chain and on random nested
/// pinchings.
pub fn verify_filtration(cfg: &Campaign) -> Result<VerificationReport> {
    cfg.check()?;
    let canonical = canonical_chain(cfg.dim)?;
    let results = cfg.run(|rng| {
        let x = random_ginibre(cfg.dim, rng);
        let chain = random_partition_chain(cfg.dim, rng);
        let nested = nested_pinchings(cfg.dim, &chain, rng)?;
        Ok((filtration_deficit(&x, &canonical, cfg.p)?, filtration_deficit(&x, &nested, cfg.p)?))
    })?;
    let (canon, nested): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let mut report = cfg.report("verify-filtration");
    summarize(&mut report, "canonical_", cfg, &canon);
    summarize(&mut report, "nested_", cfg, &nested);
    Ok(report)
}

/// Sign-pattern inequality for `n_specs` independent random pinchings and,
/// when `dim = 2^n_specs`, for the Walsh averagings on diagonal and general
/// `x`.
pub fn verify_sign_patterns(cfg: &Campaign, n_specs: usize) -> Result<VerificationReport> {
    cfg.check()?;
    if n_specs == 0 || n_specs > MAX_SIGN_SPECS {
        return Err(precondition(format!(
            "number of expectations must be in 1..={MAX_SIGN_SPECS}, got {n_specs}"
        )));
    }
    let walsh = if cfg.dim == 1usize << n_specs {
        Some(walsh_expectations(n_specs)?)
    } else {
        None
    };
    let results = cfg.run(|rng| {
        let specs = (0..n_specs)
            .map(|_| SpecKind::Pinching.build(cfg.dim, rng))
            .collect::<Result<Vec<_>>>()?;
        let x = random_ginibre(cfg.dim, rng);
        let pinch = sign_pattern_deficit(&x, &specs, cfg.p)?;
        let walsh_pair = match &walsh {
            Some(w) => {
                let diag = random_ginibre(cfg.dim, rng);
                let xd = ComplexMatrix::from_fn(cfg.dim, |i, j| {
                    if i == j {
                        diag.get(i, i)
                    } else {
                        Default::default()
                    }
                });
                Some((sign_pattern_deficit(&xd, w, cfg.p)?, sign_pattern_deficit(&x, w, cfg.p)?))
            }
            None => None,
        };
        Ok((pinch, walsh_pair))
    })?;
    let mut report = cfg.report("verify-signs");
    report.param("n_specs", n_specs);
    let pinch: Vec<_> = results.iter().map(|r| r.0.clone()).collect();
    summarize(&mut report, "pinching_", cfg, &pinch);
    if walsh.is_some() {
        let (wd, wg): (Vec<_>, Vec<_>) = results.into_iter().filter_map(|r| r.1).unzip();
        summarize(&mut report, "walsh_diagonal_", cfg, &wd);
        summarize(&mut report, "walsh_general_", cfg, &wg);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_and_chains_are_valid() {
        let mut rng = trial_rng(3, 0);
        for n in 1..9 {
            for _ in 0..20 {
                let c = random_composition(n, &mut rng);
                assert_eq!(c.iter().sum::<usize>(), n);
                assert!(n < 2 || c.len() >= 2);
                let chain = random_partition_chain(n, &mut rng);
                for w in chain.windows(2) {
                    assert!(w[1].len() < w[0].len());
                }
                assert!(nested_pinchings(n, &chain, &mut rng).is_ok());
            }
        }
    }

    #[test]
    fn spec_kind_round_trips_through_text() {
        for k in SpecKind::ALL {
            assert_eq!(k.to_string().parse::<SpecKind>().unwrap(), k);
        }
        assert!("bogus".parse::<SpecKind>().is_err());
    }

    #[test]
    fn partial_trace_kind_factors_dimension() {
        let mut rng = trial_rng(0, 0);
        match SpecKind::PartialTrace.build(6, &mut rng).unwrap() {
            ExpectationSpec::PartialTraceRight { left_dim, right_dim } => {
                assert_eq!((left_dim, right_dim), (3, 2))
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
