//! Seeded sampling of Khintchine ratios on a single sphere.

use rand::Rng;
use rayon::prelude::*;

use super::{khintchine_ratio, GroupPolynomial};
use crate::error::{precondition, Result};
use crate::hyper::khintchine_upper;
use crate::report::{Outcome, VerificationReport};
use crate::rng::trial_rng;

#[derive(Clone, Copy, Debug)]
pub struct KhintchineConfig {
    pub rank: usize,
    pub degree: usize,
    /// Even, at least 2.
    pub q: u32,
    pub trials: usize,
    pub seed: u64,
}

/// Draws homogeneous `x` of the given degree with Gaussian coefficients on
/// a random fraction (uniform in `[0.05, 1]`) of the sphere, and checks
/// `1 ≤ ‖x‖_q/‖x‖₂ ≤ K` with `K` the Hölder-interpolated Haagerup bound.
/// The all-ones element of the sphere is evaluated alongside; on `S_1` its
/// fourth-power ratio is `2 − 1/(2n)`.
pub fn khintchine_check(cfg: &KhintchineConfig) -> Result<VerificationReport> {
    if cfg.rank == 0 || cfg.degree == 0 || cfg.trials == 0 {
        return Err(precondition("need rank, degree and trials at least 1"));
    }
    let bound = khintchine_upper(cfg.degree as u32, cfg.q as f64)?;
    let ratios = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64);
            let density = rng.random_range(0.05..=1.0);
            let x = GroupPolynomial::random_homogeneous(cfg.rank, cfg.degree, density, &mut rng);
            khintchine_ratio(&x, cfg.q)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let ones = khintchine_ratio(&GroupPolynomial::sphere_sum(cfg.rank, cfg.degree), cfg.q)?;

    let mut report = VerificationReport::new("khintchine", cfg.seed);
    report
        .param("rank", cfg.rank)
        .param("degree", cfg.degree)
        .param("q", cfg.q)
        .param("trials", cfg.trials);
    report.push(Outcome::info("upper_bound", bound));
    report.push(Outcome::at_most("max_ratio", max, bound + 1e-10));
    report.push(Outcome::at_least("min_ratio", min, 1.0 - 1e-12));
    report.push(Outcome::at_most("sphere_sum_ratio", ones, bound + 1e-10));
    if cfg.degree == 1 && cfg.q == 4 {
        let n = cfg.rank as f64;
        let exact = (2.0 - 1.0 / (2.0 * n)).powf(0.25);
        report.push(Outcome::within("sphere_sum_ratio_exact", ones, exact, 1e-12));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_by_the_interpolated_constant() {
        for (rank, degree) in [(2, 1), (2, 2), (3, 2)] {
            let cfg = KhintchineConfig {
                rank,
                degree,
                q: 4,
                trials: 40,
                seed: 11,
            };
            let r = khintchine_check(&cfg).unwrap();
            assert!(r.passed(), "{r}");
        }
        let r = khintchine_check(&KhintchineConfig {
            rank: 2,
            degree: 1,
            q: 6,
            trials: 20,
            seed: 1,
        })
        .unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn reproducible() {
        let cfg = KhintchineConfig {
            rank: 2,
            degree: 2,
            q: 4,
            trials: 10,
            seed: 3,
        };
        assert_eq!(khintchine_check(&cfg).unwrap(), khintchine_check(&cfg).unwrap());
    }

    #[test]
    fn rejects_odd_q() {
        let cfg = KhintchineConfig {
            rank: 2,
            degree: 1,
            q: 3,
            trials: 1,
            seed: 0,
        };
        assert!(khintchine_check(&cfg).is_err());
    }
}
