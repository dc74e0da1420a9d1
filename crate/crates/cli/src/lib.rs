//! Command-line driver for the `ncconvex` verification campaigns.
//!
//! Every subcommand builds a [`VerificationReport`], prints it as a table
//! and optionally writes it as JSON. Exit codes: 0 when every check
//! passes, 1 when a check fails, 2 on usage or resource errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ncconvex::convexity::{
    psi_oracle_campaign, sharpness_probe, verify_bcl, verify_filtration, verify_martingale, verify_sign_patterns,
    Campaign, OracleConfig, SpecKind,
};
use ncconvex::freegrp::{
    haagerup_lower_check, khintchine_check, khintchine_ratio, parse_polynomial, GroupPolynomial, KhintchineConfig,
};
use ncconvex::hyper::{
    bridge_check, epsilon_zero_check, growth_bound_report, hyper_direct_check, khintchine_upper, optimal_time,
    q_zero_report, rq_report, rq_table, slq_f_convexity, DirectConfig, GrowthParams,
};
use ncconvex::matalg::SchattenExponent;
use ncconvex::report::{Outcome, VerificationReport};
use ncconvex::rng::trial_rng;
use ncconvex::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Default deficit tolerance for the matrix campaigns.
const DEFAULT_DEFICIT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "ncconvex", version, about = "Seeded checks of noncommutative convexity and hypercontractivity")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Tolerance; its meaning depends on the subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-point inequality on random pairs.
    VerifyBcl(MatrixArgs),
    /// One-step martingale inequality.
    VerifyMartingale {
        #[command(flatten)]
        m: MatrixArgs,
        /// diagonal, pinching, full-trace or partial-trace
        #[arg(long, default_value = "diagonal")]
        spec: SpecKind,
    },
    /// Filtration inequality on the canonical chain and random nested pinchings.
    VerifyFiltration(MatrixArgs),
    /// Sign-pattern inequality; adds the Walsh family when dim = 2^n-specs.
    VerifySigns {
        /// Defaults to 2^n-specs.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_specs: usize,
    },
    /// Second derivative of the norm functional: quadrature against finite differences.
    PsiOracle {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Relative agreement required with finite differences.
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
    },
    /// Two-point probe of the constant.
    Sharpness {
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        /// Defaults to p - 1.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        tmax: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
    },
    /// Khintchine ratios on a sphere of the free group.
    Khintchine {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        q: u32,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Evaluate this polynomial instead of sampling.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Power-iteration lower bound on the operator norm against (k+1)‖x‖₂.
    Haagerup {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Defaults to degree + 3.
        #[arg(long)]
        radius: Option<usize>,
        /// Use this polynomial instead of a random one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// The certification series R_q with its tail bound.
    Rq {
        #[arg(long, default_value_t = 4.0)]
        q: f64,
    },
    /// R_q on a grid of q.
    RqTable {
        #[arg(long, default_value_t = 4.0)]
        qmin: f64,
        #[arg(long, default_value_t = 40.0)]
        qmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// The threshold q₀ where the second term starts to decrease.
    Q0,
    /// R_4 plus the k = 2 increment up to q₀.
    Bridge,
    /// Distance below 4 down to which R_q stays under 1.
    Eps0,
    /// ‖P_t x‖_q against ‖x‖₂ on random positive x.
    HyperDirect {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 4)]
        q: u32,
        /// Defaults to log √(q−1).
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Time bound from exponential growth parameters.
    GrowthBound {
        #[arg(long)]
        q: f64,
        #[arg(long = "C")]
        c: f64,
        #[arg(long)]
        rho: f64,
    },
    /// Convexity of the scalar interpolation function for several u.
    Slq {
        /// Comma-separated values of u.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 0.5, std::f64::consts::E, 1e3])]
        u_grid: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        grid_size: usize,
    },
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    let start = Instant::now();
    let mut report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let mut r = VerificationReport::new(command_name(&cli.command), cli.seed);
            r.set_error(e.to_string());
            r
        }
    };
    report.elapsed = start.elapsed().as_secs_f64();
    print!("{report}");
    if let Some(path) = &cli.json {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_ERROR;
        }
    }
    match report.status() {
        ncconvex::report::Status::Pass => EXIT_PASS,
        ncconvex::report::Status::Fail => EXIT_FAIL,
        ncconvex::report::Status::Error => EXIT_ERROR,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyBcl(_) => "verify-bcl",
        Command::VerifyMartingale { .. } => "verify-martingale",
        Command::VerifyFiltration(_) => "verify-filtration",
        Command::VerifySigns { .. } => "verify-signs",
        Command::PsiOracle { .. } => "psi-oracle",
        Command::Sharpness { .. } => "sharpness",
        Command::Khintchine { .. } => "khintchine",
        Command::Haagerup { .. } => "haagerup",
        Command::Rq { .. } => "rq",
        Command::RqTable { .. } => "rq-table",
        Command::Q0 => "q0",
        Command::Bridge => "bridge",
        Command::Eps0 => "eps0",
        Command::HyperDirect { .. } => "hyper-direct",
        Command::GrowthBound { .. } => "growth-bound",
        Command::Slq { .. } => "slq",
    }
}

fn campaign(cli: &Cli, dim: usize, p: f64, trials: usize) -> Result<Campaign, Error> {
    Ok(Campaign {
        dim,
        p: SchattenExponent::new(p)?,
        trials,
        seed: cli.seed,
        tol: cli.tol.unwrap_or(DEFAULT_DEFICIT_TOL),
    })
}

fn read_polynomial(path: &Path) -> Result<GroupPolynomial, Error> {
    parse_polynomial(&fs::read_to_string(path)?, None)
}

fn execute(cli: &Cli) -> Result<VerificationReport, Error> {
    let seed = cli.seed;
    match &cli.command {
        Command::VerifyBcl(m) => verify_bcl(&campaign(cli, m.dim, m.p, m.trials)?),
        Command::VerifyMartingale { m, spec } => verify_martingale(&campaign(cli, m.dim, m.p, m.trials)?, *spec),
        Command::VerifyFiltration(m) => verify_filtration(&campaign(cli, m.dim, m.p, m.trials)?),
        Command::VerifySigns {
            dim,
            p,
            trials,
            n_specs,
        } => {
            let dim = match dim {
                Some(d) => *d,
                None => 1usize
                    .checked_shl(*n_specs as u32)
                    .filter(|_| *n_specs < 12)
                    .ok_or_else(|| Error::Precondition("n-specs must be below 12 unless --dim is given".into()))?,
            };
            verify_sign_patterns(&campaign(cli, dim, *p, *trials)?, *n_specs)
        }
        Command::PsiOracle {
            dim,
            p,
            trials,
            rel_tol,
        } => psi_oracle_campaign(&OracleConfig {
            dim: *dim,
            p: SchattenExponent::new(*p)?,
            trials: *trials,
            seed,
            rel_tol: *rel_tol,
            tol: cli.tol.unwrap_or(DEFAULT_DEFICIT_TOL),
        }),
        Command::Sharpness { p, c, tmax, steps } => {
            let p = SchattenExponent::new(*p)?;
            sharpness_probe(p, c.unwrap_or(p.value() - 1.0), *tmax, *steps)
        }
        Command::Khintchine {
            rank,
            degree,
            q,
            trials,
            input,
        } => match input {
            Some(path) => single_khintchine(&read_polynomial(path)?, *q, path),
            None => khintchine_check(&KhintchineConfig {
                rank: *rank,
                degree: *degree,
                q: *q,
                trials: *trials,
                seed,
            }),
        },
        Command::Haagerup {
            rank,
            degree,
            radius,
            input,
        } => {
            let x = match input {
                Some(path) => read_polynomial(path)?,
                None => GroupPolynomial::random_homogeneous(*rank, *degree, 1.0, &mut trial_rng(seed, 0)),
            };
            let k = x.degree().unwrap_or(*degree);
            haagerup_lower_check(&x, radius.unwrap_or(k + 3), seed)
        }
        Command::Rq { q } => rq_report(*q, cli.tol.unwrap_or(1e-12)),
        Command::RqTable { qmin, qmax, points } => rq_table(*qmin, *qmax, *points),
        Command::Q0 => Ok(q_zero_report()),
        Command::Bridge => bridge_check(),
        Command::Eps0 => epsilon_zero_check(cli.tol.unwrap_or(1e-4)),
        Command::HyperDirect {
            rank,
            radius,
            q,
            t,
            trials,
        } => hyper_direct_check(&DirectConfig {
            rank: *rank,
            radius: *radius,
            q: *q,
            t: t.unwrap_or_else(|| optimal_time(*q as f64)),
            trials: *trials,
            seed,
        }),
        Command::GrowthBound { q, c, rho } => growth_bound_report(*q, GrowthParams::new(*c, *rho)?),
        Command::Slq { u_grid, grid_size } => {
            if u_grid.is_empty() {
                return Err(Error::Precondition("u-grid is empty".into()));
            }
            let mut report = VerificationReport::new("slq", seed);
            report.param("grid_size", *grid_size).param("u_count", u_grid.len());
            for u in u_grid {
                report.absorb(&format!("u={u:e}/"), slq_f_convexity(*u, *grid_size)?);
            }
            Ok(report)
        }
    }
}

fn single_khintchine(x: &GroupPolynomial, q: u32, path: &Path) -> Result<VerificationReport, Error> {
    let k = x
        .degree()
        .ok_or_else(|| Error::Precondition("input must be non-zero and homogeneous".into()))?;
    let bound = khintchine_upper(k as u32, q as f64)?;
    let mut report = VerificationReport::new("khintchine", 0);
    report
        .param("input", path.display().to_string())
        .param("rank", x.rank())
        .param("degree", k)
        .param("q", q);
    report.push(Outcome::info("upper_bound", bound));
    report.push(Outcome::at_most("ratio", khintchine_ratio(x, q)?, bound + 1e-10));
    Ok(report)
}
