//! Numerical verification of noncommutative uniform convexity and of
//! hypercontractivity on free groups.
//!
//! The matrix side ([`matalg`], [`condexp`], [`convexity`]) checks the
//! two-point and martingale inequalities in Schatten classes and the
//! second-derivative formula behind them. The group side ([`freegrp`],
//! [`hyper`]) computes exact moments in free group algebras, Khintchine
//! ratios, operator norms and the series constants that decide the optimal
//! hypercontractive time.
//!
//! Every check returns a [`report::VerificationReport`].
//!
//! ```
//! use ncconvex::hyper::{optimal_time, rq_value};
//!
//! assert!(rq_value(4.0, 1e-12).unwrap().value_upper < 1.0);
//! assert!((optimal_time(4.0) - 3f64.sqrt().ln()).abs() < 1e-15);
//! ```

// `!(x > y)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod condexp;
pub mod convexity;
pub mod error;
pub mod freegrp;
pub mod hyper;
pub mod matalg;
pub mod quadrature;
pub mod report;
pub mod rng;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/schatten.md")]
    mod schatten {}
    #[doc = include_str!("../../../book/src/expectations.md")]
    mod expectations {}
    #[doc = include_str!("../../../book/src/convexity.md")]
    mod convexity {}
    #[doc = include_str!("../../../book/src/second_derivative.md")]
    mod second_derivative {}
    #[doc = include_str!("../../../book/src/free_groups.md")]
    mod free_groups {}
    #[doc = include_str!("../../../book/src/hypercontractivity.md")]
    mod hypercontractivity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
