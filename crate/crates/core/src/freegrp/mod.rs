//! The group algebra of the free group `F_n` with its canonical trace.
//!
//! Elements are finite sums `x = Σ x(g) λ(g)` over reduced words. The trace
//! is `τ(x) = x(e)`, so `‖x‖₂² = Σ |x(g)|²` and for even `q = 2m` the norm
//! `‖x‖_q` is the `q`-th root of `τ((x*x)^m)`, computed by exact sparse
//! convolution.
//!
//! ```
//! use ncconvex::freegrp::{lq_norm_even, GroupPolynomial};
//!
//! // the sum of the four generators and their inverses in F_2
//! let x = GroupPolynomial::sphere_sum(2, 1);
//! let q4 = lq_norm_even(&x, 4).unwrap();
//! assert!((q4.powi(4) - 28.0).abs() < 1e-12);
//! ```

mod campaign;
mod coeff;
mod haagerup;
mod norms;
mod poly;
mod text;
mod word;

pub use campaign::{khintchine_check, KhintchineConfig};
pub use coeff::Coeff;
pub use haagerup::{convolution_norm_lower_bound, haagerup_lower_check, PowerIteration, OPERATOR_BUDGET};
pub use norms::{
    khintchine_ratio, lq_norm_even, trace_moment, trace_moment_enumerated, ENUMERATION_BUDGET, TERM_BUDGET,
};
pub use poly::GroupPolynomial;
pub use text::{format_polynomial, parse_polynomial};
pub use word::{ball, ball_size, random_word, sphere, Word};
