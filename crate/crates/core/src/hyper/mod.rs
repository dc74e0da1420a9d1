//! Hypercontractivity of the Poisson semigroup on free groups.
//!
//! * [`series`]: the Khintchine-weighted series `R_q`, the threshold `q₀`
//!   where its terms change monotonicity, and the bisection for `ε₀`.
//! * [`direct`]: sampling `‖P_t x‖_q / ‖x‖₂` on positive elements.
//! * [`growth`]: the time bound for length functions of exponential growth.
//! * [`slq`]: convexity of the scalar function behind the interpolation
//!   step.
//!
//! ```
//! use ncconvex::hyper::{rq_value, optimal_time};
//! let r4 = rq_value(4.0, 1e-12).unwrap();
//! assert!(r4.value_upper < 1.0);
//! assert!((optimal_time(4.0) - 3f64.sqrt().ln()).abs() < 1e-15);
//! ```

pub mod direct;
pub mod growth;
pub mod series;
pub mod slq;

pub use direct::{hyper_direct_check, optimal_time, poisson_ratio, DirectConfig};
pub use growth::{
    free_group_tail_sum, growth_bound_report, growth_first_branch, growth_tail_estimate, growth_tail_integral_form,
    growth_time_bound, GrowthParams,
};
pub use series::{
    bridge_check, bridge_value, epsilon_zero, epsilon_zero_check, khintchine_upper, q_zero, q_zero_report, q_zero_residual,
    rq_report, rq_table, rq_term, rq_value, SeriesBound, BRIDGE_PUBLISHED, PUBLISHED_SLACK, Q_ZERO_PUBLISHED, R4_FLOOR,
    R4_PUBLISHED,
};
pub use slq::{slq_f, slq_f_convexity, slq_f_integral, slq_f_second_derivative, slq_f_split};
