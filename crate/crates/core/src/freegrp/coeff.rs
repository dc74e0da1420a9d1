use std::fmt;
use std::ops::{AddAssign, Mul, Neg};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficient ring of a group polynomial.
///
/// Implemented for `Complex64` (the working type) and `BigRational` (exact
/// mode for oracle computations with real rational coefficients).
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One + AddAssign + Mul<Output = Self> + Neg<Output = Self>
{
    fn conj(&self) -> Self;

    fn to_complex(&self) -> Complex64;

    /// `|c|²` in the same ring.
    fn abs_sq(&self) -> Self {
        self.conj() * self.clone()
    }

    /// Whether an accumulated value is rounding noise next to `max_abs`.
    /// Exact rings never drop anything.
    fn negligible(&self, _max_abs: f64) -> bool {
        false
    }
}

impl Coeff for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn negligible(&self, max_abs: f64) -> bool {
        self.norm() <= 1e-16 * max_abs
    }
}

impl Coeff for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}
