//! Numeric backends for probabilities and coalition values.
//!
//! Everything that has to agree *exactly* between a closed form and an
//! enumeration oracle is written against [`Scalar`], so the same code runs in
//! `f64` for speed and in [`Rational`] when bit-for-bit equality is required.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

/// Arbitrary precision rational used for exact-mode computations.
pub type Rational = BigRational;

/// Absolute tolerance used when validating `f64` probability vectors.
pub const F64_SUM_TOLERANCE: f64 = 1e-12;

pub trait Scalar: Clone + PartialOrd + Debug + Num + Send + Sync + 'static {
    /// Exact conversion where the backend allows it.
    fn from_f64(x: f64) -> Option<Self>;

    fn as_f64(&self) -> f64;

    /// Whether `self` is close enough to one to count as a unit mass.
    fn is_unit_mass(&self) -> bool;

    fn is_finite(&self) -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_f64(num as f64).expect("integer is representable")
            / Self::from_f64(den as f64).expect("integer is representable")
    }

    fn pow_n(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= F64_SUM_TOLERANCE
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for Rational {
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit_mass(&self) -> bool {
        self.is_one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }
}

/// Shorthand for building an exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

pub(crate) fn sum<T: Scalar>(items: impl IntoIterator<Item = T>) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc + x)
}
