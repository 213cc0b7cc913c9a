//! Scalar types accepted by the evaluators.
//!
//! Everything in [`crate::evaluate`] is written against [`Scalar`], so the same
//! code path runs in double precision for sampling sweeps and over exact
//! rationals for golden identities.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Exact = BigRational;

/// Numeric field the evaluators run over.
pub trait Scalar: Num + Signed + PartialOrd + Clone + Debug + Send + Sync + 'static {
    /// Whether arithmetic in this type is exact (no rounding).
    const EXACT: bool;

    /// Tolerance `eps` expressed in this type; zero for exact types.
    fn slack(eps: f64) -> Self;

    /// Lossy conversion used for reporting.
    fn to_f64(&self) -> f64;

    /// Conversion from a small integer.
    fn from_int(v: i64) -> Self;

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn slack(eps: f64) -> Self {
                eps as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_int(v: i64) -> Self {
                v as $t
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn slack(_eps: f64) -> Self {
        Self::zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
}

/// Exact rational from a finite `f64` (every finite double is a dyadic rational).
pub fn exact_from_f64(v: f64) -> Option<Exact> {
    BigRational::from_f64(v)
}

/// Exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
