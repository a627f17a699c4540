//! Exact scalar types the set-level algorithms are generic over.
//!
//! Every comparison of differences has to be exact, so the trait is only
//! implemented for integers and rationals. Floating point types are
//! deliberately absent: they are not `Ord` or `Hash`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact, totally ordered number usable as a set element.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// True when the value has no fractional part.
    fn is_integral(&self) -> bool;

    /// Lossless conversion into an arbitrary-precision rational.
    fn to_rational(&self) -> BigRational;

    /// Integer value, when the value is integral and fits in an `i128`.
    fn as_i128(&self) -> Option<i128> {
        if self.is_integral() {
            self.to_rational().to_integer().to_i128()
        } else {
            None
        }
    }
}

macro_rules! int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn is_integral(&self) -> bool {
                true
            }

            fn to_rational(&self) -> BigRational {
                BigRational::from_integer(BigInt::from(*self))
            }

            fn as_i128(&self) -> Option<i128> {
                Some(*self as i128)
            }
        }
    )*};
}

int_scalar!(i32, i64, i128);

impl Scalar for BigInt {
    fn is_integral(&self) -> bool {
        true
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl Scalar for Ratio<i64> {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

/// Converts a count or index into any scalar type.
pub(crate) fn from_count<T: Scalar>(k: usize) -> T {
    T::from_usize(k).expect("count representable in scalar type")
}

/// Exact rational built from an integer ratio; `den` must be nonzero.
pub(crate) fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}
