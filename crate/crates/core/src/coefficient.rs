//! Coefficient rings for exact series.
//!
//! Every series in this crate is an integer q-series once prefactors are
//! accounted for, so the only requirement on a coefficient type is exact
//! signed integer arithmetic. `BigInt` is the default; the fixed-width
//! implementations panic on overflow instead of wrapping.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed};
use std::fmt::{Debug, Display};

pub trait Coefficient:
    Clone + Debug + Display + Eq + Send + Sync + Signed + FromPrimitive + 'static
{
    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);
    fn add_ref(&mut self, a: &Self);
    fn sub_ref(&mut self, a: &Self);
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every coefficient type")
    }

    /// True for `1` and `-1`.
    fn is_unit(&self) -> bool {
        self.is_one() || self.clone().neg().is_one()
    }
}

impl Coefficient for BigInt {
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_ref(&mut self, a: &Self) {
        *self += a;
    }
    fn sub_ref(&mut self, a: &Self) {
        *self -= a;
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

macro_rules! fixed_width_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            fn add_product(&mut self, a: &Self, b: &Self) {
                let p = a.checked_mul(*b).expect(concat!(stringify!($t), " coefficient overflow"));
                *self = self.checked_add(p).expect(concat!(stringify!($t), " coefficient overflow"));
            }
            fn add_ref(&mut self, a: &Self) {
                *self = self.checked_add(*a).expect(concat!(stringify!($t), " coefficient overflow"));
            }
            fn sub_ref(&mut self, a: &Self) {
                *self = self.checked_sub(*a).expect(concat!(stringify!($t), " coefficient overflow"));
            }
            fn from_bigint(v: &BigInt) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

fixed_width_coefficient!(i64);
fixed_width_coefficient!(i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        assert!(BigInt::from(-1).is_unit());
        assert!(1i64.is_unit());
        assert!(!2i128.is_unit());
        assert!(!BigInt::from(0).is_unit());
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn fixed_width_panics_on_overflow() {
        let mut x = i64::MAX;
        x.add_ref(&1);
    }

    #[test]
    fn bigint_round_trip() {
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(i64::from_bigint(&big), None);
        assert_eq!(i128::from_bigint(&big).unwrap().to_bigint(), big);
    }
}
