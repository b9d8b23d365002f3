use num_bigint::BigInt;
use proptest::prelude::*;
use qrr_core::qseries::qbin;
use qrr_core::{exponent, int_exponent, Order, Series};

fn series() -> impl Strategy<Value = Series> {
    (proptest::collection::vec(-30i64..30, 0..10), 0i64..6, 1i64..4, prop::bool::ANY).prop_map(
        |(coeffs, shift, den, exact)| {
            let order = if exact { Order::Exact } else { Order::up_to(10) };
            Series::from_i64s(&coeffs, order).shifted(exponent(shift, den))
        },
    )
}

fn agree(a: &Series, b: &Series) -> bool {
    a.first_mismatch(b).is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_commutes_and_associates(x in series(), y in series(), z in series()) {
        prop_assert!(agree(&x.add(&y), &y.add(&x)));
        prop_assert!(agree(&x.add(&y).add(&z), &x.add(&y.add(&z))));
        prop_assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn multiplication_laws(x in series(), y in series(), z in series()) {
        prop_assert!(agree(&x.mul(&y), &y.mul(&x)));
        prop_assert!(agree(&x.mul(&y).mul(&z), &x.mul(&y.mul(&z))));
        prop_assert!(agree(&x.mul(&y.add(&z)), &x.mul(&y).add(&x.mul(&z))));
        let one = Series::one(Order::Exact);
        prop_assert_eq!(x.mul(&one), x.clone());
    }

    #[test]
    fn inverse_of_unit(coeffs in proptest::collection::vec(-9i64..9, 0..8)) {
        let mut c = vec![1];
        c.extend(coeffs);
        let x = Series::from_i64s(&c, Order::Exact);
        let inv = x.inverse(int_exponent(15)).unwrap();
        prop_assert_eq!(x.mul(&inv).truncated(Order::up_to(15)), Series::one(Order::up_to(15)));
    }

    #[test]
    fn qbin_symmetry_and_value_at_one(m in 0u64..14, k in 0u64..14) {
        let k = k.min(m);
        let a = qbin::<BigInt>(m, k);
        prop_assert_eq!(&a, &qbin::<BigInt>(m, m - k));
        // coefficients sum to the ordinary binomial
        let total: BigInt = a.terms().map(|(_, c)| c.clone()).sum();
        let mut binom = BigInt::from(1);
        for i in 0..k {
            binom = binom * BigInt::from(m - i) / BigInt::from(i + 1);
        }
        prop_assert_eq!(total, binom);
    }
}
