//! Standard q-building blocks: Pochhammer symbols, Gaussian binomials and
//! the Jacobi triple product.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use num_rational::Ratio;
use num_traits::Zero;

/// Number of factors in a Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochLength {
    Finite(u64),
    Infinite,
}

/// `(q^a; q^step)_m = prod_{i<m} (1 - q^{a + i*step})`.
///
/// Infinite products need `a > 0`, `step > 0` and a finite `order`.
pub fn poch_step<C: Coefficient>(
    a: Exponent,
    step: Exponent,
    len: PochLength,
    order: Order,
) -> Result<ExactSeries<C>> {
    if step <= Ratio::zero() {
        return Err(Error::InvalidArgument(format!("nonpositive step {step}")));
    }
    let mut acc = ExactSeries::one(order);
    match len {
        PochLength::Finite(m) => {
            let mut e = a;
            for _ in 0..m {
                acc = acc.mul_one_minus(e).truncated(order);
                e += step;
            }
        }
        PochLength::Infinite => {
            if a <= Ratio::zero() {
                return Err(Error::DivergentProduct(format!(
                    "(q^{a}; q^{step})_inf has a nonpositive leading exponent"
                )));
            }
            let Some(bound) = order.bound() else {
                return Err(Error::UnboundedOrder(
                    "infinite Pochhammer product".into(),
                ));
            };
            let mut e = a;
            while e <= bound {
                acc = acc.mul_one_minus(e);
                e += step;
            }
        }
    }
    Ok(acc)
}

/// `(q^{a_num/a_den}; q)_m`
pub fn poch<C: Coefficient>(
    a_num: i64,
    a_den: i64,
    m: PochLength,
    order: Order,
) -> Result<ExactSeries<C>> {
    if a_den <= 0 {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    poch_step(Ratio::new(a_num, a_den), int_exponent(1), m, order)
}

/// `(q;q)_m` as an exact polynomial.
pub fn qfactorial<C: Coefficient>(m: u64) -> ExactSeries<C> {
    poch_step(int_exponent(1), int_exponent(1), PochLength::Finite(m), Order::Exact)
        .expect("finite product")
}

/// `(q;q)_inf` truncated at `order`.
pub fn euler<C: Coefficient>(order: Exponent) -> ExactSeries<C> {
    poch_step(int_exponent(1), int_exponent(1), PochLength::Infinite, Order::UpTo(order))
        .expect("convergent product")
}

/// Gaussian binomial coefficient `[m choose k]_q`.
pub fn qbin<C: Coefficient>(m: u64, k: u64) -> ExactSeries<C> {
    if k > m {
        return ExactSeries::zero(Order::Exact);
    }
    let k = k.min(m - k);
    let mut acc = ExactSeries::<C>::one(Order::Exact);
    // acc runs through [m-k+i choose i]_q
    for i in 1..=k {
        let num = acc.mul_one_minus(int_exponent((m - k + i) as i64));
        let den = ExactSeries::one(Order::Exact).mul_one_minus(int_exponent(i as i64));
        acc = num.div_exact(&den).expect("Gaussian binomials are polynomials");
    }
    acc
}

/// Table of `1/(q^step; q^step)_m` for `m = 0..=max_m`, truncated at `order`.
pub fn inverse_poch_table<C: Coefficient>(
    max_m: u64,
    step: i64,
    order: Exponent,
) -> Vec<ExactSeries<C>> {
    let bound = Order::UpTo(order);
    let mut out = Vec::with_capacity(max_m as usize + 1);
    let mut cur = ExactSeries::<C>::one(bound);
    out.push(cur.clone());
    for m in 1..=max_m {
        // multiply by 1/(1 - q^{step m}) via a running sum
        let e = int_exponent(step * m as i64);
        let geometric = ExactSeries::one(Order::Exact)
            .mul_one_minus(e)
            .inverse(order)
            .expect("unit leading coefficient");
        cur = cur.mul(&geometric).truncated(bound);
        out.push(cur.clone());
    }
    out
}

/// `(q^p, q^{M-p}, q^M; q^M)_inf`, computed both as a product and as the
/// bilateral sum `sum_j (-1)^j q^{M binom(j,2) + p j}`; the two must agree.
pub fn triple_product<C: Coefficient>(p: i64, modulus: i64, order: Exponent) -> Result<ExactSeries<C>> {
    if !(1 <= p && p < modulus) {
        return Err(Error::InvalidArgument(format!(
            "triple product needs 1 <= p < M, got p={p}, M={modulus}"
        )));
    }
    let product = triple_product_form(p, modulus, order)?;
    let sum = triple_product_sum::<C>(p, modulus, order);
    if let Some(m) = product.first_mismatch(&sum) {
        return Err(Error::Consistency(format!(
            "triple product forms disagree at q^{}: {} vs {}",
            m.exponent, m.lhs, m.rhs
        )));
    }
    Ok(product)
}

pub(crate) fn triple_product_form<C: Coefficient>(
    p: i64,
    modulus: i64,
    order: Exponent,
) -> Result<ExactSeries<C>> {
    let bound = Order::UpTo(order);
    let step = int_exponent(modulus);
    let mut acc = ExactSeries::one(bound);
    for start in [p, modulus - p, modulus] {
        let f = poch_step::<C>(int_exponent(start), step, PochLength::Infinite, bound)?;
        acc = acc.mul(&f).truncated(bound);
    }
    Ok(acc)
}

pub(crate) fn triple_product_sum<C: Coefficient>(p: i64, modulus: i64, order: Exponent) -> ExactSeries<C> {
    let bound = order.floor().to_integer();
    let mut coeffs = vec![C::zero(); (bound.max(-1) + 1) as usize];
    // exponent M j(j-1)/2 + p j is convex in j with minimum 0 on {0}
    for dir in [1i64, -1] {
        let mut j = if dir == 1 { 0 } else { -1 };
        loop {
            let e = modulus * j * (j - 1) / 2 + p * j;
            if e > bound {
                break;
            }
            let sign = if j.rem_euclid(2) == 0 { C::one() } else { -C::one() };
            coeffs[e as usize].add_ref(&sign);
            j += dir;
        }
    }
    ExactSeries::from_coeffs(coeffs, Order::UpTo(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type S = ExactSeries<i64>;

    fn coeffs(s: &S, n: i64) -> Vec<i64> {
        s.integer_coeffs(n).unwrap()
    }

    #[test]
    fn empty_product() {
        let s: S = poch(1, 1, PochLength::Finite(0), Order::up_to(5)).unwrap();
        assert_eq!(s, S::one(Order::up_to(5)));
    }

    #[test]
    fn two_factors() {
        let s: S = poch(1, 1, PochLength::Finite(2), Order::Exact).unwrap();
        assert_eq!(s, S::from_i64s(&[1, -1, -1, 1], Order::Exact));
    }

    #[test]
    fn pentagonal_numbers() {
        let s: S = poch(1, 1, PochLength::Infinite, Order::up_to(7)).unwrap();
        assert_eq!(coeffs(&s, 7), vec![1, -1, -1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn divergent_product_rejected() {
        let r: Result<S> = poch(0, 1, PochLength::Infinite, Order::up_to(7));
        assert!(matches!(r, Err(Error::DivergentProduct(_))));
        let r: Result<S> = poch(-1, 2, PochLength::Infinite, Order::up_to(7));
        assert!(matches!(r, Err(Error::DivergentProduct(_))));
    }

    #[test]
    fn infinite_product_needs_order() {
        let r: Result<S> = poch(1, 1, PochLength::Infinite, Order::Exact);
        assert!(matches!(r, Err(Error::UnboundedOrder(_))));
    }

    #[test]
    fn partition_numbers_from_inverse() {
        let e: S = euler(int_exponent(5));
        let p = e.inverse(int_exponent(5)).unwrap();
        assert_eq!(coeffs(&p, 5), vec![1, 1, 2, 3, 5, 7]);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(qbin::<i64>(5, 0), S::one(Order::Exact));
        assert_eq!(qbin::<i64>(2, 1), S::from_i64s(&[1, 1], Order::Exact));
        assert_eq!(qbin::<i64>(4, 2), S::from_i64s(&[1, 1, 2, 1, 1], Order::Exact));
        assert!(qbin::<i64>(2, 3).is_zero());
    }

    #[test]
    fn inverse_table_matches_direct_inverse() {
        let t = inverse_poch_table::<i64>(4, 1, int_exponent(12));
        let direct = qfactorial::<i64>(4).inverse(int_exponent(12)).unwrap();
        assert_eq!(t[4], direct);
        let t2 = inverse_poch_table::<i64>(3, 2, int_exponent(12));
        let d2: S = poch_step(int_exponent(2), int_exponent(2), PochLength::Finite(3), Order::Exact)
            .unwrap()
            .inverse(int_exponent(12))
            .unwrap();
        assert_eq!(t2[3], d2);
    }

    #[test]
    fn triple_product_constant_term() {
        let s: ExactSeries<BigInt> = triple_product(2, 5, int_exponent(0)).unwrap();
        assert_eq!(s.coeff_int(0), Some(BigInt::from(1)));
    }

    #[test]
    fn triple_product_theta() {
        // (q, q, q^2; q^2) = sum (-1)^j q^{j^2}
        let s: S = triple_product(1, 2, int_exponent(16)).unwrap();
        let mut want = vec![0i64; 17];
        want[0] = 1;
        for j in 1..=4 {
            want[j * j] = if j % 2 == 0 { 2 } else { -2 };
        }
        assert_eq!(coeffs(&s, 16), want);
    }

    #[test]
    fn triple_product_rejects_bad_parameters() {
        assert!(triple_product::<i64>(5, 5, int_exponent(3)).is_err());
        assert!(triple_product::<i64>(0, 5, int_exponent(3)).is_err());
    }
}
