//! Both sides of Milne's `C_n` Rogers–Selberg identity at `x_i = q^{σ_i}`.
//!
//! The left side is a sum over `u in N^n` of rational functions of `x` and
//! `q`; here every factor becomes a Laurent–Puiseux polynomial in `q`. The
//! diagonal factor `(1 - x_i² q^{2u_i})/(1 - x_i²)` of `Δ(x q^u)/Δ(x)` is
//! cancelled against `(x_i²)_{u_i}` before specializing, which keeps
//! `σ_i = 0` admissible.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::hall_littlewood::qprime_chain_sum;
use crate::partition::AlphabetSpec;
use crate::qseries::{poch_step, PochLength};
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use num_rational::Ratio;
use num_traits::{Signed, Zero};

fn check_sigma(n: usize, sigma: &[Exponent]) -> Result<()> {
    if n == 0 || sigma.len() != n {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 exponents, got n={n} and {} exponents",
            sigma.len()
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            if sigma[i] == sigma[j] {
                return Err(Error::RejectedSpecialization(format!("1 - x_{}/x_{} vanishes", i + 1, j + 1)));
            }
            if sigma[i] + sigma[j] == Ratio::zero() {
                return Err(Error::RejectedSpecialization(format!("1 - x_{} x_{} vanishes", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// `prod_{t < len} (1 - q^{a + t})` as an exact Laurent polynomial.
fn finite_poch<C: Coefficient>(a: Exponent, len: i64) -> ExactSeries<C> {
    (0..len).fold(ExactSeries::one(Order::Exact), |acc, t| {
        acc.mul_one_minus(a + int_exponent(t))
    })
}

/// `1 - q^e`
fn one_minus<C: Coefficient>(e: Exponent) -> ExactSeries<C> {
    ExactSeries::one(Order::Exact).mul_one_minus(e)
}

/// Least exponent of `1 - q^e` (and of `prod (1 - q^{a+t})`).
fn low(e: Exponent) -> Exponent {
    e.min(Ratio::zero())
}

/// Exact valuation of the summand for `u`; every factor is a product of
/// binomials `1 - q^e` whose valuation is `min(0, e)`.
fn summand_valuation(sigma: &[Exponent], u: &[i64]) -> Exponent {
    let n = sigma.len() as i64;
    let size: i64 = u.iter().sum();
    let mut v = monomial_exponent(sigma, u);
    for i in 0..u.len() {
        // diagonal: (1 - x_i² q^{2u_i}) (q x_i²)_{u_i - 1}
        if u[i] > 0 {
            v += low(int_exponent(2) * sigma[i] + int_exponent(2 * u[i]));
            for t in 1..u[i] {
                v += low(int_exponent(2) * sigma[i] + int_exponent(t));
            }
        }
        for j in 0..u.len() {
            if i == j {
                continue;
            }
            for t in 0..u[i] {
                v += low(sigma[i] + sigma[j] + int_exponent(t));
                v -= low(int_exponent(1 + t) + sigma[i] - sigma[j]);
            }
            if i < j {
                let a = sigma[i] - sigma[j];
                v += low(a + int_exponent(u[i] - u[j])) - low(a);
                let b = sigma[i] + sigma[j];
                v += low(b + int_exponent(u[i] + u[j])) - low(b);
            }
        }
    }
    let _ = (n, size);
    v
}

/// `n(u) + ½(n+4)|u|² - ½ n |u| + sum σ_i ((n+4) u_i - |u|)`
fn monomial_exponent(sigma: &[Exponent], u: &[i64]) -> Exponent {
    let n = sigma.len() as i64;
    let size: i64 = u.iter().sum();
    let norm: i64 = u.iter().map(|x| x * x).sum();
    let nu: i64 = u.iter().enumerate().map(|(i, x)| i as i64 * x).sum();
    let mut e = int_exponent(nu) + Ratio::new((n + 4) * norm - n * size, 2);
    for (s, &x) in sigma.iter().zip(u) {
        e += s * int_exponent((n + 4) * x - size);
    }
    e
}

/// Largest `u_max` worth visiting: beyond it the valuation bound
/// `½(n+4)U² - αU - β` exceeds `order`.
fn box_bound(sigma: &[Exponent], order: Exponent) -> i64 {
    let n = sigma.len() as i64;
    let s: Exponent = sigma.iter().map(|x| x.abs()).sum();
    let alpha = Ratio::new(n * n, 2) + s * int_exponent(2 * n + 4) + Ratio::new(n * (n - 1), 2) + int_exponent(n);
    // constants from the finitely many negative binomial exponents
    let mut beta = Ratio::zero();
    for i in 0..sigma.len() {
        beta += int_exponent(2) * sigma[i].abs() * (int_exponent(2) * sigma[i].abs() + int_exponent(1));
        for j in 0..sigma.len() {
            if i != j {
                let c = (sigma[i] + sigma[j]).abs() + (sigma[i] - sigma[j]).abs() + int_exponent(1);
                beta += c * c;
            }
        }
    }
    let f = |u: i64| Ratio::new((n + 4) * u * u, 2) - alpha * int_exponent(u) - beta;
    let mut u = 0;
    while !(f(u + 1) > order && f(u + 2) >= f(u + 1)) {
        u += 1;
    }
    u
}

/// Left side: `sum_u Δ(x q^u)/Δ(x) prod_{i,j} (x_i x_j)_{u_i}/(q x_i/x_j)_{u_i}
/// (-1)^{n|u|} q^{n(u) + ½(n+4)|u|² - ½n|u|} prod x_i^{(n+4)u_i - |u|}`.
pub fn milne_lhs<C: Coefficient>(n: usize, sigma: &[Exponent], order: Exponent) -> Result<ExactSeries<C>> {
    check_sigma(n, sigma)?;
    let full = Order::UpTo(order);
    let cap = box_bound(sigma, order);
    let mut acc = ExactSeries::zero(full);
    let mut u = vec![0i64; n];
    loop {
        let v = summand_valuation(sigma, &u);
        if v <= order {
            acc = acc.add(&summand(sigma, &u, order)?);
        }
        let mut j = 0;
        loop {
            if j == n {
                return Ok(acc);
            }
            u[j] += 1;
            if u[j] <= cap {
                break;
            }
            u[j] = 0;
            j += 1;
        }
    }
}

fn summand<C: Coefficient>(sigma: &[Exponent], u: &[i64], order: Exponent) -> Result<ExactSeries<C>> {
    let n = u.len();
    let size: i64 = u.iter().sum();
    let sign = if (n as i64 * size) % 2 == 0 { C::one() } else { -C::one() };
    let mut num = ExactSeries::monomial(sign, monomial_exponent(sigma, u), Order::Exact);
    let mut den = ExactSeries::<C>::one(Order::Exact);
    let two = int_exponent(2);
    for i in 0..n {
        if u[i] > 0 {
            num = num.mul_one_minus(two * sigma[i] + two * int_exponent(u[i]));
            num = num.mul(&finite_poch(two * sigma[i] + int_exponent(1), u[i] - 1));
        }
        den = den.mul(&finite_poch(int_exponent(1), u[i]));
        for j in 0..n {
            if i == j {
                continue;
            }
            num = num.mul(&finite_poch(sigma[i] + sigma[j], u[i]));
            let d = finite_poch::<C>(int_exponent(1) + sigma[i] - sigma[j], u[i]);
            if d.is_zero() {
                return Err(Error::RejectedSpecialization(format!(
                    "(q x_{}/x_{})_{} vanishes",
                    i + 1,
                    j + 1,
                    u[i]
                )));
            }
            den = den.mul(&d);
            if i < j {
                let a = sigma[i] - sigma[j];
                num = num.mul_one_minus(a + int_exponent(u[i] - u[j]));
                den = den.mul(&one_minus(a));
                let b = sigma[i] + sigma[j];
                num = num.mul_one_minus(b + int_exponent(u[i] + u[j]));
                den = den.mul(&one_minus(b));
            }
        }
    }
    if num.is_zero() {
        return Ok(ExactSeries::zero(Order::UpTo(order)));
    }
    let vn = num.valuation().expect("nonzero numerator");
    let inv = den.inverse(order - vn)?;
    Ok(num.mul(&inv).truncated(Order::UpTo(order)))
}

/// Right side: `prod_i (q x_i²)_inf prod_{i<j} (q x_i x_j)_inf
/// sum_m q^m/(q)_m Q'_{(2^m)}(x)`.
pub fn milne_rhs<C: Coefficient>(n: usize, sigma: &[Exponent], order: Exponent) -> Result<ExactSeries<C>> {
    check_sigma(n, sigma)?;
    let bound = Order::UpTo(order);
    let one = int_exponent(1);
    let mut prod = ExactSeries::<C>::one(bound);
    for i in 0..n {
        for j in i..n {
            let start = one + sigma[i] + sigma[j];
            if !start.is_positive() {
                return Err(Error::DivergentProduct(format!("(q x_{} x_{})_inf", i + 1, j + 1)));
            }
            let f = poch_step::<C>(start, one, PochLength::Infinite, bound)?;
            prod = prod.mul(&f).truncated(bound);
        }
    }
    let chain = qprime_chain_sum::<C>(&AlphabetSpec::new(sigma.to_vec()), one, order)?;
    Ok(prod.mul(&chain).truncated(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exponent;

    type S = ExactSeries<i64>;

    #[test]
    fn zero_term_is_one() {
        let s: S = summand(&[exponent(1, 3)], &[0], int_exponent(5)).unwrap();
        assert_eq!(s, S::one(Order::up_to(5)));
        let s: S = summand(&[exponent(0, 1), exponent(1, 7)], &[0, 0], int_exponent(5)).unwrap();
        assert_eq!(s, S::one(Order::up_to(5)));
    }

    #[test]
    fn valuation_bound_is_exact() {
        let sigma = [exponent(0, 1), exponent(1, 7)];
        for u in [[1, 0], [0, 1], [1, 1], [2, 1]] {
            let s: S = summand(&sigma, &u, int_exponent(40)).unwrap();
            assert_eq!(s.valuation(), Some(summand_valuation(&sigma, &u)), "u={u:?}");
        }
    }

    #[test]
    fn one_variable() {
        let sigma = [exponent(1, 3)];
        let a: S = milne_lhs(1, &sigma, int_exponent(10)).unwrap();
        let b: S = milne_rhs(1, &sigma, int_exponent(10)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_variables() {
        let sigma = [exponent(0, 1), exponent(1, 7)];
        let a: S = milne_lhs(2, &sigma, int_exponent(6)).unwrap();
        let b: S = milne_rhs(2, &sigma, int_exponent(6)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejected() {
        assert!(matches!(
            milne_lhs::<i64>(2, &[exponent(1, 3), exponent(1, 3)], int_exponent(3)),
            Err(Error::RejectedSpecialization(_))
        ));
        assert!(matches!(
            milne_rhs::<i64>(2, &[exponent(1, 3), exponent(-1, 3)], int_exponent(3)),
            Err(Error::RejectedSpecialization(_))
        ));
    }
}
