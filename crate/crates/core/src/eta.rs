//! Dedekind eta quotients `prod eta(t tau)^e` with their `q^{t e/24}`
//! prefactors kept on the Puiseux grid.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::qseries::{poch_step, PochLength};
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use num_rational::Ratio;

/// `prod_i eta(t_i tau)^{e_i}`; each factor is `(multiplier t, power e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub factors: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(factors: Vec<(u64, i64)>) -> Result<Self> {
        for &(t, e) in &factors {
            if t == 0 {
                return Err(Error::InvalidArgument("eta multiplier must be positive".into()));
            }
            if e == 0 {
                return Err(Error::InvalidArgument("eta power must be nonzero".into()));
            }
        }
        Ok(EtaQuotient { factors })
    }

    /// `eta(tau)^e`
    pub fn power(e: i64) -> Result<Self> {
        Self::new(vec![(1, e)])
    }

    /// Exponent of the leading `q`-power, `sum t e / 24`.
    pub fn prefactor(&self) -> Exponent {
        self.factors
            .iter()
            .map(|&(t, e)| Ratio::new(t as i64 * e, 24))
            .sum()
    }
}

/// Expands an eta quotient up to the absolute exponent `order`.
pub fn eta_quotient<C: Coefficient>(spec: &EtaQuotient, order: Exponent) -> Result<ExactSeries<C>> {
    let offset = spec.prefactor();
    let rel = order - offset;
    let bound = Order::UpTo(rel);
    let mut body = ExactSeries::one(bound);
    for &(t, e) in &spec.factors {
        let t = int_exponent(t as i64);
        let base = poch_step::<C>(t, t, PochLength::Infinite, bound)?;
        body = body.mul(&base.pow(e, rel)?).truncated(bound);
    }
    Ok(body.shifted(offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::euler;
    use crate::series::exponent;

    type S = ExactSeries<i64>;

    #[test]
    fn cancellation() {
        let spec = EtaQuotient::new(vec![(1, 1), (1, -1)]).unwrap();
        let s: S = eta_quotient(&spec, int_exponent(10)).unwrap();
        assert_eq!(s, S::one(Order::up_to(10)));
    }

    #[test]
    fn jacobi_cube() {
        let s: S = eta_quotient(&EtaQuotient::power(3).unwrap(), int_exponent(8)).unwrap();
        assert_eq!(s.valuation(), Some(exponent(1, 8)));
        let base = exponent(1, 8);
        for (m, c) in [(0, 1), (1, -3), (3, 5), (6, -7)] {
            assert_eq!(s.coeff(base + int_exponent(m)), Some(c));
        }
        assert_eq!(s.coeff(base + int_exponent(2)), Some(0));
    }

    #[test]
    fn eta_two_tau() {
        let spec = EtaQuotient::new(vec![(2, 1)]).unwrap();
        let s: S = eta_quotient(&spec, int_exponent(12)).unwrap();
        assert_eq!(s.offset(), exponent(1, 12));
        let body = s.shifted(-exponent(1, 12));
        let want = euler::<i64>(int_exponent(6)).dilated(2);
        assert_eq!(body.truncated(Order::up_to(11)), want.truncated(Order::up_to(11)));
    }

    #[test]
    fn offset_is_power_over_24_and_body_is_euler_power() {
        for e in [-3i64, -1, 1, 2, 5] {
            let s: S = eta_quotient(&EtaQuotient::power(e).unwrap(), int_exponent(9)).unwrap();
            assert_eq!(s.offset(), exponent(e, 24));
            let body = s.shifted(-exponent(e, 24));
            let want = euler::<i64>(int_exponent(9)).pow(e, int_exponent(9)).unwrap();
            assert_eq!(body.truncated(Order::up_to(8)), want.truncated(Order::up_to(8)));
        }
    }

    #[test]
    fn invalid_factors() {
        assert!(EtaQuotient::new(vec![(0, 1)]).is_err());
        assert!(EtaQuotient::new(vec![(1, 0)]).is_err());
    }
}
