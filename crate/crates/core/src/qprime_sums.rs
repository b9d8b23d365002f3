//! `sum_m q^{s m}/(q)_m Q'_{(2^m)}(x)` at the two principal alphabets, and
//! the `A_n` Cartan sums they equal.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::fermionic::{fermionic_sum, FermionicSpec};
use crate::hall_littlewood::qprime_chain_sum;
use crate::partition::AlphabetSpec;
use crate::series::{int_exponent, ExactSeries, Exponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainVariant {
    /// `q^m`, alphabet `(1^n)`; Cartan side without linear term.
    Plain,
    /// `q^{2m}`, alphabet `(1, q^{-1}, 1, ...)`; Cartan side with `|r|_-`.
    Alternating,
}

impl ChainVariant {
    pub fn alphabet(self, n: usize) -> AlphabetSpec {
        match self {
            ChainVariant::Plain => AlphabetSpec::ones(n),
            ChainVariant::Alternating => AlphabetSpec::alternating(n),
        }
    }

    fn shift(self) -> Exponent {
        match self {
            ChainVariant::Plain => int_exponent(1),
            ChainVariant::Alternating => int_exponent(2),
        }
    }
}

/// `sum_m q^{s m}/(q)_m Q'_{(2^m)}(x)` with `Q'` from the chain expansion.
pub fn qprime_series_sum<C: Coefficient>(n: usize, variant: ChainVariant, order: Exponent) -> Result<ExactSeries<C>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    qprime_chain_sum(&variant.alphabet(n), variant.shift(), order)
}

/// `sum_{r in N^n} q^{½ r C r^t (+ |r|_-)}/(q)_r` with `C` the `A_n` Cartan
/// matrix.
pub fn cartan_sum<C: Coefficient>(n: usize, variant: ChainVariant, order: Exponent) -> Result<ExactSeries<C>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let p = match variant {
        ChainVariant::Plain => 2,
        ChainVariant::Alternating => 1,
    };
    fermionic_sum(&FermionicSpec::new(n + 1, 2, p)?, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::inverse_poch_table;
    use crate::series::Order;

    type S = ExactSeries<i64>;

    #[test]
    fn single_letter_is_rogers_ramanujan() {
        let a: S = qprime_series_sum(1, ChainVariant::Plain, int_exponent(15)).unwrap();
        let inv = inverse_poch_table::<i64>(4, 1, int_exponent(15));
        let mut want = S::zero(Order::up_to(15));
        for m in 0..4i64 {
            want = want.add(&inv[m as usize].shifted(int_exponent(m * m)).truncated(Order::up_to(15)));
        }
        assert_eq!(a, want);
    }

    #[test]
    fn both_sides_agree_small() {
        for n in 1..=3 {
            for v in [ChainVariant::Plain, ChainVariant::Alternating] {
                let a: S = qprime_series_sum(n, v, int_exponent(12)).unwrap();
                let b: S = cartan_sum(n, v, int_exponent(12)).unwrap();
                assert_eq!(a, b, "n={n} {v:?}");
            }
        }
    }

    #[test]
    fn constant_term() {
        let a: S = qprime_series_sum(3, ChainVariant::Plain, int_exponent(0)).unwrap();
        assert_eq!(a.integer_coeffs(0).unwrap(), vec![1]);
        // r = (0,1,0) has exponent 1 - 1 = 0
        let b: S = qprime_series_sum(3, ChainVariant::Alternating, int_exponent(0)).unwrap();
        assert_eq!(b.integer_coeffs(0).unwrap(), vec![2]);
    }
}
