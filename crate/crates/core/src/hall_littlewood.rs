//! Modified Hall–Littlewood polynomials `Q'` at principal specializations.
//!
//! Single-variable skew values `Q'_{λ/μ}(1)` come from two closed forms (a
//! product over `μ` divided by `b_μ`, and a product of Gaussian binomials over
//! columns) which are evaluated independently and compared on every call.
//! Values of `Q'_{(2^m)}` on a monomial alphabet `x_i = q^{σ_i}` are assembled
//! from the branching rule over chains of two-column partitions.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::partition::{b_of, AlphabetSpec, Partition};
use crate::qseries::{inverse_poch_table, qbin};
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// `n(λ/μ) = sum binom(λ'_i - μ'_i, 2)`; only meaningful when `μ ⊆ λ`.
pub fn n_skew(lambda: &Partition, mu: &Partition) -> u64 {
    let (lc, mc) = (lambda.conjugate(), mu.conjugate());
    (1..=lc.len())
        .map(|i| {
            let d = lc.part(i).saturating_sub(mc.part(i));
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// `q^{n(λ/μ)} / b_μ(q) * prod_{i <= l(μ)} (1 - q^{λ'_{μ_i} - i + 1})`.
pub fn skew_qprime_one_product<C: Coefficient>(lambda: &Partition, mu: &Partition) -> Result<ExactSeries<C>> {
    if !lambda.contains(mu) {
        return Ok(ExactSeries::zero(Order::Exact));
    }
    let lc = lambda.conjugate();
    let mut num = ExactSeries::<C>::monomial(
        C::one(),
        int_exponent(n_skew(lambda, mu) as i64),
        Order::Exact,
    );
    for (i, &m) in mu.parts().iter().enumerate() {
        let e = lc.part(m as usize) as i64 - i as i64;
        num = num.mul_one_minus(int_exponent(e));
    }
    num.div_exact(&b_of(mu))
}

/// `q^{n(λ/μ)} prod_i [λ'_i - μ'_{i+1} choose λ'_i - μ'_i]_q`.
pub fn skew_qprime_one_binomial<C: Coefficient>(lambda: &Partition, mu: &Partition) -> ExactSeries<C> {
    if !lambda.contains(mu) {
        return ExactSeries::zero(Order::Exact);
    }
    let (lc, mc) = (lambda.conjugate(), mu.conjugate());
    let mut acc = ExactSeries::<C>::monomial(
        C::one(),
        int_exponent(n_skew(lambda, mu) as i64),
        Order::Exact,
    );
    for i in 1..=lc.len() {
        let top = lc.part(i) - mc.part(i + 1);
        acc = acc.mul(&qbin(top, lc.part(i) - mc.part(i)));
    }
    acc
}

/// `Q'_{λ/μ}(1; q)`, zero unless `μ ⊆ λ`. Both closed forms are computed and
/// must agree.
pub fn skew_qprime_one<C: Coefficient>(lambda: &Partition, mu: &Partition) -> Result<ExactSeries<C>> {
    let product = skew_qprime_one_product(lambda, mu)?;
    let binomial = skew_qprime_one_binomial(lambda, mu);
    if let Some(m) = product.first_mismatch(&binomial) {
        return Err(Error::Consistency(format!(
            "Q'_{lambda}/{mu}(1): closed forms differ at q^{}: {} vs {}",
            m.exponent, m.lhs, m.rhs
        )));
    }
    Ok(binomial)
}

/// Two-column partition `(2^twos 1^ones)`.
type Shape = (usize, usize);

fn size(s: Shape) -> i64 {
    2 * s.0 as i64 + s.1 as i64
}

/// Memoized skew values between two-column shapes.
struct SkewTable<C: Coefficient> {
    cache: HashMap<(Shape, Shape), ExactSeries<C>>,
}

impl<C: Coefficient> SkewTable<C> {
    fn new() -> Self {
        SkewTable { cache: HashMap::new() }
    }

    fn get(&mut self, outer: Shape, inner: Shape) -> Result<&ExactSeries<C>> {
        if let std::collections::hash_map::Entry::Vacant(slot) = self.cache.entry((outer, inner)) {
            slot.insert(skew_qprime_one(
                &Partition::two_column(outer.0, outer.1),
                &Partition::two_column(inner.0, inner.1),
            )?);
        }
        Ok(&self.cache[&(outer, inner)])
    }
}

/// Two-column shapes contained in `outer`.
fn inner_shapes(outer: Shape) -> impl Iterator<Item = Shape> {
    let (t, k) = outer;
    (0..=t).flat_map(move |t2| (0..=t + k - t2).map(move |k2| (t2, k2)))
}

/// Lower bound `c * |μ|` on the `q`-exponent still to come from the levels
/// after the current one, where `c = min(0, σ_j)` over those levels.
fn tail_floor(sigma: &[Exponent]) -> Vec<Exponent> {
    let mut out = vec![Ratio::zero(); sigma.len() + 1];
    for i in (0..sigma.len()).rev() {
        out[i] = out[i + 1].min(sigma[i]);
    }
    out
}

/// Exact valuation of `Q'_{(2^m)}(q^{σ_1}, ..., q^{σ_n})`.
///
/// Every chain contributes a polynomial with nonnegative coefficients and
/// constant term 1 times `q^{σ.d + n(chain)}`, so no cancellation occurs and a
/// min-plus pass over the chain states gives the valuation.
pub fn qprime_2m_valuation(m: usize, alphabet: &AlphabetSpec) -> Option<Exponent> {
    let sigma = &alphabet.exponents;
    let n = sigma.len();
    if n == 0 {
        return (m == 0).then(Ratio::zero);
    }
    let mut cur: HashMap<Shape, Exponent> = HashMap::from([((m, 0), Ratio::zero())]);
    for (i, &s) in sigma.iter().enumerate() {
        let mut next: HashMap<Shape, Exponent> = HashMap::new();
        for (&outer, &v) in &cur {
            let targets: Vec<Shape> = if i + 1 == n {
                vec![(0, 0)]
            } else {
                inner_shapes(outer).collect()
            };
            let lo = Partition::two_column(outer.0, outer.1);
            for inner in targets {
                let mu = Partition::two_column(inner.0, inner.1);
                let e = v
                    + s * int_exponent(size(outer) - size(inner))
                    + int_exponent(n_skew(&lo, &mu) as i64);
                let slot = next.entry(inner).or_insert(e);
                if e < *slot {
                    *slot = e;
                }
            }
        }
        cur = next;
    }
    cur.get(&(0, 0)).copied()
}

/// `Q'_{(2^m)}(q^{σ_1}, ..., q^{σ_n}; q)` truncated at `order`.
pub fn qprime_2m<C: Coefficient>(m: usize, alphabet: &AlphabetSpec, order: Exponent) -> Result<ExactSeries<C>> {
    let mut table = SkewTable::new();
    qprime_2m_with(m, alphabet, order, &mut table)
}

fn qprime_2m_with<C: Coefficient>(
    m: usize,
    alphabet: &AlphabetSpec,
    order: Exponent,
    table: &mut SkewTable<C>,
) -> Result<ExactSeries<C>> {
    let sigma = &alphabet.exponents;
    let n = sigma.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty alphabet".into()));
    }
    let floor = tail_floor(sigma);
    let cap = |level: usize, s: Shape| Order::UpTo(order - floor[level] * int_exponent(size(s)));
    let mut cur: HashMap<Shape, ExactSeries<C>> =
        HashMap::from([((m, 0), ExactSeries::one(cap(0, (m, 0))))]);
    for (i, &s) in sigma.iter().enumerate() {
        let mut next: HashMap<Shape, ExactSeries<C>> = HashMap::new();
        let mut outers: Vec<Shape> = cur.keys().copied().collect();
        outers.sort_unstable();
        for outer in outers {
            let f = &cur[&outer];
            let targets: Vec<Shape> = if i + 1 == n {
                vec![(0, 0)]
            } else {
                inner_shapes(outer).collect()
            };
            for inner in targets {
                let skew = table.get(outer, inner)?;
                if skew.is_zero() {
                    continue;
                }
                let weight = skew.shifted(s * int_exponent(size(outer) - size(inner)));
                let term = f.mul(&weight).truncated(cap(i + 1, inner));
                if term.is_zero() {
                    continue;
                }
                match next.get_mut(&inner) {
                    Some(acc) => *acc = acc.add(&term),
                    None => {
                        next.insert(inner, term);
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur
        .remove(&(0, 0))
        .unwrap_or_else(|| ExactSeries::zero(Order::UpTo(order)))
        .truncated(Order::UpTo(order)))
}

/// `sum_m q^{shift m} / (q)_m * Q'_{(2^m)}(q^σ)` truncated at `order`.
///
/// The `m`-th term has valuation at least
/// `shift m + 2m min(0, min σ) + m(m/n - 1)`: each of the two columns of
/// `(2^m)` drops to zero over `n` levels and the drops `d` contribute
/// `binom(d, 2)`, which is convex. The sum stops once that bound passes
/// `order`, and skips individual terms whose exact valuation does.
pub fn qprime_chain_sum<C: Coefficient>(alphabet: &AlphabetSpec, shift: Exponent, order: Exponent) -> Result<ExactSeries<C>> {
    let n = alphabet.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty alphabet".into()));
    }
    let low = alphabet
        .exponents
        .iter()
        .copied()
        .fold(Ratio::zero(), |a: Exponent, b| a.min(b));
    let bound = |m: i64| -> Exponent {
        let m_r = int_exponent(m);
        shift * m_r + int_exponent(2) * m_r * low + m_r * (m_r / int_exponent(n as i64) - Ratio::one())
    };
    // the bound is a convex quadratic in m; walk past its minimum, then stop
    // at the first m where it exceeds the order
    let mut m_max = 0i64;
    loop {
        let next = m_max + 1;
        if bound(next) > order && bound(next + 1) >= bound(next) {
            break;
        }
        m_max = next;
        if m_max > 100_000 {
            return Err(Error::Enumeration("chain sum cutoff did not converge".into()));
        }
    }
    let full = Order::UpTo(order);
    let inv = inverse_poch_table::<C>(m_max as u64, 1, order.max(Ratio::zero()));
    let mut table = SkewTable::new();
    let mut acc = ExactSeries::zero(full);
    for m in 0..=m_max as usize {
        let Some(v) = qprime_2m_valuation(m, alphabet) else {
            continue;
        };
        let lead = shift * int_exponent(m as i64);
        if v + lead > order {
            continue;
        }
        if v + lead < bound(m as i64) {
            return Err(Error::Enumeration(format!(
                "Q'_(2^{m}) valuation {} below its proven bound",
                v + lead
            )));
        }
        // Q' needs precision up to order - lead - (valuation of 1/(q)_m = 0)
        let q = qprime_2m_with(m, alphabet, order - lead, &mut table)?;
        let term = q.shifted(lead).mul(&inv[m]).truncated(full);
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exponent;

    type S = ExactSeries<i64>;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn empty_skew_is_one() {
        for lam in Partition::in_box(3, 3) {
            assert_eq!(skew_qprime_one::<i64>(&lam, &lam).unwrap(), S::one(Order::Exact));
        }
    }

    #[test]
    fn non_contained_is_zero() {
        assert!(skew_qprime_one::<i64>(&p(&[2]), &p(&[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn two_one_over_one() {
        // both closed forms give 1 + q
        let s = skew_qprime_one::<i64>(&p(&[2, 1]), &p(&[1])).unwrap();
        assert_eq!(s, S::from_i64s(&[1, 1], Order::Exact));
    }

    #[test]
    fn rectangles_at_one() {
        for m in 0..6u64 {
            let s = skew_qprime_one::<i64>(&Partition::rectangle(2, m as usize), &Partition::empty()).unwrap();
            assert_eq!(s, S::monomial(1, int_exponent((m * m - m) as i64), Order::Exact));
        }
    }

    #[test]
    fn qprime_small_values() {
        let big = int_exponent(50);
        assert_eq!(qprime_2m::<i64>(0, &AlphabetSpec::ones(3), big).unwrap(), S::one(Order::UpTo(big)));
        assert_eq!(
            qprime_2m::<i64>(1, &AlphabetSpec::ones(2), big).unwrap(),
            S::from_i64s(&[3], Order::UpTo(big))
        );
        for m in 0..5usize {
            let s = qprime_2m::<i64>(m, &AlphabetSpec::ones(1), big).unwrap();
            assert_eq!(s, S::monomial(1, int_exponent((m * m - m) as i64), Order::UpTo(big)));
        }
    }

    #[test]
    fn valuation_matches_expansion() {
        for alphabet in [
            AlphabetSpec::ones(3),
            AlphabetSpec::alternating(3),
            AlphabetSpec::new(vec![exponent(0, 1), exponent(1, 7)]),
        ] {
            for m in 0..5 {
                let s = qprime_2m::<i64>(m, &alphabet, int_exponent(40)).unwrap();
                assert_eq!(s.valuation(), qprime_2m_valuation(m, &alphabet));
            }
        }
    }

    #[test]
    fn truncation_is_consistent() {
        let a = AlphabetSpec::alternating(4);
        let full = qprime_2m::<i64>(4, &a, int_exponent(60)).unwrap();
        let cut = qprime_2m::<i64>(4, &a, int_exponent(5)).unwrap();
        assert_eq!(full.truncated(Order::up_to(5)), cut);
    }

    #[test]
    fn chain_sum_single_letter() {
        // n = 1: sum q^{m^2} / (q)_m
        let s = qprime_chain_sum::<i64>(&AlphabetSpec::ones(1), int_exponent(1), int_exponent(10)).unwrap();
        assert_eq!(s.integer_coeffs(10).unwrap(), vec![1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6]);
    }
}
