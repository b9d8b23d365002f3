//! Integer partitions and the statistics used by the Hall–Littlewood sums.

use crate::coefficient::Coefficient;
use crate::qseries::qfactorial;
use crate::series::{ExactSeries, Exponent, Order};
use num_rational::Ratio;
use std::fmt;

/// A partition, stored as weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Sorts the input and drops zero parts.
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// Partition with the given column heights (its conjugate).
    pub fn from_columns(columns: &[u64]) -> Self {
        Partition::new(columns.to_vec()).conjugate()
    }

    /// `(a^m)`
    pub fn rectangle(a: u64, m: usize) -> Self {
        Partition::new(vec![a; m])
    }

    /// `(2^twos 1^ones)`
    pub fn two_column(twos: usize, ones: usize) -> Self {
        let mut parts = vec![2; twos];
        parts.extend(std::iter::repeat_n(1, ones));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> u64 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `λ_i` with 1-based `i`, 0 past the end.
    pub fn part(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = (1..=self.largest())
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u64)
            .collect();
        Partition { parts: cols }
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// `n(λ) = sum (i-1) λ_i`
    pub fn n(&self) -> u64 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u64 * p).sum()
    }

    /// `n(λ) = sum binom(λ'_i, 2)`, the column form.
    pub fn n_from_columns(&self) -> u64 {
        self.conjugate().parts.iter().map(|&c| c * c.saturating_sub(1) / 2).sum()
    }

    /// `(λ|μ) = sum λ'_i μ'_i`
    pub fn bracket(&self, other: &Partition) -> u64 {
        let (a, b) = (self.conjugate(), other.conjugate());
        a.parts.iter().zip(&b.parts).map(|(x, y)| x * y).sum()
    }

    /// Multiplicities `λ'_i - λ'_{i+1}` for `i = 1..=λ_1`.
    pub fn column_drops(&self) -> Vec<u64> {
        let c = self.conjugate();
        (1..=c.len()).map(|i| c.part(i) - c.part(i + 1)).collect()
    }

    /// All partitions fitting inside the `rows x cols` box.
    pub fn in_box(rows: usize, cols: u64) -> Vec<Partition> {
        fn rec(rows: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
            out.push(Partition::new(cur.clone()));
            if cur.len() == rows {
                return;
            }
            for p in 1..=cap {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions contained in `self`.
    pub fn subpartitions(&self) -> Vec<Partition> {
        Partition::in_box(self.len(), self.largest())
            .into_iter()
            .filter(|m| self.contains(m))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `b_λ(q) = prod_i (q)_{λ'_i - λ'_{i+1}}`
pub fn b_of<C: Coefficient>(lambda: &Partition) -> ExactSeries<C> {
    lambda
        .column_drops()
        .into_iter()
        .filter(|&m| m > 0)
        .fold(ExactSeries::one(Order::Exact), |acc, m| acc.mul(&qfactorial(m)))
}

pub fn n_of(lambda: &Partition) -> u64 {
    lambda.n()
}

pub fn bracket(lambda: &Partition, mu: &Partition) -> u64 {
    lambda.bracket(mu)
}

/// Monomial specialization `x_i = q^{σ_i}` of a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetSpec {
    pub exponents: Vec<Exponent>,
}

impl AlphabetSpec {
    pub fn new(exponents: Vec<Exponent>) -> Self {
        AlphabetSpec { exponents }
    }

    /// `(1, ..., 1)`
    pub fn ones(n: usize) -> Self {
        AlphabetSpec::new(vec![Ratio::from_integer(0); n])
    }

    /// `(1, q^{-1}, 1, q^{-1}, ...)`
    pub fn alternating(n: usize) -> Self {
        AlphabetSpec::new(
            (0..n)
                .map(|i| Ratio::from_integer(if i % 2 == 0 { 0 } else { -1 }))
                .collect(),
        )
    }

    /// `(q^{1/2}, q^{-1/2}, ...)`
    pub fn half_alternating(n: usize) -> Self {
        AlphabetSpec::new(
            (0..n)
                .map(|i| Ratio::new(if i % 2 == 0 { 1 } else { -1 }, 2))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}
