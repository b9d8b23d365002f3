//! Weighted lattice sums over shifted residue classes.
//!
//! Every lattice side in this crate has the shape
//! `sum_{v ≡ w (mod M)} weight(v) sign(v) q^{(|v|² - |w|²)/e}`, where the
//! weight is a ratio of Weyl-denominator-like products. [`BosonicSpec`]
//! captures all of them.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::series::{ExactSeries, Exponent, Order};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// `ξ(v/w) = prod_{i<j} (v_i² - v_j²)/(w_i² - w_j²)`
    Xi,
    /// `χ(v/w) = prod_i v_i/w_i · ξ(v/w)`
    Chi,
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignRule {
    None,
    /// `(-1)^{|v| - |w|}`
    Parity,
    /// `(-1)^{(|v| - |w|)/M}`
    ParityOverModulus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BosonicSpec {
    pub modulus: i64,
    /// Lattice `(Z/2)^n` instead of `Z^n`.
    pub half_integer: bool,
    /// Residue class representative `w`.
    pub base: Vec<Exponent>,
    pub weight: WeightKind,
    pub weight_ref: Vec<Exponent>,
    pub sign_rule: SignRule,
    pub exp_denom: i64,
}

fn lift(x: Exponent) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

impl BosonicSpec {
    pub fn new(
        modulus: i64,
        half_integer: bool,
        base: Vec<Exponent>,
        weight: WeightKind,
        weight_ref: Vec<Exponent>,
        sign_rule: SignRule,
        exp_denom: i64,
    ) -> Result<Self> {
        if modulus <= 0 || exp_denom <= 0 {
            return Err(Error::InvalidArgument("modulus and exponent denominator must be positive".into()));
        }
        let grid = if half_integer { 2 } else { 1 };
        if base.iter().any(|b| (b * Ratio::from_integer(grid)).denom() != &1) {
            return Err(Error::InvalidArgument(format!(
                "base {base:?} is not on the lattice (Z/{grid})^n"
            )));
        }
        if weight != WeightKind::Trivial {
            if weight_ref.len() != base.len() {
                return Err(Error::InvalidArgument("weight reference has the wrong dimension".into()));
            }
            for i in 0..weight_ref.len() {
                for j in i + 1..weight_ref.len() {
                    if weight_ref[i] * weight_ref[i] == weight_ref[j] * weight_ref[j] {
                        return Err(Error::InvalidArgument(format!(
                            "weight reference {weight_ref:?} has repeated squares"
                        )));
                    }
                }
            }
            if weight == WeightKind::Chi && weight_ref.iter().any(Zero::is_zero) {
                return Err(Error::InvalidArgument("chi weight reference has a zero entry".into()));
            }
        }
        Ok(BosonicSpec {
            modulus,
            half_integer,
            base,
            weight,
            weight_ref,
            sign_rule,
            exp_denom,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `|w|² / e`, the `q`-power stripped from the sum.
    pub fn prefactor(&self) -> Exponent {
        let norm: Exponent = self.base.iter().map(|b| b * b).sum();
        norm / Ratio::from_integer(self.exp_denom)
    }

    fn weight_of(&self, v: &[Exponent]) -> BigRational {
        match self.weight {
            WeightKind::Xi => xi_weight(v, &self.weight_ref),
            WeightKind::Chi => chi_weight(v, &self.weight_ref),
            WeightKind::Trivial => BigRational::one(),
        }
    }
}

pub fn xi_weight(v: &[Exponent], w: &[Exponent]) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let num = lift(v[i] * v[i] - v[j] * v[j]);
            if num.is_zero() {
                return BigRational::zero();
            }
            acc *= num / lift(w[i] * w[i] - w[j] * w[j]);
        }
    }
    acc
}

pub fn chi_weight(v: &[Exponent], w: &[Exponent]) -> BigRational {
    let mut acc = xi_weight(v, w);
    for (x, y) in v.iter().zip(w) {
        acc *= lift(*x) / lift(*y);
    }
    acc
}

/// Counters collected while summing, for the integrality invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BosonicStats {
    pub visited: u64,
    pub contributing: u64,
}

/// `sum weight · sign · q^{(|v|² - |w|²)/e}` over `v ≡ w (mod M)`, truncated
/// at `order`. Every contributing exponent must be a nonnegative integer.
pub fn bosonic_sum<C: Coefficient>(spec: &BosonicSpec, order: Exponent) -> Result<ExactSeries<C>> {
    bosonic_sum_with_stats(spec, order).map(|(s, _)| s)
}

pub fn bosonic_sum_with_stats<C: Coefficient>(
    spec: &BosonicSpec,
    order: Exponent,
) -> Result<(ExactSeries<C>, BosonicStats)> {
    let n = spec.dim();
    let m = spec.modulus;
    let e = Ratio::from_integer(spec.exp_denom);
    let base_norm: Exponent = spec.base.iter().map(|b| b * b).sum();
    // |v|² <= order e + |w|²
    let radius2 = order * e + base_norm;
    let mut stats = BosonicStats::default();
    let mut sums: BTreeMap<i64, BigRational> = BTreeMap::new();
    if radius2 >= Ratio::zero() {
        let radius = sqrt_ceil(radius2);
        let ranges: Vec<(i64, i64)> = spec
            .base
            .iter()
            .map(|b| {
                // t with |b + M t| <= radius
                let lo = ((-radius - b) / Ratio::from_integer(m)).ceil().to_integer();
                let hi = ((radius - b) / Ratio::from_integer(m)).floor().to_integer();
                (lo, hi)
            })
            .collect();
        let mut v = vec![Ratio::zero(); n];
        let mut t = vec![0i64; n];
        walk(spec, &ranges, 0, Ratio::zero(), radius2, &mut v, &mut t, &mut |v, t| {
            stats.visited += 1;
            let w = spec.weight_of(v);
            if w.is_zero() {
                return Ok(());
            }
            let norm: Exponent = v.iter().map(|x| x * x).sum();
            let ex = (norm - base_norm) / e;
            if !ex.is_integer() || ex < Ratio::zero() {
                return Err(Error::Integrality(format!(
                    "lattice point v={v:?} gives exponent {ex} (base {:?}, e={})",
                    spec.base, spec.exp_denom
                )));
            }
            if ex > order {
                return Ok(());
            }
            let shift: i64 = t.iter().sum();
            let negative = match spec.sign_rule {
                SignRule::None => false,
                SignRule::Parity => (m * shift).rem_euclid(2) == 1,
                SignRule::ParityOverModulus => shift.rem_euclid(2) == 1,
            };
            stats.contributing += 1;
            let slot = sums.entry(ex.to_integer()).or_insert_with(BigRational::zero);
            if negative {
                *slot -= w;
            } else {
                *slot += w;
            }
            Ok(())
        })?;
    }
    let top = order.floor().to_integer();
    let mut coeffs = vec![C::zero(); (top + 1).max(0) as usize];
    for (ex, c) in sums {
        if !c.is_integer() {
            return Err(Error::Integrality(format!("coefficient of q^{ex} is {c}")));
        }
        coeffs[ex as usize] = C::from_bigint(&c.to_integer())
            .ok_or_else(|| Error::InvalidArgument(format!("coefficient {c} overflows")))?;
    }
    Ok((ExactSeries::from_coeffs(coeffs, Order::UpTo(order)), stats))
}

/// Smallest integer `r` with `r² >= x`.
fn sqrt_ceil(x: Exponent) -> Exponent {
    let mut r = (x.numer().abs() as f64 / *x.denom() as f64).sqrt().floor() as i64;
    while Ratio::from_integer(r * r) > x {
        r -= 1;
    }
    while Ratio::from_integer(r * r) < x {
        r += 1;
    }
    Ratio::from_integer(r)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    spec: &BosonicSpec,
    ranges: &[(i64, i64)],
    i: usize,
    partial: Exponent,
    radius2: Exponent,
    v: &mut Vec<Exponent>,
    t: &mut Vec<i64>,
    f: &mut dyn FnMut(&[Exponent], &[i64]) -> Result<()>,
) -> Result<()> {
    if i == v.len() {
        return f(v, t);
    }
    let m = Ratio::from_integer(spec.modulus);
    for ti in ranges[i].0..=ranges[i].1 {
        let x = spec.base[i] + m * Ratio::from_integer(ti);
        let p = partial + x * x;
        if p > radius2 {
            continue;
        }
        v[i] = x;
        t[i] = ti;
        walk(spec, ranges, i + 1, p, radius2, v, t, f)?;
    }
    Ok(())
}

/// `ρ = (1/2, 3/2, ..., n - 1/2)`
pub fn rho_half(n: usize) -> Vec<Exponent> {
    (0..n).map(|i| Ratio::new(2 * i as i64 + 1, 2)).collect()
}

/// `ρ* = (1, 2, ..., n)`
pub fn rho_star(n: usize) -> Vec<Exponent> {
    (1..=n).map(|i| Ratio::from_integer(i as i64)).collect()
}

/// `(0, 1, ..., n - 1)`
pub fn rho_zero(n: usize) -> Vec<Exponent> {
    (0..n).map(|i| Ratio::from_integer(i as i64)).collect()
}

/// `w + c` componentwise.
pub fn shifted(w: &[Exponent], c: i64) -> Vec<Exponent> {
    w.iter().map(|x| x + Ratio::from_integer(c)).collect()
}
