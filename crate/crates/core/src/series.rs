//! Truncated Puiseux series in `q` with exact coefficients.
//!
//! A series lives on the grid `q^{1/D}`: coefficient `i` sits at exponent
//! `(offset + i)/D`. Truncated series carry an inclusive order bound; every
//! coefficient at an exponent `<= order` is the true coefficient of the
//! infinite object. Exact series (polynomials and Laurent polynomials) carry
//! [`Order::Exact`] and track all of their coefficients.
//!
//! Binary operations first move both operands onto the grid given by the lcm
//! of their denominators.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rational exponent of `q`.
pub type Exponent = Ratio<i64>;

pub fn exponent(num: i64, den: i64) -> Exponent {
    Ratio::new(num, den)
}

pub fn int_exponent(n: i64) -> Exponent {
    Ratio::from_integer(n)
}

/// Inclusive truncation bound of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    /// Every coefficient is known (a finite Laurent–Puiseux polynomial).
    Exact,
    /// Coefficients at exponents `<= bound` are known.
    UpTo(Exponent),
}

impl Order {
    pub fn up_to(n: i64) -> Self {
        Order::UpTo(int_exponent(n))
    }

    pub fn bound(self) -> Option<Exponent> {
        match self {
            Order::Exact => None,
            Order::UpTo(o) => Some(o),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Order::Exact)
    }

    pub fn shifted(self, by: Exponent) -> Self {
        match self {
            Order::Exact => Order::Exact,
            Order::UpTo(o) => Order::UpTo(o + by),
        }
    }

    /// Largest grid index `g` with `g / denom <= order`.
    fn grid_top(self, denom: i64) -> Option<i64> {
        self.bound()
            .map(|o| (o * Ratio::from_integer(denom)).floor().to_integer())
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Exact, Order::Exact) => Ordering::Equal,
            (Order::Exact, Order::UpTo(_)) => Ordering::Greater,
            (Order::UpTo(_), Order::Exact) => Ordering::Less,
            (Order::UpTo(a), Order::UpTo(b)) => a.cmp(b),
        }
    }
}

impl From<i64> for Order {
    fn from(n: i64) -> Self {
        Order::up_to(n)
    }
}

impl From<Exponent> for Order {
    fn from(o: Exponent) -> Self {
        Order::UpTo(o)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact => write!(f, "exact"),
            Order::UpTo(o) => write!(f, "{o}"),
        }
    }
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch<C> {
    pub exponent: Exponent,
    pub lhs: C,
    pub rhs: C,
}

/// Truncated Puiseux series with exact coefficients.
///
/// Normal form: no leading zero coefficients inside the tracked range, and
/// for exact series no trailing zeros either. `offset / denom` is always a
/// lower bound on the valuation of the underlying (possibly infinite) series,
/// which is what makes the product order rule sound.
#[derive(Clone, Debug)]
pub struct ExactSeries<C = BigInt> {
    denom: i64,
    offset: i64,
    coeffs: Vec<C>,
    order: Order,
}

impl<C: Coefficient> ExactSeries<C> {
    /// Builds a series from raw grid data and normalizes it.
    pub fn from_parts(denom: i64, offset: i64, coeffs: Vec<C>, order: Order) -> Self {
        assert!(denom > 0, "grid denominator must be positive");
        let mut s = ExactSeries {
            denom,
            offset,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    /// Integer power series `sum c_i q^i`.
    pub fn from_coeffs(coeffs: Vec<C>, order: Order) -> Self {
        Self::from_parts(1, 0, coeffs, order)
    }

    pub fn from_i64s(coeffs: &[i64], order: Order) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| C::from_int(c)).collect(), order)
    }

    pub fn zero(order: Order) -> Self {
        Self::from_parts(1, 0, Vec::new(), order)
    }

    pub fn one(order: Order) -> Self {
        Self::from_parts(1, 0, vec![C::one()], order)
    }

    /// `c q^e`
    pub fn monomial(c: C, e: Exponent, order: Order) -> Self {
        let denom = *e.denom();
        Self::from_parts(denom, *e.numer(), vec![c], order)
    }

    fn normalize(&mut self) {
        match self.order.grid_top(self.denom) {
            Some(top) => {
                let want = (top - self.offset + 1).max(0) as usize;
                self.coeffs.truncate(want);
                self.coeffs.resize(want, C::zero());
                let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
                if lead == self.coeffs.len() {
                    self.coeffs.clear();
                    self.offset = self.offset.max(top + 1);
                } else if lead > 0 {
                    self.coeffs.drain(..lead);
                    self.offset += lead as i64;
                }
            }
            None => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
                let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
                self.coeffs.drain(..lead);
                self.offset += lead as i64;
                if self.coeffs.is_empty() {
                    self.offset = 0;
                }
            }
        }
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Lowest exponent that may carry a nonzero coefficient.
    pub fn offset(&self) -> Exponent {
        Ratio::new(self.offset, self.denom)
    }

    /// Raw grid coefficients starting at [`Self::offset`].
    pub fn grid_coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// True if every tracked coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero tracked coefficient.
    pub fn valuation(&self) -> Option<Exponent> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset())
        }
    }

    /// Coefficient of `q^e`, or `None` when `e` lies beyond the order.
    pub fn coeff(&self, e: Exponent) -> Option<C> {
        if let Some(o) = self.order.bound() {
            if e > o {
                return None;
            }
        }
        let scaled = e * Ratio::from_integer(self.denom);
        if !scaled.is_integer() {
            return Some(C::zero());
        }
        let idx = scaled.to_integer() - self.offset;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Some(C::zero());
        }
        Some(self.coeffs[idx as usize].clone())
    }

    /// Coefficient of `q^n` for integer `n`.
    pub fn coeff_int(&self, n: i64) -> Option<C> {
        self.coeff(int_exponent(n))
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Ratio::new(self.offset + i as i64, self.denom), c))
    }

    /// Coefficients of `q^0 .. q^upto` when the series is an integer power
    /// series known at least that far.
    pub fn integer_coeffs(&self, upto: i64) -> Option<Vec<C>> {
        (0..=upto).map(|n| self.coeff_int(n)).collect::<Option<Vec<_>>>().filter(|_| {
            self.terms().all(|(e, _)| e.is_integer() && e >= Ratio::zero())
        })
    }

    /// All nonzero coefficients sit on integer exponents.
    pub fn is_integral(&self) -> bool {
        self.terms().all(|(e, _)| e.is_integer())
    }

    /// Same series on the finer grid `1/denom`; `denom` must be a multiple of
    /// the current grid denominator.
    pub fn rescaled(&self, denom: i64) -> Self {
        assert!(denom % self.denom == 0, "rescale target must refine the grid");
        let f = denom / self.denom;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![C::zero(); (self.coeffs.len() - 1) * f as usize + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                coeffs[i * f as usize] = c.clone();
            }
        }
        Self::from_parts(denom, self.offset * f, coeffs, self.order)
    }

    /// Smallest grid carrying every nonzero coefficient and the offset.
    pub fn coarsened(&self) -> Self {
        let mut g = self.denom;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(self.offset + i as i64));
            }
        }
        if self.coeffs.is_empty() {
            g = self.denom.gcd(&self.offset);
        }
        if g <= 1 {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().step_by(g as usize).cloned().collect();
        Self::from_parts(self.denom / g, self.offset / g, coeffs, self.order)
    }

    fn common_grid(&self, other: &Self) -> (Self, Self) {
        let d = self.denom.lcm(&other.denom);
        (self.rescaled(d), other.rescaled(d))
    }

    /// Grid index of the last tracked slot (exact series: last coefficient).
    fn top_index(&self) -> i64 {
        match self.order.grid_top(self.denom) {
            Some(t) => t,
            None => self.offset + self.coeffs.len() as i64 - 1,
        }
    }

    pub fn truncated(&self, order: Order) -> Self {
        let order = self.order.min(order);
        Self::from_parts(self.denom, self.offset, self.coeffs.clone(), order)
    }

    /// Multiplies by `q^e`.
    pub fn shifted(&self, e: Exponent) -> Self {
        let d = self.denom.lcm(e.denom());
        let s = self.rescaled(d);
        let by = (e * Ratio::from_integer(d)).to_integer();
        Self::from_parts(d, s.offset + by, s.coeffs, self.order.shifted(e))
    }

    pub fn scaled(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.clone() * c.clone()).collect();
        Self::from_parts(self.denom, self.offset, coeffs, self.order)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|x| -x.clone()).collect();
        Self::from_parts(self.denom, self.offset, coeffs, self.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let (a, b) = self.common_grid(other);
        let order = a.order.min(b.order);
        let lo = match (a.coeffs.is_empty(), b.coeffs.is_empty()) {
            (true, false) => b.offset,
            (false, true) => a.offset,
            _ => a.offset.min(b.offset),
        };
        let hi = match order.grid_top(a.denom) {
            Some(t) => t,
            None => a.top_index().max(b.top_index()),
        };
        if hi < lo {
            return Self::from_parts(a.denom, lo, Vec::new(), order);
        }
        let mut out = vec![C::zero(); (hi - lo + 1) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            let g = a.offset + i as i64;
            if g > hi {
                break;
            }
            out[(g - lo) as usize].add_ref(c);
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let g = b.offset + i as i64;
            if g > hi {
                break;
            }
            if subtract {
                out[(g - lo) as usize].sub_ref(c);
            } else {
                out[(g - lo) as usize].add_ref(c);
            }
        }
        Self::from_parts(a.denom, lo, out, order)
    }

    /// Truncated product. The order of the result is
    /// `min(order_f + val_g, order_g + val_f)` with `val` the offset.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common_grid(other);
        let (va, vb) = (a.offset(), b.offset());
        let order = match (a.order, b.order) {
            (Order::Exact, Order::Exact) => Order::Exact,
            (Order::Exact, Order::UpTo(ob)) => {
                if a.coeffs.is_empty() {
                    Order::Exact
                } else {
                    Order::UpTo(ob + va)
                }
            }
            (Order::UpTo(oa), Order::Exact) => {
                if b.coeffs.is_empty() {
                    Order::Exact
                } else {
                    Order::UpTo(oa + vb)
                }
            }
            (Order::UpTo(oa), Order::UpTo(ob)) => Order::UpTo((oa + vb).min(ob + va)),
        };
        let lo = a.offset + b.offset;
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Self::from_parts(a.denom, lo, Vec::new(), order);
        }
        let hi = match order.grid_top(a.denom) {
            Some(t) => t,
            None => lo + (a.coeffs.len() + b.coeffs.len()) as i64 - 2,
        };
        if hi < lo {
            return Self::from_parts(a.denom, lo, Vec::new(), order);
        }
        let len = (hi - lo + 1) as usize;
        let mut out = vec![C::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            let room = (len - i).min(b.coeffs.len());
            for (j, y) in b.coeffs[..room].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j].add_product(x, y);
                }
            }
        }
        Self::from_parts(a.denom, lo, out, order)
    }

    /// Multiplies by `1 - q^e`.
    pub fn mul_one_minus(&self, e: Exponent) -> Self {
        self.sub(&self.shifted(e))
    }

    /// Multiplicative inverse truncated at `order` (and at whatever the
    /// precision of `self` allows). The lowest coefficient must be `±1`.
    pub fn inverse(&self, order: Exponent) -> Result<Self> {
        let Some(lead) = self.coeffs.first() else {
            return Err(Error::NonUnit("zero series".into()));
        };
        if !lead.is_unit() {
            return Err(Error::NonUnit(format!(
                "lowest coefficient {lead} is not a unit"
            )));
        }
        let v = self.offset();
        let own = match self.order {
            Order::Exact => order,
            Order::UpTo(o) => (o - v - v).min(order),
        };
        let d = self.denom;
        let out_offset = -self.offset;
        let top = (own * Ratio::from_integer(d)).floor().to_integer();
        if top < out_offset {
            return Ok(Self::from_parts(d, out_offset, Vec::new(), Order::UpTo(own)));
        }
        let len = (top - out_offset + 1) as usize;
        let mut h: Vec<C> = Vec::with_capacity(len);
        h.push(lead.clone());
        for n in 1..len {
            let mut acc = C::zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                let f = &self.coeffs[i];
                if !f.is_zero() {
                    acc.add_product(f, &h[n - i]);
                }
            }
            // 1/lead == lead for units
            h.push(-(acc * lead.clone()));
        }
        Ok(Self::from_parts(d, out_offset, h, Order::UpTo(own)))
    }

    /// Integer power, truncated at `order`; negative powers need a unit
    /// lowest coefficient.
    pub fn pow(&self, e: i64, order: Exponent) -> Result<Self> {
        let order_bound = Order::UpTo(order);
        let mut base = if e < 0 {
            self.inverse(order)?
        } else {
            self.truncated(order_bound)
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(order_bound);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).truncated(order_bound);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).truncated(order_bound);
            }
        }
        Ok(acc)
    }

    /// Exact quotient of two exact series; fails if the division leaves a
    /// remainder or the divisor's lowest coefficient is not a unit.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if !self.order.is_exact() || !divisor.order.is_exact() {
            return Err(Error::InvalidArgument(
                "exact division needs exact operands".into(),
            ));
        }
        let (a, b) = self.common_grid(divisor);
        let Some(lead) = b.coeffs.first() else {
            return Err(Error::NonUnit("division by zero series".into()));
        };
        if !lead.is_unit() {
            return Err(Error::NonUnit(format!("divisor leads with {lead}")));
        }
        if a.coeffs.is_empty() {
            return Ok(Self::zero(Order::Exact));
        }
        if a.coeffs.len() < b.coeffs.len() {
            return Err(Error::InexactDivision("divisor has larger span".into()));
        }
        let len = a.coeffs.len() - b.coeffs.len() + 1;
        let mut q: Vec<C> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = a.coeffs[n].clone();
            for i in 1..=n.min(b.coeffs.len() - 1) {
                acc.sub_ref(&(b.coeffs[i].clone() * q[n - i].clone()));
            }
            q.push(acc * lead.clone());
        }
        let quotient = Self::from_parts(a.denom, a.offset - b.offset, q, Order::Exact);
        if quotient.mul(&b).first_mismatch(&a).is_some() {
            return Err(Error::InexactDivision("nonzero remainder".into()));
        }
        Ok(quotient)
    }

    /// Substitutes `q -> q^k` for a positive integer `k`.
    pub fn dilated(&self, k: i64) -> Self {
        assert!(k > 0, "dilation factor must be positive");
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![C::zero(); (self.coeffs.len() - 1) * k as usize + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                coeffs[i * k as usize] = c.clone();
            }
        }
        let order = match self.order {
            Order::Exact => Order::Exact,
            Order::UpTo(o) => Order::UpTo(o * Ratio::from_integer(k)),
        };
        Self::from_parts(self.denom, self.offset * k, coeffs, order)
    }

    /// Order up to which `self` and `other` can be compared.
    pub fn comparison_order(&self, other: &Self) -> Order {
        self.order.min(other.order)
    }

    /// First exponent, up to the common order, where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch<C>> {
        let (a, b) = self.common_grid(other);
        let order = a.order.min(b.order);
        let lo = match (a.coeffs.is_empty(), b.coeffs.is_empty()) {
            (true, true) => return None,
            (true, false) => b.offset,
            (false, true) => a.offset,
            _ => a.offset.min(b.offset),
        };
        let hi = match order.grid_top(a.denom) {
            Some(t) => t,
            None => a.top_index().max(b.top_index()),
        };
        let at = |s: &Self, g: i64| -> C {
            let i = g - s.offset;
            if i < 0 || i as usize >= s.coeffs.len() {
                C::zero()
            } else {
                s.coeffs[i as usize].clone()
            }
        };
        (lo..=hi).find_map(|g| {
            let (x, y) = (at(&a, g), at(&b, g));
            (x != y).then(|| Mismatch {
                exponent: Ratio::new(g, a.denom),
                lhs: x,
                rhs: y,
            })
        })
    }

    /// Converts the coefficient ring.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> ExactSeries<D> {
        ExactSeries::from_parts(
            self.denom,
            self.offset,
            self.coeffs.iter().map(f).collect(),
            self.order,
        )
    }

    pub fn to_bigint(&self) -> ExactSeries<BigInt> {
        self.map_coeffs(|c| c.to_bigint())
    }
}

impl<C: Coefficient> PartialEq for ExactSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.first_mismatch(other).is_none()
    }
}

impl<C: Coefficient> Eq for ExactSeries<C> {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<C: Coefficient> std::ops::$tr<&ExactSeries<C>> for &ExactSeries<C> {
            type Output = ExactSeries<C>;
            fn $method(self, rhs: &ExactSeries<C>) -> ExactSeries<C> {
                ExactSeries::$inner(self, rhs)
            }
        }
        impl<C: Coefficient> std::ops::$tr for ExactSeries<C> {
            type Output = ExactSeries<C>;
            fn $method(self, rhs: ExactSeries<C>) -> ExactSeries<C> {
                ExactSeries::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl<C: Coefficient> std::ops::Neg for &ExactSeries<C> {
    type Output = ExactSeries<C>;
    fn neg(self) -> ExactSeries<C> {
        ExactSeries::neg(self)
    }
}

impl<C: Coefficient> fmt::Display for ExactSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                write!(f, "q")?;
            } else if e.is_integer() && e > Ratio::zero() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Order::UpTo(o) = self.order {
            write!(f, " + O(q^({o}+))")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = ExactSeries<i64>;

    fn series(c: &[i64], order: i64) -> S {
        S::from_i64s(c, Order::up_to(order))
    }

    #[test]
    fn truncation_is_inclusive() {
        let s = series(&[1, 2, 3, 4, 5], 3);
        assert_eq!(s.coeff_int(3), Some(4));
        assert_eq!(s.coeff_int(4), None);
    }

    #[test]
    fn geometric_inverse() {
        let f = S::from_i64s(&[1, -1], Order::Exact);
        let g = f.inverse(int_exponent(6)).unwrap();
        assert_eq!(g.integer_coeffs(6).unwrap(), vec![1; 7]);
        assert_eq!(f.mul(&g), S::one(Order::up_to(6)));
    }

    #[test]
    fn inverse_of_one_is_one() {
        let one = S::one(Order::Exact);
        assert_eq!(one.inverse(int_exponent(5)).unwrap(), S::one(Order::up_to(5)));
    }

    #[test]
    fn non_unit_inverse_rejected() {
        let f = S::from_i64s(&[2, 1], Order::Exact);
        assert!(matches!(f.inverse(int_exponent(4)), Err(Error::NonUnit(_))));
        assert!(matches!(S::zero(Order::Exact).inverse(int_exponent(4)), Err(Error::NonUnit(_))));
    }

    #[test]
    fn laurent_inverse_with_negative_leading_term() {
        // 1 - q^{-1} = -q^{-1}(1 - q)
        let f = S::from_parts(1, -1, vec![-1, 1], Order::Exact);
        let g = f.inverse(int_exponent(4)).unwrap();
        assert_eq!(g.valuation(), Some(int_exponent(1)));
        assert_eq!(g.coeff_int(1), Some(-1));
        assert_eq!(g.coeff_int(4), Some(-1));
        let one = f.mul(&g);
        assert_eq!(one.coeff_int(0), Some(1));
        assert_eq!(one.coeff_int(3), Some(0));
    }

    #[test]
    fn mixed_grid_addition() {
        let a = S::monomial(1, exponent(1, 2), Order::up_to(3));
        let b = S::monomial(2, exponent(1, 3), Order::up_to(2));
        let s = a.add(&b);
        assert_eq!(s.denom(), 6);
        assert_eq!(s.order(), Order::up_to(2));
        assert_eq!(s.coeff(exponent(1, 2)), Some(1));
        assert_eq!(s.coeff(exponent(1, 3)), Some(2));
        assert_eq!(s.coeff(exponent(1, 4)), Some(0));
    }

    #[test]
    fn product_order_tracks_valuations() {
        let a = series(&[0, 0, 1], 10); // q^2 + O(q^11)
        let b = series(&[1, 1], 5);
        let p = a.mul(&b);
        assert_eq!(p.order(), Order::up_to(7));
        assert_eq!(p.coeff_int(3), Some(1));
    }

    #[test]
    fn exact_division() {
        let num = S::from_i64s(&[1, 0, -1], Order::Exact);
        let den = S::from_i64s(&[1, -1], Order::Exact);
        assert_eq!(
            num.div_exact(&den).unwrap(),
            S::from_i64s(&[1, 1], Order::Exact)
        );
        let bad = S::from_i64s(&[1, 0, 1], Order::Exact);
        assert!(matches!(bad.div_exact(&den), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn coarsening_recovers_integer_grid() {
        let s = series(&[1, 0, 3], 4).rescaled(6).coarsened();
        assert_eq!(s.denom(), 1);
        assert!(s.is_integral());
    }

    #[test]
    fn display() {
        let s = S::from_i64s(&[1, -1, 0, 2], Order::up_to(5));
        assert_eq!(s.to_string(), "1 - q + 2*q^3 + O(q^(5+))");
        let t = S::monomial(-3, exponent(1, 8), Order::Exact);
        assert_eq!(t.to_string(), "-3*q^(1/8)");
    }

    #[test]
    fn dilation() {
        let s = series(&[1, -1], 4).dilated(2);
        assert_eq!(s.order(), Order::up_to(8));
        assert_eq!(s.coeff_int(2), Some(-1));
        assert_eq!(s.coeff_int(1), Some(0));
    }

    #[test]
    fn mismatch_reports_first_difference() {
        let a = series(&[1, 2, 3, 4], 3);
        let b = series(&[1, 2, 5, 4], 10);
        let m = a.first_mismatch(&b).unwrap();
        assert_eq!(m.exponent, int_exponent(2));
        assert_eq!((m.lhs, m.rhs), (3, 5));
    }
}
