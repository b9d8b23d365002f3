//! Fermionic multi-sums `sum_m q^{½ m B m^t + linear} / prod (q)_m`.
//!
//! Write `M_i^{(a)} = m_i^{(a)} + ... + m_{k-1}^{(a)}` and collect node `a`'s
//! partial sums into its column `X^{(a)} = (M_1^{(a)} >= ... >= M_{k-1}^{(a)})`.
//! The exponent is then a chain along the Dynkin diagram,
//! `sum_a c_a(X^{(a)}) - sum_a <X^{(a)}, X^{(a+1)}>` with
//! `c_a(X) = |X|² + s_a sum_{i >= p} X_i`, so the sum is a product of transfer
//! matrices whose entries are monomials. Exact min-plus bounds on prefix and
//! suffix costs prune states and fix how far each partial series is needed.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::qseries::{inverse_poch_table, poch_step, PochLength};
use crate::quadratic_form::QuadraticFormSpec;
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use rayon::prelude::*;

/// Sign pattern of the linear term `sum_a s_a M_i^{(a)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinearSign {
    /// `s_a = (-1)^{a-1}`: `+` on the first node. Matches `|m|_-`.
    PlusFirst,
    /// `s_a = (-1)^a`: `-` on the first node.
    MinusFirst,
}

impl LinearSign {
    /// Sign on node `a` (1-based).
    pub fn sign(self, a: usize) -> i64 {
        let odd = a % 2 == 1;
        match (self, odd) {
            (LinearSign::PlusFirst, true) | (LinearSign::MinusFirst, false) => 1,
            _ => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            LinearSign::PlusFirst => LinearSign::MinusFirst,
            LinearSign::MinusFirst => LinearSign::PlusFirst,
        }
    }
}

/// Denominator of the last column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LastColumn {
    /// `(q)_{m_{k-1}}`
    Standard,
    /// `(q^2; q^2)_{m_{k-1}}`; for `k = 1` each node contributes
    /// `(q)_inf / (q^2; q^2)_inf` instead.
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FermionicSpec {
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub linear_sign: LinearSign,
    pub last_column: LastColumn,
}

impl FermionicSpec {
    /// Standard last column and the `(-1)^{a-1}` sign convention.
    pub fn new(n: usize, k: usize, p: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("N and k must be positive".into()));
        }
        if p == 0 || p > k {
            return Err(Error::InvalidArgument(format!("need 1 <= p <= k, got p={p}, k={k}")));
        }
        Ok(FermionicSpec {
            n,
            k,
            p,
            linear_sign: LinearSign::PlusFirst,
            last_column: LastColumn::Standard,
        })
    }

    pub fn with_sign(mut self, s: LinearSign) -> Self {
        self.linear_sign = s;
        self
    }

    pub fn with_last_column(mut self, c: LastColumn) -> Self {
        self.last_column = c;
        self
    }

    fn rank(&self) -> usize {
        self.n - 1
    }

    fn cols(&self) -> usize {
        self.k - 1
    }

    /// Exponent of the term indexed by `m[a][i]` (0-based `a`, `i`), straight
    /// from the definition. Used by tests as an independent check.
    pub fn exponent(&self, m: &[Vec<i64>]) -> i64 {
        let form = QuadraticFormSpec::new(self.n, self.k).expect("valid spec");
        let flat: Vec<i64> = m.iter().flatten().copied().collect();
        let mut e = form.half_form(&flat);
        for (a, row) in m.iter().enumerate() {
            for i in self.p..=self.cols() {
                let big_m: i64 = row[i - 1..].iter().sum();
                e += self.linear_sign.sign(a + 1) * big_m;
            }
        }
        e
    }
}

/// Sound bound on every `m_i^{(a)}` of a term with exponent `<= top`.
///
/// With `λ` a certified lower bound on the least eigenvalue of `B` and `L`
/// the euclidean norm of the linear coefficients in `m`-coordinates,
/// `½ λ |m|² - L |m| <= top` forces `|m| <= (L + sqrt(L² + 2 λ top)) / λ`.
pub fn coordinate_bound(spec: &FermionicSpec, top: i64) -> Result<i64> {
    let form = QuadraticFormSpec::new(spec.n, spec.k)?;
    let lam = form.certified_min_eigenvalue()?;
    let lam = *lam.numer() as f64 / *lam.denom() as f64;
    let per_node: i64 = (spec.p..=spec.cols()).map(|j| {
        let c = (j - spec.p + 1) as i64;
        c * c
    }).sum();
    let l = ((spec.rank() as i64 * per_node) as f64).sqrt();
    let r = (l + (l * l + 2.0 * lam * top.max(0) as f64).sqrt()) / lam;
    // margin against floating-point rounding
    Ok(r.floor() as i64 + 1)
}

pub fn fermionic_sum<C: Coefficient>(spec: &FermionicSpec, order: Exponent) -> Result<ExactSeries<C>> {
    fermionic_sum_with_slack(spec, order, 1)
}

/// As [`fermionic_sum`], with the state box widened by `slack`.
/// Used to test that the proven box drops no term.
pub fn fermionic_sum_with_slack<C: Coefficient>(
    spec: &FermionicSpec,
    order: Exponent,
    slack: i64,
) -> Result<ExactSeries<C>> {
    let full = Order::UpTo(order);
    let top = order.floor().to_integer();
    if top < 0 {
        return Ok(ExactSeries::zero(full));
    }
    if spec.rank() == 0 {
        return Ok(ExactSeries::one(full));
    }
    if spec.cols() == 0 {
        return match spec.last_column {
            LastColumn::Standard => Ok(ExactSeries::one(full)),
            LastColumn::Even => even_zero_column(spec.rank(), order),
        };
    }
    let m_bound = coordinate_bound(spec, top)?;
    let x_max = m_bound * spec.cols() as i64 * slack.max(1);
    let chain = Chain::<C>::new(spec, top, x_max)?;
    let (lo, coeffs) = chain.run()?;
    if lo < 0 && coeffs.iter().take((-lo) as usize).any(|c| !c.is_zero()) {
        return Err(Error::Integrality(format!("fermionic sum has a term below q^0 (from q^{lo})")));
    }
    let coeffs: Vec<C> = coeffs.into_iter().skip((-lo).max(0) as usize).collect();
    let mut padded = vec![C::zero(); lo.max(0) as usize];
    padded.extend(coeffs);
    Ok(ExactSeries::from_coeffs(padded, full))
}

/// `((q)_inf / (q^2;q^2)_inf)^{rank}`
fn even_zero_column<C: Coefficient>(rank: usize, order: Exponent) -> Result<ExactSeries<C>> {
    let bound = Order::UpTo(order);
    let one = int_exponent(1);
    let two = int_exponent(2);
    let num = poch_step::<C>(one, one, PochLength::Infinite, bound)?;
    let den = poch_step::<C>(two, two, PochLength::Infinite, bound)?;
    let ratio = num.mul(&den.inverse(order)?).truncated(bound);
    ratio.pow(rank as i64, order)
}

/// Integer series `sum_{e >= lo} c_e q^e`, stored densely.
struct Piece<C> {
    lo: i64,
    coeffs: Vec<C>,
}

/// Refuse state spaces whose min-plus tables would not fit in memory.
const STATE_LIMIT: usize = 200_000;

struct Chain<C: Coefficient> {
    rank: usize,
    top: i64,
    states: Vec<Vec<i64>>,
    /// `cost[a][s]`: exponent of node `a` in state `s`, linear term included.
    cost: Vec<Vec<i64>>,
    /// Least exponent of nodes `< a` given node `a` in state `s`.
    prefix: Vec<Vec<i64>>,
    /// Least exponent of nodes `>= a` given node `a` in state `s`.
    suffix: Vec<Vec<i64>>,
    inv: Vec<Vec<C>>,
    inv_last: Vec<Vec<C>>,
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Weakly decreasing sequences of length `len` with entries in `0..=cap`.
fn decreasing(len: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..=cap {
            cur.push(x);
            go(len, x, cur, out);
            cur.pop();
        }
    }
    go(len, cap, &mut cur, &mut out);
    out
}

fn dense_inverse<C: Coefficient>(max_m: i64, step: i64, top: i64) -> Vec<Vec<C>> {
    inverse_poch_table::<C>(max_m as u64, step, int_exponent(top))
        .iter()
        .map(|s| s.integer_coeffs(top).expect("integral table"))
        .collect()
}

impl<C: Coefficient> Chain<C> {
    fn new(spec: &FermionicSpec, top: i64, x_max: i64) -> Result<Self> {
        let rank = spec.rank();
        let cols = spec.cols();
        let states = decreasing(cols, x_max);
        if states.len() > STATE_LIMIT {
            return Err(Error::SizeGuard(format!(
                "{} column states for N={}, k={} at order {top}",
                states.len(),
                spec.n,
                spec.k
            )));
        }
        let cost: Vec<Vec<i64>> = (1..=rank)
            .map(|a| {
                let s = spec.linear_sign.sign(a);
                states
                    .iter()
                    .map(|x| {
                        let lin: i64 = x[spec.p - 1..].iter().sum();
                        dot(x, x) + s * lin
                    })
                    .collect()
            })
            .collect();
        let ns = states.len();
        let mut prefix = vec![vec![0i64; ns]; rank];
        for a in 1..rank {
            let prev: Vec<i64> = (0..ns).map(|s| prefix[a - 1][s] + cost[a - 1][s]).collect();
            prefix[a] = (0..ns)
                .into_par_iter()
                .map(|t| (0..ns).map(|s| prev[s] - dot(&states[s], &states[t])).min().unwrap())
                .collect();
        }
        let mut suffix = vec![vec![0i64; ns]; rank];
        suffix[rank - 1] = cost[rank - 1].clone();
        for a in (0..rank - 1).rev() {
            let next = &suffix[a + 1];
            suffix[a] = (0..ns)
                .into_par_iter()
                .map(|s| {
                    cost[a][s] + (0..ns).map(|t| next[t] - dot(&states[s], &states[t])).min().unwrap()
                })
                .collect();
        }
        let inv = dense_inverse(x_max, 1, top.max(0) + 1);
        let inv_last = match spec.last_column {
            LastColumn::Standard => inv.clone(),
            LastColumn::Even => dense_inverse(x_max, 2, top.max(0) + 1),
        };
        Ok(Chain {
            rank,
            top,
            states,
            cost,
            prefix,
            suffix,
            inv,
            inv_last,
        })
    }

    fn live(&self, a: usize) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&s| self.prefix[a][s] + self.suffix[a][s] <= self.top)
            .collect()
    }

    /// `q^{cost} / prod (q)_{X_i - X_{i+1}} · inner`, kept up to `q^hi`.
    fn weigh(&self, a: usize, s: usize, inner: &Piece<C>, hi: i64) -> Result<Piece<C>> {
        let x = &self.states[s];
        let c = self.cost[a][s];
        let lo = inner.lo + c;
        if hi < lo {
            return Ok(Piece { lo, coeffs: Vec::new() });
        }
        let len = (hi - lo + 1) as usize;
        let mut acc: Vec<C> = inner.coeffs.iter().take(len).cloned().collect();
        acc.resize(len, C::zero());
        let cols = x.len();
        for i in 0..cols {
            let d = if i + 1 < cols { x[i] - x[i + 1] } else { x[i] };
            if d == 0 {
                continue;
            }
            let table = if i + 1 < cols { &self.inv[d as usize] } else { &self.inv_last[d as usize] };
            acc = mul_trunc(&acc, table, len)?;
        }
        Ok(Piece { lo, coeffs: acc })
    }

    fn run(&self) -> Result<(i64, Vec<C>)> {
        let last = self.rank - 1;
        let one = Piece { lo: 0, coeffs: vec![C::one()] };
        // pieces for the current node, indexed like `live`
        let mut live = self.live(last);
        let mut pieces: Vec<Piece<C>> = live
            .par_iter()
            .map(|&s| self.weigh(last, s, &one, self.top - self.prefix[last][s]))
            .collect::<Result<_>>()?;
        for a in (0..last).rev() {
            let below = std::mem::take(&mut live);
            let below_pieces = std::mem::take(&mut pieces);
            live = self.live(a);
            pieces = live
                .par_iter()
                .map(|&s| {
                    let hi = self.top - self.prefix[a][s];
                    let c = self.cost[a][s];
                    let lo = self.suffix[a][s] - c;
                    let inner_hi = hi - c;
                    let mut inner = vec![C::zero(); (inner_hi - lo + 1).max(0) as usize];
                    let budget = hi - c;
                    for (&t, p) in below.iter().zip(&below_pieces) {
                        let shift = -dot(&self.states[s], &self.states[t]);
                        if shift + self.suffix[a + 1][t] > budget {
                            continue;
                        }
                        for (j, coef) in p.coeffs.iter().enumerate() {
                            let e = p.lo + j as i64 + shift;
                            if e > inner_hi {
                                break;
                            }
                            if e < lo {
                                return Err(Error::Consistency(format!(
                                    "suffix bound {lo} exceeded by q^{e} at node {a}"
                                )));
                            }
                            inner[(e - lo) as usize].add_ref(coef);
                        }
                    }
                    self.weigh(a, s, &Piece { lo, coeffs: inner }, hi)
                })
                .collect::<Result<_>>()?;
        }
        let lo = pieces.iter().map(|p| p.lo).min().unwrap_or(0).min(0);
        let mut out = vec![C::zero(); (self.top - lo + 1) as usize];
        for p in &pieces {
            for (j, c) in p.coeffs.iter().enumerate() {
                let e = p.lo + j as i64;
                if e <= self.top {
                    out[(e - lo) as usize].add_ref(c);
                }
            }
        }
        Ok((lo, out))
    }
}

/// Product of two dense series starting at `q^0`, truncated to `len` terms.
fn mul_trunc<C: Coefficient>(f: &[C], g: &[C], len: usize) -> Result<Vec<C>> {
    if g.len() < len.min(f.len()) {
        return Err(Error::Consistency("denominator table too short".into()));
    }
    let mut out = vec![C::zero(); len];
    for (i, a) in f.iter().enumerate().take(len) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate().take(len - i) {
            out[i + j].add_product(a, b);
        }
    }
    Ok(out)
}
