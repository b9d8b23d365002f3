//! Sums over tuples of partitions weighted by
//! `q^{½ sum C_ab (λ^a|λ^b)} prod z_a^{|λ^a|} / b_{λ^a}(q)`,
//! and Hua's product over the positive roots of `A_{N-1}`.
//!
//! Tuples are grown one column layer at a time so that partial exponents can
//! be bounded, but each summand is evaluated from the partitions themselves
//! through [`Partition::bracket`], [`Partition::size`] and [`b_of`].

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::partition::{b_of, Partition};
use crate::qseries::{poch_step, PochLength};
use crate::quadratic_form::{cartan_matrix, certified_min_eigenvalue};
use crate::series::{int_exponent, ExactSeries, Exponent, Order};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// `z_a = q^{c_a}` for `hl_form_sum`: all ones for `p = k`, alternating
/// `q, q^{-1}` for `p = 1`.
pub fn hl_z_exponents(n: usize, p_is_one: bool) -> Vec<Exponent> {
    (0..n.saturating_sub(1))
        .map(|a| {
            if !p_is_one {
                Ratio::zero()
            } else if a % 2 == 0 {
                int_exponent(1)
            } else {
                int_exponent(-1)
            }
        })
        .collect()
}

/// Tuples of partitions with largest parts `<= k - 1`.
pub fn hl_form_sum<C: Coefficient>(n: usize, k: usize, p: usize, order: Exponent) -> Result<ExactSeries<C>> {
    if n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    if k == 0 || !(p == 1 || p == k) {
        return Err(Error::InvalidArgument(format!("need k >= 1 and p in {{1, k}}, got k={k}, p={p}")));
    }
    let z = hl_z_exponents(n, p == 1 && k > 1);
    PartitionTupleSum::new(n - 1, z, order, Some(k - 1))?.run()
}

/// Hua's sum over unrestricted tuples.
///
/// Every nonzero column layer costs at least `δ > 0` (found exactly by
/// dynamic programming along the Dynkin chain), so at most `order / δ`
/// layers can appear.
pub fn hua_lhs<C: Coefficient>(n: usize, z_exponents: &[Exponent], order: Exponent) -> Result<ExactSeries<C>> {
    check_hua_args(n, z_exponents)?;
    PartitionTupleSum::new(n - 1, z_exponents.to_vec(), order, None)?.run()
}

/// `prod_{α > 0} 1/(z^α q; q)_inf`
pub fn hua_product<C: Coefficient>(n: usize, z_exponents: &[Exponent], order: Exponent) -> Result<ExactSeries<C>> {
    check_hua_args(n, z_exponents)?;
    let bound = Order::UpTo(order);
    let mut acc = ExactSeries::one(bound);
    for i in 0..n - 1 {
        for j in i..n - 1 {
            let e: Exponent = int_exponent(1) + z_exponents[i..=j].iter().sum::<Exponent>();
            if e <= Ratio::zero() {
                return Err(Error::DivergentProduct(format!("root {}..{} has z^α q = q^{e}", i + 1, j + 1)));
            }
            let f = poch_step::<C>(e, int_exponent(1), PochLength::Infinite, bound)?;
            acc = acc.mul(&f.inverse(order)?).truncated(bound);
        }
    }
    Ok(acc)
}

fn check_hua_args(n: usize, z: &[Exponent]) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    if z.len() != n - 1 {
        return Err(Error::InvalidArgument(format!("expected {} z exponents, got {}", n - 1, z.len())));
    }
    Ok(())
}

struct PartitionTupleSum {
    rank: usize,
    c: Vec<Exponent>,
    cartan: Vec<Vec<i64>>,
    order: Exponent,
    /// All layer costs are multiplied by this to become integers.
    scale: i64,
    budget: i64,
    height: i64,
    layers: usize,
    /// `tail[a][x]`: least scaled cost of coordinates after `a` given `x` at `a`.
    tail: Vec<Vec<i64>>,
    /// Least scaled cost of a whole layer, zero layer included (so `<= 0`).
    layer_min: i64,
}

impl PartitionTupleSum {
    /// With `max_layers = None` every nonzero layer must cost more than
    /// zero, and the layer count is bounded by `order / δ`.
    fn new(rank: usize, c: Vec<Exponent>, order: Exponent, max_layers: Option<usize>) -> Result<Self> {
        let scale = 2 * c.iter().fold(1i64, |l, x| l.lcm(x.denom()));
        let sc = |x: Exponent| (x * int_exponent(scale)).floor().to_integer();
        let sc_c: Vec<i64> = c.iter().map(|&x| sc(x)).collect();
        let budget = sc(order);
        let lam = certified_min_eigenvalue(&cartan_matrix(rank))?;
        let lam = *lam.numer() as f64 / *lam.denom() as f64;
        let l = c
            .iter()
            .map(|x| {
                let f = *x.numer() as f64 / *x.denom() as f64;
                f * f
            })
            .sum::<f64>()
            .sqrt();
        // a layer h costs at least ½ λ |h|² - L |h|; `height(t)` bounds the
        // entries of layers costing at most t
        let height = |t: f64| ((l + (l * l + 2.0 * lam * t.max(0.0)).sqrt()) / lam).floor() as i64 + 1;
        // layers of nonpositive cost lie within height(0), so this box already
        // holds the least layer cost
        let top = order.floor().to_integer().max(0) as f64;
        let (tail0, nonzero_min) = layer_tables(&sc_c, scale, height(top));
        let layer_min = tail0[0][0].min(0);
        let layers = match max_layers {
            Some(l) => l,
            None => {
                if nonzero_min <= 0 {
                    return Err(Error::DivergentProduct("some nonzero layer has nonpositive cost".into()));
                }
                (budget.max(0) / nonzero_min) as usize
            }
        };
        // one layer may absorb what the others give back
        let reach = top - (layer_min as f64 / scale as f64) * layers.saturating_sub(1) as f64;
        let h = height(reach);
        let (tail, _) = layer_tables(&sc_c, scale, h);
        Ok(PartitionTupleSum {
            rank,
            c,
            cartan: cartan_matrix(rank),
            order,
            scale,
            budget,
            height: h,
            layers,
            tail,
            layer_min,
        })
    }

    fn run<C: Coefficient>(&self) -> Result<ExactSeries<C>> {
        let full = Order::UpTo(self.order);
        if self.order < Ratio::zero() {
            return Ok(ExactSeries::zero(full));
        }
        let mut state = Walk {
            sum: self,
            cache: HashMap::new(),
            acc: ExactSeries::zero(full),
            layers: Vec::new(),
        };
        state.grow(self.layers, 0)?;
        Ok(state.acc)
    }
}

/// Least scaled layer costs along the chain, and the least cost of a
/// nonzero layer. Scaled cost of `h` is `scale (½ h C h^t + c.h)`.
fn layer_tables(c: &[i64], scale: i64, height: i64) -> (Vec<Vec<i64>>, i64) {
    let rank = c.len();
    let half = scale / 2;
    let w = height as usize + 1;
    let mut tail = vec![vec![0i64; w]; rank + 1];
    for x in 0..w {
        tail[rank][x] = half * (x * x) as i64;
    }
    for a in (0..rank).rev() {
        for x in 0..w {
            tail[a][x] = (0..w)
                .map(|y| {
                    let d = y as i64 - x as i64;
                    half * d * d + c[a] * y as i64 + tail[a + 1][y]
                })
                .min()
                .unwrap();
        }
    }
    // head[a][x]: least cost of coordinates 1..=a with coordinate a equal to x
    let mut head = vec![vec![0i64; w]; rank + 1];
    for x in 1..w {
        head[0][x] = i64::MAX / 4;
    }
    let mut nonzero = i64::MAX;
    for a in 1..=rank {
        for x in 0..w {
            head[a][x] = (0..w)
                .map(|y| {
                    let d = x as i64 - y as i64;
                    head[a - 1][y].saturating_add(half * d * d + c[a - 1] * x as i64)
                })
                .min()
                .unwrap();
            if x > 0 {
                nonzero = nonzero.min(head[a][x] + tail[a][x]);
            }
        }
    }
    (tail, nonzero)
}

struct Walk<'a, C: Coefficient> {
    sum: &'a PartitionTupleSum,
    cache: HashMap<Partition, ExactSeries<C>>,
    acc: ExactSeries<C>,
    /// Column heights, one vector per layer.
    layers: Vec<Vec<i64>>,
}

impl<C: Coefficient> Walk<'_, C> {
    /// Emits the current tuple, then tries every further nonzero layer.
    fn grow(&mut self, left: usize, spent: i64) -> Result<()> {
        self.emit(spent)?;
        if left == 0 {
            return Ok(());
        }
        let s = self.sum;
        let cap: Vec<i64> = match self.layers.last() {
            Some(l) => l.clone(),
            None => vec![s.height; s.rank],
        };
        // later layers can give back at most layer_min each
        let budget = s.budget - spent - s.layer_min * (left as i64 - 1);
        let mut next = Vec::new();
        let mut h = vec![0i64; s.rank];
        fill_layer(s, 0, 0, 0, &cap, budget, &mut h, &mut next);
        for (layer, cost) in next {
            if layer.iter().all(|&x| x == 0) {
                continue;
            }
            self.layers.push(layer);
            self.grow(left - 1, spent + cost)?;
            self.layers.pop();
        }
        Ok(())
    }

    fn emit(&mut self, spent: i64) -> Result<()> {
        let s = self.sum;
        let parts: Vec<Partition> = (0..s.rank)
            .map(|a| {
                let cols: Vec<u64> = self.layers.iter().map(|l| l[a] as u64).collect();
                Partition::from_columns(&cols)
            })
            .collect();
        let mut twice = 0i64;
        for a in 0..s.rank {
            for b in 0..s.rank {
                twice += s.cartan[a][b] * parts[a].bracket(&parts[b]) as i64;
            }
        }
        let mut e = Ratio::new(twice, 2);
        for (lam, c) in parts.iter().zip(&s.c) {
            e += c * int_exponent(lam.size() as i64);
        }
        if e * int_exponent(s.scale) != int_exponent(spent) {
            return Err(Error::Consistency(format!(
                "layer costs {spent}/{} disagree with the partition exponent {e}",
                s.scale
            )));
        }
        if e > s.order {
            return Ok(());
        }
        let room = s.order - e;
        let mut term = ExactSeries::one(Order::UpTo(room));
        for lam in &parts {
            let inv = match self.cache.get(lam) {
                Some(x) => x.clone(),
                None => {
                    let x = b_of::<C>(lam).inverse(s.order.max(Ratio::zero()))?;
                    self.cache.insert(lam.clone(), x.clone());
                    x
                }
            };
            term = term.mul(&inv).truncated(Order::UpTo(room));
        }
        self.acc = self.acc.add(&term.shifted(e));
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_layer(
    s: &PartitionTupleSum,
    a: usize,
    prev: i64,
    partial: i64,
    cap: &[i64],
    budget: i64,
    h: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, i64)>,
) {
    let half = s.scale / 2;
    if a == s.rank {
        let cost = partial + half * prev * prev;
        if cost <= budget {
            out.push((h.clone(), cost));
        }
        return;
    }
    let ca = (s.c[a] * int_exponent(s.scale)).to_integer();
    for x in 0..=cap[a] {
        let d = x - prev;
        let here = partial + half * d * d + ca * x;
        if here + s.tail[a + 1][x as usize] > budget {
            continue;
        }
        h[a] = x;
        fill_layer(s, a + 1, x, here, cap, budget, h, out);
    }
    h[a] = 0;
}

/// True if every root monomial `z^α q` has a positive exponent.
pub fn hua_admissible(z: &[Exponent]) -> bool {
    (0..z.len()).all(|i| (i..z.len()).all(|j| (int_exponent(1) + z[i..=j].iter().sum::<Exponent>()).is_positive()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionic::{fermionic_sum, FermionicSpec};
    use crate::qseries::euler;
    use crate::series::exponent;

    type S = ExactSeries<i64>;

    #[test]
    fn k1_is_one() {
        let s: S = hl_form_sum(3, 1, 1, int_exponent(10)).unwrap();
        assert_eq!(s, S::one(Order::up_to(10)));
    }

    #[test]
    fn rogers_ramanujan_from_partitions() {
        let s: S = hl_form_sum(2, 2, 2, int_exponent(10)).unwrap();
        assert_eq!(s.integer_coeffs(10).unwrap(), vec![1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6]);
    }

    #[test]
    fn matches_fermionic_small() {
        for (n, k) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            for p in [1, k] {
                let a: S = hl_form_sum(n, k, p, int_exponent(10)).unwrap();
                let b: S = fermionic_sum(&FermionicSpec::new(n, k, p).unwrap(), int_exponent(10)).unwrap();
                assert_eq!(a, b, "N={n} k={k} p={p}");
            }
        }
    }

    #[test]
    fn hua_two_nodes() {
        let z = [Ratio::zero()];
        let lhs: S = hua_lhs(2, &z, int_exponent(12)).unwrap();
        let p: S = euler(int_exponent(12));
        assert_eq!(lhs, p.inverse(int_exponent(12)).unwrap());
        assert_eq!(hua_product::<i64>(2, &z, int_exponent(12)).unwrap(), lhs);
    }

    #[test]
    fn hua_product_shapes() {
        let z = [Ratio::zero(), Ratio::zero()];
        let s: S = hua_product(3, &z, int_exponent(5)).unwrap();
        let p: S = euler(int_exponent(5));
        assert_eq!(s, p.pow(-3, int_exponent(5)).unwrap());
        let s: S = hua_product(2, &[int_exponent(1)], int_exponent(8)).unwrap();
        let want: S = poch_step::<i64>(int_exponent(2), int_exponent(1), PochLength::Infinite, Order::up_to(8))
            .unwrap()
            .inverse(int_exponent(8))
            .unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn hua_specializations() {
        for z in [int_exponent(1), exponent(1, 2), exponent(-1, 3)] {
            let a: S = hua_lhs(2, &[z], int_exponent(10)).unwrap();
            let b: S = hua_product(2, &[z], int_exponent(10)).unwrap();
            assert_eq!(a, b, "z = q^{z}");
        }
    }

    #[test]
    fn divergent_specialization_rejected() {
        assert!(hua_product::<i64>(2, &[int_exponent(-1)], int_exponent(5)).is_err());
        assert!(hua_lhs::<i64>(2, &[int_exponent(-1)], int_exponent(5)).is_err());
        assert!(!hua_admissible(&[int_exponent(1), int_exponent(-1)]));
    }
}
