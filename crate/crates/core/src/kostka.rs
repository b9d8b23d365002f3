//! Kostka–Foulkes oracle for `Q'_{(2^m)}(1^n)` via the charge statistic.
//!
//! Exhaustive over semistandard tableaux, so only usable for tiny `m` and
//! `n`. It exists to check the chain expansion in [`crate::hall_littlewood`]
//! against something built from entirely different ingredients.

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::series::{int_exponent, ExactSeries, Order};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Largest `m` and `n` accepted by [`kostka_foulkes_oracle`].
pub const ORACLE_LIMIT: usize = 4;

/// A semistandard tableau as rows of letters `1..`.
pub type Tableau = Vec<Vec<usize>>;

/// Charge of a word whose content is `(c^m)`: each letter `1..=m` occurs
/// exactly `c` times.
///
/// Standard subwords are extracted by scanning cyclically from the right for
/// `1, 2, ..., m`; within one subword, letter `r + 1` gets index one more than
/// `r` when it had to be found by wrapping around, i.e. it sits to the right
/// of `r`.
pub fn charge(word: &[usize]) -> u64 {
    let mut live: Vec<Option<usize>> = word.iter().map(|&x| Some(x)).collect();
    let top = word.iter().copied().max().unwrap_or(0);
    let mut total = 0u64;
    while live.iter().any(Option::is_some) {
        let len = live.len();
        // start just past the right end
        let mut pos = len;
        let mut index = 0u64;
        for letter in 1..=top {
            let mut wrapped = false;
            let mut found = None;
            for step in 1..=len {
                let raw = pos as isize - step as isize;
                let at = raw.rem_euclid(len as isize) as usize;
                if raw < 0 {
                    wrapped = true;
                }
                if live[at] == Some(letter) {
                    found = Some(at);
                    break;
                }
            }
            let at = found.expect("content must be rectangular");
            if letter > 1 && wrapped {
                index += 1;
            }
            total += index;
            live[at] = None;
            pos = at;
        }
        live.retain(Option::is_some);
    }
    total
}

/// Row reading word: rows from bottom to top, each left to right.
pub fn reading_word(t: &Tableau) -> Vec<usize> {
    t.iter().rev().flatten().copied().collect()
}

/// All semistandard tableaux with content `(2^m)` and at most `rows` rows.
pub fn tableaux_two_each(m: usize, rows: usize) -> Vec<Tableau> {
    let mut out = Vec::new();
    grow(1, m, rows, Vec::new(), &mut out);
    out
}

/// Adds a horizontal strip of two copies of `letter`.
fn grow(letter: usize, m: usize, rows: usize, t: Tableau, out: &mut Vec<Tableau>) {
    if letter > m {
        out.push(t);
        return;
    }
    let shape: Vec<usize> = t.iter().map(Vec::len).collect();
    // cells added in row r must stay below the row above: new length <= old length of row r-1
    let nrows = (shape.len() + 1).min(rows);
    let mut adds = vec![0usize; nrows];
    place(0, 2, &shape, &mut adds, &mut |adds| {
        let mut t2 = t.clone();
        for (r, &a) in adds.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if r == t2.len() {
                t2.push(Vec::new());
            }
            t2[r].extend(std::iter::repeat_n(letter, a));
        }
        grow(letter + 1, m, rows, t2, out);
    });
}

fn place(r: usize, left: usize, shape: &[usize], adds: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if r == adds.len() {
        if left == 0 {
            f(adds);
        }
        return;
    }
    let cur = shape.get(r).copied().unwrap_or(0);
    // horizontal strip: the new row length may not exceed the old length above
    let cap = if r == 0 { left } else { (shape[r - 1] - cur).min(left) };
    for a in 0..=cap {
        adds[r] = a;
        place(r + 1, left - a, shape, adds, f);
    }
    adds[r] = 0;
}

/// `s_λ(1^n)` by the hook-content formula.
pub fn schur_at_ones(lambda: &Partition, n: usize) -> BigInt {
    let lc = lambda.conjugate();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let content = j as i64 - i as i64;
            let hook = (row as usize - j - 1) + (lc.part(j + 1) as usize - i - 1) + 1;
            num *= BigInt::from(n as i64 + content);
            den *= BigInt::from(hook);
        }
    }
    let (q, r) = num.div_rem(&den);
    assert!(r == BigInt::from(0), "hook-content quotient must be integral");
    q
}

/// `Q'_{(2^m)}(1^n) = sum_λ K_{λ,(2^m)}(q) s_λ(1^n)`, with Kostka–Foulkes
/// polynomials as charge generating functions.
pub fn kostka_foulkes_oracle<C: Coefficient>(m: usize, n: usize) -> Result<ExactSeries<C>> {
    if n == 0 {
        return Err(Error::InvalidArgument("alphabet size must be positive".into()));
    }
    if m > ORACLE_LIMIT || n > ORACLE_LIMIT {
        return Err(Error::SizeGuard(format!(
            "charge oracle limited to m, n <= {ORACLE_LIMIT}; got m={m}, n={n}"
        )));
    }
    let mut acc = ExactSeries::<C>::zero(Order::Exact);
    for t in tableaux_two_each(m, n) {
        let shape = Partition::new(t.iter().map(|r| r.len() as u64).collect());
        let dim = schur_at_ones(&shape, n);
        let c = C::from_int(dim.to_i64().expect("dimension fits i64"));
        let ch = charge(&reading_word(&t));
        acc = acc.add(&ExactSeries::monomial(c, int_exponent(ch as i64), Order::Exact));
    }
    Ok(acc)
}
