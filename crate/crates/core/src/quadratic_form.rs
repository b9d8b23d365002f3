//! The form `B = C ⊗ T^{-1}` behind the fermionic sums, with a certified
//! lower bound on its least eigenvalue.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Cartan matrix of `A_{rank}`.
pub fn cartan_matrix(rank: usize) -> Vec<Vec<i64>> {
    (0..rank)
        .map(|a| {
            (0..rank)
                .map(|b| match a.abs_diff(b) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// `B_{ai,bj} = C_{ab} min(i, j)` for the `A_{N-1}` Cartan matrix and
/// `1 <= i, j <= k - 1`, indexed by `(a - 1)(k - 1) + (i - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormSpec {
    pub n: usize,
    pub k: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl QuadraticFormSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("N and k must be positive".into()));
        }
        let c = cartan_matrix(n - 1);
        let cols = k - 1;
        let d = (n - 1) * cols;
        let mut matrix = vec![vec![0; d]; d];
        for a in 0..n - 1 {
            for b in 0..n - 1 {
                for i in 0..cols {
                    for j in 0..cols {
                        matrix[a * cols + i][b * cols + j] = c[a][b] * (i.min(j) as i64 + 1);
                    }
                }
            }
        }
        Ok(QuadraticFormSpec { n, k, matrix })
    }

    /// Dimension `d = (N - 1)(k - 1)`.
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// `½ m B m^t`, always an integer because the diagonal of `B` is even.
    pub fn half_form(&self, m: &[i64]) -> i64 {
        let mut twice = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                twice += b * m[i] * m[j];
            }
        }
        twice / 2
    }

    /// Certified rational `t` with `0 < t <= λ_min(B)`; errors if `B` is not
    /// positive definite. Empty forms report 1.
    pub fn certified_min_eigenvalue(&self) -> Result<Ratio<i64>> {
        certified_min_eigenvalue(&self.matrix)
    }
}

/// True when `A - t I` is positive definite, decided by exact symmetric
/// Gaussian elimination (all pivots positive).
fn shifted_is_positive_definite(a: &[Vec<i64>], t: &BigRational) -> bool {
    let d = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let v = BigRational::from_integer(BigInt::from(x));
                    if i == j {
                        v - t
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    for p in 0..d {
        if !m[p][p].is_positive() {
            return false;
        }
        for i in p + 1..d {
            if m[i][p].is_zero() {
                continue;
            }
            let f = &m[i][p] / &m[p][p];
            for j in p..d {
                let sub = &f * &m[p][j];
                m[i][j] -= sub;
            }
        }
    }
    true
}

/// Bisection for the least eigenvalue of a symmetric integer matrix. The
/// returned value is a lower bound certified by an exact definiteness test.
pub fn certified_min_eigenvalue(a: &[Vec<i64>]) -> Result<Ratio<i64>> {
    if a.is_empty() {
        return Ok(Ratio::one());
    }
    if !shifted_is_positive_definite(a, &BigRational::zero()) {
        return Err(Error::InvalidArgument("form is not positive definite".into()));
    }
    // λ_min is at most the smallest diagonal entry
    let mut hi = BigRational::from_integer(BigInt::from(a.iter().enumerate().map(|(i, r)| r[i]).min().unwrap()));
    let mut lo = BigRational::zero();
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..24 {
        let mid = (&lo + &hi) / &two;
        if shifted_is_positive_definite(a, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo.is_zero() {
        return Err(Error::Numerical("least eigenvalue below bisection resolution".into()));
    }
    let num = lo.numer().to_i64().expect("bisection numerator fits i64");
    let den = lo.denom().to_i64().expect("bisection denominator fits i64");
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_entries() {
        assert_eq!(cartan_matrix(3), vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
    }

    #[test]
    fn k2_reduces_to_cartan() {
        let q = QuadraticFormSpec::new(4, 2).unwrap();
        assert_eq!(q.matrix, cartan_matrix(3));
    }

    #[test]
    fn kronecker_structure() {
        let q = QuadraticFormSpec::new(3, 3).unwrap();
        assert_eq!(q.dim(), 4);
        assert!(q.is_symmetric());
        assert_eq!(q.matrix[0], vec![2, 2, -1, -1]);
        assert_eq!(q.matrix[1], vec![2, 4, -1, -2]);
    }

    #[test]
    fn certified_bound_is_tight_and_sound() {
        for n in 2..=6usize {
            let q = QuadraticFormSpec::new(n, 2).unwrap();
            let lo = q.certified_min_eigenvalue().unwrap();
            let exact = 2.0 - 2.0 * (std::f64::consts::PI / n as f64).cos();
            let lo = *lo.numer() as f64 / *lo.denom() as f64;
            assert!(lo <= exact && exact - lo < 1e-5, "N={n}: {lo} vs {exact}");
        }
        for (n, k) in [(3, 3), (4, 3), (5, 3), (2, 5)] {
            let q = QuadraticFormSpec::new(n, k).unwrap();
            assert!(q.certified_min_eigenvalue().unwrap() > Ratio::new(0, 1));
        }
    }

    #[test]
    fn indefinite_rejected() {
        assert!(certified_min_eigenvalue(&[vec![1, 2], vec![2, 1]]).is_err());
    }

    #[test]
    fn half_form_values() {
        let q = QuadraticFormSpec::new(3, 2).unwrap();
        assert_eq!(q.half_form(&[1, 1]), 1);
        assert_eq!(q.half_form(&[2, 1]), 3);
    }
}
