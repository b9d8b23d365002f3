//! Rogers dilogarithm, Kirillov's sine-ratio identities and the fixed-point
//! system whose solution feeds them.
//!
//! `L(x) = Li₂(x) + ½ log x log(1 - x)` with the power series for `Li₂` on
//! `[0, ½]` and `L(x) = L(1) - L(1 - x)` above. Everything is generic over
//! the float type; [`crate::DilogSystem64`] and friends fix `f64`.

use crate::error::{Error, Result};
use num_traits::{Float, FloatConst};
use serde::Serialize;

fn cast<F: Float>(x: f64) -> F {
    F::from(x).expect("f64 constants fit every float type")
}

fn li2_small<F: Float>(x: F) -> F {
    // converges like 2^{-j} on [0, 1/2]
    let mut sum = F::zero();
    let mut pow = x;
    let mut j = 1.0;
    loop {
        let term = pow / cast(j * j);
        sum = sum + term;
        if term <= F::epsilon() * sum * cast(0.01) || j > 400.0 {
            return sum;
        }
        pow = pow * x;
        j += 1.0;
    }
}

/// `L(1) = π²/6`
pub fn rogers_l_one<F: Float + FloatConst>() -> F {
    F::PI() * F::PI() / cast(6.0)
}

/// Rogers dilogarithm on `[0, 1]`.
pub fn rogers_l<F: Float + FloatConst>(x: F) -> Result<F> {
    if !(x >= F::zero() && x <= F::one()) {
        return Err(Error::Numerical(format!(
            "Rogers dilogarithm needs 0 <= x <= 1, got {}",
            x.to_f64().unwrap_or(f64::NAN)
        )));
    }
    if x.is_zero() {
        return Ok(F::zero());
    }
    if x == F::one() {
        return Ok(rogers_l_one());
    }
    let half = cast(0.5);
    if x > half {
        return Ok(rogers_l_one::<F>() - rogers_l(F::one() - x)?);
    }
    Ok(li2_small(x) + half * x.ln() * (F::one() - x).ln())
}

/// `sin(aπ/κ) sin((N-a)π/κ) / (sin((i+a)π/κ) sin((i+N-a)π/κ))`
pub fn sine_ratio<F: Float + FloatConst>(kappa: usize, n: usize, a: usize, i: usize) -> F {
    let s = |j: usize| (cast::<F>(j as f64) * F::PI() / cast(kappa as f64)).sin();
    s(a) * s(n - a) / (s(i + a) * s(i + n - a))
}

/// Both sides of a dilogarithm identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilogCheck<F> {
    pub lhs: F,
    pub rhs: F,
    /// Largest `|S(2k,N;a,i) - S(2k,N;a,2k-i-1)|` seen, where applicable.
    pub symmetry_defect: F,
}

impl<F: Float> DilogCheck<F> {
    pub fn defect(&self) -> F {
        (self.lhs - self.rhs).abs()
    }
}

fn sine_sum<F: Float + FloatConst>(kappa: usize, n: usize, terms: usize) -> Result<F> {
    let mut sum = F::zero();
    for a in 1..n {
        for i in 1..=terms {
            let r = sine_ratio::<F>(kappa, n, a, i);
            if !(r > F::zero() && r <= F::one() + F::epsilon() * cast(16.0)) {
                return Err(Error::Numerical(format!(
                    "sine ratio for a={a}, i={i}, κ={kappa} is {} (outside (0,1])",
                    r.to_f64().unwrap_or(f64::NAN)
                )));
            }
            sum = sum + rogers_l(r.min(F::one()))?;
        }
    }
    Ok(sum / rogers_l_one())
}

/// `(1/L(1)) sum_{a<N} sum_{i<K} L(S(K,N;a,i))` against
/// `(N² - 1)(K - 1)/(K + N - 1)`.
pub fn kirillov_check<F: Float + FloatConst>(big_k: usize, n: usize) -> Result<DilogCheck<F>> {
    if big_k == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!("need K >= 1 and N >= 2, got K={big_k}, N={n}")));
    }
    let kappa = big_k + n - 1;
    let lhs = sine_sum(kappa, n, big_k - 1)?;
    let rhs = cast::<F>(((n * n - 1) * (big_k - 1)) as f64) / cast(kappa as f64);
    Ok(DilogCheck {
        lhs,
        rhs,
        symmetry_defect: F::zero(),
    })
}

/// The halved identity `N(N-1)(k-1)/(2k+N-1)`, together with the symmetry
/// `S(2k,N;a,i) = S(2k,N;a,2k-i-1)` and `S(2k,N;a,2k-1) = L(1)` it rests on.
pub fn kirillov_even_check<F: Float + FloatConst>(k: usize, n: usize) -> Result<DilogCheck<F>> {
    if k == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 1 and N >= 2, got k={k}, N={n}")));
    }
    let kappa = 2 * k + n - 1;
    let lhs = sine_sum(kappa, n, k - 1)?;
    let rhs = cast::<F>((n * (n - 1) * (k - 1)) as f64) / cast(kappa as f64);
    let mut symmetry_defect = F::zero();
    for a in 1..n {
        for i in 1..k {
            let d = sine_ratio::<F>(kappa, n, a, i) - sine_ratio::<F>(kappa, n, a, 2 * k - i - 1);
            symmetry_defect = symmetry_defect.max(d.abs());
        }
        let middle = sine_ratio::<F>(kappa, n, a, 2 * k - 1);
        symmetry_defect = symmetry_defect.max((middle - F::one()).abs());
    }
    Ok(DilogCheck {
        lhs,
        rhs,
        symmetry_defect,
    })
}

/// Unknowns `f_i^{(a)}`, `1 <= a <= N-1`, `1 <= i <= k-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DilogSystem<F> {
    pub n: usize,
    pub k: usize,
    /// `values[a-1][i-1]`
    pub values: Vec<Vec<F>>,
    /// Newton steps used; zero for the closed form.
    pub iterations: usize,
}

/// `max |x|`, NaN if any entry is NaN.
fn max_abs<F: Float>(xs: impl IntoIterator<Item = F>) -> F {
    let mut worst = F::zero();
    for x in xs {
        if x.is_nan() {
            return x;
        }
        worst = worst.max(x.abs());
    }
    worst
}

fn cartan(a: usize, b: usize) -> i32 {
    match a.abs_diff(b) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

impl<F: Float + FloatConst> DilogSystem<F> {
    /// `sin(aπ/κ) sin((N-a)π/κ) / (sin((i+a)π/κ) sin((i+N-a)π/κ))`,
    /// `κ = 2k + N - 1`.
    pub fn closed_form(n: usize, k: usize) -> Result<Self> {
        check_system_args(n, k)?;
        let kappa = 2 * k + n - 1;
        let values = (1..n)
            .map(|a| (1..k).map(|i| sine_ratio(kappa, n, a, i)).collect())
            .collect();
        Ok(DilogSystem {
            n,
            k,
            values,
            iterations: 0,
        })
    }

    pub fn get(&self, a: usize, i: usize) -> F {
        self.values[a - 1][i - 1]
    }

    /// `prod_{b,j} (1 - f_j^{(b)})^{C_ab min(i,j)}` for every `(a, i)`.
    fn image(&self) -> Vec<Vec<F>> {
        let logs: Vec<Vec<F>> = self
            .values
            .iter()
            .map(|row| row.iter().map(|&f| (F::one() - f).ln()).collect())
            .collect();
        (1..self.n)
            .map(|a| {
                (1..self.k)
                    .map(|i| {
                        let mut e = F::zero();
                        for b in 1..self.n {
                            let c = cartan(a, b);
                            if c == 0 {
                                continue;
                            }
                            for j in 1..self.k {
                                e = e + cast::<F>((c * i.min(j) as i32) as f64) * logs[b - 1][j - 1];
                            }
                        }
                        e.exp()
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest `|f - Φ(f)|` over all unknowns.
    pub fn residual(&self) -> F {
        let img = self.image();
        max_abs(self.values.iter().flatten().zip(img.iter().flatten()).map(|(&f, &g)| f - g))
    }

    /// `(1/L(1)) sum L(f_i^{(a)})`
    pub fn dilog_sum(&self) -> Result<F> {
        let mut s = F::zero();
        for row in &self.values {
            for &f in row {
                s = s + rogers_l(f)?;
            }
        }
        Ok(s / rogers_l_one())
    }

    /// Largest componentwise distance to `other`.
    pub fn distance(&self, other: &Self) -> F {
        max_abs(self.values.iter().flatten().zip(other.values.iter().flatten()).map(|(&x, &y)| x - y))
    }
}

fn check_system_args(n: usize, k: usize) -> Result<()> {
    if n < 2 || k < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2 and k >= 2, got N={n}, k={k}")));
    }
    Ok(())
}

/// Newton step budget for [`tba_solve`].
pub const MAX_STEPS: usize = 200;

/// Accepted componentwise residual `|log f - B log(1 - f)|`.
pub const SOLVE_TOLERANCE: f64 = 1e-13;

/// Solves `f = Φ(f)` by damped Newton iteration on
/// `G(u) = log f - B log(1 - f)` in logit coordinates `u = log(f/(1-f))`,
/// starting from `f ≡ 1/2`. Step lengths are halved until `|G|` decreases,
/// which keeps every iterate inside `(0,1)`.
pub fn tba_solve<F: Float + FloatConst>(n: usize, k: usize) -> Result<DilogSystem<F>> {
    check_system_args(n, k)?;
    let d = (n - 1) * (k - 1);
    let b = kernel_matrix::<F>(n, k);
    let sigmoid = |u: F| F::one() / (F::one() + (-u).exp());
    let residual = |u: &[F]| -> (Vec<F>, F) {
        let logs: Vec<F> = u.iter().map(|&x| (F::one() - sigmoid(x)).ln()).collect();
        let g: Vec<F> = (0..d)
            .map(|r| {
                let bl = (0..d).fold(F::zero(), |acc, c| acc + b[r][c] * logs[c]);
                sigmoid(u[r]).ln() - bl
            })
            .collect();
        let worst = max_abs(g.iter().copied());
        (g, worst)
    };
    let mut u = vec![F::zero(); d];
    let (mut g, mut r) = residual(&u);
    let mut steps = 0;
    while steps < MAX_STEPS && r > F::epsilon() {
        steps += 1;
        // J = diag(1 - f) + B diag(f)
        let f: Vec<F> = u.iter().map(|&x| sigmoid(x)).collect();
        let jac: Vec<Vec<F>> = (0..d)
            .map(|row| {
                (0..d)
                    .map(|c| {
                        let diag = if row == c { F::one() - f[c] } else { F::zero() };
                        diag + b[row][c] * f[c]
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<F> = g.iter().map(|&x| -x).collect();
        let step = solve_linear(jac, rhs)?;
        let mut t = F::one();
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<F> = u.iter().zip(&step).map(|(&x, &s)| x + t * s).collect();
            let (tg, tr) = residual(&trial);
            if tr < r {
                u = trial;
                g = tg;
                r = tr;
                improved = true;
                break;
            }
            t = t * cast(0.5);
        }
        if !improved {
            break;
        }
    }
    if !(r <= cast(SOLVE_TOLERANCE)) {
        return Err(Error::Numerical(format!(
            "Newton iteration for N={n}, k={k} stalled at residual {}",
            r.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let values = (0..n - 1)
        .map(|a| (0..k - 1).map(|i| sigmoid(u[a * (k - 1) + i])).collect())
        .collect();
    Ok(DilogSystem {
        n,
        k,
        values,
        iterations: steps,
    })
}

/// `B = C ⊗ T^{-1}` with `(T^{-1})_{ij} = min(i, j)`, rows ordered `(a, i)`.
fn kernel_matrix<F: Float>(n: usize, k: usize) -> Vec<Vec<F>> {
    let d = (n - 1) * (k - 1);
    let mut b = vec![vec![F::zero(); d]; d];
    for a in 1..n {
        for c in 1..n {
            let cab = cartan(a, c);
            for i in 1..k {
                for j in 1..k {
                    b[(a - 1) * (k - 1) + i - 1][(c - 1) * (k - 1) + j - 1] =
                        cast((cab * i.min(j) as i32) as f64);
                }
            }
        }
    }
    b
}

/// Gaussian elimination with partial pivoting.
fn solve_linear<F: Float>(mut a: Vec<Vec<F>>, mut rhs: Vec<F>) -> Result<Vec<F>> {
    let d = rhs.len();
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty range");
        if !(a[pivot][col].abs() > F::epsilon()) {
            return Err(Error::Numerical("singular Jacobian in Newton step".into()));
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..d {
            let factor = a[row][col] / a[col][col];
            for c in col..d {
                let v = a[col][c];
                a[row][c] = a[row][c] - factor * v;
            }
            let v = rhs[col];
            rhs[row] = rhs[row] - factor * v;
        }
    }
    let mut x = vec![F::zero(); d];
    for row in (0..d).rev() {
        let s = (row + 1..d).fold(rhs[row], |acc, c| acc - a[row][c] * x[c]);
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Tolerance for the sine-ratio identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Tolerance for `L(1)`, reflection and solver residuals.
pub const TIGHT_TOLERANCE: f64 = 1e-12;

/// One numeric check in a [`DilogGrid`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub check: &'static str,
    /// `K` or `k`, when the check has one.
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Every dilogarithm check up to the given sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilogGrid {
    pub max_k: usize,
    pub max_n: usize,
    pub rows: Vec<GridRow>,
}

impl DilogGrid {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GridRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

fn row(check: &'static str, k: Option<usize>, n: Option<usize>, lhs: f64, rhs: f64, tolerance: f64) -> GridRow {
    let defect = (lhs - rhs).abs();
    GridRow {
        check,
        k,
        n,
        lhs,
        rhs,
        defect,
        tolerance,
        // NaN fails
        passed: defect < tolerance,
        detail: None,
    }
}

fn error_row(check: &'static str, k: Option<usize>, n: Option<usize>, e: Error) -> GridRow {
    GridRow {
        check,
        k,
        n,
        lhs: f64::NAN,
        rhs: f64::NAN,
        defect: f64::NAN,
        tolerance: 0.0,
        passed: false,
        detail: Some(e.to_string()),
    }
}

/// Runs the Kirillov identity for `2 <= K <= max_k`, the halved identity for
/// `1 <= k <= max_k`, the solver for `2 <= k <= max_k` (all with
/// `2 <= N <= max_n`), `L(1)` and the reflection formula on `x = j/100`.
pub fn dilog_grid(max_k: usize, max_n: usize) -> DilogGrid {
    let mut rows = Vec::new();
    let one = rogers_l_one::<f64>();
    rows.push(row("rogers-l-one", None, None, one, std::f64::consts::PI.powi(2) / 6.0, TIGHT_TOLERANCE));
    let mut worst = row("reflection", None, None, one, one, TIGHT_TOLERANCE);
    for j in 1..100 {
        let x = j as f64 / 100.0;
        match (rogers_l(x), rogers_l(1.0 - x)) {
            (Ok(a), Ok(b)) => {
                let r = row("reflection", None, None, a + b, one, TIGHT_TOLERANCE);
                if !(r.defect <= worst.defect) {
                    worst = r;
                }
            }
            (Err(e), _) | (_, Err(e)) => worst = error_row("reflection", None, None, e),
        }
        if worst.detail.is_some() {
            break;
        }
    }
    rows.push(worst);
    for n in 2..=max_n {
        for big_k in 2..=max_k {
            rows.push(match kirillov_check::<f64>(big_k, n) {
                Ok(c) => row("kirillov", Some(big_k), Some(n), c.lhs, c.rhs, IDENTITY_TOLERANCE),
                Err(e) => error_row("kirillov", Some(big_k), Some(n), e),
            });
        }
        for k in 1..=max_k {
            rows.push(match kirillov_even_check::<f64>(k, n) {
                Ok(c) => {
                    let mut r = row("kirillov-even", Some(k), Some(n), c.lhs, c.rhs, IDENTITY_TOLERANCE);
                    if !(c.symmetry_defect < IDENTITY_TOLERANCE) {
                        r.passed = false;
                        r.detail = Some(format!("sine-ratio symmetry defect {:e}", c.symmetry_defect));
                    }
                    r
                }
                Err(e) => error_row("kirillov-even", Some(k), Some(n), e),
            });
        }
        for k in 2..=max_k {
            let solved = tba_solve::<f64>(n, k).and_then(|s| Ok((s.clone(), DilogSystem::<f64>::closed_form(n, k)?)));
            rows.push(match solved {
                Ok((s, exact)) => {
                    let mut r = row("tba-solve", Some(k), Some(n), s.distance(&exact), 0.0, TIGHT_TOLERANCE);
                    let residual = exact.residual();
                    if !(residual < TIGHT_TOLERANCE) {
                        r.passed = false;
                        r.detail = Some(format!("closed-form residual {residual:e}"));
                    }
                    r
                }
                Err(e) => error_row("tba-solve", Some(k), Some(n), e),
            });
        }
    }
    DilogGrid { max_k, max_n, rows }
}
