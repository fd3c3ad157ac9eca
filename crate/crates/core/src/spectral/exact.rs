//! Exact integer linear algebra: Faddeev–LeVerrier characteristic
//! polynomials, Bareiss determinants and the Cauchy–Binet minor sum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{SeidelMatrix, SpectralError};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols, "IntMatrix shape mismatch");
        IntMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "IntMatrix product shape mismatch");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    /// `R Rᵀ`.
    pub fn gram(&self) -> IntMatrix {
        self.mul(&self.transpose())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

/// Coefficients of `det(xI - A)`, lowest degree first, so `coeffs[n] == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactCharPoly {
    coeffs: Vec<BigInt>,
}

impl ExactCharPoly {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    /// `S_k` of the eigenvalues, i.e. `(-1)^k c_{n-k}`, for `k = 0..=n`.
    pub fn elementary_symmetric(&self) -> Vec<BigInt> {
        let n = self.degree();
        (0..=n)
            .map(|k| {
                let c = self.coeffs[n - k].clone();
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// All roots, with multiplicity, sorted descending, for a polynomial with
    /// only real roots (as for any symmetric matrix).
    ///
    /// Works on the exact square-free decomposition, so repeated eigenvalues
    /// are found as simple roots of a factor and keep full precision. Each
    /// square-free factor is solved by bisection between the roots of its
    /// derivative, which interlace by Rolle's theorem.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut roots = Vec::with_capacity(self.degree());
        for (mult, factor) in square_free_decomposition(&self.coeffs) {
            let fc: Vec<f64> = factor
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect();
            for r in real_rooted_roots(&fc) {
                roots.extend(std::iter::repeat_n(r, mult));
            }
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        roots
    }
}

/// Arithmetic needed by Faddeev–LeVerrier, with a checked fast path.
trait ExactScalar: Clone {
    fn from_i64(x: i64) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn div_exact(&self, d: i64) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl ExactScalar for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn div_exact(&self, d: i64) -> Option<Self> {
        let d = d as i128;
        debug_assert_eq!(self % d, 0, "Faddeev–LeVerrier division must be exact");
        Some(self / d)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactScalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div_exact(&self, d: i64) -> Option<Self> {
        let (q, r) = self.div_rem(&BigInt::from(d));
        debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
        Some(q)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// `M_0 = 0`, `M_k = B M_{k-1} + c_{n-k+1} I`, `c_{n-k} = -tr(B M_k) / k`.
fn faddeev_leverrier<T: ExactScalar>(b: &IntMatrix) -> Option<Vec<BigInt>> {
    let n = b.rows();
    let bm: Vec<T> = b.data.iter().map(|&x| T::from_i64(x)).collect();
    let zero = T::from_i64(0);
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = T::from_i64(1);
    // M_1 = I
    let mut m = vec![zero.clone(); n * n];
    for i in 0..n {
        m[i * n + i] = T::from_i64(1);
    }
    let mut bm_k = vec![zero.clone(); n * n];
    for k in 1..=n {
        // bm_k = B * M_k
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for l in 0..n {
                    acc = acc.add(&bm[i * n + l].mul(&m[l * n + j])?)?;
                }
                bm_k[i * n + j] = acc;
            }
        }
        let mut tr = zero.clone();
        for i in 0..n {
            tr = tr.add(&bm_k[i * n + i])?;
        }
        let c = tr.mul(&T::from_i64(-1))?.div_exact(k as i64)?;
        coeffs[n - k] = c.clone();
        if k < n {
            // M_{k+1} = B M_k + c_{n-k} I
            std::mem::swap(&mut m, &mut bm_k);
            for i in 0..n {
                m[i * n + i] = m[i * n + i].add(&c)?;
            }
        }
    }
    Some(coeffs.iter().map(T::to_bigint).collect())
}

fn char_poly_of(b: &IntMatrix) -> ExactCharPoly {
    assert_eq!(
        b.rows(),
        b.cols(),
        "characteristic polynomial needs a square matrix"
    );
    let coeffs = faddeev_leverrier::<i128>(b)
        .or_else(|| faddeev_leverrier::<BigInt>(b))
        .expect("BigInt arithmetic does not overflow");
    ExactCharPoly { coeffs }
}

#[cfg(test)]
fn char_poly_of_bigint(b: &IntMatrix) -> ExactCharPoly {
    ExactCharPoly {
        coeffs: faddeev_leverrier::<BigInt>(b).unwrap(),
    }
}

pub fn char_poly_exact(a: &SeidelMatrix) -> ExactCharPoly {
    char_poly_of(&a.to_int_matrix())
}

/// `S_0..S_n` of the squared eigenvalues, read off the characteristic
/// polynomial of the integer matrix `A²`.
pub fn elementary_symmetric_a2(a: &SeidelMatrix) -> Vec<BigInt> {
    char_poly_of(&a.square()).elementary_symmetric()
}

/// Fraction-free Gaussian elimination; every intermediate is an exact minor.
pub fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<BigInt> = m.data.iter().map(|&x| BigInt::from(x)).collect();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = a[k * n + k].clone();
    }
    let det = a[n * n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of the submatrix `A[I, J]` (rows `I`, columns `J`).
pub fn submatrix_det_parity(
    a: &SeidelMatrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<BigInt, SpectralError> {
    let n = a.order();
    if rows.is_empty() || rows.len() != cols.len() {
        return Err(SpectralError::InvalidIndices(format!(
            "|I| = {}, |J| = {}",
            rows.len(),
            cols.len()
        )));
    }
    for set in [rows, cols] {
        if let Some(&bad) = set.iter().find(|&&v| v >= n) {
            return Err(SpectralError::InvalidIndices(format!("index {bad} >= {n}")));
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() {
            return Err(SpectralError::InvalidIndices("repeated index".into()));
        }
    }
    Ok(bareiss_determinant(
        &a.to_int_matrix().submatrix(rows, cols),
    ))
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Both sides of Cauchy–Binet for `B = R Rᵀ`: `(S_k(B), Σ_{I,J} det(R[I,J])²)`,
/// with `I` ranging over `k`-subsets of rows and `J` over `k`-subsets of columns.
pub fn cauchy_binet_check(r: &IntMatrix, k: usize) -> (BigInt, BigInt) {
    let lhs = char_poly_of(&r.gram())
        .elementary_symmetric()
        .get(k)
        .cloned()
        .unwrap_or_default();
    let mut rhs = BigInt::zero();
    for_each_subset(r.rows(), k, |rows| {
        for_each_subset(r.cols(), k, |cols| {
            let d = bareiss_determinant(&r.submatrix(rows, cols));
            rhs += &d * &d;
        });
    });
    (lhs, rhs)
}

// ---------------------------------------------------------------------------
// Exact polynomial helpers for root extraction. Coefficients lowest first.

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut p);
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut p {
            *c = &*c / &g;
        }
    }
    if p.last().is_some_and(Signed::is_negative) {
        for c in &mut p {
            *c = -&*c;
        }
    }
    p
}

/// Pseudo-remainder of `a` by `b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bc;
        }
        r.pop();
        trim(&mut r);
        if db == 0 {
            return vec![BigInt::zero()];
        }
    }
    r
}

fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Primitive gcd over `Z[x]`.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive(a.to_vec());
    let mut b = primitive(b.to_vec());
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !is_zero_poly(&b) {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive(r);
    }
    primitive(a)
}

/// Exact division, assuming `b | a` over `Q[x]`; returns a primitive quotient.
fn poly_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![BigInt::one()];
    }
    let lb = b[db].clone();
    // scale so that every step divides exactly
    let steps = r.len() - db;
    let scale = num_traits::pow(lb.clone(), steps);
    for c in r.iter_mut() {
        *c = &*c * &scale;
    }
    let mut q = vec![BigInt::zero(); steps];
    for s in (0..steps).rev() {
        let coef = &r[s + db] / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[s + i] -= &coef * bc;
        }
        q[s] = coef;
    }
    primitive(q)
}

/// Pairs `(multiplicity, square-free factor)`, up to scalar multiples.
///
/// With `g_0 = p` and `g_{i+1} = gcd(g_i, g_i')`, the quotient
/// `h_i = g_{i-1} / g_i` collects the factors of multiplicity `>= i`, so
/// `h_i / h_{i+1}` is the product of those with multiplicity exactly `i`.
fn square_free_decomposition(p: &[BigInt]) -> Vec<(usize, Vec<BigInt>)> {
    let mut gs = vec![primitive(p.to_vec())];
    while gs.last().is_some_and(|g| g.len() > 1) {
        let g = gs.last().unwrap();
        let next = poly_gcd(g, &derivative(g));
        gs.push(next);
    }
    let hs: Vec<Vec<BigInt>> = gs.windows(2).map(|w| poly_div(&w[0], &w[1])).collect();
    let mut out = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let factor = match hs.get(i + 1) {
            Some(next) => poly_div(h, next),
            None => h.clone(),
        };
        if factor.len() > 1 {
            out.push((i + 1, factor));
        }
    }
    out
}

fn eval_f64(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Roots of a real-rooted square-free polynomial (coefficients lowest first).
fn real_rooted_roots(p: &[f64]) -> Vec<f64> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-p[0] / p[1]];
    }
    let lead = p[deg];
    let bound = 1.0
        + p[..deg]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let dp: Vec<f64> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    let mut fences = vec![-bound];
    let mut crit = real_rooted_roots(&dp);
    crit.sort_by(f64::total_cmp);
    fences.extend(crit);
    fences.push(bound);
    fences.windows(2).map(|w| bisect(p, w[0], w[1])).collect()
}

fn bisect(p: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = eval_f64(p, lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval_f64(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
