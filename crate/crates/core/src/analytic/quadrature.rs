//! Quadrature for `∫_0^∞ ln f(t) t^{-q-1} dt` with `f` a polynomial with
//! `f(0) = 1` and nonnegative coefficients, `0 < q < 1`.
//!
//! The half line is split at `t = 1` and the tail is folded back with
//! `t = 1/u`. Writing `d = deg f` and `g(u) = u^d f(1/u) / f_d`, the tail is
//!
//! ```text
//! ∫_1^∞ ln f(t) t^{-q-1} dt = d/q² + ln(f_d)/q + ∫_0^1 ln g(u) u^{q-1} du
//! ```
//!
//! so both halves reduce to `∫_0^1 ln h(x) x^{s-1} dx` with `h(0) = 1`.
//! That piece is integrated with Gauss–Legendre on dyadic panels
//! `[2^{-k-1}, 2^{-k}]` down to a cutoff `x0`, below which the power series
//! of `ln h` converges fast and is integrated term by term.

use std::sync::OnceLock;

use super::AnalyticError;

/// Accuracy settings for the singular-integral engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance per panel, in `(0, 1e-4]`.
    pub rel_tol: f64,
    /// Maximum bisection depth inside a dyadic panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            max_depth: 30,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(rel_tol: f64) -> Result<Self, AnalyticError> {
        let spec = QuadratureSpec {
            rel_tol,
            ..QuadratureSpec::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(AnalyticError::Domain(format!(
                "quadrature tolerance {} outside (0, 1e-4]",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

const GAUSS_ORDER: usize = 20;

/// Ratio between the series cutoff and the reciprocal root bound.
const SERIES_RADIUS: f64 = 1.0 / 1024.0;
const SERIES_TERMS: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static ([f64; GAUSS_ORDER], [f64; GAUSS_ORDER]) {
    static RULE: OnceLock<([f64; GAUSS_ORDER], [f64; GAUSS_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut x = [0.0; GAUSS_ORDER];
        let mut w = [0.0; GAUSS_ORDER];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let wi = 2.0 / ((1.0 - z * z) * dp * dp);
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        (x, w)
    })
}

fn gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for i in 0..GAUSS_ORDER {
        sum += w[i] * f(mid + half * x[i]);
    }
    sum * half
}

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    let m = 0.5 * (a + b);
    let left = gauss(f, a, m);
    let right = gauss(f, m, b);
    let refined = left + right;
    // below a few ulps the two estimates cannot be told apart
    if (refined - whole).abs() <= tol.max(1e-14 * refined.abs()) {
        return Ok(refined);
    }
    if depth >= spec.max_depth || !refined.is_finite() {
        return Err(AnalyticError::NoConvergence { lo: a, hi: b });
    }
    Ok(adaptive(f, a, m, left, 0.5 * tol, depth + 1, spec)?
        + adaptive(f, m, b, right, 0.5 * tol, depth + 1, spec)?)
}

/// Neumaier-compensated `Σ_{k>=1} h_k x^k`, i.e. `h(x) - 1`.
fn poly_minus_one(h: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut pow = 1.0;
    for &c in &h[1..] {
        pow *= x;
        let term = c * pow;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `∫_0^1 ln h(x) x^{s-1} dx` for `h(0) = 1`, nonnegative coefficients, `s > -1`.
fn log_moment(h: &[f64], s: f64, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    let d = h.len() - 1;
    if d == 0 {
        return Ok(0.0);
    }
    // Fujiwara bound on the roots of y^d + h_1 y^{d-1} + ... + h_d, which
    // are the β_i in h(x) = Π(1 + β_i x).
    let bound = 2.0
        * (1..=d)
            .map(|k| h[k].abs().powf(1.0 / k as f64))
            .fold(0.0, f64::max);
    let x0 = (SERIES_RADIUS / bound).min(1.0);

    // ln h(x0 y) = Σ l_m y^m, from m l_m = m e_m - Σ_{j<m} j l_j e_{m-j}
    let e: Vec<f64> = (0..=d).map(|k| h[k] * x0.powi(k as i32)).collect();
    let coef = |k: usize| if k <= d { e[k] } else { 0.0 };
    let mut l = [0.0; SERIES_TERMS + 1];
    let mut series = 0.0;
    for m in 1..=SERIES_TERMS {
        let mut acc = m as f64 * coef(m);
        for (j, lj) in l.iter().enumerate().take(m).skip(1) {
            acc -= j as f64 * lj * coef(m - j);
        }
        l[m] = acc / m as f64;
        series += l[m] / (m as f64 + s);
    }
    let mut total = series * x0.powf(s);

    let integrand = |x: f64| poly_minus_one(h, x).ln_1p() * x.powf(s - 1.0);
    let mut hi = 1.0;
    while hi > x0 {
        let lo = (0.5 * hi).max(x0);
        let whole = gauss(&integrand, lo, hi);
        let tol = spec.rel_tol * whole.abs().max(f64::MIN_POSITIVE);
        total += adaptive(&integrand, lo, hi, whole, tol, 0, spec)?;
        hi = lo;
    }
    Ok(total)
}

/// `∫_0^∞ ln f(t) t^{-q-1} dt`.
pub fn log_weighted_integral(
    coeffs: &[f64],
    q: f64,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    spec.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(AnalyticError::Domain(format!(
            "exponent q = {q} outside (0, 1)"
        )));
    }
    if coeffs.first() != Some(&1.0) {
        return Err(AnalyticError::InvalidCoefficients(
            "constant coefficient must be 1".into(),
        ));
    }
    if let Some(bad) = coeffs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(AnalyticError::InvalidCoefficients(format!(
            "coefficient {bad} is not a finite nonnegative number"
        )));
    }
    let d = coeffs.iter().rposition(|&c| c > 0.0).unwrap_or(0);
    let f = &coeffs[..=d];
    if d == 0 {
        return Ok(0.0);
    }
    let head = log_moment(f, -q, spec)?;
    let top = f[d];
    let reversed: Vec<f64> = f.iter().rev().map(|c| c / top).collect();
    let tail = d as f64 / (q * q) + top.ln() / q + log_moment(&reversed, q, spec)?;
    Ok(head + tail)
}
