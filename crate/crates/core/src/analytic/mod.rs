//! Integral representation of p-energies.
//!
//! For `α > 0` and `0 < p < 1`,
//! `α^p = C_p ∫_0^∞ ln(1 + αt) t^{-p-1} dt` with
//! `C_p = (∫_0^∞ ln(1 + t) t^{-p-1} dt)^{-1}`. Applied to the factors of
//! `Π(1 + λ_i² t) = Σ S_k(A²) t^k` this gives `Σ|λ_i|^p` from the exact
//! `S_k(A²)` alone.

mod quadrature;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

pub use quadrature::{log_weighted_integral, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("invalid polynomial: {0}")]
    InvalidCoefficients(String),
    #[error("quadrature did not converge on [{lo:e}, {hi:e}]")]
    NoConvergence { lo: f64, hi: f64 },
}

fn check_open_unit(p: f64, what: &str) -> Result<(), AnalyticError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(AnalyticError::Domain(format!(
            "{what} = {p} outside (0, 1)"
        )))
    }
}

/// `C_p = p sin(πp) / π`.
///
/// Integrating by parts turns the defining integral into
/// `(1/p) ∫_0^∞ t^{-p} / (1 + t) dt = π / (p sin πp)`.
pub fn cp_constant(p: f64) -> Result<f64, AnalyticError> {
    check_open_unit(p, "p")?;
    Ok(p * (std::f64::consts::PI * p).sin() / std::f64::consts::PI)
}

/// `C_p` as the reciprocal of its defining integral, by quadrature.
pub fn cp_constant_by_quadrature(p: f64, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    check_open_unit(p, "p")?;
    Ok(1.0 / log_weighted_integral(&[1.0, 1.0], p, spec)?)
}

/// True where `sin(πp)` is small enough that `C_p` is numerically fragile.
pub fn cp_is_near_degenerate(p: f64) -> bool {
    (std::f64::consts::PI * p).sin() < 1e-2
}

/// `(α^p, C_p ∫_0^∞ ln(1 + αt) t^{-p-1} dt)`.
pub fn base_integral_check(
    alpha: f64,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), AnalyticError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(AnalyticError::Domain(format!(
            "α = {alpha} must be a positive real"
        )));
    }
    let rhs = cp_constant(p)? * log_weighted_integral(&[1.0, alpha], p, spec)?;
    Ok((alpha.powf(p), rhs))
}

/// `C_{p/2} ∫_0^∞ ln(Σ S_k t^k) t^{-p/2-1} dt` for `0 < p < 2`.
pub fn energy_by_integral(
    sk: &[BigInt],
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    if !(p > 0.0 && p < 2.0) {
        return Err(AnalyticError::Domain(format!("p = {p} outside (0, 2)")));
    }
    if sk.first() != Some(&BigInt::from(1)) {
        return Err(AnalyticError::InvalidCoefficients("S_0 must be 1".into()));
    }
    if sk.iter().any(Signed::is_negative) {
        return Err(AnalyticError::InvalidCoefficients(
            "S_k(A²) must be nonnegative".into(),
        ));
    }
    let coeffs: Vec<f64> = sk
        .iter()
        .map(|s| s.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let q = 0.5 * p;
    Ok(cp_constant(q)? * log_weighted_integral(&coeffs, q, spec)?)
}

/// `f(t) = 1 + a t + b t² + c t³` with `a, b, c > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    a: f64,
    b: f64,
    c: f64,
}

impl CubicCoefficients {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, AnalyticError> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(AnalyticError::Domain(format!(
                    "cubic coefficient {name} = {v} must be positive"
                )));
            }
        }
        Ok(CubicCoefficients { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `[1, a, b, c]`, lowest degree first.
    pub fn coeffs(&self) -> [f64; 4] {
        [1.0, self.a, self.b, self.c]
    }
}

/// `√(a + 2√(b + 2√(ac)))`.
pub fn cubic_bound_rhs(cc: &CubicCoefficients) -> f64 {
    (cc.a + 2.0 * (cc.b + 2.0 * (cc.a * cc.c).sqrt()).sqrt()).sqrt()
}

/// `C_{1/2} ∫_0^∞ ln f(t) t^{-3/2} dt`, which equals `Σ √α_i` for
/// `f(t) = Π(1 + α_i t)`.
pub fn cubic_integral_lhs(
    cc: &CubicCoefficients,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    Ok(cp_constant(0.5)? * log_weighted_integral(&cc.coeffs(), 0.5, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cp_examples() {
        assert!((cp_constant(0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert!((cp_constant(0.5).unwrap() - 0.159154943).abs() < 1e-9);
        assert!((cp_constant(0.25).unwrap() - 0.056269769).abs() < 1e-9);
        assert!(cp_constant(1e-9).unwrap() < 1e-15);
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(cp_constant(bad).is_err());
        }
        assert!(cp_is_near_degenerate(0.999));
        assert!(!cp_is_near_degenerate(0.5));
    }

    #[test]
    fn base_integral_examples() {
        let spec = QuadratureSpec::default();
        for (alpha, expect) in [(1.0, 1.0), (4.0, 2.0), (9.0, 3.0)] {
            let (lhs, rhs) = base_integral_check(alpha, 0.5, &spec).unwrap();
            assert_eq!(lhs, expect);
            assert!((rhs - expect).abs() < 1e-8 * expect, "α={alpha}: {rhs}");
        }
        assert!(base_integral_check(-1.0, 0.5, &spec).is_err());
        assert!(base_integral_check(0.0, 0.5, &spec).is_err());
    }

    #[test]
    fn energy_by_integral_examples() {
        let spec = QuadratureSpec::default();
        let e = energy_by_integral(&big(&[1, 2, 1]), 1.0, &spec).unwrap();
        assert!((e - 2.0).abs() < 1e-9, "{e}");
        let e = energy_by_integral(&big(&[1, 6, 9, 4]), 1.0, &spec).unwrap();
        assert!((e - 4.0).abs() < 1e-9, "{e}");
        let e = energy_by_integral(&big(&[1, 20, 150, 500, 625, 0]), 1.0, &spec).unwrap();
        assert!((e - 4.0 * 5f64.sqrt()).abs() < 1e-9, "{e}");
        // n = 1: the 1×1 zero matrix
        assert_eq!(energy_by_integral(&big(&[1, 0]), 1.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn energy_by_integral_rejects() {
        let spec = QuadratureSpec::default();
        assert!(energy_by_integral(&big(&[1, 2, 1]), 2.0, &spec).is_err());
        assert!(energy_by_integral(&big(&[1, 2, 1]), 0.0, &spec).is_err());
        assert!(energy_by_integral(&big(&[2, 2, 1]), 1.0, &spec).is_err());
        assert!(energy_by_integral(&big(&[1, -2, 1]), 1.0, &spec).is_err());
        assert!(energy_by_integral(&[], 1.0, &spec).is_err());
    }

    #[test]
    fn cubic_examples() {
        let spec = QuadratureSpec::default();
        let c = CubicCoefficients::new(3.0, 3.0, 1.0).unwrap();
        assert!((cubic_bound_rhs(&c) - 2.8434).abs() < 1e-4);
        assert!((cubic_integral_lhs(&c, &spec).unwrap() - 3.0).abs() < 1e-9);
        let c = CubicCoefficients::new(1.0, 1.0, 1.0).unwrap();
        // √(1 + 2√3)
        assert!((cubic_bound_rhs(&c) - 2.1128421).abs() < 1e-6);
        let c = CubicCoefficients::new(6.0, 9.0, 4.0).unwrap();
        assert!((cubic_integral_lhs(&c, &spec).unwrap() - 4.0).abs() < 1e-9);
        let c = CubicCoefficients::new(1e-300, 4.0, 1.0).unwrap();
        assert!((cubic_bound_rhs(&c) - (2.0f64 * 2.0).sqrt()).abs() < 1e-12);
        assert!(CubicCoefficients::new(0.0, 1.0, 1.0).is_err());
        assert!(CubicCoefficients::new(1.0, -1.0, 1.0).is_err());
    }
}
