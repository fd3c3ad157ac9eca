//! Seidel spectra: a floating-point Jacobi backend and an exact
//! integer characteristic-polynomial backend.

mod exact;
mod jacobi;

use thiserror::Error;

pub use exact::{
    bareiss_determinant, cauchy_binet_check, char_poly_exact, elementary_symmetric_a2,
    submatrix_det_parity, ExactCharPoly, IntMatrix,
};
pub use jacobi::{eigenvalues, eigenvalues_with, JacobiOptions, Spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("eigen-decomposition residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },
    #[error("invalid Seidel matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid index set: {0}")]
    InvalidIndices(String),
}

/// Symmetric `n × n` matrix with zero diagonal and `±1` off the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeidelMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SeidelMatrix {
    /// Validates a row-major entry list.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self, SpectralError> {
        if entries.len() != n * n {
            return Err(SpectralError::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let x = entries[i * n + j];
                let ok = if i == j {
                    x == 0
                } else {
                    (x == 1 || x == -1) && x == entries[j * n + i]
                };
                if !ok {
                    return Err(SpectralError::InvalidMatrix(format!(
                        "entry ({i},{j}) = {x}"
                    )));
                }
            }
        }
        Ok(SeidelMatrix { n, entries })
    }

    pub(crate) fn from_entries_unchecked(n: usize, entries: Vec<i8>) -> Self {
        SeidelMatrix { n, entries }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as i64)
    }

    /// `A²` as an integer matrix. Its diagonal is constant `n - 1`.
    pub fn square(&self) -> IntMatrix {
        let n = self.n;
        IntMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.get(i, k) as i64 * self.get(k, j) as i64)
                .sum()
        })
    }

    /// Conjugation `D A D` by the diagonal `±1` matrix with `-1` on `signs`.
    pub fn conjugate_by_signs(&self, signs: u64) -> SeidelMatrix {
        let n = self.n;
        let sign = |v: usize| if signs >> v & 1 == 1 { -1i8 } else { 1 };
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] *= sign(i) * sign(j);
            }
        }
        SeidelMatrix { n, entries }
    }

    pub fn negate(&self) -> SeidelMatrix {
        SeidelMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

/// `Σ |λ_i|^p`. At `p = 1` this is the Seidel energy.
pub fn p_energy(spectrum: &Spectrum, p: f64) -> f64 {
    spectrum.values().iter().map(|l| l.abs().powf(p)).sum()
}
