use super::{SeidelMatrix, SpectralError};

/// Stopping rule for the cyclic Jacobi eigensolver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Converged once the off-diagonal Frobenius norm is below `off_tol_per_n * n`.
    pub off_tol_per_n: f64,
    pub max_sweeps: usize,
    /// Reject decompositions with `max |QΛQᵀ - A|` above `residual_tol_per_n * n`.
    pub residual_tol_per_n: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            off_tol_per_n: 1e-12,
            max_sweeps: 60,
            residual_tol_per_n: 1e-10,
        }
    }
}

/// Eigenvalues sorted descending, plus the reconstruction residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    residual: f64,
    sweeps: usize,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `max |(QΛQᵀ - A)_ij|` for the computed eigenvectors `Q`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }
}

pub fn eigenvalues(a: &SeidelMatrix) -> Result<Spectrum, SpectralError> {
    eigenvalues_with(a, &JacobiOptions::default())
}

/// Cyclic Jacobi with a threshold on the first sweeps (Rutishauser's variant).
pub fn eigenvalues_with(a: &SeidelMatrix, opts: &JacobiOptions) -> Result<Spectrum, SpectralError> {
    let n = a.order();
    let src: Vec<f64> = a.entries().iter().map(|&x| x as f64).collect();
    let mut m = src.clone();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let off_tol = opts.off_tol_per_n * n as f64;

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[i * n + j] * m[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= off_tol {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(SpectralError::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        let threshold = if sweeps <= 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = m[p * n + r];
                if apr.abs() <= threshold || apr == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let arr = m[r * n + r];
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkr = m[k * n + r];
                    m[k * n + p] = c * mkp - s * mkr;
                    m[k * n + r] = s * mkp + c * mkr;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mrk = m[r * n + k];
                    m[p * n + k] = c * mpk - s * mrk;
                    m[r * n + k] = s * mpk + c * mrk;
                }
                m[p * n + r] = 0.0;
                m[r * n + p] = 0.0;
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkr = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkr;
                    q[k * n + r] = s * qkp + c * qkr;
                }
            }
        }
    }

    let lambda: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut residual: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for k in 0..n {
                s += q[i * n + k] * lambda[k] * q[j * n + k];
            }
            residual = residual.max((s - src[i * n + j]).abs());
        }
    }
    let tolerance = opts.residual_tol_per_n * n as f64;
    if residual > tolerance {
        return Err(SpectralError::Residual {
            residual,
            tolerance,
        });
    }

    let mut values = lambda;
    // stable: ties keep their diagonal order
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum {
        values,
        residual,
        sweeps,
    })
}
