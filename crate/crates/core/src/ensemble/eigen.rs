//! Cyclic Jacobi eigenvalues for small complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 50;
const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
const HERMITIAN_TOLERANCE: f64 = 1e-12;

fn frobenius(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &[Complex64], size: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..size {
        for j in 0..size {
            if i != j {
                acc += a[i * size + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues, ascending, of the row-major Hermitian matrix `a` (`size × size`).
pub fn hermitian_eigenvalues(a: &[Complex64], size: usize) -> Result<Vec<f64>> {
    if a.len() != size * size {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: size * size,
        });
    }
    let scale = a.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    for i in 0..size {
        for j in i..size {
            if (a[i * size + j] - a[j * size + i].conj()).norm() > HERMITIAN_TOLERANCE * scale {
                return Err(Error::Eigen(format!("matrix is not Hermitian at ({i}, {j})")));
            }
        }
    }

    let mut w = a.to_vec();
    let norm = frobenius(&w);
    let idx = |i: usize, j: usize| i * size + j;

    let mut converged = norm == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal(&w, size) <= OFF_DIAGONAL_TOLERANCE * norm {
            converged = true;
            break;
        }
        for p in 0..size {
            for q in p + 1..size {
                let apq = w[idx(p, q)];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Unitary phase on index q makes the (p, q) element real and positive.
                let phase = apq / abs;
                for k in 0..size {
                    w[idx(k, q)] *= phase.conj();
                }
                for k in 0..size {
                    w[idx(q, k)] *= phase;
                }

                let app = w[idx(p, p)].re;
                let aqq = w[idx(q, q)].re;
                let theta = (aqq - app) / (2.0 * abs);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..size {
                    let kp = w[idx(k, p)];
                    let kq = w[idx(k, q)];
                    w[idx(k, p)] = kp * c - kq * s;
                    w[idx(k, q)] = kp * s + kq * c;
                }
                for k in 0..size {
                    let pk = w[idx(p, k)];
                    let qk = w[idx(q, k)];
                    w[idx(p, k)] = pk * c - qk * s;
                    w[idx(q, k)] = pk * s + qk * c;
                }
                w[idx(p, q)] = Complex64::new(0.0, 0.0);
                w[idx(q, p)] = Complex64::new(0.0, 0.0);
                w[idx(p, p)].im = 0.0;
                w[idx(q, q)].im = 0.0;
            }
        }
    }
    if !converged && off_diagonal(&w, size) > OFF_DIAGONAL_TOLERANCE * norm {
        return Err(Error::Eigen(format!(
            "no convergence after {MAX_SWEEPS} sweeps"
        )));
    }

    let mut values: Vec<f64> = (0..size).map(|i| w[idx(i, i)].re).collect();
    values.sort_by(|a, b| a.total_cmp(b));
    Ok(values)
}
