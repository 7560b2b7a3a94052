//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).
//!
//! Used for the radial quotient of a d-ary tree and for the Ritz problem
//! inside the Lanczos iteration, both of which are small.

use crate::error::{Error, Result};

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct TridiagEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector for `values[j]`.
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 60;

/// Diagonalizes the matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    if off.len() + 1 != n {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            actual: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z is stored row-major: z[k * n + j] is component k of vector j.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    iterations: sweeps,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let row = k * n;
                    let f = z[row + i + 1];
                    z[row + i + 1] = s * z[row + i] + c * f;
                    z[row + i] = c * z[row + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = idx.iter().map(|&j| d[j]).collect();
    let vectors = idx
        .iter()
        .map(|&j| (0..n).map(|k| z[k * n + j]).collect())
        .collect();
    Ok(TridiagEigen { values, vectors })
}
