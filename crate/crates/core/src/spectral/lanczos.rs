//! Lanczos iteration with full reorthogonalization for the extreme
//! eigenvalues of a sparse adjacency operator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Adjacency, Graph};
use crate::tridiag::symmetric_tridiagonal_eigen;

/// Upper bound on stored Krylov vectors, whatever `50 sqrt(n)` says.
pub(crate) const MEMORY_CAP: usize = 3000;

const CHECK_EVERY: usize = 20;

#[derive(Clone, Debug)]
pub(crate) struct RitzPair {
    pub lambda: f64,
    pub residual: f64,
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    /// Lowest Ritz pairs, ascending.
    pub low: Vec<RitzPair>,
    /// Highest Ritz pairs, ascending.
    pub high: Vec<RitzPair>,
    pub iterations: usize,
    pub converged: bool,
    pub residual_bound: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn project_out(u: Option<&[f64]>, w: &mut [f64]) {
    if let Some(u) = u {
        let c = dot(u, w);
        axpy(-c, u, w);
    }
}

/// Runs Lanczos on `A` restricted to the orthogonal complement of the unit
/// vector `deflate` (if given) and returns `want_low` / `want_high` Ritz
/// pairs from the two ends with explicit residuals.
pub(crate) fn extremes(
    g: &Graph,
    deflate: Option<&[f64]>,
    want_low: usize,
    want_high: usize,
    tol: f64,
    cap: usize,
    seed: u64,
) -> Outcome {
    let n = g.n();
    let dim = n - usize::from(deflate.is_some());
    let empty = Outcome {
        low: Vec::new(),
        high: Vec::new(),
        iterations: 0,
        converged: true,
        residual_bound: 0.0,
    };
    if dim == 0 {
        return empty;
    }
    let cap = cap.clamp(1, dim);
    let scale = (0..n).map(|v| g.degree(v)).max().unwrap_or(1).max(1) as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out(deflate, &mut q);
    let norm = dot(&q, &q).sqrt();
    if norm == 0.0 {
        return empty;
    }
    q.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut converged = false;
    let mut best = f64::INFINITY;
    let mut ritz = None;
    loop {
        let j = alpha.len();
        g.apply(&basis[j], &mut w);
        project_out(deflate, &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
            project_out(deflate, &mut w);
        }
        let b = dot(&w, &w).sqrt();
        let k = alpha.len();
        let exhausted = k >= cap || b <= 1e-12 * scale;
        if k % CHECK_EVERY == 0 || exhausted {
            let Ok(eig) = symmetric_tridiagonal_eigen(&alpha, &beta) else {
                break;
            };
            let lo = want_low.min(k);
            let hi = want_high.min(k);
            let picked: Vec<usize> = (0..lo).chain(k - hi..k).collect();
            let estimate = picked
                .iter()
                .map(|&i| if exhausted && b <= 1e-12 * scale { 0.0 } else { b * eig.vectors[i][k - 1].abs() })
                .fold(0.0, f64::max);
            best = best.min(estimate);
            let done = estimate <= tol;
            if done || exhausted {
                converged = done;
                ritz = Some((eig, lo, hi));
                break;
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let iterations = alpha.len();
    let Some((eig, lo, hi)) = ritz else {
        return Outcome {
            converged: false,
            iterations,
            residual_bound: best,
            ..empty
        };
    };
    let k = eig.values.len();
    let pair = |i: usize| {
        let mut y = vec![0.0; n];
        for (s, v) in eig.vectors[i].iter().zip(&basis) {
            axpy(*s, v, &mut y);
        }
        let norm = dot(&y, &y).sqrt();
        y.iter_mut().for_each(|x| *x /= norm);
        let mut ay = vec![0.0; n];
        g.apply(&y, &mut ay);
        axpy(-eig.values[i], &y, &mut ay);
        RitzPair {
            lambda: eig.values[i],
            residual: dot(&ay, &ay).sqrt(),
            vector: y,
        }
    };
    let low: Vec<RitzPair> = (0..lo).map(pair).collect();
    let high: Vec<RitzPair> = (k - hi..k).map(pair).collect();
    let residual_bound = low.iter().chain(&high).map(|p| p.residual).fold(0.0, f64::max);
    Outcome {
        low,
        high,
        iterations,
        converged: converged && residual_bound <= 10.0 * tol,
        residual_bound,
    }
}
