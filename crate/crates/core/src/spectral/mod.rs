//! Adjacency spectra: extreme eigenvalues (dense below 4096 vertices,
//! Lanczos above), residual checks, the d-ary tree quadratic-form bound and
//! the near-Ramanujan threshold constants.

mod audit;
mod kahale;
mod lanczos;

pub use audit::{interface_audit, InterfaceAudit};
pub use kahale::{
    kahale_check, kahale_sequence, ChecklistItem, KahaleInstance, KahaleVerdict, LayerRegularity,
    MassRatio, TestFunctionSequence,
};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Adjacency, Graph};
use crate::tree::DaryTree;

/// Largest graph handled by the dense solver.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEstimate {
    pub lambda: f64,
    /// `||A v - lambda v||_2` for the unit vector returned with it.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub n: usize,
    pub lambda_top: f64,
    /// Largest `|lambda_i|` over all eigenvalues but one copy of the top one.
    pub lambda2_abs: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual_bound: f64,
    /// Extreme eigenvalues from both ends, ascending.
    pub extremes: Vec<EigenEstimate>,
    /// Full spectrum, ascending, when the dense solver ran.
    pub spectrum: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct SpectralOptions {
    /// Eigenvalues wanted from each end of the spectrum.
    pub how_many: usize,
    pub tol: f64,
    /// Forces a method; by default dense up to [`DENSE_LIMIT`] vertices.
    pub method: Option<Method>,
    pub seed: u64,
    pub max_iterations: Option<usize>,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            how_many: 1,
            tol: 1e-10,
            method: None,
            seed: 0x5eed,
            max_iterations: None,
        }
    }
}

/// Orthonormal eigenbasis with eigenvalues ascending; `vectors[i]` belongs
/// to `values[i]`.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// Full eigen-decomposition; only for graphs up to [`DENSE_LIMIT`] vertices.
pub fn full_eigensystem(g: &Graph) -> Result<Eigensystem> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(Error::Precondition(format!(
            "dense eigensolver limited to {DENSE_LIMIT} vertices, got {n}"
        )));
    }
    let eig = SymmetricEigen::new(adjacency_matrix(g));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok(Eigensystem { values, vectors })
}

pub fn extreme_eigenvalues(g: &Graph, how_many: usize, tol: f64) -> Result<SpectralSummary> {
    spectral_summary(
        g,
        &SpectralOptions {
            how_many,
            tol,
            ..SpectralOptions::default()
        },
    )
}

pub fn spectral_summary(g: &Graph, opts: &SpectralOptions) -> Result<SpectralSummary> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Precondition("empty graph".into()));
    }
    if !graph::is_connected(g) {
        return Err(Error::Precondition("graph is disconnected".into()));
    }
    let how_many = opts.how_many.max(1);
    let method = opts
        .method
        .unwrap_or(if n <= DENSE_LIMIT { Method::Dense } else { Method::Iterative });
    match method {
        Method::Dense => dense_summary(g, how_many),
        Method::Iterative => iterative_summary(g, how_many, opts),
    }
}

fn dense_summary(g: &Graph, how_many: usize) -> Result<SpectralSummary> {
    let sys = full_eigensystem(g)?;
    let n = sys.values.len();
    let mut picked: Vec<usize> = (0..how_many.min(n)).collect();
    picked.extend(n.saturating_sub(how_many)..n);
    picked.sort_unstable();
    picked.dedup();
    let extremes: Vec<EigenEstimate> = picked
        .iter()
        .map(|&i| {
            let res = residual(g, &sys.vectors[i], sys.values[i])?;
            Ok(EigenEstimate {
                lambda: sys.values[i],
                residual: res.two,
            })
        })
        .collect::<Result<_>>()?;
    let residual_bound = extremes.iter().map(|e| e.residual).fold(0.0, f64::max);
    let lambda_top = sys.values[n - 1];
    let lambda2_abs = if n == 1 {
        0.0
    } else {
        sys.values[0].abs().max(sys.values[n - 2].abs())
    };
    Ok(SpectralSummary {
        n,
        lambda_top,
        lambda2_abs,
        method: Method::Dense,
        iterations: 0,
        residual_bound,
        extremes,
        spectrum: Some(sys.values),
    })
}

fn iterative_summary(g: &Graph, how_many: usize, opts: &SpectralOptions) -> Result<SpectralSummary> {
    let n = g.n();
    let cap = opts
        .max_iterations
        .unwrap_or_else(|| ((50.0 * (n as f64).sqrt()) as usize).min(lanczos::MEMORY_CAP));
    let regular = graph::regular_degree(g);
    let ones = regular.map(|_| vec![1.0 / (n as f64).sqrt(); n]);
    let top_extra = usize::from(regular.is_none());
    let out = lanczos::extremes(g, ones.as_deref(), how_many, how_many + top_extra, opts.tol, cap, opts.seed);
    if !out.converged {
        return Err(Error::NoConvergence {
            iterations: out.iterations,
            residual: out.residual_bound,
        });
    }
    let mut extremes: Vec<EigenEstimate> = out
        .low
        .iter()
        .chain(&out.high)
        .map(|p| EigenEstimate {
            lambda: p.lambda,
            residual: p.residual,
        })
        .collect();
    let (lambda_top, lambda2_abs) = match (regular, &ones) {
        (Some(k), Some(ones)) => {
            let res = residual(g, ones, k as f64)?;
            extremes.push(EigenEstimate {
                lambda: k as f64,
                residual: res.two,
            });
            let hi = out.high.last().map_or(0.0, |p| p.lambda.abs());
            let lo = out.low.first().map_or(0.0, |p| p.lambda.abs());
            (k as f64, hi.max(lo))
        }
        _ => {
            let top = out.high.last().map_or(0.0, |p| p.lambda);
            let second = out.high.iter().rev().nth(1).map_or(0.0, |p| p.lambda.abs());
            let lo = out.low.first().map_or(0.0, |p| p.lambda.abs());
            (top, second.max(lo))
        }
    };
    extremes.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    extremes.dedup_by(|a, b| a.lambda == b.lambda && a.residual == b.residual);
    let residual_bound = extremes.iter().map(|e| e.residual).fold(0.0, f64::max);
    Ok(SpectralSummary {
        n,
        lambda_top,
        lambda2_abs,
        method: Method::Iterative,
        iterations: out.iterations,
        residual_bound,
        extremes,
        spectrum: None,
    })
}

/// A unit eigenvector estimate.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub lambda: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// The nontrivial eigenpair of largest `|lambda|` on a connected regular
/// graph (the trivial eigenvector is the constant one).
pub fn second_eigenpair(g: &Graph, opts: &SpectralOptions) -> Result<EigenPair> {
    let n = g.n();
    if graph::regular_degree(g).is_none() {
        return Err(Error::Precondition("graph is not regular".into()));
    }
    if n < 2 || !graph::is_connected(g) {
        return Err(Error::Precondition("need a connected graph on at least 2 vertices".into()));
    }
    let method = opts
        .method
        .unwrap_or(if n <= DENSE_LIMIT { Method::Dense } else { Method::Iterative });
    let pair = match method {
        Method::Dense => {
            let sys = full_eigensystem(g)?;
            // drop the top eigenvector, which is constant for connected regular graphs
            let (lo, hi) = (0, n - 2);
            let i = if sys.values[lo].abs() > sys.values[hi].abs() { lo } else { hi };
            let vector = sys.vectors[i].clone();
            let residual = residual(g, &vector, sys.values[i])?.two;
            EigenPair {
                lambda: sys.values[i],
                vector,
                residual,
            }
        }
        Method::Iterative => {
            let cap = opts
                .max_iterations
                .unwrap_or_else(|| ((50.0 * (n as f64).sqrt()) as usize).min(lanczos::MEMORY_CAP));
            let ones = vec![1.0 / (n as f64).sqrt(); n];
            let out = lanczos::extremes(g, Some(&ones), 1, 1, opts.tol, cap, opts.seed);
            if !out.converged {
                return Err(Error::NoConvergence {
                    iterations: out.iterations,
                    residual: out.residual_bound,
                });
            }
            let lo = &out.low[0];
            let hi = out.high.last().expect("converged run has a top pair");
            let p = if lo.lambda.abs() > hi.lambda.abs() { lo } else { hi };
            EigenPair {
                lambda: p.lambda,
                vector: p.vector.clone(),
                residual: p.residual,
            }
        }
    };
    Ok(pair)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max: f64,
    pub two: f64,
}

/// `A v - lambda v` in the max norm and the 2-norm.
pub fn residual<A: Adjacency + ?Sized>(g: &A, v: &[f64], lambda: f64) -> Result<Residual> {
    let n = g.vertex_count();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    let (mut max, mut two) = (0.0f64, 0.0f64);
    for x in 0..n {
        let av: f64 = g.neighbors(x).iter().map(|&y| v[y]).sum();
        let r = av - lambda * v[x];
        max = max.max(r.abs());
        two += r * r;
    }
    Ok(Residual {
        max,
        two: two.sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `(3d - 1) / sqrt(d (2d - 1))`.
    pub b: f64,
    /// `b sqrt(d) = (3d - 1) / sqrt(2d - 1)`.
    pub proposition: f64,
    /// `(3 / sqrt 2) sqrt(d)`.
    pub theorem: f64,
}

pub fn spectral_threshold(d: usize) -> Result<Thresholds> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    let df = d as f64;
    let b = (3.0 * df - 1.0) / (df * (2.0 * df - 1.0)).sqrt();
    let t = Thresholds {
        b,
        proposition: b * df.sqrt(),
        theorem: 3.0 / 2f64.sqrt() * df.sqrt(),
    };
    if !(t.proposition < t.theorem && t.theorem < 3.0 * df.sqrt()) {
        return Err(Error::Internal(format!("threshold ordering broken for d = {d}")));
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|f^T A_T f|` against `2 sqrt(d) sum_W f^2 + sqrt(d) sum_L f^2` with `W`
/// the non-leaves and `L` the leaves.
pub fn tree_quadratic_bound_check(t: &DaryTree, f: &[f64]) -> Result<QuadraticCheck> {
    if f.len() != t.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: t.vertex_count(),
            actual: f.len(),
        });
    }
    let lhs = t
        .graph()
        .edges()
        .map(|(u, v)| 2.0 * f[u] * f[v])
        .sum::<f64>()
        .abs();
    let sq = |r: std::ops::Range<usize>| r.map(|v| f[v] * f[v]).sum::<f64>();
    let sd = (t.d() as f64).sqrt();
    let rhs = 2.0 * sd * sq(t.interior()) + sd * sq(t.leaves());
    Ok(QuadraticCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-12,
    })
}
