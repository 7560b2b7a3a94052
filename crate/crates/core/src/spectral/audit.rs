//! Splitting `g^T A_G g` into base, tree and matching parts.
//!
//! `A_G = A_H - A_M + A_T2 + A_T3` with `H` on the first `m` vertices.
//! For a unit `g` orthogonal to the constants,
//!
//! ```text
//! |g^T A_G g| <= lambda2(H) sum_V g^2 + (d+1) (sum_V g)^2 / m
//!              + 2 sqrt(d) sum_{V2 u V3} g^2 + (sqrt(d) + 1) sum_{L1 u L2} g^2
//!             <= 2 sqrt(d) + (sqrt(d) + 1) sum_{L1 u L2} g^2 + 2 n (d+1) / m
//! ```
//!
//! where the second line needs `lambda2(H) <= 2 sqrt(d)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterfaceAudit {
    pub samples: usize,
    /// Largest `|g^T A g| - bound` seen for the refined (first) bound.
    pub worst_refined_excess: f64,
    /// Same for the final bound.
    pub worst_final_excess: f64,
    pub refined_ok: bool,
    /// Whether the base is Ramanujan, which the final bound assumes.
    pub final_applies: bool,
    pub final_ok: bool,
}

/// Evaluates both bounds on `samples` random unit vectors orthogonal to the
/// constants. `boundary` is `L1 u L2`, `leaves` is the total leaf count `n`
/// over all sites, and the base occupies vertices `0..base_size`.
#[allow(clippy::too_many_arguments)]
pub fn interface_audit(
    g: &Graph,
    d: usize,
    base_size: usize,
    boundary: &[usize],
    leaves: usize,
    base_lambda2: f64,
    samples: usize,
    seed: u64,
) -> Result<InterfaceAudit> {
    let n = g.n();
    if base_size == 0 || base_size > n {
        return Err(Error::InvalidArgument(format!(
            "base size {base_size} not in 1..={n}"
        )));
    }
    if let Some(&v) = boundary.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let df = d as f64;
    let sd = df.sqrt();
    let m = base_size as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut av = vec![0.0; n];
    let mut worst_refined = f64::NEG_INFINITY;
    let mut worst_final = f64::NEG_INFINITY;
    for _ in 0..samples {
        let mut gv: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = gv.iter().sum::<f64>() / n as f64;
        gv.iter_mut().for_each(|x| *x -= mean);
        let norm = gv.iter().map(|x| x * x).sum::<f64>().sqrt();
        gv.iter_mut().for_each(|x| *x /= norm);
        g.apply(&gv, &mut av);
        let lhs = gv.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>().abs();
        let sum_v: f64 = gv[..base_size].iter().sum();
        let sq_v: f64 = gv[..base_size].iter().map(|x| x * x).sum();
        let sq_new: f64 = gv[base_size..].iter().map(|x| x * x).sum();
        let sq_l: f64 = boundary.iter().map(|&v| gv[v] * gv[v]).sum();
        let refined = base_lambda2 * sq_v + (df + 1.0) * sum_v * sum_v / m + 2.0 * sd * sq_new + (sd + 1.0) * sq_l;
        let fin = 2.0 * sd + (sd + 1.0) * sq_l + 2.0 * leaves as f64 * (df + 1.0) / m;
        worst_refined = worst_refined.max(lhs - refined);
        worst_final = worst_final.max(lhs - fin);
    }
    let final_applies = base_lambda2 <= 2.0 * sd + 1e-9;
    Ok(InterfaceAudit {
        samples,
        worst_refined_excess: worst_refined,
        worst_final_excess: worst_final,
        refined_ok: worst_refined <= 1e-12,
        final_applies,
        final_ok: worst_final <= 1e-12,
    })
}
