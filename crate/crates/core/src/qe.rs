//! Localization and quantum-ergodicity statistics for eigenvectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scar::ScarSite;

const UNIT_TOL: f64 = 1e-9;

/// `<psi, a psi>` for `a = 1_S - (|S|/M) 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScarWitness {
    pub support: Vec<usize>,
    pub m: usize,
    pub value: f64,
    /// `||psi_S||^2`.
    pub mass: f64,
    /// `||a||_inf`, at most 1 for any nonempty `S`.
    pub a_sup: f64,
    pub a_ok: bool,
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn check_unit(v: &[f64]) -> Result<()> {
    let n2 = norm_sq(v);
    if (n2 - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument(format!("vector has squared norm {n2}, expected 1")));
    }
    Ok(())
}

/// Mean-zero test function `1_S - |S|/M`.
pub fn indicator_test_function(set: &[usize], m: usize) -> Result<Vec<f64>> {
    let mut a = vec![-(set.len() as f64) / m as f64; m];
    for &x in set {
        if x >= m {
            return Err(Error::VertexOutOfRange { vertex: x, n: m });
        }
        a[x] += 1.0;
    }
    Ok(a)
}

pub fn scarring_witness(psi: &[f64], set: &[usize], m: usize) -> Result<ScarWitness> {
    if psi.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: psi.len(),
        });
    }
    check_unit(psi)?;
    let mut support = set.to_vec();
    support.sort_unstable();
    support.dedup();
    if let Some(&x) = support.iter().find(|&&x| x >= m) {
        return Err(Error::VertexOutOfRange { vertex: x, n: m });
    }
    let mass: f64 = support.iter().map(|&x| psi[x] * psi[x]).sum();
    let frac = support.len() as f64 / m as f64;
    let a_sup = if support.is_empty() { 0.0 } else { frac.max(1.0 - frac) };
    Ok(ScarWitness {
        m,
        value: mass - frac,
        mass,
        a_sup,
        a_ok: a_sup <= 1.0,
        support,
    })
}

/// `(1/M) sum_i <psi_i, a psi_i>^2` over an orthonormal basis.
pub fn qe_average(basis: &[Vec<f64>], a: &[f64]) -> Result<f64> {
    let m = a.len();
    if basis.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: basis.len(),
        });
    }
    let total: f64 = a.iter().sum();
    if total.abs() > 1e-9 * (m.max(1) as f64) {
        return Err(Error::InvalidArgument(format!("test function has sum {total}, expected 0")));
    }
    if a.iter().any(|x| x.abs() > 1.0 + 1e-12) {
        return Err(Error::InvalidArgument("test function exceeds 1 in absolute value".into()));
    }
    check_orthonormal(basis)?;
    let sum: f64 = basis
        .iter()
        .map(|psi| {
            let q: f64 = psi.iter().zip(a).map(|(p, w)| w * p * p).sum();
            q * q
        })
        .sum();
    Ok(sum / m as f64)
}

fn check_orthonormal(basis: &[Vec<f64>]) -> Result<()> {
    let m = basis.len();
    if let Some(v) = basis.iter().find(|v| v.len() != m) {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: v.len(),
        });
    }
    let v = nalgebra::DMatrix::from_fn(m, m, |i, j| basis[j][i]);
    let gram = v.tr_mul(&v);
    let worst = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "basis is not orthonormal (Gram deviation {worst:e})"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportMass {
    pub size: usize,
    /// Vertices by decreasing `|v(x)|`, ties by index.
    pub set: Vec<usize>,
    pub mass: f64,
}

/// Smallest `S` with `||v_S||^2 >= eps`. Taking the largest coordinates first
/// is optimal. Prefix sums within `1e-12` of `eps` count as reaching it, and
/// if the total mass falls short the whole vertex set is returned.
pub fn min_support_for_mass(v: &[f64], eps: f64) -> Result<SupportMass> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {eps}")));
    }
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| (v[b] * v[b]).total_cmp(&(v[a] * v[a])).then(a.cmp(&b)));
    let mut mass = 0.0;
    let mut size = order.len();
    for (i, &x) in order.iter().enumerate() {
        mass += v[x] * v[x];
        if mass >= eps - 1e-12 {
            size = i + 1;
            break;
        }
    }
    order.truncate(size);
    Ok(SupportMass { size, set: order, mass })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationBounds {
    /// `eps d^(eps girth / 4) / (2 d^2)`.
    pub gs_bound: f64,
    /// `eps^2 d^(2^-7 eps^2 girth)`: the shape of the other bound, which
    /// holds only up to an unspecified constant factor and is never asserted.
    pub bl_shape: f64,
    pub bl_exponent: f64,
    pub bl_constant_symbolic: bool,
}

pub fn localization_bounds(d: usize, girth: usize, eps: f64) -> LocalizationBounds {
    let df = d as f64;
    let g = girth as f64;
    let bl_exponent = eps * eps * g / 128.0;
    LocalizationBounds {
        gs_bound: eps * df.powf(eps * g / 4.0) / (2.0 * df * df),
        bl_shape: eps * eps * df.powf(bl_exponent),
        bl_exponent,
        bl_constant_symbolic: true,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialLocalization {
    /// `floor(eps r)` levels of `T1`, starting at the root.
    pub levels: usize,
    pub set: Vec<usize>,
    pub mass: f64,
    /// `||nu||^2` on each level `0..r` of `T1`.
    pub level_masses: Vec<f64>,
}

pub fn partial_localization(nu: &[f64], site: &ScarSite, eps: f64) -> Result<PartialLocalization> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {eps}")));
    }
    if let Some(&x) = site.t1.iter().find(|&&x| x >= nu.len()) {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            n: nu.len(),
        });
    }
    let sizes = crate::tree::level_sizes(site.d, site.r)
        .ok_or_else(|| Error::InvalidArgument("site too large".into()))?;
    let levels = ((eps * site.r as f64).floor() as usize).min(site.r);
    let mut level_masses = Vec::with_capacity(site.r);
    let mut start = 0;
    let mut set = Vec::new();
    for (level, &size) in sizes[..site.r].iter().enumerate() {
        let vs = &site.t1[start..start + size];
        level_masses.push(vs.iter().map(|&x| nu[x] * nu[x]).sum());
        if level < levels {
            set.extend_from_slice(vs);
        }
        start += size;
    }
    let mass = level_masses[..levels].iter().sum();
    Ok(PartialLocalization {
        levels,
        set,
        mass,
        level_masses,
    })
}
