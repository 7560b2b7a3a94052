//! Kahale's growth lemma for eigenfunctions, as a checker, and the layered
//! test function used to push eigenvector mass away from the glued trees.
//!
//! Given a vertex set `X` with distance layers `X_0, .., X_h`, a positive
//! layer function `s` with `As <= |mu| s` inside the ball of radius `h - 1`
//! forces every `g` with `|Ag| = |mu| |g|` there to satisfy
//! `|g_{X_h}|^2 / |s_{X_h}|^2 >= |g_{X_{h-1}}|^2 / |s_{X_{h-1}}|^2`,
//! provided the two outer layers are regular with respect to each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Bfs, Graph};

const REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct KahaleInstance {
    pub x: Vec<usize>,
    pub h: usize,
    pub mu: f64,
    /// Value of `s` at every vertex; only the ball of radius `h` matters.
    pub s: Vec<f64>,
    /// `layers[i]` is `X_i`, sorted, for `i = 0..=h`.
    pub layers: Vec<Vec<usize>>,
}

fn bfs_layers(g: &Graph, x: &[usize], h: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    if x.is_empty() {
        return Err(Error::InvalidArgument("X must be nonempty".into()));
    }
    if let Some(&v) = x.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut bfs = Bfs::new(n);
    bfs.run(g, x, h);
    let mut layers = vec![Vec::new(); h + 1];
    for &v in &bfs.order {
        layers[bfs.dist[v]].push(v);
    }
    for l in &mut layers {
        l.sort_unstable();
    }
    Ok(layers)
}

impl KahaleInstance {
    /// `s` equal to `values[i]` on `X_i`.
    pub fn from_layer_values(g: &Graph, x: &[usize], h: usize, values: &[f64], mu: f64) -> Result<Self> {
        if h < 1 {
            return Err(Error::InvalidArgument("h must be positive".into()));
        }
        if values.len() < h + 1 {
            return Err(Error::LengthMismatch {
                expected: h + 1,
                actual: values.len(),
            });
        }
        let layers = bfs_layers(g, x, h)?;
        let mut s = vec![0.0; g.n()];
        for (i, layer) in layers.iter().enumerate() {
            for &v in layer {
                s[v] = values[i];
            }
        }
        Ok(Self {
            x: x.to_vec(),
            h,
            mu,
            s,
            layers,
        })
    }

    /// `s_i = d^(-i/2)`, the tree-like decay.
    pub fn radial(g: &Graph, x: &[usize], h: usize, d: usize, mu: f64) -> Result<Self> {
        let values: Vec<f64> = (0..=h).map(|i| (d as f64).powf(-(i as f64) / 2.0)).collect();
        Self::from_layer_values(g, x, h, &values, mu)
    }

    /// Layer values chosen as large as condition 3 allows, layer by layer:
    /// `s_0 = 1` and `s_{i+1}` is the largest value keeping `As <= |mu| s` on
    /// `X_i`. Condition 3 then holds with equality on the tightest vertices;
    /// it fails only if some `s_i` is forced to be nonpositive.
    pub fn matched(g: &Graph, x: &[usize], h: usize, mu: f64) -> Result<Self> {
        let layers = bfs_layers(g, x, h)?;
        let mut layer_of = vec![usize::MAX; g.n()];
        for (i, l) in layers.iter().enumerate() {
            for &v in l {
                layer_of[v] = i;
            }
        }
        let m = mu.abs();
        let mut values = vec![1.0];
        for i in 0..h {
            let prev = if i > 0 { values[i - 1] } else { 0.0 };
            let cur = values[i];
            let mut next = f64::INFINITY;
            for &v in &layers[i] {
                let (mut a_prev, mut a_same, mut a_next) = (0.0, 0.0, 0.0);
                for &w in g.neighbors(v) {
                    match layer_of[w] {
                        l if l.wrapping_add(1) == i => a_prev += 1.0,
                        l if l == i => a_same += 1.0,
                        l if l == i + 1 => a_next += 1.0,
                        _ => {}
                    }
                }
                if a_next > 0.0 {
                    next = next.min((m * cur - a_prev * prev - a_same * cur) / a_next);
                }
            }
            if !next.is_finite() {
                next = 0.0;
            }
            values.push(next);
        }
        Self::from_layer_values(g, x, h, &values, mu)
    }

    /// The value of `s` on each layer (first vertex of the layer).
    pub fn layer_values(&self) -> Vec<Option<f64>> {
        self.layers
            .iter()
            .map(|l| l.first().map(|&v| self.s[v]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRegularity {
    pub i: usize,
    pub j: usize,
    /// Fewest and most neighbors in `X_j` over vertices of `X_i`.
    pub min: usize,
    pub max: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassRatio {
    /// Largest `||Ag(u)| - |mu||g(u)||` over the ball of radius `h - 1`.
    pub eigen_defect: f64,
    /// Whether `g` qualifies (defect within tolerance).
    pub applies: bool,
    pub ratio_inner: f64,
    pub ratio_outer: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahaleVerdict {
    pub h: usize,
    pub layer_sizes: Vec<usize>,
    pub condition1: Vec<LayerRegularity>,
    pub condition2: bool,
    pub s_positive: bool,
    /// Largest `(As(v) - |mu| s(v)) / s(v)` inside the ball of radius `h - 1`.
    pub worst_excess: f64,
    /// Vertices where `As <= |mu| s` fails (first few).
    pub violations: Vec<usize>,
    pub condition3: bool,
    pub conclusion: Option<MassRatio>,
}

impl KahaleVerdict {
    pub fn condition1_ok(&self) -> bool {
        self.condition1.iter().all(|c| c.ok)
    }

    pub fn conditions_hold(&self) -> bool {
        self.condition1_ok() && self.condition2 && self.condition3
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

/// Checks the three hypotheses of the growth lemma on `inst` and, when a
/// test vector is given and it is an eigenfunction for `|mu|` on the ball of
/// radius `h - 1`, the mass-ratio conclusion.
pub fn kahale_check(g: &Graph, inst: &KahaleInstance, test_vec: Option<&[f64]>) -> Result<KahaleVerdict> {
    let n = g.n();
    let h = inst.h;
    if h < 1 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    if inst.mu == 0.0 {
        return Err(Error::InvalidArgument("mu must be nonzero".into()));
    }
    if inst.s.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: inst.s.len(),
        });
    }
    let layers = bfs_layers(g, &inst.x, h)?;
    let mut given = inst.layers.clone();
    given.iter_mut().for_each(|l| l.sort_unstable());
    if given != layers {
        return Err(Error::Precondition(
            "instance layers do not match distances from X".into(),
        ));
    }
    let mut layer_of = vec![usize::MAX; n];
    for (i, l) in layers.iter().enumerate() {
        for &v in l {
            layer_of[v] = i;
        }
    }

    let mut condition1 = Vec::new();
    for (i, j) in [(h - 1, h - 1), (h - 1, h), (h, h - 1), (h, h)] {
        let counts: Vec<usize> = layers[i]
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| layer_of[w] == j).count())
            .collect();
        let min = counts.iter().copied().min().unwrap_or(0);
        let max = counts.iter().copied().max().unwrap_or(0);
        condition1.push(LayerRegularity {
            i,
            j,
            min,
            max,
            ok: min == max,
        });
    }

    let constant_on = |l: &[usize]| l.iter().all(|&v| same(inst.s[v], inst.s[l[0]]));
    let condition2 = constant_on(&layers[h - 1]) && constant_on(&layers[h]);

    let s_positive = layers.iter().flatten().all(|&v| inst.s[v] > 0.0);
    let m = inst.mu.abs();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for &v in layers[..h].iter().flatten() {
        let sv = inst.s[v];
        let asv: f64 = g.neighbors(v).iter().map(|&w| inst.s[w]).sum();
        let excess = (asv - m * sv) / sv.abs().max(f64::MIN_POSITIVE);
        worst_excess = worst_excess.max(excess);
        if asv > m * sv + REL_TOL * (m * sv).abs() {
            if violations.len() < 16 {
                violations.push(v);
            }
        }
    }
    let condition3 = s_positive && violations.is_empty();

    let conclusion = match test_vec {
        None => None,
        Some(gv) => {
            if gv.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: gv.len(),
                });
            }
            let mut defect: f64 = 0.0;
            for &v in layers[..h].iter().flatten() {
                let agv: f64 = g.neighbors(v).iter().map(|&w| gv[w]).sum();
                defect = defect.max((agv.abs() - m * gv[v].abs()).abs());
            }
            let ratio = |l: &[usize]| {
                let num: f64 = l.iter().map(|&v| gv[v] * gv[v]).sum();
                let den: f64 = l.iter().map(|&v| inst.s[v] * inst.s[v]).sum();
                num / den
            };
            let ratio_inner = ratio(&layers[h - 1]);
            let ratio_outer = ratio(&layers[h]);
            Some(MassRatio {
                eigen_defect: defect,
                applies: defect <= 1e-8,
                ratio_inner,
                ratio_outer,
                holds: ratio_outer >= ratio_inner * (1.0 - 1e-9) - 1e-14,
            })
        }
    };

    Ok(KahaleVerdict {
        h,
        layer_sizes: layers.iter().map(Vec::len).collect(),
        condition1,
        condition2,
        s_positive,
        worst_excess,
        violations,
        condition3,
        conclusion,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// The layered test function around `{u, u'}`: geometric growth `c / sqrt d`
/// through the trees, then a slower ramp `x_i` that saturates at `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSequence {
    pub d: usize,
    pub epsilon: f64,
    pub r: usize,
    pub length: usize,
    pub b: f64,
    pub c: f64,
    /// `x[i - 1]` is `x_i`, for `i = 1..=length + 1`.
    pub x: Vec<f64>,
    /// `s_0 ..= s_{r + 1 + length}`.
    pub s: Vec<f64>,
    /// Pointwise inequalities `As <= (b + epsilon) sqrt(d) s`, one per layer
    /// type, after dividing out common factors.
    pub checklist: Vec<ChecklistItem>,
    /// Exact identities behind the inequalities.
    pub identities: Vec<ChecklistItem>,
}

impl TestFunctionSequence {
    pub fn all_ok(&self) -> bool {
        self.checklist.iter().chain(&self.identities).all(|c| c.ok)
    }

    pub fn nondecreasing(&self) -> bool {
        self.x.windows(2).all(|w| w[1] >= w[0])
    }

    /// First `i` with `x_i = c`.
    pub fn capped_from(&self) -> Option<usize> {
        self.x.iter().position(|&v| v == self.c).map(|p| p + 1)
    }
}

pub fn kahale_sequence(d: usize, epsilon: f64, r: usize, length: usize) -> Result<TestFunctionSequence> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let df = d as f64;
    let sd = df.sqrt();
    let b = (3.0 * df - 1.0) / (df * (2.0 * df - 1.0)).sqrt();
    let c = ((2.0 * df - 1.0) / df).sqrt();
    let mut x = vec![1.0 / c];
    for i in 0..length {
        let next = (b + epsilon - 1.0 / x[i]).min(c);
        x.push(next);
    }
    let mut s: Vec<f64> = (0..=r)
        .map(|i| c.powi(i as i32) * df.powf(-(i as f64) / 2.0))
        .collect();
    let mut alpha = c.powi(r as i32 - 1);
    s.push(alpha * df.powf(-((r + 1) as f64) / 2.0));
    for i in 1..=length {
        alpha *= x[i - 1];
        s.push(alpha * df.powf(-((r + 1 + i) as f64) / 2.0));
    }

    let be = b + epsilon;
    let item = |label: String, lhs: f64, rhs: f64| ChecklistItem {
        ok: lhs <= rhs * (1.0 + REL_TOL),
        label,
        lhs,
        rhs,
    };
    let mut checklist = vec![item("root".into(), c / sd * (df + 1.0), b * sd)];
    if r >= 2 {
        checklist.push(item("tree interior".into(), 1.0 / c + c, be));
    }
    checklist.push(item("leaf layer".into(), 2.0 / c + (df - 1.0) / (df * c), be));
    if length >= 1 {
        // s_r / (sqrt(d) s_{r+1}) = c, and s_{r+2} / s_{r+1} = x_1 / sqrt(d).
        checklist.push(item(format!("layer {}", r + 1), s[r] / (sd * s[r + 1]) + x[0], be));
    }
    for i in 1..length {
        checklist.push(item(format!("layer {}", r + 1 + i), 1.0 / x[i - 1] + x[i], be));
    }

    let ident = |label: &str, lhs: f64, rhs: f64| ChecklistItem {
        label: label.into(),
        lhs,
        rhs,
        ok: (lhs - rhs).abs() <= 1e-12,
    };
    let gfun = |t: f64| b - 1.0 / t;
    let identities = vec![
        ident("c + 1/c = b", c + 1.0 / c, b),
        ident("2/c + (d-1)/(dc) = b", 2.0 / c + (df - 1.0) / (df * c), b),
        ident("b - c = 1/c", gfun(1.0 / c), 1.0 / c),
        ident("b - 1/c = c", gfun(c), c),
    ];

    Ok(TestFunctionSequence {
        d,
        epsilon,
        r,
        length,
        b,
        c,
        x,
        s,
        checklist,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::DaryTree;

    #[test]
    fn sequence_example() {
        let seq = kahale_sequence(2, 0.1, 3, 20).unwrap();
        assert!((seq.c - 1.5f64.sqrt()).abs() < 1e-12);
        assert!((seq.x[0] - 0.816496580927726).abs() < 1e-12);
        assert!((seq.x[1] - 0.916496580927726).abs() < 1e-12);
        assert!(seq.all_ok());
        assert!(seq.nondecreasing());
        assert_eq!(seq.s.len(), 3 + 1 + 20 + 1);
    }

    #[test]
    fn sequence_identities() {
        for d in 2..=50 {
            let seq = kahale_sequence(d, 0.1, 2, 5).unwrap();
            assert!(seq.identities.iter().all(|i| i.ok), "d = {d}");
        }
        assert!(kahale_sequence(1, 0.1, 2, 5).is_err());
        assert!(kahale_sequence(2, 0.0, 2, 5).is_err());
    }

    #[test]
    fn tree_ball_radial_instance() {
        // On a d-ary tree with X the root and s_i = d^(-i/2), mu = 2 sqrt d:
        // As = (d+1)/sqrt(d) at the root, and 2 sqrt(d) s exactly elsewhere.
        let t = DaryTree::new(3, 5).unwrap();
        let mu = 2.0 * 3f64.sqrt();
        for h in 1..=4 {
            let inst = KahaleInstance::radial(t.graph(), &[0], h, 3, mu).unwrap();
            let v = kahale_check(t.graph(), &inst, None).unwrap();
            assert!(v.conditions_hold(), "h = {h}: {v:?}");
            if h == 1 {
                assert!(v.worst_excess < 0.0);
            } else {
                assert!(v.worst_excess.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_constant_layer_is_reported() {
        let t = DaryTree::new(2, 3).unwrap();
        let mut inst = KahaleInstance::radial(t.graph(), &[0], 2, 2, 4.0).unwrap();
        let v = inst.layers[2][0];
        inst.s[v] *= 0.5;
        let verdict = kahale_check(t.graph(), &inst, None).unwrap();
        assert!(!verdict.condition2);
    }

    #[test]
    fn inconsistent_layers_rejected() {
        let t = DaryTree::new(2, 3).unwrap();
        let mut inst = KahaleInstance::radial(t.graph(), &[0], 2, 2, 4.0).unwrap();
        inst.layers[1].pop();
        assert!(kahale_check(t.graph(), &inst, None).is_err());
    }

    #[test]
    fn matched_function_is_tight() {
        let t = DaryTree::new(2, 6).unwrap();
        let inst = KahaleInstance::matched(t.graph(), &[0], 3, 2.5).unwrap();
        let v = kahale_check(t.graph(), &inst, None).unwrap();
        assert!(v.conditions_hold());
        assert!(v.worst_excess.abs() < 1e-12);
    }
}
