//! d-ary trees and their radial (level-constant) spectrum.
//!
//! A d-ary tree of depth `D` has a root with `d + 1` children and every other
//! internal vertex has `d` children; all leaves sit at depth `D`. Radial
//! eigenvectors are constant on levels, so they are eigenvectors of the
//! `(D + 1) x (D + 1)` level-transition (quotient) matrix. That matrix is
//! similar to a symmetric Jacobi matrix with off-diagonals
//! `sqrt(d + 1), sqrt(d), ..., sqrt(d)`, which is what we diagonalize.

use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::tridiag::symmetric_tridiagonal_eigen;

/// Largest tree we agree to materialize.
const MAX_TREE_VERTICES: usize = 1 << 26;

/// A d-ary tree of depth `depth` in level order: the root is 0 and level `i`
/// occupies a contiguous index range.
#[derive(Clone, Debug)]
pub struct DaryTree {
    d: usize,
    depth: usize,
    starts: Vec<usize>,
    graph: Graph,
}

/// Number of vertices on each level of a d-ary tree, or `None` on overflow.
pub fn level_sizes(d: usize, depth: usize) -> Option<Vec<usize>> {
    let mut sizes = Vec::with_capacity(depth + 1);
    sizes.push(1usize);
    if depth >= 1 {
        sizes.push(d.checked_add(1)?);
    }
    for _ in 2..=depth {
        let last = *sizes.last()?;
        sizes.push(last.checked_mul(d)?);
    }
    Some(sizes)
}

/// Internal (non-leaf) vertex count of a depth-`depth` d-ary tree.
pub fn interior_size(d: usize, depth: usize) -> usize {
    level_sizes(d, depth).map_or(0, |s| s[..depth].iter().sum())
}

impl DaryTree {
    pub fn new(d: usize, depth: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "branching factor must be at least 2, got {d}"
            )));
        }
        let sizes = level_sizes(d, depth)
            .filter(|s| s.iter().try_fold(0usize, |a, &b| a.checked_add(b)).is_some())
            .ok_or_else(|| Error::InvalidArgument("tree size overflows".into()))?;
        let total: usize = sizes.iter().sum();
        if total > MAX_TREE_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "a d={d} tree of depth {depth} has {total} vertices, too many to build"
            )));
        }
        let mut starts = Vec::with_capacity(depth + 2);
        let mut acc = 0;
        for s in &sizes {
            starts.push(acc);
            acc += s;
        }
        starts.push(acc);
        let mut b = GraphBuilder::new(total);
        for v in 1..total {
            b.add_edge(Self::parent_index(d, &starts, v), v)?;
        }
        Ok(Self {
            d,
            depth,
            starts,
            graph: b.freeze(),
        })
    }

    fn parent_index(d: usize, starts: &[usize], v: usize) -> usize {
        let level = starts.partition_point(|&s| s <= v) - 1;
        if level == 1 {
            return 0;
        }
        let offset = v - starts[level];
        starts[level - 1] + offset / d
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn level(&self, v: usize) -> usize {
        self.starts.partition_point(|&s| s <= v) - 1
    }

    pub fn level_range(&self, level: usize) -> Range<usize> {
        self.starts[level]..self.starts[level + 1]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|i| self.level_range(i).len()).collect()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| Self::parent_index(self.d, &self.starts, v))
    }

    pub fn children(&self, v: usize) -> Range<usize> {
        let level = self.level(v);
        if level == self.depth {
            return v..v;
        }
        if level == 0 {
            return self.level_range(1);
        }
        let first = self.starts[level + 1] + (v - self.starts[level]) * self.d;
        first..first + self.d
    }

    pub fn leaves(&self) -> Range<usize> {
        self.level_range(self.depth)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Non-leaf vertices, i.e. levels `0..depth`.
    pub fn interior(&self) -> Range<usize> {
        0..self.starts[self.depth]
    }
}

pub fn build_dary_tree(d: usize, depth: usize) -> Result<DaryTree> {
    DaryTree::new(d, depth)
}

/// The level-transition matrix of a d-ary tree: entry `(i, i + 1)` is the
/// number of children of a level-`i` vertex and entry `(i + 1, i)` is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMatrix {
    pub d: usize,
    pub depth: usize,
    /// `upper[i]` = entry `(i, i + 1)`.
    pub upper: Vec<f64>,
    /// `lower[i]` = entry `(i + 1, i)`.
    pub lower: Vec<f64>,
}

impl QuotientMatrix {
    pub fn size(&self) -> usize {
        self.depth + 1
    }

    /// Off-diagonal of the similar symmetric matrix.
    pub fn symmetrized_off(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| (u * l).sqrt())
            .collect()
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..self.depth {
            m[i][i + 1] = self.upper[i];
            m[i + 1][i] = self.lower[i];
        }
        m
    }
}

pub fn quotient_matrix(d: usize, depth: usize) -> Result<QuotientMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "branching factor must be at least 2, got {d}"
        )));
    }
    let upper = (0..depth)
        .map(|i| if i == 0 { (d + 1) as f64 } else { d as f64 })
        .collect();
    Ok(QuotientMatrix {
        d,
        depth,
        upper,
        lower: vec![1.0; depth],
    })
}

/// The `depth + 1` radial eigenvalues of a d-ary tree with level profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSpectrum {
    pub d: usize,
    pub depth: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `profiles[j][i]` is the value on level `i` of the radial eigenvector
    /// for `eigenvalues[j]`. The lifted tree vector has unit norm and a
    /// positive root value.
    pub profiles: Vec<Vec<f64>>,
}

impl RadialSpectrum {
    /// Index of the eigenvalue within `tol` of `lambda`, if any.
    pub fn find(&self, lambda: f64, tol: f64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &mu)| (j, (mu - lambda).abs()))
            .filter(|&(_, gap)| gap <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(j, _)| j)
    }

    /// CSV rows `D, lambda, f_0, ..., f_D`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (lambda, f) in self.eigenvalues.iter().zip(&self.profiles) {
            write!(out, "{}, {}", self.depth, lambda).unwrap();
            for x in f {
                write!(out, ", {x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn radial_spectrum(d: usize, depth: usize) -> Result<RadialSpectrum> {
    let q = quotient_matrix(d, depth)?;
    let sizes = level_sizes(d, depth)
        .ok_or_else(|| Error::InvalidArgument("tree size overflows".into()))?;
    let eig = symmetric_tridiagonal_eigen(&vec![0.0; depth + 1], &q.symmetrized_off())?;
    // The symmetrizing similarity is g_i = sqrt(n_i) f_i, under which the
    // lifted norm sum n_i f_i^2 equals |g|^2 = 1.
    let profiles = eig
        .vectors
        .iter()
        .map(|g| {
            let sign = if g[0] < 0.0 { -1.0 } else { 1.0 };
            g.iter()
                .zip(&sizes)
                .map(|(gi, &ni)| sign * gi / (ni as f64).sqrt())
                .collect()
        })
        .collect();
    Ok(RadialSpectrum {
        d,
        depth,
        eigenvalues: eig.values,
        profiles,
    })
}

/// Lifts a level profile to a vector on the tree's vertices.
pub fn lift_radial(tree: &DaryTree, profile: &[f64]) -> Result<Vec<f64>> {
    if profile.len() != tree.depth() + 1 {
        return Err(Error::LengthMismatch {
            expected: tree.depth() + 1,
            actual: profile.len(),
        });
    }
    let mut v = vec![0.0; tree.vertex_count()];
    for (level, &f) in profile.iter().enumerate() {
        for x in tree.level_range(level) {
            v[x] = f;
        }
    }
    Ok(v)
}

/// Outcome of a search for a radial eigenvalue near a target.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialMatch {
    Found { depth: usize, lambda: f64 },
    NotFound { best_depth: usize, best_lambda: f64, best_gap: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialSearch {
    pub outcome: RadialMatch,
    /// `running_gap[i]` is the smallest gap to the target over depths `1..=i + 1`.
    pub running_gap: Vec<f64>,
}

/// Smallest depth `1 <= D <= max_depth` whose radial spectrum has an
/// eigenvalue within `tol` of `target`. Depth 0 (a single vertex) is skipped.
pub fn nearest_radial_eigenvalue(
    d: usize,
    target: f64,
    tol: f64,
    max_depth: usize,
) -> Result<RadialSearch> {
    let edge = 2.0 * (d as f64).sqrt();
    if !(target.abs() < edge) {
        return Err(Error::InvalidArgument(format!(
            "target {target} outside the open interval (-{edge}, {edge})"
        )));
    }
    let mut running_gap = Vec::with_capacity(max_depth);
    let mut best = (0, f64::NAN, f64::INFINITY);
    for depth in 1..=max_depth {
        let spec = radial_spectrum(d, depth)?;
        for &lambda in &spec.eigenvalues {
            let gap = (lambda - target).abs();
            if gap < best.2 {
                best = (depth, lambda, gap);
            }
        }
        running_gap.push(best.2);
        if best.2 <= tol {
            return Ok(RadialSearch {
                outcome: RadialMatch::Found {
                    depth: best.0,
                    lambda: best.1,
                },
                running_gap,
            });
        }
    }
    Ok(RadialSearch {
        outcome: RadialMatch::NotFound {
            best_depth: best.0,
            best_lambda: best.1,
            best_gap: best.2,
        },
        running_gap,
    })
}

/// `||v_{S_i}||^2` for each level `S_i` of the tree.
pub fn level_mass_profile(v: &[f64], tree: &DaryTree) -> Result<Vec<f64>> {
    if v.len() != tree.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: tree.vertex_count(),
            actual: v.len(),
        });
    }
    Ok((0..=tree.depth())
        .map(|i| tree.level_range(i).map(|x| v[x] * v[x]).sum())
        .collect())
}

/// `(||v_{S_i}||^2 + ||v_{S_{i+1}}||^2) / v(root)^2` for consecutive levels.
pub fn adjacent_level_ratios(v: &[f64], tree: &DaryTree) -> Result<Vec<f64>> {
    let masses = level_mass_profile(v, tree)?;
    let root = v[tree.root()] * v[tree.root()];
    if root == 0.0 {
        return Err(Error::InvalidArgument("vector vanishes at the root".into()));
    }
    Ok(masses.windows(2).map(|w| (w[0] + w[1]) / root).collect())
}
