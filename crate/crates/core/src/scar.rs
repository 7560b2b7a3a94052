//! Gluing trees onto a base graph to plant localized eigenvectors.
//!
//! Around a root `u` whose radius-`(r+1)` ball in `H` is a tree, the radius-`r`
//! ball is a d-ary tree `T1` with leaves `L1 = {u_i}`. Each `u_i` has a child
//! `v_i` one level further out; the matching `u_i v_i` is removed, a fresh
//! depth-`r` tree `T2` is glued onto `L1` and another, `T3`, onto `L2 = {v_i}`.
//! Every vertex ends with degree `d + 1` again. A radial eigenvector `f` of
//! the depth-`(r-1)` tree, placed as `f` on `T1` and `-f` on `T2`, cancels at
//! every glued leaf and is therefore an exact eigenvector of the new graph.
//!
//! Vertices of `H` keep their indices in `G`; tree vertices are appended per
//! site, `T2` before `T3`.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Adjacency, Bfs, Girth, Graph};
use crate::pairing::{attach_tree, pairing_girth_bound};
use crate::tree::{interior_size, lift_radial, radial_spectrum, DaryTree};

/// Retries of [`glue`] with fresh seeds before giving up.
pub const MAX_ATTEMPTS: u64 = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScarSite {
    pub root_u: usize,
    pub r: usize,
    pub d: usize,
    /// `t1[i]` is the vertex of `H` at level-order index `i` of `T1`
    /// (levels `0..=r`).
    pub t1: Vec<usize>,
    /// Level `r` of `T1`, in level order.
    pub l1: Vec<usize>,
    /// `l2[i]` is the child of `l1[i]` whose edge is removed.
    pub l2: Vec<usize>,
    pub removed_matching: Vec<(usize, usize)>,
    /// Internal vertices of `T2` and `T3` in level order (empty until glued).
    pub t2: Vec<usize>,
    pub t3: Vec<usize>,
    /// `t2_assign[i]`: leaf of `T2` identified with `l1[i]`; same for `T3`.
    pub t2_assign: Vec<usize>,
    pub t3_assign: Vec<usize>,
}

impl ScarSite {
    pub fn interior_count(&self) -> usize {
        interior_size(self.d, self.r)
    }

    /// `V1`: levels `0..r` of `T1`.
    pub fn v1(&self) -> &[usize] {
        &self.t1[..self.interior_count()]
    }

    pub fn is_glued(&self) -> bool {
        !self.t2.is_empty()
    }

    pub fn u_prime(&self) -> Option<usize> {
        self.t2.first().copied()
    }

    pub fn v_prime(&self) -> Option<usize> {
        self.t3.first().copied()
    }

    /// `V1 u V2`, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.v1().iter().chain(&self.t2).copied().collect();
        s.sort_unstable();
        s
    }

    fn level_range(&self, level: usize) -> Range<usize> {
        let sizes = crate::tree::level_sizes(self.d, self.r).expect("site size was checked");
        let start: usize = sizes[..level].iter().sum();
        start..start + sizes[level]
    }
}

#[derive(Clone, Debug)]
pub struct ScarredGraph {
    pub graph: Graph,
    /// `H` occupies vertices `0..base_size` with unchanged indices.
    pub base_size: usize,
    pub d: usize,
    pub r: usize,
    pub sites: Vec<ScarSite>,
    /// Per site, the vertex ranges of `T2` and `T3`.
    pub new_vertex_ranges: Vec<(Range<usize>, Range<usize>)>,
    pub girth: Girth,
    pub seed: u64,
    /// Seeds tried before the girth check passed.
    pub attempts: u64,
    /// Leaf swaps accepted while gluing, summed over all trees.
    pub swaps: usize,
}

impl ScarredGraph {
    pub fn m(&self) -> usize {
        self.base_size
    }

    /// `L1 u L2` over all sites.
    pub fn interface(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .sites
            .iter()
            .flat_map(|s| s.l1.iter().chain(&s.l2).copied())
            .collect();
        v.sort_unstable();
        v
    }

    pub fn leaf_total(&self) -> usize {
        self.sites.iter().map(|s| s.l1.len()).sum()
    }
}

/// Girth the glued trees must reach: the pairing bound for `(d+1) d^(r-1)`
/// leaves.
pub fn construction_girth_bound(d: usize, r: usize) -> usize {
    let leaves = crate::tree::level_sizes(d, r).map_or(0, |s| s[r]);
    pairing_girth_bound(d, leaves)
}

fn base_degree(h: &Graph) -> Result<usize> {
    match graph::regular_degree(h) {
        Some(k) if k >= 3 => Ok(k - 1),
        _ => Err(Error::Precondition("base graph must be (d+1)-regular with d >= 2".into())),
    }
}

/// Carves the site rooted at `u`: `T1` is the radius-`r` ball and each leaf
/// `u_i` is matched with its lowest-index neighbor at distance `r + 1`.
pub fn carve_site(h: &Graph, u: usize, r: usize) -> Result<ScarSite> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let n = h.n();
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    let d = base_degree(h)?;
    DaryTree::new(d, r)?;
    if !graph::ball(h, u, r + 1)?.is_tree {
        return Err(Error::Precondition(format!(
            "the radius-{} ball around {u} is not a tree",
            r + 1
        )));
    }
    let mut bfs = Bfs::new(n);
    bfs.run(h, &[u], r + 1);
    let dist = |v: usize| bfs.dist_of(v).unwrap_or(usize::MAX);
    let mut t1 = vec![u];
    let mut level_start = 0;
    for level in 0..r {
        let level_end = t1.len();
        for idx in level_start..level_end {
            let x = t1[idx];
            let children: Vec<usize> = h.neighbors(x).iter().copied().filter(|&y| dist(y) == level + 1).collect();
            let expected = if level == 0 { d + 1 } else { d };
            if children.len() != expected {
                return Err(Error::Internal(format!(
                    "vertex {x} has {} children in a tree ball, expected {expected}",
                    children.len()
                )));
            }
            t1.extend(children);
        }
        level_start = level_end;
    }
    let l1: Vec<usize> = t1[level_start..].to_vec();
    let mut l2 = Vec::with_capacity(l1.len());
    for &ui in &l1 {
        let vi = h
            .neighbors(ui)
            .iter()
            .copied()
            .find(|&y| dist(y) == r + 1)
            .ok_or_else(|| Error::Internal(format!("leaf {ui} has no neighbor at distance {}", r + 1)))?;
        l2.push(vi);
    }
    let removed_matching = l1.iter().copied().zip(l2.iter().copied()).collect();
    Ok(ScarSite {
        root_u: u,
        r,
        d,
        t1,
        l1,
        l2,
        removed_matching,
        t2: Vec::new(),
        t3: Vec::new(),
        t2_assign: Vec::new(),
        t3_assign: Vec::new(),
    })
}

/// Glues `T2` and `T3` at every site. Retries with new seeds (up to
/// [`MAX_ATTEMPTS`]) while the girth falls below
/// [`construction_girth_bound`].
pub fn glue(h: &Graph, sites: &[ScarSite], seed: u64) -> Result<ScarredGraph> {
    let m = h.n();
    let Some(first) = sites.first() else {
        return Ok(ScarredGraph {
            graph: h.clone(),
            base_size: m,
            d: base_degree(h).unwrap_or(0),
            r: 0,
            sites: Vec::new(),
            new_vertex_ranges: Vec::new(),
            girth: graph::girth(h),
            seed,
            attempts: 0,
            swaps: 0,
        });
    };
    let (d, r) = (first.d, first.r);
    if base_degree(h)? != d {
        return Err(Error::Precondition("sites were carved from a graph of another degree".into()));
    }
    for s in sites {
        if s.d != d || s.r != r {
            return Err(Error::Precondition("all sites must share d and r".into()));
        }
        if s.is_glued() {
            return Err(Error::Precondition(format!("site at {} is already glued", s.root_u)));
        }
        if s.removed_matching.iter().any(|&(a, b)| !h.has_edge(a, b)) {
            return Err(Error::Precondition(format!(
                "site at {} does not belong to this base graph",
                s.root_u
            )));
        }
    }
    let roots: Vec<usize> = sites.iter().map(|s| s.root_u).collect();
    let mut bfs = Bfs::new(m);
    for (i, &a) in roots.iter().enumerate() {
        bfs.run(h, &[a], 4 * r);
        if let Some(&b) = roots[i + 1..].iter().find(|&&b| bfs.seen(b)) {
            return Err(Error::Precondition(format!(
                "site roots {a} and {b} are within distance {} in the base graph",
                4 * r
            )));
        }
    }
    let limit = graph::girth(h);
    let bound = construction_girth_bound(d, r);
    let tree = DaryTree::new(d, r)?;
    let mut last_girth = Girth::Infinite;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut b = h.to_builder();
        for s in sites {
            for &(a, v) in &s.removed_matching {
                b.remove_edge(a, v)?;
            }
        }
        let mut glued = Vec::with_capacity(sites.len());
        let mut ranges = Vec::with_capacity(sites.len());
        let mut swaps = 0;
        for s in sites {
            let a2 = attach_tree(&mut b, &tree, &s.l1, &mut rng, Some(limit))?;
            let a3 = attach_tree(&mut b, &tree, &s.l2, &mut rng, Some(limit))?;
            let k = tree.interior().len();
            swaps += a2.swaps + a3.swaps;
            let mut site = s.clone();
            site.t2 = (a2.first..a2.first + k).collect();
            site.t3 = (a3.first..a3.first + k).collect();
            site.t2_assign = a2.assign;
            site.t3_assign = a3.assign;
            ranges.push((a2.first..a2.first + k, a3.first..a3.first + k));
            glued.push(site);
        }
        let g = b.freeze();
        if graph::regular_degree(&g) != Some(d + 1) {
            return Err(Error::Internal("glued graph is not (d+1)-regular".into()));
        }
        let girth = graph::girth(&g);
        if girth >= Girth::Finite(bound) {
            return Ok(ScarredGraph {
                graph: g,
                base_size: m,
                d,
                r,
                sites: glued,
                new_vertex_ranges: ranges,
                girth,
                seed,
                attempts: attempt + 1,
                swaps,
            });
        }
        last_girth = girth;
    }
    Err(Error::Internal(format!(
        "glued girth {last_girth} stayed below {bound} after {MAX_ATTEMPTS} attempts"
    )))
}

/// The eigenvector `f` on `V1`, `-f` on `V2` (scaled to unit norm) for a
/// radial eigenvalue `lambda` of the depth-`(r-1)` tree.
pub fn localized_eigenvector(sg: &ScarredGraph, site_id: usize, lambda: f64) -> Result<Vec<f64>> {
    let site = sg
        .sites
        .get(site_id)
        .ok_or_else(|| Error::InvalidArgument(format!("no site {site_id}")))?;
    if !site.is_glued() {
        return Err(Error::Precondition("site is not glued".into()));
    }
    let depth = site.r - 1;
    let spec = radial_spectrum(site.d, depth)?;
    let idx = spec.find(lambda, 1e-9).ok_or(Error::NotRadial { lambda, depth })?;
    let small = DaryTree::new(site.d, depth)?;
    let lifted = lift_radial(&small, &spec.profiles[idx])?;
    let mut nu = vec![0.0; sg.graph.n()];
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for (i, &val) in lifted.iter().enumerate() {
        nu[site.t1[i]] = val * scale;
        nu[site.t2[i]] = -val * scale;
    }
    Ok(nu)
}

/// One localized eigenpair per (site, radial eigenvalue).
#[derive(Clone, Debug)]
pub struct LocalizedPair {
    pub site: usize,
    pub lambda: f64,
    pub vector: Vec<f64>,
}

pub fn all_localized(sg: &ScarredGraph) -> Result<Vec<LocalizedPair>> {
    let mut out = Vec::new();
    for (i, site) in sg.sites.iter().enumerate() {
        let spec = radial_spectrum(site.d, site.r - 1)?;
        for &lambda in &spec.eigenvalues {
            out.push(LocalizedPair {
                site: i,
                lambda,
                vector: localized_eigenvector(sg, i, lambda)?,
            });
        }
    }
    Ok(out)
}

/// Greedy set with pairwise distances at least `min_dist`, scanning vertices
/// in index order.
pub fn greedy_packing(g: &Graph, min_dist: usize) -> Result<Vec<usize>> {
    if graph::regular_degree(g).is_none() {
        return Err(Error::Precondition("packing needs a regular graph".into()));
    }
    let n = g.n();
    let mut blocked = vec![false; n];
    let mut bfs = Bfs::new(n);
    let mut picked = Vec::new();
    for v in 0..n {
        if blocked[v] {
            continue;
        }
        picked.push(v);
        bfs.run(g, &[v], min_dist.saturating_sub(1));
        for &w in &bfs.order {
            blocked[w] = true;
        }
    }
    Ok(picked)
}

/// Guaranteed packing size `m (d-1) / ((d+1) d^k)` for a `(d+1)`-regular
/// graph on `m` vertices.
pub fn packing_bound(m: usize, d: usize, k: usize) -> f64 {
    let df = d as f64;
    m as f64 * (df - 1.0) / ((df + 1.0) * df.powi(k as i32))
}

/// Glues `k_sites` sites at roots from a greedy packing with spacing `4r + 1`.
pub fn multi_glue(h: &Graph, k_sites: usize, r: usize, seed: u64) -> Result<ScarredGraph> {
    if k_sites == 0 {
        return glue(h, &[], seed);
    }
    let roots = greedy_packing(h, 4 * r + 1)?;
    if roots.len() < k_sites {
        return Err(Error::InsufficientPacking {
            wanted: k_sites,
            found: roots.len(),
        });
    }
    let sites = roots[..k_sites]
        .iter()
        .map(|&u| carve_site(h, u, r))
        .collect::<Result<Vec<_>>>()?;
    glue(h, &sites, seed)
}

/// Levels `r-1, r-3, ..` of `T1` and `T2`.
pub fn odd_level_witness(site: &ScarSite) -> Result<Vec<usize>> {
    if !site.is_glued() {
        return Err(Error::Precondition("site is not glued".into()));
    }
    let mut y = Vec::new();
    let mut level = site.r as isize - 1;
    while level >= 0 {
        let range = site.level_range(level as usize);
        y.extend(range.clone().map(|i| site.t1[i]));
        y.extend(range.map(|i| site.t2[i]));
        level -= 2;
    }
    y.sort_unstable();
    Ok(y)
}
