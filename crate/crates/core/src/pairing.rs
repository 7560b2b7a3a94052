//! Gluing the leaves of two d-ary trees into a high-girth graph.
//!
//! [`pair_trees`] turns the Erdős–Sachs swap argument into a local search:
//! start from a random bijection between the two leaf sets and, while the
//! girth `g` is below `2k + 2` with `k = floor(log_{2d-1}(n - 1))`, take a
//! leaf `x` on a `g`-cycle, find a leaf `y` at distance more than `2k` and
//! exchange their partners. Such a swap destroys every cycle through `x` and
//! only creates cycles longer than `g`, so one sweep over the leaves lifts
//! the girth by two.
//!
//! [`identify_onto_anchors`] is the ambient version used when a tree is glued
//! onto vertices of an existing graph: there the swap is only kept when it
//! actually improves the (shortest length, count) potential of cycles through
//! the new edges.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, cycles_through_edge, Adjacency, Bfs, Girth, Graph, GraphBuilder};
use crate::tree::DaryTree;

/// Largest `k` with `base^k <= x`. `x` must be at least 1.
pub fn floor_log(base: usize, x: usize) -> usize {
    debug_assert!(base >= 2 && x >= 1);
    let mut k = 0;
    let mut p = base;
    while p <= x {
        k += 1;
        match p.checked_mul(base) {
            Some(next) => p = next,
            None => break,
        }
    }
    k
}

/// Girth guaranteed when `n` leaves of two d-ary trees are paired:
/// `2 floor(log_{2d-1}(n - 1)) + 2`.
pub fn pairing_girth_bound(d: usize, leaves: usize) -> usize {
    if leaves < 2 {
        return 2;
    }
    2 * floor_log(2 * d - 1, leaves - 1) + 2
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn overflow() -> Error {
    Error::InvalidArgument("path count overflows 128 bits".into())
}

/// Number of leaf-to-leaf paths of length `2s` from a fixed identified leaf
/// made of `r` single-tree segments: `2 C(s-1, r-1) (d-1)^r d^(s-r)`.
pub fn path_count_exact(d: usize, r: usize, s: usize) -> Result<u128> {
    if r < 1 || r > s {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= r <= s, got r = {r}, s = {s}"
        )));
    }
    let (d, r, s) = (d as u128, r as u128, s as u128);
    let pow = |b: u128, e: u128| b.checked_pow(e.try_into().ok()?);
    binomial(s - 1, r - 1)
        .and_then(|c| c.checked_mul(2))
        .and_then(|c| c.checked_mul(pow(d - 1, r)?))
        .and_then(|c| c.checked_mul(pow(d, s - r)?))
        .ok_or_else(overflow)
}

/// All paths of length `2s` from a fixed leaf: `2 (d-1) (2d-1)^(s-1)`.
pub fn path_count_total(d: usize, s: usize) -> Result<u128> {
    if s < 1 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let d = d as u128;
    (2 * d - 1)
        .checked_pow((s - 1) as u32)
        .and_then(|p| p.checked_mul(2 * (d - 1)))
        .ok_or_else(overflow)
}

/// `1 + sum_{s <= k} m(s)`, which equals `(2d - 1)^k`.
pub fn path_count_cumulative(d: usize, k: usize) -> Result<u128> {
    (1..=k).try_fold(1u128, |acc, s| {
        acc.checked_add(path_count_total(d, s)?).ok_or_else(overflow)
    })
}

/// Tree leaves hung onto anchor vertices: anchor `i` is joined to the tree
/// parent of leaf `assign[i]`.
#[derive(Clone, Debug)]
pub(crate) struct LeafGluing {
    pub anchors: Vec<usize>,
    /// Tree-side parent vertex of each leaf slot.
    pub slot_parent: Vec<usize>,
    pub assign: Vec<usize>,
}

impl LeafGluing {
    pub(crate) fn shuffled(anchors: Vec<usize>, slot_parent: Vec<usize>, rng: &mut ChaCha8Rng) -> Self {
        let mut assign: Vec<usize> = (0..anchors.len()).collect();
        assign.shuffle(rng);
        Self {
            anchors,
            slot_parent,
            assign,
        }
    }

    pub(crate) fn edge(&self, i: usize) -> (usize, usize) {
        (self.anchors[i], self.slot_parent[self.assign[i]])
    }

    pub(crate) fn attach(&self, g: &mut GraphBuilder) -> Result<()> {
        for i in 0..self.anchors.len() {
            let (a, p) = self.edge(i);
            g.add_edge(a, p)?;
        }
        Ok(())
    }

    pub(crate) fn swap(&mut self, g: &mut GraphBuilder, i: usize, j: usize) -> Result<()> {
        let (a, pa) = self.edge(i);
        let (b, pb) = self.edge(j);
        if pa != pb {
            g.remove_edge(a, pa)?;
            g.remove_edge(b, pb)?;
            g.add_edge(a, pb)?;
            g.add_edge(b, pa)?;
        }
        self.assign.swap(i, j);
        Ok(())
    }
}

/// Lowest-index anchor at distance greater than `radius` from anchor `i`.
fn far_anchor(g: &GraphBuilder, gl: &LeafGluing, i: usize, radius: usize, bfs: &mut Bfs) -> Option<usize> {
    bfs.run(g, &[gl.anchors[i]], radius);
    (0..gl.anchors.len()).find(|&j| j != i && !bfs.seen(gl.anchors[j]))
}

/// The proof's swap loop: valid whenever the only cycles are those through
/// glued edges and each anchor has degree two (the pure double tree).
fn proof_swaps(g: &mut GraphBuilder, gl: &mut LeafGluing, d: usize) -> Result<usize> {
    let n = gl.anchors.len();
    let k = if n >= 2 { floor_log(2 * d - 1, n - 1) } else { 0 };
    let target = 2 * k + 2;
    let mut bfs = Bfs::new(g.vertex_count());
    let mut counts = Vec::new();
    let mut swaps = 0;
    let mut current = graph::girth(g);
    while current < Girth::Finite(target) {
        let Girth::Finite(len) = current else { break };
        for i in 0..n {
            loop {
                let (a, p) = gl.edge(i);
                match cycles_through_edge(g, a, p, len, &mut bfs, &mut counts) {
                    None => break,
                    Some((found, _)) if found < len => {
                        return Err(Error::Internal(format!(
                            "cycle of length {found} appeared below the current girth {len}"
                        )));
                    }
                    Some(_) => {
                        let j = far_anchor(g, gl, i, 2 * k, &mut bfs).ok_or_else(|| {
                            Error::Internal(format!(
                                "no leaf farther than {} from leaf {i}: contradicts the (2d-1)^k < n count",
                                2 * k
                            ))
                        })?;
                        gl.swap(g, i, j)?;
                        swaps += 1;
                    }
                }
            }
        }
        let next = graph::girth(g);
        if next <= current {
            return Err(Error::Internal(format!(
                "sweep at girth {len} did not increase the girth"
            )));
        }
        current = next;
    }
    Ok(swaps)
}

/// Potential of cycles through glued edges shorter than the limit: the
/// shortest such length and how many (edge, cycle) incidences attain it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Potential {
    shortest: Option<usize>,
    count: u64,
}

impl Potential {
    fn better_than(&self, other: &Potential) -> bool {
        match (self.shortest, other.shortest) {
            (None, None) => false,
            (None, Some(_)) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a > b || (a == b && self.count < other.count),
        }
    }
}

struct AmbientSearch {
    bfs: Bfs,
    counts: Vec<u64>,
    /// Cycles of length `< limit` through glued edges are what we remove.
    limit: usize,
}

impl AmbientSearch {
    fn through(&mut self, g: &GraphBuilder, gl: &LeafGluing, i: usize) -> Option<(usize, u64)> {
        let (a, p) = gl.edge(i);
        cycles_through_edge(g, a, p, self.limit - 1, &mut self.bfs, &mut self.counts)
    }

    fn potential(&mut self, g: &GraphBuilder, gl: &LeafGluing) -> (Potential, Vec<Option<usize>>) {
        let mut pot = Potential {
            shortest: None,
            count: 0,
        };
        let mut lens = Vec::with_capacity(gl.anchors.len());
        for i in 0..gl.anchors.len() {
            let t = self.through(g, gl, i);
            lens.push(t.map(|(l, _)| l));
            if let Some((len, c)) = t {
                match pot.shortest {
                    Some(s) if s < len => {}
                    Some(s) if s == len => pot.count = pot.count.saturating_add(c),
                    _ => pot = Potential { shortest: Some(len), count: c },
                }
            }
        }
        (pot, lens)
    }
}

/// Improves the gluing by accepted swaps until no cycle through a glued edge
/// is shorter than `limit` or no swap improves the potential. Candidate
/// partners are tried far-first (beyond `far_radius`, lowest index first),
/// then by decreasing distance.
fn ambient_swaps(
    g: &mut GraphBuilder,
    gl: &mut LeafGluing,
    limit: usize,
    far_radius: usize,
) -> Result<usize> {
    if limit < 3 {
        return Ok(0);
    }
    let n = gl.anchors.len();
    let mut search = AmbientSearch {
        bfs: Bfs::new(g.vertex_count()),
        counts: Vec::new(),
        limit,
    };
    let mut dist_bfs = Bfs::new(g.vertex_count());
    let (mut pot, mut lens) = search.potential(g, gl);
    let mut swaps = 0;
    while let Some(shortest) = pot.shortest {
        let mut improved = false;
        let worst: Vec<usize> = (0..n).filter(|&i| lens[i] == Some(shortest)).collect();
        for x in worst {
            dist_bfs.run(g, &[gl.anchors[x]], usize::MAX);
            let mut candidates: Vec<(bool, usize, usize)> = (0..n)
                .filter(|&j| j != x)
                .map(|j| {
                    let dist = dist_bfs.dist_of(gl.anchors[j]).unwrap_or(usize::MAX);
                    (dist > far_radius, dist, j)
                })
                .collect();
            candidates.sort_by(|a, b| {
                b.0.cmp(&a.0)
                    .then_with(|| if a.0 { a.2.cmp(&b.2) } else { b.1.cmp(&a.1).then(a.2.cmp(&b.2)) })
            });
            for &(_, _, y) in &candidates {
                gl.swap(g, x, y)?;
                let (next, next_lens) = search.potential(g, gl);
                if next.better_than(&pot) {
                    pot = next;
                    lens = next_lens;
                    swaps += 1;
                    improved = true;
                    break;
                }
                gl.swap(g, x, y)?;
            }
            if improved {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    Ok(swaps)
}

/// Result of pairing the leaves of two d-ary trees.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub d: usize,
    pub depth: usize,
    pub seed: u64,
    /// `pi[i]` is the leaf of the second tree identified with leaf `i` of
    /// the first (leaf indices count from the first leaf in level order).
    pub pi: Vec<usize>,
    /// First tree on `0..t`, then the second tree's internal vertices.
    pub glued: Graph,
    pub achieved_girth: Girth,
    pub swap_count: usize,
}

/// JSON form of a [`Pairing`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingRecord {
    pub d: usize,
    #[serde(rename = "D")]
    pub depth: usize,
    pub pi: Vec<usize>,
    pub girth: Girth,
    pub swaps: usize,
    pub seed: u64,
}

impl Pairing {
    pub fn record(&self) -> PairingRecord {
        PairingRecord {
            d: self.d,
            depth: self.depth,
            pi: self.pi.clone(),
            girth: self.achieved_girth,
            swaps: self.swap_count,
            seed: self.seed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.record())?)
    }

    /// Leaf vertices of the glued graph (the identified vertices).
    pub fn identified(&self) -> std::ops::Range<usize> {
        let first = crate::tree::interior_size(self.d, self.depth);
        first..first + self.pi.len()
    }
}

/// Builds the glued double tree for a given bijection.
pub fn glue_double_tree(tree: &DaryTree, pi: &[usize]) -> Result<Graph> {
    Ok(double_tree_builder(tree, pi)?.0.freeze())
}

fn double_tree_builder(tree: &DaryTree, pi: &[usize]) -> Result<(GraphBuilder, LeafGluing)> {
    let n = tree.leaf_count();
    if pi.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: pi.len(),
        });
    }
    let mut seen = vec![false; n];
    for &j in pi {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidArgument("pi is not a bijection".into()));
        }
    }
    let t = tree.vertex_count();
    let interior = tree.interior();
    let mut g = tree.graph().to_builder();
    let offset = g.add_vertices(interior.len()) ;
    debug_assert_eq!(offset, t);
    for v in interior.clone().skip(1) {
        g.add_edge(t + tree.parent(v).expect("non-root"), t + v)?;
    }
    let leaves = tree.leaves();
    let slot_parent = leaves
        .clone()
        .map(|leaf| t + tree.parent(leaf).expect("depth >= 1"))
        .collect();
    let gl = LeafGluing {
        anchors: leaves.collect(),
        slot_parent,
        assign: pi.to_vec(),
    };
    gl.attach(&mut g)?;
    Ok((g, gl))
}

/// Pairs the leaves of two copies of the depth-`depth` d-ary tree so the
/// glued graph has girth at least `2 floor(log_{2d-1}(n - 1)) + 2`.
pub fn pair_trees(d: usize, depth: usize, seed: u64) -> Result<Pairing> {
    if depth < 1 {
        return Err(Error::InvalidArgument("pairing needs depth >= 1".into()));
    }
    let tree = DaryTree::new(d, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pi: Vec<usize> = (0..tree.leaf_count()).collect();
    pi.shuffle(&mut rng);
    let (mut g, mut gl) = double_tree_builder(&tree, &pi)?;
    let swap_count = proof_swaps(&mut g, &mut gl, d)?;
    let glued = g.freeze();
    let achieved_girth = graph::girth(&glued);
    let bound = pairing_girth_bound(d, tree.leaf_count());
    if achieved_girth < Girth::Finite(bound) {
        return Err(Error::Internal(format!(
            "paired girth {achieved_girth} below the bound {bound}"
        )));
    }
    Ok(Pairing {
        d,
        depth,
        seed,
        pi: gl.assign,
        glued,
        achieved_girth,
        swap_count,
    })
}

/// Identifies the leaves of `tree` with `anchors` in `g`. The tree's internal
/// vertices are appended after `g`'s vertices (in the tree's level order), and
/// each anchor is joined to the parent of the leaf it replaces.
///
/// The bijection starts as a seeded shuffle and is improved by swaps that
/// reduce short cycles through the new edges; "short" means shorter than the
/// girth of `g`.
pub fn identify_onto_anchors(g: &Graph, tree: &DaryTree, anchors: &[usize], seed: u64) -> Result<Graph> {
    let mut b = g.to_builder();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    attach_tree(&mut b, tree, anchors, &mut rng, None)?;
    Ok(b.freeze())
}

/// Outcome of [`attach_tree`].
#[derive(Clone, Debug)]
pub(crate) struct Attached {
    /// Tree internal vertex `i` (level order) is graph vertex `first + i`.
    pub first: usize,
    /// `assign[i]`: tree leaf index glued to anchor `i`.
    pub assign: Vec<usize>,
    pub swaps: usize,
}

pub(crate) fn attach_tree(
    b: &mut GraphBuilder,
    tree: &DaryTree,
    anchors: &[usize],
    rng: &mut ChaCha8Rng,
    limit: Option<Girth>,
) -> Result<Attached> {
    if tree.depth() == 0 {
        return Err(Error::InvalidArgument(
            "a depth-0 tree has no leaves distinct from its root".into(),
        ));
    }
    if anchors.len() != tree.leaf_count() {
        return Err(Error::LengthMismatch {
            expected: tree.leaf_count(),
            actual: anchors.len(),
        });
    }
    let n = b.vertex_count();
    let mut sorted = anchors.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("anchors must be distinct".into()));
    }
    if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let limit = limit.unwrap_or_else(|| graph::girth(b));
    let interior = tree.interior();
    let first = b.add_vertices(interior.len());
    for v in interior.skip(1) {
        b.add_edge(first + tree.parent(v).expect("non-root"), first + v)?;
    }
    let slot_parent = tree
        .leaves()
        .map(|leaf| first + tree.parent(leaf).expect("depth >= 1"))
        .collect();
    let mut gl = LeafGluing::shuffled(anchors.to_vec(), slot_parent, rng);
    gl.attach(b)?;
    let cap = match limit {
        Girth::Finite(l) => l,
        Girth::Infinite => b.vertex_count() + 1,
    };
    let far = 2 * floor_log(2 * tree.d() - 1, tree.leaf_count().max(2) - 1);
    let swaps = ambient_swaps(b, &mut gl, cap, far)?;
    Ok(Attached {
        first,
        assign: gl.assign,
        swaps,
    })
}
