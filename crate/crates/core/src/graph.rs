//! Undirected simple graphs and the combinatorial queries the rest of the
//! crate is built on: distances, girth, balls, bipartiteness, expansion.
//!
//! Vertices are dense indices `0..n`. [`Graph`] is immutable and stores its
//! adjacency in compressed rows; [`GraphBuilder`] is the mutable form used
//! while a construction is in progress. Every query is written against the
//! [`Adjacency`] trait so it runs on both.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Read access to an undirected adjacency structure.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn neighbors(&self, v: usize) -> &[usize];

    fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }
}

/// Immutable undirected simple graph with sorted neighbor lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.edge_count())
            .finish()
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut builder = GraphBuilder::new(n);
        for &(u, v) in edges {
            builder.add_edge(u, v)?;
        }
        Ok(builder.freeze())
    }

    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).freeze()
    }

    pub fn n(&self) -> usize {
        self.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            adj: (0..self.n()).map(|v| self.neighbors(v).to_vec()).collect(),
        }
    }

    /// `y = A x` for the adjacency matrix `A`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n());
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&w| x[w]).sum();
        }
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: perm.len(),
            });
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges)
    }
}

/// Convenience wrapper matching the `build_graph(n, edges)` entry point.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::from_edges(n, edges)
}

/// Mutable adjacency lists. Keeps the graph simple at every step.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<Vec<usize>>,
}

impl Adjacency for GraphBuilder {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Appends `count` isolated vertices and returns the index of the first.
    pub fn add_vertices(&mut self, count: usize) -> usize {
        let first = self.adj.len();
        self.adj.resize_with(first + count, Vec::new);
        first
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.adj.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.adj.len(),
            });
        }
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        let iu = self.adj[u].iter().position(|&w| w == v);
        let iv = self.adj[v].iter().position(|&w| w == u);
        match (iu, iv) {
            (Some(iu), Some(iv)) => {
                self.adj[u].swap_remove(iu);
                self.adj[v].swap_remove(iv);
                Ok(())
            }
            _ => Err(Error::MissingEdge(u, v)),
        }
    }

    pub fn freeze(self) -> Graph {
        let mut offsets = Vec::with_capacity(self.adj.len() + 1);
        let mut targets = Vec::with_capacity(self.adj.iter().map(Vec::len).sum());
        offsets.push(0);
        for mut list in self.adj {
            list.sort_unstable();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }
}

/// Length of a shortest cycle, with forests mapped to `Infinite`.
///
/// Serializes as a JSON number, or `null` for `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Option<usize>", into = "Option<usize>")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Girth::Finite(_))
    }

    /// `true` when every cycle is strictly longer than `len`.
    pub fn exceeds(self, len: usize) -> bool {
        self > Girth::Finite(len)
    }
}

impl From<Option<usize>> for Girth {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Girth::Infinite, Girth::Finite)
    }
}

impl From<Girth> for Option<usize> {
    fn from(g: Girth) -> Self {
        g.finite()
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

const UNSEEN: usize = usize::MAX;

/// Reusable BFS scratch space. Visited marks use an epoch counter so that a
/// truncated search costs time proportional to what it touches.
#[derive(Clone, Debug, Default)]
pub(crate) struct Bfs {
    stamp: Vec<u32>,
    epoch: u32,
    pub(crate) dist: Vec<usize>,
    pub(crate) parent: Vec<usize>,
    pub(crate) order: Vec<usize>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n],
            epoch: 0,
            dist: vec![UNSEEN; n],
            parent: vec![UNSEEN; n],
            order: Vec::new(),
        }
    }

    pub(crate) fn reset(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.dist.resize(n, UNSEEN);
            self.parent.resize(n, UNSEEN);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.order.clear();
    }

    #[inline]
    pub(crate) fn seen(&self, v: usize) -> bool {
        self.stamp[v] == self.epoch
    }

    #[inline]
    pub(crate) fn visit(&mut self, v: usize, dist: usize, parent: usize) {
        self.stamp[v] = self.epoch;
        self.dist[v] = dist;
        self.parent[v] = parent;
        self.order.push(v);
    }

    /// Plain BFS from `sources`, stopping after depth `cap`.
    pub(crate) fn run<A: Adjacency + ?Sized>(&mut self, g: &A, sources: &[usize], cap: usize) {
        self.reset(g.vertex_count());
        for &s in sources {
            if !self.seen(s) {
                self.visit(s, 0, UNSEEN);
            }
        }
        let mut head = 0;
        while head < self.order.len() {
            let x = self.order[head];
            head += 1;
            let dx = self.dist[x];
            if dx >= cap {
                continue;
            }
            for &y in g.neighbors(x) {
                if !self.seen(y) {
                    self.visit(y, dx + 1, x);
                }
            }
        }
    }

    pub(crate) fn dist_of(&self, v: usize) -> Option<usize> {
        self.seen(v).then(|| self.dist[v])
    }
}

/// Hop distances from a set of sources, optionally truncated at a radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMap {
    pub sources: Vec<usize>,
    pub dist: Vec<Option<usize>>,
    pub cap: Option<usize>,
}

impl DistanceMap {
    /// Vertices grouped by distance, `layers()[i]` being the set at distance
    /// exactly `i`. Each layer is sorted.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (v, d) in self.dist.iter().enumerate() {
            if let Some(d) = *d {
                if layers.len() <= d {
                    layers.resize(d + 1, Vec::new());
                }
                layers[d].push(v);
            }
        }
        layers
    }
}

/// Multi-source BFS distances, truncated at `cap` when given.
pub fn distances<A: Adjacency + ?Sized>(
    g: &A,
    sources: &[usize],
    cap: Option<usize>,
) -> Result<DistanceMap> {
    let n = g.vertex_count();
    for &s in sources {
        if s >= n {
            return Err(Error::VertexOutOfRange { vertex: s, n });
        }
    }
    let mut bfs = Bfs::new(n);
    bfs.run(g, sources, cap.unwrap_or(usize::MAX));
    let dist = (0..n).map(|v| bfs.dist_of(v)).collect();
    Ok(DistanceMap {
        sources: sources.to_vec(),
        dist,
        cap,
    })
}

/// Exact girth by truncated BFS from every vertex.
///
/// From each root the search stops as soon as the current layer can no
/// longer produce a cycle shorter than the best one found so far.
pub fn girth<A: Adjacency + ?Sized>(g: &A) -> Girth {
    let n = g.vertex_count();
    let mut best = usize::MAX;
    let mut bfs = Bfs::new(n);
    for root in 0..n {
        best = best.min(girth_from(g, root, best, &mut bfs));
        if best == 3 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Shortest closed walk found from `root` that is shorter than `bound`.
/// Minimizing over all roots yields the girth.
fn girth_from<A: Adjacency + ?Sized>(g: &A, root: usize, bound: usize, bfs: &mut Bfs) -> usize {
    let mut best = bound;
    bfs.reset(g.vertex_count());
    bfs.visit(root, 0, UNSEEN);
    let mut head = 0;
    while head < bfs.order.len() {
        let x = bfs.order[head];
        head += 1;
        let dx = bfs.dist[x];
        if 2 * dx >= best {
            break;
        }
        for &y in g.neighbors(x) {
            if !bfs.seen(y) {
                bfs.visit(y, dx + 1, x);
            } else if y != bfs.parent[x] {
                best = best.min(dx + bfs.dist[y] + 1);
            }
        }
    }
    best
}

/// A shortest cycle through a fixed vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleThrough {
    pub length: Girth,
    /// Vertex sequence starting at the requested vertex; empty when no
    /// cycle exists.
    pub cycle: Vec<usize>,
}

/// Shortest cycle containing `v`, found by BFS with branch labels: a
/// non-tree edge joining two different branches of `v` closes a simple cycle
/// through `v`.
pub fn shortest_cycle_through<A: Adjacency + ?Sized>(g: &A, v: usize) -> Result<CycleThrough> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut bfs = Bfs::new(n);
    let mut branch = vec![UNSEEN; n];
    bfs.reset(n);
    bfs.visit(v, 0, UNSEEN);
    let mut best: Option<(usize, usize, usize)> = None;
    let mut head = 0;
    while head < bfs.order.len() {
        let x = bfs.order[head];
        head += 1;
        let dx = bfs.dist[x];
        if let Some((len, _, _)) = best {
            if 2 * dx >= len {
                break;
            }
        }
        for &y in g.neighbors(x) {
            if y == v {
                continue;
            }
            if !bfs.seen(y) {
                bfs.visit(y, dx + 1, x);
                branch[y] = if x == v { y } else { branch[x] };
            } else if x != v && branch[x] != branch[y] {
                let len = dx + bfs.dist[y] + 1;
                if best.is_none_or(|(b, _, _)| len < b) {
                    best = Some((len, x, y));
                }
            }
        }
    }
    Ok(match best {
        None => CycleThrough {
            length: Girth::Infinite,
            cycle: Vec::new(),
        },
        Some((len, x, y)) => {
            let mut left = path_to_root(&bfs, x);
            left.reverse();
            let right = path_to_root(&bfs, y);
            // left: v .. x, right: y .. v
            left.extend_from_slice(&right[..right.len() - 1]);
            debug_assert_eq!(left.len(), len);
            CycleThrough {
                length: Girth::Finite(len),
                cycle: left,
            }
        }
    })
}

fn path_to_root(bfs: &Bfs, mut x: usize) -> Vec<usize> {
    let mut path = vec![x];
    while bfs.parent[x] != UNSEEN {
        x = bfs.parent[x];
        path.push(x);
    }
    path
}

/// Shortest cycles through the edge `(a, b)`: the number of shortest `a`-`b`
/// paths avoiding that edge, together with the resulting cycle length.
/// Only cycles of length at most `max_len` are searched for.
pub(crate) fn cycles_through_edge<A: Adjacency + ?Sized>(
    g: &A,
    a: usize,
    b: usize,
    max_len: usize,
    bfs: &mut Bfs,
    counts: &mut Vec<u64>,
) -> Option<(usize, u64)> {
    let n = g.vertex_count();
    if counts.len() < n {
        counts.resize(n, 0);
    }
    bfs.reset(n);
    bfs.visit(a, 0, UNSEEN);
    counts[a] = 1;
    let mut head = 0;
    let mut layer_end = bfs.order.len();
    let mut depth = 0;
    loop {
        // The cycle closes at path length `depth + 1`, i.e. cycle length `depth + 2`.
        if depth + 2 > max_len || head == layer_end {
            return None;
        }
        while head < layer_end {
            let x = bfs.order[head];
            head += 1;
            let cx = counts[x];
            for &y in g.neighbors(x) {
                if x == a && y == b {
                    continue;
                }
                if !bfs.seen(y) {
                    bfs.visit(y, depth + 1, x);
                    counts[y] = cx;
                } else if bfs.dist[y] == depth + 1 {
                    counts[y] = counts[y].saturating_add(cx).min(1 << 31);
                }
            }
        }
        depth += 1;
        layer_end = bfs.order.len();
        if bfs.seen(b) {
            return Some((depth + 1, counts[b]));
        }
    }
}

/// The ball of radius `radius` around a vertex, as an induced subgraph.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    /// Ball vertices in BFS order; local index `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// `layers[i]` holds the global indices at distance exactly `i`.
    pub layers: Vec<Vec<usize>>,
    pub subgraph: Graph,
    pub is_tree: bool,
}

pub fn ball<A: Adjacency + ?Sized>(g: &A, v: usize, radius: usize) -> Result<Ball> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut bfs = Bfs::new(n);
    bfs.run(g, &[v], radius);
    let vertices = bfs.order.clone();
    let mut local = vec![UNSEEN; n];
    for (i, &x) in vertices.iter().enumerate() {
        local[x] = i;
    }
    let mut layers = vec![Vec::new(); radius + 1];
    let mut builder = GraphBuilder::new(vertices.len());
    for (i, &x) in vertices.iter().enumerate() {
        layers[bfs.dist[x]].push(x);
        for &y in g.neighbors(x) {
            let j = local[y];
            if j != UNSEEN && i < j {
                builder.add_edge(i, j)?;
            }
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    let subgraph = builder.freeze();
    let is_tree = subgraph.edge_count() + 1 == subgraph.n();
    Ok(Ball {
        center: v,
        radius,
        vertices,
        layers,
        subgraph,
        is_tree,
    })
}

pub fn is_bipartite<A: Adjacency + ?Sized>(g: &A) -> bool {
    let n = g.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return false;
                }
            }
        }
    }
    true
}

/// The common degree, or `None` when degrees differ.
pub fn regular_degree<A: Adjacency + ?Sized>(g: &A) -> Option<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(0);
    }
    let d = g.degree(0);
    (1..n).all(|v| g.degree(v) == d).then_some(d)
}

pub fn is_connected<A: Adjacency + ?Sized>(g: &A) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut bfs = Bfs::new(n);
    bfs.run(g, &[0], usize::MAX);
    bfs.order.len() == n
}

/// Exact vertex expansion `|N(S) \ S| / |S|` kept as a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub boundary: usize,
    pub size: usize,
}

impl Expansion {
    pub fn ratio(&self) -> f64 {
        self.boundary as f64 / self.size as f64
    }

    /// Exact comparison `boundary / size < num / den`.
    pub fn less_than(&self, num: usize, den: usize) -> bool {
        self.boundary * den < num * self.size
    }
}

pub fn vertex_expansion<A: Adjacency + ?Sized>(g: &A, set: &[usize]) -> Result<Expansion> {
    let n = g.vertex_count();
    if set.is_empty() {
        return Err(Error::InvalidArgument("expansion of an empty set".into()));
    }
    let mut inside = vec![false; n];
    let mut size = 0;
    for &v in set {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if !inside[v] {
            inside[v] = true;
            size += 1;
        }
    }
    let mut outside = vec![false; n];
    let mut boundary = 0;
    for v in (0..n).filter(|&v| inside[v]) {
        for &w in g.neighbors(v) {
            if !inside[w] && !outside[w] {
                outside[w] = true;
                boundary += 1;
            }
        }
    }
    Ok(Expansion { boundary, size })
}

/// Fraction of vertices whose radius-`radius` ball contains a cycle.
pub fn bs_cycle_fraction<A: Adjacency + ?Sized>(g: &A, radius: usize) -> f64 {
    let n = g.vertex_count();
    if n == 0 {
        return 0.0;
    }
    let mut bfs = Bfs::new(n);
    let mut cyclic = 0usize;
    for v in 0..n {
        bfs.run(g, &[v], radius);
        let edges2: usize = bfs
            .order
            .iter()
            .map(|&x| g.neighbors(x).iter().filter(|&&y| bfs.seen(y)).count())
            .sum();
        // A connected induced subgraph is a tree iff it has |V| - 1 edges.
        if edges2 / 2 >= bfs.order.len() {
            cyclic += 1;
        }
    }
    cyclic as f64 / n as f64
}
