//! Base graphs: LPS Cayley graphs of `PSL(2, q)`, random regular graphs with
//! girth raised by edge switches, and the precondition report for a base.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, cycles_through_edge, Adjacency, Bfs, Girth, Graph, GraphBuilder};
use crate::spectral::{self, Method, SpectralOptions};

pub use crate::io::load_graph;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Legendre symbol `(a | q)` for an odd prime `q`, by Euler's criterion.
pub fn legendre(a: u64, q: u64) -> i32 {
    match pow_mod(a, (q - 1) / 2, q) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpsParams {
    pub p: u64,
    pub q: u64,
    pub legendre: i32,
}

impl LpsParams {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !is_prime(v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} is not prime")));
            }
            if v % 4 != 1 {
                return Err(Error::InvalidArgument(format!("{name} = {v} is not 1 mod 4")));
            }
        }
        if p == q {
            return Err(Error::InvalidArgument("p and q must differ".into()));
        }
        if (q * q) <= 4 * p {
            return Err(Error::InvalidArgument(format!("need q > 2 sqrt(p), got p = {p}, q = {q}")));
        }
        if q > 2000 {
            return Err(Error::InvalidArgument(format!("q = {q} is too large for an explicit Cayley graph")));
        }
        Ok(Self {
            p,
            q,
            legendre: legendre(p, q),
        })
    }

    /// `|PSL(2, q)| = q (q^2 - 1) / 2`.
    pub fn group_order(&self) -> usize {
        (self.q * (self.q * self.q - 1) / 2) as usize
    }
}

/// Integer solutions of `a0^2 + a1^2 + a2^2 + a3^2 = p` with `a0 > 0` odd and
/// `a1, a2, a3` even. There are `p + 1` of them for `p = 1 mod 4`.
pub fn quaternion_solutions(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let mut bound = 0;
    while (bound + 1) * (bound + 1) <= p {
        bound += 1;
    }
    let mut out = Vec::new();
    for a0 in (1..=bound).step_by(2) {
        for a1 in (-bound..=bound).filter(|a| a % 2 == 0) {
            for a2 in (-bound..=bound).filter(|a| a % 2 == 0) {
                for a3 in (-bound..=bound).filter(|a| a % 2 == 0) {
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p {
                        out.push([a0, a1, a2, a3]);
                    }
                }
            }
        }
    }
    out
}

/// A 2x2 matrix over `Z/q`, row-major.
type Mat = [u64; 4];

fn mat_mul(a: &Mat, b: &Mat, q: u64) -> Mat {
    [
        (a[0] * b[0] + a[1] * b[2]) % q,
        (a[0] * b[1] + a[1] * b[3]) % q,
        (a[2] * b[0] + a[3] * b[2]) % q,
        (a[2] * b[1] + a[3] * b[3]) % q,
    ]
}

/// Representative of `{M, -M}`: the first nonzero entry is at most `(q-1)/2`.
fn canonical(m: Mat, q: u64) -> Mat {
    let first = m.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if first > (q - 1) / 2 {
        m.map(|x| (q - x) % q)
    } else {
        m
    }
}

fn sqrt_minus_one(q: u64, rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let z = rng.gen_range(2..q);
        let t = pow_mod(z, (q - 1) / 4, q);
        if t * t % q == q - 1 {
            return t;
        }
    }
}

fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    (1..q).find(|&s| s * s % q == a % q)
}

/// Generators of the LPS Cayley graph as canonical elements of `PSL(2, q)`.
pub fn lps_generators(params: &LpsParams) -> Result<Vec<[u64; 4]>> {
    let (p, q) = (params.p, params.q);
    if params.legendre != 1 {
        return Err(Error::Precondition(format!(
            "{p} is not a square mod {q}: the Cayley graph would be bipartite; pick q with (p|q) = 1"
        )));
    }
    let sols = quaternion_solutions(p);
    if sols.len() as u64 != p + 1 {
        return Err(Error::Internal(format!(
            "found {} quaternion solutions for p = {p}, expected {}",
            sols.len(),
            p + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(q);
    let i = sqrt_minus_one(q, &mut rng);
    let s = sqrt_mod(p, q).ok_or_else(|| Error::Internal("no square root of p".into()))?;
    let s_inv = pow_mod(s, q - 2, q);
    let red = |x: i64| x.rem_euclid(q as i64) as u64;
    let mut gens: Vec<Mat> = sols
        .iter()
        .map(|a| {
            let m = [
                (red(a[0]) + red(a[1]) * i) % q,
                (red(a[2]) + red(a[3]) * i) % q,
                (red(-a[2]) + red(a[3]) * i) % q,
                (red(a[0]) + red(-a[1]) * i) % q,
            ];
            canonical(m.map(|x| x * s_inv % q), q)
        })
        .collect();
    gens.sort_unstable();
    gens.dedup();
    if gens.len() as u64 != p + 1 {
        return Err(Error::Internal("LPS generators are not distinct".into()));
    }
    Ok(gens)
}

/// The `(p+1)`-regular LPS Cayley graph on `PSL(2, q)`; vertex 0 is the
/// identity and the rest follow in BFS order.
pub fn lps_graph(params: &LpsParams) -> Result<Graph> {
    let q = params.q;
    let gens = lps_generators(params)?;
    let identity = canonical([1, 0, 0, 1], q);
    let mut index: HashMap<Mat, usize> = HashMap::new();
    let mut elems = vec![identity];
    index.insert(identity, 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head];
        for gen in &gens {
            let y = canonical(mat_mul(&x, gen, q), q);
            let j = *index.entry(y).or_insert_with(|| {
                elems.push(y);
                elems.len() - 1
            });
            if head < j {
                edges.push((head, j));
            } else if j == head {
                return Err(Error::Internal("generator acts as the identity".into()));
            }
        }
        head += 1;
    }
    if elems.len() != params.group_order() {
        return Err(Error::Internal(format!(
            "generated {} elements, expected {}",
            elems.len(),
            params.group_order()
        )));
    }
    edges.sort_unstable();
    let g = Graph::from_edges(elems.len(), &edges)?;
    if graph::regular_degree(&g) != Some(params.p as usize + 1) {
        return Err(Error::Internal("LPS graph is not (p+1)-regular".into()));
    }
    Ok(g)
}

/// Multiplies canonical matrices; exposed for checking generator inverses.
pub fn psl_mul(a: &[u64; 4], b: &[u64; 4], q: u64) -> [u64; 4] {
    canonical(mat_mul(a, b, q), q)
}

/// Uniform-ish simple `degree`-regular graph by random stub matching with
/// restarts, conditioned on being connected.
pub fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree >= n || (n * degree) % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "no simple {degree}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        if let Some(g) = try_matching(n, degree, &mut rng) {
            if graph::is_connected(&g) {
                return Ok(g);
            }
        }
    }
    Err(Error::Internal("random regular generation kept failing".into()))
}

fn try_matching(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
    stubs.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    while !stubs.is_empty() {
        let mut placed = false;
        for _ in 0..50 {
            let i = rng.gen_range(0..stubs.len());
            let j = rng.gen_range(0..stubs.len());
            let (u, v) = (stubs[i], stubs[j]);
            if i != j && u != v && !b.has_edge(u, v) {
                b.add_edge(u, v).ok()?;
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(b.freeze())
}

/// Removes every cycle shorter than `target` by switches: an edge `ab` on a
/// short cycle and a random edge `cd` become `ac, bd` when neither new edge
/// lies on a cycle shorter than `target`. Degrees are preserved and each
/// accepted switch strictly reduces the set of short cycles.
pub fn raise_girth(g: &Graph, target: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = g.to_builder();
    let mut bfs = Bfs::new(g.n());
    let mut counts = Vec::new();
    let limit = target.saturating_sub(1);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let tries = 20 * edges.len().max(1);
    for &(a, bb) in &edges {
        if !b.has_edge(a, bb) || cycles_through_edge(&b, a, bb, limit, &mut bfs, &mut counts).is_none() {
            continue;
        }
        let mut fixed = false;
        for _ in 0..tries {
            let c = rng.gen_range(0..g.n());
            let nb = b.neighbors(c);
            if nb.is_empty() {
                continue;
            }
            let d = nb[rng.gen_range(0..nb.len())];
            if [a, bb].contains(&c) || [a, bb].contains(&d) || b.has_edge(a, c) || b.has_edge(bb, d) {
                continue;
            }
            b.remove_edge(a, bb)?;
            b.remove_edge(c, d)?;
            b.add_edge(a, c)?;
            b.add_edge(bb, d)?;
            let short = |b: &GraphBuilder, x, y, bfs: &mut Bfs, counts: &mut Vec<u64>| {
                cycles_through_edge(b, x, y, limit, bfs, counts).is_some()
            };
            if !short(&b, a, c, &mut bfs, &mut counts) && !short(&b, bb, d, &mut bfs, &mut counts) {
                fixed = true;
                break;
            }
            b.remove_edge(a, c)?;
            b.remove_edge(bb, d)?;
            b.add_edge(a, bb)?;
            b.add_edge(c, d)?;
        }
        if !fixed {
            return Err(Error::Internal(format!(
                "could not remove the short cycles through edge ({a}, {bb})"
            )));
        }
    }
    let out = b.freeze();
    if graph::girth(&out) < Girth::Finite(target) {
        return Err(Error::Internal("girth raising left a short cycle".into()));
    }
    Ok(out)
}

/// Connected, non-bipartite `degree`-regular graph on `n` vertices with girth
/// at least `min_girth`.
pub fn random_high_girth(n: usize, degree: usize, min_girth: usize, seed: u64) -> Result<Graph> {
    let mut last = None;
    for attempt in 0..20u64 {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let g = random_regular(n, degree, s)?;
        match raise_girth(&g, min_girth, s) {
            Ok(h) if graph::is_connected(&h) && !graph::is_bipartite(&h) => return Ok(h),
            Ok(_) => {}
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Internal("no connected non-bipartite graph found".into())))
}

/// Measured preconditions of a base graph for radius-`r` gluing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseReport {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub degree: Option<usize>,
    pub regular_ok: bool,
    pub connected: bool,
    pub bipartite: bool,
    pub girth: Girth,
    /// `girth > 4r`.
    pub girth_ok: bool,
    /// `girth >= 2(r + 1) + 2`, so radius-`(r+1)` balls are trees.
    pub tree_ball_ok: bool,
    /// Largest `r >= 1` meeting both girth conditions.
    pub girth_ok_for_r: Option<usize>,
    pub lambda2_abs: Option<f64>,
    pub spectral_method: Option<Method>,
    /// `lambda2_abs <= 2 sqrt(d) + tol`.
    pub ramanujan_ok: bool,
    pub notes: Vec<String>,
}

impl BaseReport {
    pub fn passes(&self) -> bool {
        self.regular_ok && self.connected && !self.bipartite && self.girth_ok && self.tree_ball_ok && self.ramanujan_ok
    }
}

fn girth_admits(girth: Girth, r: usize) -> (bool, bool) {
    (girth.exceeds(4 * r), girth.exceeds(2 * (r + 1) + 1))
}

pub fn validate_base(g: &Graph, d: usize, r: usize, tol: f64) -> BaseReport {
    let degree = graph::regular_degree(g);
    let girth = graph::girth(g);
    let (girth_ok, tree_ball_ok) = girth_admits(girth, r);
    let girth_ok_for_r = match girth {
        Girth::Infinite => None,
        Girth::Finite(_) => (1..)
            .take_while(|&r| {
                let (a, b) = girth_admits(girth, r);
                a && b
            })
            .last(),
    };
    let mut notes = Vec::new();
    let connected = graph::is_connected(g);
    let (lambda2_abs, spectral_method) = if connected && g.n() > 1 {
        match spectral::spectral_summary(g, &SpectralOptions::default()) {
            Ok(s) => (Some(s.lambda2_abs), Some(s.method)),
            Err(e) => {
                notes.push(format!("spectrum: {e}"));
                (None, None)
            }
        }
    } else {
        notes.push("spectrum skipped: graph is disconnected or trivial".into());
        (None, None)
    };
    let ramanujan_ok = lambda2_abs.is_some_and(|l| l <= 2.0 * (d as f64).sqrt() + tol);
    BaseReport {
        n: g.n(),
        d,
        r,
        degree,
        regular_ok: degree == Some(d + 1) && d >= 2,
        connected,
        bipartite: graph::is_bipartite(g),
        girth,
        girth_ok,
        tree_ball_ok,
        girth_ok_for_r,
        lambda2_abs,
        spectral_method,
        ramanujan_ok,
        notes,
    }
}
