//! Brute-force reference computations, written without the library's graph
//! algorithms.

use std::collections::VecDeque;

use scargraph::Graph;

pub type Adj = Vec<Vec<usize>>;

pub fn adjacency(g: &Graph) -> Adj {
    let mut adj = vec![Vec::new(); g.n()];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

pub fn bfs(adj: &Adj, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut q = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        q.push_back(s);
    }
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Shortest cycle by BFS from every vertex; `None` for forests.
pub fn girth(adj: &Adj) -> Option<usize> {
    let n = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for root in 0..n {
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    touched.push(y);
                    q.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

pub fn is_regular(adj: &Adj, degree: usize) -> bool {
    adj.iter().all(|a| a.len() == degree)
}

/// Whether the radius-`h` ball around `sources` induces a forest with one
/// component per source.
pub fn ball_is_forest(adj: &Adj, sources: &[usize], h: usize) -> bool {
    let dist = bfs(adj, sources);
    let inside: Vec<usize> = (0..adj.len()).filter(|&v| dist[v] <= h).collect();
    let edges: usize = inside
        .iter()
        .map(|&v| adj[v].iter().filter(|&&w| dist[w] <= h).count())
        .sum::<usize>()
        / 2;
    edges + sources.len() == inside.len()
}

pub fn max_residual(adj: &Adj, v: &[f64], lambda: f64) -> f64 {
    (0..adj.len())
        .map(|x| (adj[x].iter().map(|&y| v[y]).sum::<f64>() - lambda * v[x]).abs())
        .fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Level-order d-ary tree: root with `d + 1` children, others with `d`.
pub struct Tree {
    pub adj: Adj,
    pub levels: Vec<std::ops::Range<usize>>,
    pub parent: Vec<usize>,
}

pub fn dary_tree(d: usize, depth: usize) -> Tree {
    let mut adj: Adj = vec![Vec::new()];
    let mut parent = vec![usize::MAX];
    let mut levels = vec![0..1];
    for level in 0..depth {
        let prev = levels[level].clone();
        let start = adj.len();
        for p in prev {
            let kids = if level == 0 { d + 1 } else { d };
            for _ in 0..kids {
                let c = adj.len();
                adj.push(vec![p]);
                adj[p].push(c);
                parent.push(p);
            }
        }
        levels.push(start..adj.len());
    }
    Tree { adj, levels, parent }
}

/// Two copies of a depth-`D` tree with leaf `i` of the first identified with
/// leaf `pi[i]` of the second. Returns the graph and the identified leaves.
pub fn double_tree(d: usize, depth: usize, pi: &[usize]) -> (Adj, Vec<usize>) {
    let t = dary_tree(d, depth);
    let size = t.adj.len();
    let leaves = t.levels[depth].clone();
    let interior = leaves.start;
    let mut adj = t.adj.clone();
    adj.resize(size + interior, Vec::new());
    // second tree interior vertex j sits at size + j
    for j in 1..interior {
        let p = t.parent[j];
        adj[size + j].push(size + p);
        adj[size + p].push(size + j);
    }
    for (i, &k) in pi.iter().enumerate() {
        let leaf1 = leaves.start + i;
        let p2 = size + t.parent[leaves.start + k];
        adj[leaf1].push(p2);
        adj[p2].push(leaf1);
    }
    (adj, leaves.collect())
}

/// `counts[r]`: non-backtracking walks of length `2s` from `x` that end on
/// a marked vertex after visiting exactly `r` marked vertices (end included).
pub fn alternating_paths(adj: &Adj, marked: &[bool], x: usize, s: usize) -> Vec<u128> {
    let mut counts = vec![0u128; s + 1];
    fn walk(adj: &Adj, marked: &[bool], v: usize, prev: usize, left: usize, hits: usize, counts: &mut [u128]) {
        if left == 0 {
            if marked[v] {
                counts[hits] += 1;
            }
            return;
        }
        for &w in &adj[v] {
            if w != prev {
                walk(adj, marked, w, v, left - 1, hits + usize::from(marked[w]), counts);
            }
        }
    }
    walk(adj, marked, x, usize::MAX, 2 * s, 0, &mut counts);
    counts
}

pub fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Ascending eigenvalues and column eigenvectors of a graph by dense
/// decomposition.
pub fn dense_eigen(adj: &Adj) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = adj.len();
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (x, nb) in adj.iter().enumerate() {
        for &y in nb {
            a[(x, y)] = 1.0;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    (values, vectors)
}

/// Size of the smallest prefix of `|v|^2`, sorted descending, reaching `eps`.
pub fn min_support(v: &[f64], eps: f64) -> usize {
    let mut sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (i, x) in sq.iter().enumerate() {
        acc += x;
        if acc >= eps - 1e-12 {
            return i + 1;
        }
    }
    v.len()
}
