//! Small named graphs used as fixtures and as base graphs at desk scale.

use crate::graph::{Graph, GraphBuilder};

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle needs n >= 3")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are valid")
}

/// The star `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).expect("star edges are valid")
}

pub fn complete(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u, v).expect("complete graph edges are valid");
        }
    }
    b.freeze()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("Petersen edges are valid")
}

/// Hamiltonian cubic graph from LCF notation: `shifts` is repeated `repeat`
/// times around a cycle of length `shifts.len() * repeat`.
pub fn lcf(shifts: &[isize], repeat: usize) -> Graph {
    let n = shifts.len() * repeat;
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        let j = (i + 1) % n;
        if !b.has_edge(i, j) {
            b.add_edge(i, j).expect("LCF cycle edge");
        }
    }
    for i in 0..n {
        let s = shifts[i % shifts.len()];
        let j = (i as isize + s).rem_euclid(n as isize) as usize;
        if !b.has_edge(i, j) {
            b.add_edge(i, j).expect("LCF chord");
        }
    }
    b.freeze()
}

/// The McGee graph: 24 vertices, cubic, girth 7, diameter 4.
pub fn mcgee() -> Graph {
    lcf(&[12, 7, -7], 8)
}

/// The Heawood graph: 14 vertices, cubic, girth 6, bipartite.
pub fn heawood() -> Graph {
    lcf(&[5, -5], 7)
}

/// Named fixed graphs accepted on the command line.
pub fn by_name(name: &str) -> Option<Graph> {
    match name.to_ascii_lowercase().as_str() {
        "mcgee" => Some(mcgee()),
        "petersen" => Some(petersen()),
        "heawood" => Some(heawood()),
        _ => None,
    }
}
