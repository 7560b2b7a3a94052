//! Fixed inputs shared by the benchmarks.

use scargraph::base::{lps_graph, random_high_girth, LpsParams};
use scargraph::Graph;

/// `X^{5,29}`: 12180 vertices, 6-regular, girth 9.
pub fn lps_5_29() -> Graph {
    lps_graph(&LpsParams::new(5, 29).expect("valid parameters")).expect("LPS graph builds")
}

/// Random cubic graph on 1000 vertices with girth at least 9.
pub fn cubic_1000() -> Graph {
    random_high_girth(1000, 3, 9, 3).expect("random cubic base builds")
}
