//! High-girth near-Ramanujan graphs built by gluing d-ary trees onto a base
//! graph, together with certificates for their spectral and localization
//! properties.

pub mod base;
pub mod certificate;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod pairing;
pub mod pipeline;
pub mod qe;
pub mod scar;
pub mod spectral;
pub mod tree;
pub mod tridiag;

pub use error::{Error, Result};
pub use graph::{Adjacency, Girth, Graph, GraphBuilder};
pub use pairing::{pair_trees, Pairing, PairingRecord};
pub use tree::DaryTree;
pub use certificate::{build_certificate, verify_certificate, Certificate};
pub use pipeline::{run_pipeline, RunConfig};
pub use scar::{glue, multi_glue, ScarSite, ScarredGraph};
