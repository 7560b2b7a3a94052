use std::sync::OnceLock;

use scargraph::base::{lps_graph, random_high_girth, LpsParams};
use scargraph::scar::{carve_site, glue, multi_glue, ScarredGraph};
use scargraph::{families, Graph};

pub struct Instance {
    pub name: &'static str,
    pub base: Graph,
    pub sg: ScarredGraph,
}

pub fn lps_base() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| lps_graph(&LpsParams::new(5, 29).unwrap()).unwrap())
}

pub fn cubic_base() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| random_high_girth(1000, 3, 9, 3).unwrap())
}

pub fn quartic_base() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| random_high_girth(1500, 4, 7, 5).unwrap())
}

/// McGee with one r = 1 site at vertex 0.
pub fn mcgee() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let base = families::mcgee();
        let sg = glue(&base, &[carve_site(&base, 0, 1).unwrap()], 1).unwrap();
        Instance { name: "mcgee r=1", base, sg }
    })
}

/// `X^{5,29}` with one r = 1 site.
pub fn lps() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| Instance {
        name: "lps(5,29) r=1",
        base: lps_base().clone(),
        sg: multi_glue(lps_base(), 1, 1, 7).unwrap(),
    })
}

/// Random cubic base, two r = 2 sites.
pub fn cubic() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| Instance {
        name: "cubic(1000) r=2 k=2",
        base: cubic_base().clone(),
        sg: multi_glue(cubic_base(), 2, 2, 7).unwrap(),
    })
}

/// Random 4-regular base, two r = 1 sites.
pub fn quartic() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| Instance {
        name: "quartic(1500) r=1 k=2",
        base: quartic_base().clone(),
        sg: multi_glue(quartic_base(), 2, 1, 11).unwrap(),
    })
}
