//! The small named instances used throughout the tests, shipped as data
//! files under `fixtures/`.

use crate::instances::{LabelCoverInstance, SsatInstance};
use crate::io::from_json_str;

/// Two A-vertices joined to one B-vertex by identity tables on {0, 1}.
pub const LC_ID2: &str = include_str!("../../../fixtures/lc_id2.json");
/// Complete 2×2 bipartite graph; identity tables except `(a1, b1)`, which
/// swaps 0 and 1. At most 3 of its 4 edges can be satisfied.
pub const LC_CYC: &str = include_str!("../../../fixtures/lc_cyc.json");
/// One A-vertex `x` seen by two B-vertices through identity tables.
pub const LC_SHARE: &str = include_str!("../../../fixtures/lc_share.json");
/// The SSAT image of [`LC_SHARE`]: two single-variable tests over `x`.
pub const SSAT_SHARE: &str = include_str!("../../../fixtures/ssat_share.json");
/// Complete 2×2 bipartite graph with identity tables everywhere.
pub const LC_K22: &str = include_str!("../../../fixtures/lc_k22.json");

pub fn lc_id2() -> LabelCoverInstance {
    from_json_str(LC_ID2).expect("lc_id2 fixture")
}

pub fn lc_cyc() -> LabelCoverInstance {
    from_json_str(LC_CYC).expect("lc_cyc fixture")
}

pub fn lc_share() -> LabelCoverInstance {
    from_json_str(LC_SHARE).expect("lc_share fixture")
}

pub fn ssat_share() -> SsatInstance {
    from_json_str(SSAT_SHARE).expect("ssat_share fixture")
}

pub fn lc_k22() -> LabelCoverInstance {
    from_json_str(LC_K22).expect("lc_k22 fixture")
}

/// Every shipped fixture by file name, with its raw text.
pub fn all() -> Vec<(&'static str, &'static str)> {
    vec![
        ("lc_id2.json", LC_ID2),
        ("lc_cyc.json", LC_CYC),
        ("lc_share.json", LC_SHARE),
        ("ssat_share.json", SSAT_SHARE),
        ("lc_k22.json", LC_K22),
    ]
}
