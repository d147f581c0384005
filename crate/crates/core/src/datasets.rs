//! Small public networks bundled with the crate.

use crate::network::{load_edge_list, EdgeListFormat, Network};

const ZACH: &str = include_str!("../data/zach.txt");
const FLORENTINE: &str = include_str!("../data/florentine.txt");

/// Zachary's karate club: 34 members, 78 ties.
pub fn zach() -> Network {
    load_edge_list(ZACH.as_bytes(), EdgeListFormat::Index).expect("bundled zach edge list")
}

/// Padgett's Florentine marriage network: 15 families, 20 ties.
pub fn florentine() -> Network {
    load_edge_list(FLORENTINE.as_bytes(), EdgeListFormat::Label)
        .expect("bundled florentine edge list")
}

/// Looks up a bundled network by name (`zach`, `florentine`).
pub fn by_name(name: &str) -> Option<Network> {
    match name {
        "zach" | "karate" => Some(zach()),
        "florentine" | "padgett" => Some(florentine()),
        _ => None,
    }
}
