//! Workloads shared by the benchmarks.

use hymap_core::testutil::{random_map, GenConfig};
use hymap_core::{serialize, CognitiveMap};

/// Seeded random maps of up to `max_nodes` nodes.
pub fn maps(count: u64, max_nodes: usize) -> Vec<CognitiveMap> {
    let config = GenConfig {
        max_nodes,
        ..GenConfig::default()
    };
    (0..count).map(|seed| random_map(seed, config)).collect()
}

/// The DSL text of each map.
pub fn texts(maps: &[CognitiveMap]) -> Vec<String> {
    maps.iter().map(|m| serialize(m).text().to_string()).collect()
}
