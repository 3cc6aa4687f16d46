//! Properties of random valid maps, checked against small independent
//! oracles rather than against the library's own helpers.

#[path = "support/oracles.rs"]
mod oracles;

use proptest::prelude::*;

use hymap_core::dsl::{parse_str, serialize};
use hymap_core::generate;
use hymap_core::model::CognitiveMap;
use hymap_core::testutil::{random_map, GenConfig};

use oracles::*;

#[test]
fn sweep_of_random_maps() {
    let stats = sweep(1000).unwrap();
    assert_eq!(stats.maps, 1000);
    assert!(stats.max_nodes <= 50);
    assert!(stats.cycles_injected > 250, "only {} maps allowed a cycle to be injected", stats.cycles_injected);
}

#[test]
fn exactly_twelve_illegal_endpoint_pairs() {
    assert_eq!(check_endpoint_pairs().unwrap(), 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dense_and_sparse_maps(seed in any::<u64>(), density in 0.0f64..0.6, max_nodes in 1usize..60) {
        let map = random_map(seed, GenConfig { max_nodes, density });
        prop_assert!(check_bijection(&map).is_ok(), "{:?}", check_bijection(&map));
        prop_assert!(check_round_trip(&map).is_ok(), "{:?}", check_round_trip(&map));
        prop_assert!(check_layers(&map).is_ok(), "{:?}", check_layers(&map));
    }

    #[test]
    fn hypothesis_ids_ignore_edge_ids(seed in any::<u64>()) {
        let map = random_map(seed, GenConfig::default());
        let reparsed = parse_str(serialize(&map).text()).unwrap().map;
        let ids = |m: &CognitiveMap| {
            let mut v: Vec<String> = generate(m).unwrap().into_iter().map(|h| h.id.0).collect();
            v.sort();
            v
        };
        prop_assert_eq!(ids(&map), ids(&reparsed));
    }
}
