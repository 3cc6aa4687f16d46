//! Seeded generator of random valid maps for property tests and benches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CognitiveMap, NodeId, NodeKind, ProblemConnective, Sign};

const WORDS: &[&str] = &[
    "search", "trust", "price", "delivery", "feedback", "community", "gear", "game table", "referral",
    "reputation", "latency", "onboarding", "satisfaction", "difficulty", "schedule", "café", "\"quoted\"",
    "back\\slash", "news feed", "mentor",
];

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_nodes: usize,
    /// Chance of each candidate influence edge being drawn.
    pub density: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_nodes: 50,
            density: 0.15,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label(rng: &mut ChaCha8Rng, prefix: &str, i: usize) -> String {
    let w = WORDS.choose(rng).expect("non-empty");
    format!("{prefix} {w} {i}")
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    *Sign::ALL.choose(rng).expect("non-empty")
}

/// A random map free of validation errors, built through the public
/// mutation API. Concepts are only linked forwards in creation order, so
/// the result is acyclic by construction.
pub fn random_map(seed: u64, config: GenConfig) -> CognitiveMap {
    let mut rng = rng(seed);
    let mut map = CognitiveMap::new(format!("random {seed}"));
    let product = map.add_node(NodeKind::Product, &label(&mut rng, "product", 0)).unwrap();

    let budget = rng.gen_range(1..=config.max_nodes.max(1));
    let rest = budget - 1;
    let n_features = if rest == 0 { 0 } else { rng.gen_range(0..=rest.min(10)) };
    let rest = rest - n_features;
    let n_customers = if rest == 0 { 0 } else { rng.gen_range(0..=rest.min(6)) };
    let n_concepts = rest - n_customers;

    let mut features = Vec::new();
    for i in 0..n_features {
        let f = map.add_node(NodeKind::Feature, &label(&mut rng, "feature", i)).unwrap();
        map.add_edge(&product, &f, None).unwrap();
        features.push(f);
    }
    let mut concepts: Vec<NodeId> = Vec::new();
    for i in 0..n_concepts {
        concepts.push(map.add_node(NodeKind::Concept, &label(&mut rng, "concept", i)).unwrap());
    }
    for f in &features {
        for c in &concepts {
            if rng.gen_bool(config.density) {
                let s = sign(&mut rng);
                map.add_edge(f, c, Some(s)).unwrap();
            }
        }
    }
    for (i, a) in concepts.iter().enumerate() {
        for b in &concepts[i + 1..] {
            if rng.gen_bool(config.density) {
                let s = sign(&mut rng);
                map.add_edge(a, b, Some(s)).unwrap();
            }
        }
    }
    for i in 0..n_customers {
        let c = map.add_node(NodeKind::Customer, &label(&mut rng, "customer", i)).unwrap();
        for k in &concepts {
            if rng.gen_bool(config.density) {
                let e = map.add_edge(&c, k, None).unwrap();
                if rng.gen_bool(0.2) {
                    map.set_connective(e.as_str(), ProblemConnective::WouldLikeTo).unwrap();
                }
            }
        }
    }
    let ids: Vec<String> = map.edges().iter().map(|e| e.id.0.clone()).collect();
    for id in ids {
        if rng.gen_bool(0.3) {
            map.set_saturated(&id, true).unwrap();
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::has_errors;

    #[test]
    fn generated_maps_are_valid_and_bounded() {
        for seed in 0..200 {
            let m = random_map(seed, GenConfig::default());
            assert!(m.nodes().len() <= 50);
            assert!(!has_errors(&m.validate()), "seed {seed}: {:?}", m.validate());
        }
    }

    #[test]
    fn same_seed_same_map() {
        let a = random_map(7, GenConfig::default());
        let b = random_map(7, GenConfig::default());
        assert_eq!(a.nodes(), b.nodes());
        assert_eq!(a.edges(), b.edges());
    }
}
