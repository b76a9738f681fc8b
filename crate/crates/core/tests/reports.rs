//! Cross-module integration checks: blockwise spectral composition against
//! the independent grid oracle, report schema stability, and falsifier
//! determinism.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_nonneg, si_minus};
use mtensor::{
    classify_m, falsify_monotone, rho_oracle, spectral_radius, weakly_irreducible_partition,
    SparseTensor, Tensor64,
};

/// For weakly reducible tensors the radius must equal the maximum over the
/// partition's leading subtensors, each validated by the grid oracle when it
/// is weakly irreducible and small enough.
#[test]
fn blockwise_radius_matches_per_block_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut reducible_seen = 0;
    while reducible_seen < 10 {
        // sparse, diagonal-free draws are frequently weakly reducible
        let n = rng.gen_range(2..=4);
        let mut entries = Vec::new();
        for tuple in common::all_tuples(3, n) {
            if rng.gen_bool(0.25) {
                entries.push((tuple, rng.gen_range(0.2..1.2)));
            }
        }
        let b: Tensor64 = SparseTensor::from_entries(3, n, entries).unwrap();
        let partition = weakly_irreducible_partition(&b);
        if partition.is_single_block() {
            continue;
        }
        reducible_seen += 1;
        let whole = spectral_radius(&b, 1e-10, 10_000).unwrap();
        let mut best = 0.0f64;
        for (bi, block) in partition.blocks.iter().enumerate() {
            let sub = b.leading_subtensor(block);
            let rho_block = if partition.block_weakly_irreducible[bi] && block.len() <= 4 {
                rho_oracle(&sub, 6).unwrap()
            } else {
                spectral_radius(&sub, 1e-10, 10_000).unwrap().rho
            };
            best = best.max(rho_block);
        }
        assert!(
            (whole.rho - best).abs() <= 1e-3,
            "whole {} vs blockwise {}",
            whole.rho,
            best
        );
    }
}

#[test]
fn falsifier_is_deterministic_for_a_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let b = random_nonneg(&mut rng, 4, 3, 0.5);
    let a = si_minus(0.8 * spectral_radius(&b, 1e-10, 10_000).unwrap().rho, &b);
    let w1 = falsify_monotone(&a, 500, 7);
    let w2 = falsify_monotone(&a, 500, 7);
    assert_eq!(w1, w2);
    let s1 = serde_json::to_string(&w1).unwrap();
    let s2 = serde_json::to_string(&w2).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn verdict_and_result_json_schema_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let b = random_nonneg(&mut rng, 3, 3, 0.6);
    let sr = spectral_radius(&b, 1e-10, 10_000).unwrap();
    let json = serde_json::to_value(&sr).unwrap();
    let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["converged", "eigvec", "iterations", "lower", "rho", "upper"]
    );

    let a = si_minus(1.3 * sr.rho, &b);
    let v = classify_m(&a, 1e-10).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["category", "certificate", "decided", "is_z", "margin", "rho_bracket", "s"]
    );
    assert_eq!(json["category"], serde_json::json!("nonsingular-M"));
    let cert = json["certificate"].as_object().unwrap();
    let mut keys: Vec<&str> = cert.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["epsilons", "halvings", "kind", "margin", "residual", "x"]
    );

    let partition = weakly_irreducible_partition(&b);
    let json = serde_json::to_value(&partition).unwrap();
    let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["block_weakly_irreducible", "blocks", "zero_pattern_ok"]);
}
