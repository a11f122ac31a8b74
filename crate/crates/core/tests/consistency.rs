//! Cross-module checks: heuristics never beat the exhaustive oracles and
//! always meet their guaranteed floors; sampled embeddings live in the
//! enumerated family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use spansign::embedder::{embed_unbalanced, sample, RestrictedEmbeddingSpace};
use spansign::generators::{pattern_factory, random_balanced, random_labeling, PatternKind};
use spansign::graph::{choose2, plus_subgraph, score};
use spansign::matching::{build_matched_pair, eg_bound_met, max_matching};
use spansign::oracle::{best_hamiltonian, best_triangle_factor, spectrum};
use spansign::pathsearch::{assemble_hamiltonian, cycle_score, path_local_search};
use spansign::trianglesearch::{triangle_local_search, TriangleFactor};

#[test]
fn heuristic_cycles_between_floor_and_oracle() {
    for seed in 0..15u64 {
        let host = random_balanced(8, seed).unwrap();
        let system = path_local_search(&host, None).unwrap();
        let cycle = assemble_hamiltonian(&host, &system).unwrap();
        let (plus, _) = cycle_score(&host, &cycle);
        let (_, oracle_best, _) = best_hamiltonian(&host, 11).unwrap();
        assert!(plus <= oracle_best, "seed {seed}");
        assert!(plus >= system.edge_count(), "seed {seed}");
    }
}

#[test]
fn bipartite_instance_oracle_dominates_heuristic() {
    let host = spansign::generators::bipartite_minus_matching(8).unwrap();
    let system = path_local_search(&host, None).unwrap();
    let cycle = assemble_hamiltonian(&host, &system).unwrap();
    let (plus, _) = cycle_score(&host, &cycle);
    let (_, oracle_best, _) = best_hamiltonian(&host, 11).unwrap();
    assert!(plus <= oracle_best);
    assert!(system.edge_count() as f64 >= spansign::bounds::path_system_target(8) - 1e-9);
}

#[test]
fn heuristic_factors_between_floor_and_oracle() {
    for seed in 0..15u64 {
        let host = random_balanced(9, seed).unwrap();
        let fixed = triangle_local_search(&host, &TriangleFactor::consecutive(9).unwrap()).unwrap();
        let (_, oracle_best) = best_triangle_factor(&host, 12).unwrap();
        assert!(fixed.plus_count(&host) <= oracle_best, "seed {seed}");
    }
}

#[test]
fn embedding_between_expectation_and_spectrum_max() {
    for seed in 0..10u64 {
        let host = random_balanced(8, 50 + seed).unwrap();
        let pattern = pattern_factory(PatternKind::Matching, 8, 1, 0).unwrap();
        let emb = embed_unbalanced(&host, &pattern).unwrap();
        let plus = score(&host, &pattern, &emb).unwrap().plus;
        let spec = spectrum(&host, &pattern, 10).unwrap();
        assert!(plus <= spec.max_value(), "seed {seed}");
        // the derandomized score is at least the (rounded-up) family mean
        let mean = spec.mean.to_f64().unwrap();
        assert!(plus as f64 >= mean.floor(), "seed {seed}");
    }
}

#[test]
fn samples_belong_to_the_enumerated_family() {
    let host = random_balanced(8, 4).unwrap();
    let pattern = pattern_factory(PatternKind::Path, 8, 2, 0).unwrap();
    let pair = build_matched_pair(&host, &pattern).unwrap();
    let space = RestrictedEmbeddingSpace::new(pair);
    let family: std::collections::HashSet<Vec<usize>> = space
        .enumerate(8)
        .unwrap()
        .into_iter()
        .map(|e| e.as_slice().to_vec())
        .collect();
    assert_eq!(family.len(), 384);
    for seed in 0..200u64 {
        assert!(family.contains(sample(&space, seed).as_slice()));
    }
}

#[test]
fn plus_matching_certifies_the_classical_bound() {
    for seed in 0..40u64 {
        let n = 6 + (seed as usize % 5);
        let plus = (seed as usize * 3) % (choose2(n) + 1);
        let host = random_labeling(n, plus, seed).unwrap();
        let nu = max_matching(&plus_subgraph(&host)).len();
        assert!(eg_bound_met(n, plus, nu), "n={n} m={plus} nu={nu}");
    }
}

#[test]
fn spectrum_mean_is_exact_not_float() {
    // a case where f64 would round: n=7, 11 plus-edges, path pattern
    let host = random_labeling(7, 11, 1).unwrap();
    let pattern = pattern_factory(PatternKind::Path, 7, 2, 0).unwrap();
    let spec = spectrum(&host, &pattern, 10).unwrap();
    assert_eq!(
        spec.mean,
        BigRational::new(BigInt::from(11 * 6), BigInt::from(21))
    );
}
