//! Instance constructions: the balanced extremal labelings, random
//! labelings, planted hosts, and the standard pattern families.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{choose2, Pattern, SignedCompleteGraph};

/// Host construction kinds; feasibility is checked when generating.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// Plus-edges form `K_{n/2,n/2}` minus a matching of `n/4` cross pairs.
    BipartiteMinusMatching { n: usize },
    /// Minus-edges form a clique of order `⌊n/√2⌋`, topped up to exact balance.
    MinusClique { n: usize },
    /// Exactly `round(d * C(n,2))` uniformly chosen plus-edges.
    RandomDensity { n: usize, d: f64, seed: u64 },
    /// Exactly `C(n,2)/2` uniformly chosen plus-edges.
    RandomBalanced { n: usize, seed: u64 },
    /// Plus-edges are exactly the edges of the given pattern.
    Planted { pattern: Pattern },
}

/// Generates the host described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<SignedCompleteGraph> {
    match spec {
        GeneratorSpec::BipartiteMinusMatching { n } => bipartite_minus_matching(*n),
        GeneratorSpec::MinusClique { n } => minus_clique(*n),
        GeneratorSpec::RandomDensity { n, d, seed } => random_density(*n, *d, *seed),
        GeneratorSpec::RandomBalanced { n, seed } => random_balanced(*n, *seed),
        GeneratorSpec::Planted { pattern } => planted(pattern),
    }
}

/// Balanced labeling whose plus-edges are the complete bipartite graph
/// between `1..=n/2` and `n/2+1..=n` minus the matching `{i, i + n/2}` for
/// `i = 1..=n/4`. Requires `n ≡ 0 (mod 4)`.
pub fn bipartite_minus_matching(n: usize) -> Result<SignedCompleteGraph> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::NotDivisible {
            n,
            divisor: 4,
            what: "the bipartite-minus-matching labeling",
        });
    }
    let half = n / 2;
    let mut plus = Vec::with_capacity(half * half - n / 4);
    for u in 1..=half {
        for v in (half + 1)..=n {
            let removed = u <= n / 4 && v == u + half;
            if !removed {
                plus.push((u, v));
            }
        }
    }
    let host = SignedCompleteGraph::from_plus_edges(n, &plus)?;
    debug_assert!(host.balanced());
    Ok(host)
}

/// Balanced labeling whose minus-edges form a clique on the `r = ⌊n/√2⌋`
/// highest-indexed vertices, plus further lexicographically smallest pairs
/// incident to the clique until exactly balanced. Requires
/// `n mod 4 ∈ {0, 1}`.
pub fn minus_clique(n: usize) -> Result<SignedCompleteGraph> {
    if n % 4 > 1 {
        return Err(Error::UnbalanceableOrder { n });
    }
    if n < 4 {
        return Err(Error::OrderTooSmall {
            n,
            min: 4,
            what: "the minus-clique labeling",
        });
    }
    // ⌊n/√2⌋ = ⌊sqrt(n²/2)⌋, computed in integers.
    let r = isqrt(n * n / 2);
    let clique_start = n - r + 1;
    let mut minus = vec![false; choose2(n)];
    let mut minus_count = 0usize;
    for u in clique_start..n {
        for v in (u + 1)..=n {
            minus[crate::graph::pair_index(u, v)] = true;
            minus_count += 1;
        }
    }
    let target = choose2(n) / 2;
    debug_assert!(minus_count <= target);
    'fill: for u in 1..n {
        for v in (u + 1)..=n {
            if minus_count == target {
                break 'fill;
            }
            let touches_clique = u >= clique_start || v >= clique_start;
            let idx = crate::graph::pair_index(u, v);
            if touches_clique && !minus[idx] {
                minus[idx] = true;
                minus_count += 1;
            }
        }
    }
    debug_assert_eq!(minus_count, target);
    let mut plus = Vec::with_capacity(target);
    for u in 1..n {
        for v in (u + 1)..=n {
            if !minus[crate::graph::pair_index(u, v)] {
                plus.push((u, v));
            }
        }
    }
    let host = SignedCompleteGraph::from_plus_edges(n, &plus)?;
    debug_assert!(host.balanced());
    Ok(host)
}

fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    while r * r > x {
        r -= 1;
    }
    r
}

/// Labeling with exactly `plus_count` plus-edges chosen uniformly without
/// replacement, deterministic per seed.
pub fn random_labeling(n: usize, plus_count: usize, seed: u64) -> Result<SignedCompleteGraph> {
    let total = choose2(n);
    if plus_count > total {
        return Err(Error::EdgeCountOutOfRange {
            m: plus_count,
            max: total,
            n,
        });
    }
    let mut pairs = Vec::with_capacity(total);
    for u in 1..n {
        for v in (u + 1)..=n {
            pairs.push((u, v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    SignedCompleteGraph::from_plus_edges(n, &pairs[..plus_count])
}

/// Labeling with `round(d * C(n,2))` uniformly chosen plus-edges.
pub fn random_density(n: usize, d: f64, seed: u64) -> Result<SignedCompleteGraph> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidField {
            field: "d".into(),
            message: format!("density {d} outside [0, 1]"),
        });
    }
    let count = (d * choose2(n) as f64).round() as usize;
    random_labeling(n, count.min(choose2(n)), seed)
}

/// Exactly balanced random labeling; requires `n mod 4 ∈ {0, 1}`.
pub fn random_balanced(n: usize, seed: u64) -> Result<SignedCompleteGraph> {
    if n % 4 > 1 {
        return Err(Error::UnbalanceableOrder { n });
    }
    random_labeling(n, choose2(n) / 2, seed)
}

/// Host whose plus-edges are exactly the edges of `pattern`.
pub fn planted(pattern: &Pattern) -> Result<SignedCompleteGraph> {
    SignedCompleteGraph::from_plus_edges(pattern.n(), pattern.edges())
}

/// Pattern family kinds for `pattern_factory`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternKind {
    /// Disjoint copies of `K_{Δ+1}`; requires `n ≡ 0 (mod Δ+1)`.
    CliqueFactor,
    /// Perfect matching (`Δ = 1`); odd orders leave the last vertex isolated.
    Matching,
    /// The Hamiltonian cycle `1-2-…-n-1` (`Δ = 2`).
    Hamiltonian,
    /// The Hamiltonian path `1-2-…-n`.
    Path,
    /// Consecutive vertex triples; requires `n ≡ 0 (mod 3)`.
    TriangleFactor,
    /// Seeded random greedy edge insertion with max degree at most `Δ`.
    RandomBounded,
}

/// Emits the standard pattern families.
pub fn pattern_factory(kind: PatternKind, n: usize, delta: usize, seed: u64) -> Result<Pattern> {
    match kind {
        PatternKind::CliqueFactor => {
            let block = delta + 1;
            if block < 2 || !n.is_multiple_of(block) {
                return Err(Error::NotDivisible {
                    n,
                    divisor: block,
                    what: "a clique factor",
                });
            }
            let mut edges = Vec::new();
            for start in (1..=n).step_by(block) {
                for a in start..start + block {
                    for b in (a + 1)..start + block {
                        edges.push((a, b));
                    }
                }
            }
            Pattern::new(n, &edges)
        }
        PatternKind::Matching => {
            let edges: Vec<(usize, usize)> = (1..=n.saturating_sub(1))
                .step_by(2)
                .map(|u| (u, u + 1))
                .collect();
            Pattern::new(n, &edges)
        }
        PatternKind::Hamiltonian => {
            if n < 3 {
                return Err(Error::OrderTooSmall {
                    n,
                    min: 3,
                    what: "a Hamiltonian cycle pattern",
                });
            }
            let mut edges: Vec<(usize, usize)> = (1..n).map(|u| (u, u + 1)).collect();
            edges.push((1, n));
            Pattern::new(n, &edges)
        }
        PatternKind::Path => {
            let edges: Vec<(usize, usize)> = (1..n).map(|u| (u, u + 1)).collect();
            Pattern::new(n, &edges)
        }
        PatternKind::TriangleFactor => {
            if n == 0 || !n.is_multiple_of(3) {
                return Err(Error::NotDivisible {
                    n,
                    divisor: 3,
                    what: "a triangle factor",
                });
            }
            let mut edges = Vec::new();
            for start in (1..=n).step_by(3) {
                edges.push((start, start + 1));
                edges.push((start, start + 2));
                edges.push((start + 1, start + 2));
            }
            Pattern::new(n, &edges)
        }
        PatternKind::RandomBounded => {
            if delta == 0 {
                return Pattern::empty(n);
            }
            let mut pairs = Vec::with_capacity(choose2(n));
            for u in 1..n {
                for v in (u + 1)..=n {
                    pairs.push((u, v));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            pairs.shuffle(&mut rng);
            let mut degree = vec![0usize; n + 1];
            let mut edges = Vec::new();
            for (u, v) in pairs {
                if degree[u] < delta && degree[v] < delta {
                    degree[u] += 1;
                    degree[v] += 1;
                    edges.push((u, v));
                }
            }
            Pattern::new(n, &edges)
        }
    }
}
