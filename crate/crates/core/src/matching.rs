//! Maximum matching on general graphs (blossom contraction), greedy maximal
//! matching in a pattern, perfect-matching extension, and the Erdős–Gallai
//! matching-number bound.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::graph::{choose2, plus_subgraph, Pattern, SignedCompleteGraph};

/// Maximum-cardinality matching of the pattern's edge set, as canonical
/// `(min, max)` pairs sorted lexicographically.
///
/// Classical blossom-contraction search: starting from every exposed vertex
/// an alternating BFS is run, contracting odd cycles at their base; the
/// search terminates exactly when no augmenting path remains, which
/// certifies maximality of the returned matching.
pub fn max_matching(graph: &Pattern) -> Vec<(usize, usize)> {
    let n = graph.n();
    let adj = graph.adjacency();
    // 0-based internal arrays; `mate[v] == usize::MAX` marks an exposed vertex.
    const NONE: usize = usize::MAX;
    let mut mate = vec![NONE; n + 1];

    let mut parent = vec![NONE; n + 1];
    let mut base = vec![0usize; n + 1];
    let mut in_queue = vec![false; n + 1];
    let mut in_blossom = vec![false; n + 1];

    // Greedy seed: speeds up the search, does not affect optimality.
    for u in 1..=n {
        if mate[u] == NONE {
            for &v in &adj[u] {
                if mate[v] == NONE {
                    mate[u] = v;
                    mate[v] = u;
                    break;
                }
            }
        }
    }

    for root in 1..=n {
        if mate[root] != NONE {
            continue;
        }
        // BFS for an augmenting path from `root`.
        for v in 0..=n {
            parent[v] = NONE;
            base[v] = v;
            in_queue[v] = false;
        }
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root);
        in_queue[root] = true;
        let mut augmented = false;

        'bfs: while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if base[u] == base[v] || mate[u] == v {
                    continue;
                }
                if v == root || (mate[v] != NONE && parent[mate[v]] != NONE) {
                    // Odd cycle: contract the blossom rooted at the common base.
                    let cur_base = lowest_common_base(&mate, &parent, &base, u, v, root);
                    for x in in_blossom.iter_mut() {
                        *x = false;
                    }
                    mark_blossom_path(&mate, &mut parent, &base, &mut in_blossom, u, cur_base, v);
                    mark_blossom_path(&mate, &mut parent, &base, &mut in_blossom, v, cur_base, u);
                    for x in 1..=n {
                        if in_blossom[base[x]] {
                            base[x] = cur_base;
                            if !in_queue[x] {
                                in_queue[x] = true;
                                queue.push_back(x);
                            }
                        }
                    }
                } else if parent[v] == NONE {
                    parent[v] = u;
                    if mate[v] == NONE {
                        augment_path(&mut mate, &parent, v);
                        augmented = true;
                        break 'bfs;
                    } else {
                        let w = mate[v];
                        if !in_queue[w] {
                            in_queue[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let _ = augmented;
    }

    let mut out = Vec::new();
    for (u, &v) in mate.iter().enumerate().skip(1) {
        if v != NONE && u < v {
            out.push((u, v));
        }
    }
    out.sort_unstable();
    out
}

fn lowest_common_base(
    mate: &[usize],
    parent: &[usize],
    base: &[usize],
    mut u: usize,
    mut v: usize,
    root: usize,
) -> usize {
    const NONE: usize = usize::MAX;
    let n = base.len() - 1;
    let mut seen = vec![false; n + 1];
    loop {
        u = base[u];
        seen[u] = true;
        if u == root || mate[u] == NONE {
            break;
        }
        u = parent[mate[u]];
    }
    loop {
        v = base[v];
        if seen[v] {
            return v;
        }
        v = parent[mate[v]];
    }
}

fn mark_blossom_path(
    mate: &[usize],
    parent: &mut [usize],
    base: &[usize],
    in_blossom: &mut [bool],
    mut v: usize,
    cur_base: usize,
    mut child: usize,
) {
    while base[v] != cur_base {
        in_blossom[base[v]] = true;
        in_blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

fn augment_path(mate: &mut [usize], parent: &[usize], mut v: usize) {
    const NONE: usize = usize::MAX;
    while v != NONE {
        let pv = parent[v];
        let next = mate[pv];
        mate[v] = pv;
        mate[pv] = v;
        v = next;
    }
}

/// Erdős–Gallai lower bound on the matching number of a graph with `n`
/// vertices and `m` edges:
/// `n - 1/2 - sqrt(n² - 2m - n + 1/4)` when `25m <= 8n² - 14n + 3`, and
/// `(sqrt(8m + 1) - 1) / 4` otherwise.
pub fn erdos_gallai_bound(n: usize, m: usize) -> Result<f64> {
    let max = choose2(n);
    if m > max {
        return Err(Error::EdgeCountOutOfRange { m, max, n });
    }
    Ok(if in_first_branch(n, m) {
        let nf = n as f64;
        nf - 0.5 - (nf * nf - 2.0 * m as f64 - nf + 0.25).sqrt()
    } else {
        ((8.0 * m as f64 + 1.0).sqrt() - 1.0) / 4.0
    })
}

/// True iff `(n, m)` falls in the first (sparse) branch of the bound:
/// `25m <= 8n² - 14n + 3`, compared exactly in integers.
pub fn in_first_branch(n: usize, m: usize) -> bool {
    25 * (m as i128) <= 8 * (n as i128) * (n as i128) - 14 * (n as i128) + 3
}

/// Exact certificate that a matching of size `nu` meets the bound for
/// `(n, m)`. Both branches are verified by squaring, so no floating point
/// is involved.
pub fn eg_bound_met(n: usize, m: usize, nu: usize) -> bool {
    let (n, m, nu) = (n as i128, m as i128, nu as i128);
    if 25 * m <= 8 * n * n - 14 * n + 3 {
        // nu >= n - 1/2 - sqrt(n² - 2m - n + 1/4)
        // <=> sqrt(4n² - 8m - 4n + 1) >= 2n - 1 - 2nu
        let rhs = 2 * n - 1 - 2 * nu;
        if rhs <= 0 {
            return true;
        }
        4 * n * n - 8 * m - 4 * n + 1 >= rhs * rhs
    } else {
        // nu >= (sqrt(8m + 1) - 1) / 4  <=>  (4nu + 1)² >= 8m + 1
        (4 * nu + 1) * (4 * nu + 1) > 8 * m
    }
}

/// The matching data behind a restricted embedding: a perfect matching of
/// the host rich in plus-edges, and a perfect matching of the pattern's
/// vertex set extending a maximal pattern matching.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    /// Perfect matching of the host, `n/2` disjoint pairs, canonical order.
    pub m_k: Vec<(usize, usize)>,
    /// Perfect matching of the complete graph on the pattern's vertices,
    /// containing `m_g0`.
    pub m_g: Vec<(usize, usize)>,
    /// Maximal matching inside the pattern's edge set.
    pub m_g0: Vec<(usize, usize)>,
    /// Fraction of `m_k` pairs that are plus-edges; denominator `n/2`.
    pub p: Rational64,
}

impl MatchedPair {
    pub fn n(&self) -> usize {
        2 * self.m_k.len()
    }
}

/// Builds the matched pair for an even-order host:
/// `m_k` is a maximum matching of the plus-graph extended to a perfect
/// matching (leftover vertices paired in index order); `m_g0` is the greedy
/// maximal matching of the pattern in lexicographic edge order, which
/// satisfies `|m_g0| * (2Δ - 1) >= m(G)`; `m_g` extends `m_g0` with
/// non-pattern pairs.
pub fn build_matched_pair(host: &SignedCompleteGraph, pattern: &Pattern) -> Result<MatchedPair> {
    let n = host.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddOrder {
            n,
            what: "a matched pair",
        });
    }
    if pattern.n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: pattern.n(),
            what: "pattern",
        });
    }

    let plus = plus_subgraph(host);
    let m_k = extend_to_perfect(n, max_matching(&plus));
    let plus_in_mk = m_k.iter().filter(|&&(u, v)| host.is_plus(u, v)).count();
    let p = Rational64::new(plus_in_mk as i64, (n / 2) as i64);

    let m_g0 = greedy_maximal_matching(pattern);
    let m_g = extend_to_perfect(n, m_g0.clone());
    debug_assert!(m_g
        .iter()
        .all(|&(u, v)| m_g0.contains(&(u, v)) || !pattern.has_edge(u, v)));

    Ok(MatchedPair { m_k, m_g, m_g0, p })
}

/// Maximal matching taking pattern edges in lexicographic order.
pub fn greedy_maximal_matching(pattern: &Pattern) -> Vec<(usize, usize)> {
    let mut used = vec![false; pattern.n() + 1];
    let mut out = Vec::new();
    for &(u, v) in pattern.edges() {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            out.push((u, v));
        }
    }
    out
}

/// Extends a matching on `1..=n` (n even) to a perfect matching by pairing
/// the uncovered vertices in increasing index order.
fn extend_to_perfect(n: usize, mut matching: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut used = vec![false; n + 1];
    for &(u, v) in &matching {
        used[u] = true;
        used[v] = true;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| !used[v]).collect();
    debug_assert_eq!(rest.len() % 2, 0);
    for pair in rest.chunks(2) {
        matching.push((pair[0], pair[1]));
    }
    matching.sort_unstable();
    matching
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Embedding;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive maximum matching by branching on the lowest uncovered vertex.
    fn brute_max_matching(n: usize, edges: &[(usize, usize)]) -> usize {
        fn go(n: usize, edges: &[(usize, usize)], used: &mut Vec<bool>, from: usize) -> usize {
            let mut u = from;
            while u <= n && used[u] {
                u += 1;
            }
            if u > n {
                return 0;
            }
            // Either skip u...
            used[u] = true;
            let mut best = go(n, edges, used, u + 1);
            used[u] = false;
            // ...or match it to a free neighbor.
            for &(a, b) in edges {
                let v = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !used[v] {
                    used[u] = true;
                    used[v] = true;
                    best = best.max(1 + go(n, edges, used, u + 1));
                    used[u] = false;
                    used[v] = false;
                }
            }
            best
        }
        let mut used = vec![false; n + 1];
        go(n, edges, &mut used, 1)
    }

    fn is_matching(pairs: &[(usize, usize)]) -> bool {
        let mut seen = std::collections::HashSet::new();
        pairs.iter().all(|&(u, v)| seen.insert(u) && seen.insert(v))
    }

    #[test]
    fn star_matches_one() {
        let p = Pattern::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(max_matching(&p).len(), 1);
    }

    #[test]
    fn empty_matches_zero() {
        let p = Pattern::empty(4).unwrap();
        assert!(max_matching(&p).is_empty());
    }

    #[test]
    fn path_matches_two() {
        let p = Pattern::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(max_matching(&p), vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn odd_cycle_needs_blossom() {
        // C5 plus a pendant: maximum matching has size 3 and requires
        // augmenting through the odd cycle.
        let p = Pattern::new(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (3, 6)]).unwrap();
        let m = max_matching(&p);
        assert!(is_matching(&m));
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn matches_exhaustive_optimum_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.random_range(1..=8);
            let mut edges = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    if rng.random_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let p = Pattern::new(n, &edges).unwrap();
            let m = max_matching(&p);
            assert!(is_matching(&m));
            assert!(m.iter().all(|&(u, v)| p.has_edge(u, v)));
            assert_eq!(m.len(), brute_max_matching(n, &edges), "edges {edges:?}");
        }
    }

    #[test]
    fn eg_bound_values() {
        assert!((erdos_gallai_bound(4, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!((erdos_gallai_bound(4, 6).unwrap() - 1.5).abs() < 1e-12);
        for n in 1..30 {
            assert!(erdos_gallai_bound(n, 0).unwrap().abs() < 1e-12);
        }
        assert!(erdos_gallai_bound(4, 7).is_err());
    }

    #[test]
    fn eg_bound_certified_on_plus_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.random_range(2..=9);
            let mut pairs = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    pairs.push((u, v));
                }
            }
            pairs.shuffle(&mut rng);
            let take = rng.random_range(0..=pairs.len());
            let host = SignedCompleteGraph::from_plus_edges(n, &pairs[..take]).unwrap();
            let plus = plus_subgraph(&host);
            let nu = max_matching(&plus).len();
            assert!(eg_bound_met(n, host.plus_count(), nu));
            let bound = erdos_gallai_bound(n, host.plus_count()).unwrap();
            assert!(nu as f64 >= bound - 1e-9);
        }
    }

    #[test]
    fn matched_pair_small_example() {
        let host = SignedCompleteGraph::from_plus_edges(4, &[(1, 2), (3, 4), (1, 3)]).unwrap();
        let pattern = Pattern::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let pair = build_matched_pair(&host, &pattern).unwrap();
        assert_eq!(pair.m_k, vec![(1, 2), (3, 4)]);
        assert_eq!(pair.p, Rational64::new(1, 1));
        assert_eq!(pair.m_g0, vec![(1, 2), (3, 4)]);
        assert_eq!(pair.m_g, vec![(1, 2), (3, 4)]);
    }

    #[test]
    fn matched_pair_all_minus() {
        let host = SignedCompleteGraph::all_minus(6);
        let pattern = Pattern::new(6, &[(1, 2), (3, 4)]).unwrap();
        let pair = build_matched_pair(&host, &pattern).unwrap();
        assert_eq!(pair.p, Rational64::new(0, 1));
        assert_eq!(pair.m_k.len(), 3);
        assert!(is_matching(&pair.m_k));
    }

    #[test]
    fn matched_pair_rejects_odd_order() {
        let host = SignedCompleteGraph::all_plus(5);
        let pattern = Pattern::empty(5).unwrap();
        assert!(build_matched_pair(&host, &pattern).is_err());
    }

    #[test]
    fn greedy_matching_meets_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let n = rng.random_range(2..=12);
            let mut edges = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    if rng.random_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let p = Pattern::new(n, &edges).unwrap();
            let m0 = greedy_maximal_matching(&p);
            if p.max_degree() >= 1 {
                // |m_g0| * (2Δ - 1) >= m(G)
                assert!(m0.len() * (2 * p.max_degree() - 1) >= p.edge_count());
            } else {
                assert!(m0.is_empty());
            }
            // maximality: no pattern edge with both ends uncovered
            let mut used = vec![false; n + 1];
            for &(u, v) in &m0 {
                used[u] = true;
                used[v] = true;
            }
            assert!(p.edges().iter().all(|&(u, v)| used[u] || used[v]));
        }
    }

    #[test]
    fn matched_pair_extension_avoids_pattern_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let n = 2 * rng.random_range(2..=5);
            let mut edges = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let pattern = Pattern::new(n, &edges).unwrap();
            let mut pairs = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    pairs.push((u, v));
                }
            }
            pairs.shuffle(&mut rng);
            let host = SignedCompleteGraph::from_plus_edges(n, &pairs[..pairs.len() / 2]).unwrap();
            let pair = build_matched_pair(&host, &pattern).unwrap();
            assert!(is_matching(&pair.m_g));
            assert_eq!(pair.m_g.len(), n / 2);
            for e in &pair.m_g {
                if !pair.m_g0.contains(e) {
                    assert!(!pattern.has_edge(e.0, e.1));
                }
            }
        }
    }

    #[test]
    fn matched_pair_on_bipartite_generator() {
        // the perfect-matching pattern is its own greedy maximal matching,
        // so |m_g0| = m / (2*1 - 1) = 4 at n = 8
        let host = crate::generators::bipartite_minus_matching(8).unwrap();
        let pattern =
            crate::generators::pattern_factory(crate::generators::PatternKind::Matching, 8, 1, 0)
                .unwrap();
        let pair = build_matched_pair(&host, &pattern).unwrap();
        assert_eq!(pair.m_g0.len(), 4);
        assert_eq!(pair.m_g0, pattern.edges());
    }

    #[test]
    fn plus_fraction_meets_density_floor() {
        // p >= 2 - 2*sqrt(1-d) - 1/n in the sparse branch, p >= sqrt(d) - 1/n
        // in the dense branch
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..120 {
            let n = 2 * rng.random_range(3..=7);
            let m_plus = rng.random_range(0..=crate::graph::choose2(n));
            let host = crate::generators::random_labeling(n, m_plus, rng.random()).unwrap();
            let pattern = Pattern::empty(n).unwrap();
            let pair = build_matched_pair(&host, &pattern).unwrap();
            let d = host.density();
            let floor = if in_first_branch(n, m_plus) {
                2.0 - 2.0 * (1.0 - d).sqrt() - 1.0 / n as f64
            } else {
                d.sqrt() - 1.0 / n as f64
            };
            let p = *pair.p.numer() as f64 / *pair.p.denom() as f64;
            assert!(p >= floor - 1e-9, "n={n} m={m_plus}: p={p} < {floor}");
        }
    }

    #[test]
    fn relabeled_matching_size_invariant() {
        // matching number is an isomorphism invariant; quick sanity on the
        // blossom implementation under relabeling
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..100 {
            let n = 7;
            let mut edges = Vec::new();
            for u in 1..n {
                for v in (u + 1)..=n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let p = Pattern::new(n, &edges).unwrap();
            let mut perm: Vec<usize> = (1..=n).collect();
            perm.shuffle(&mut rng);
            let rho = Embedding::new(perm).unwrap();
            let q = p.relabeled(&rho).unwrap();
            assert_eq!(max_matching(&p).len(), max_matching(&q).len());
        }
    }
}
