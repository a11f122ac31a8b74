//! Exhaustive ground truth at small orders: full embedding spectra, optimal
//! Hamiltonian cycles, and optimal triangle factors. Enumeration is split by
//! the first branching choice across workers and merged by exact addition,
//! so results are deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::graph::{choose2, Pattern, SignedCompleteGraph};

pub const DEFAULT_SPECTRUM_CAP: usize = 10;
pub const DEFAULT_HAMILTONIAN_CAP: usize = 11;
pub const DEFAULT_TRIANGLE_CAP: usize = 12;

/// The achievable plus counts of a pattern over all `n!` embeddings, with
/// multiplicities and the exact mean.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    /// Achievable values, ascending.
    pub values: Vec<usize>,
    /// value -> number of permutations attaining it; sums to `n!`.
    pub multiplicities: BTreeMap<usize, u64>,
    /// Exact mean over all permutations.
    pub mean: BigRational,
}

impl SpectrumResult {
    fn from_multiplicities(multiplicities: BTreeMap<usize, u64>) -> Self {
        let values: Vec<usize> = multiplicities.keys().copied().collect();
        let mut total = BigInt::from(0);
        let mut count = BigInt::from(0);
        for (&v, &mult) in &multiplicities {
            total += BigInt::from(v as u64) * BigInt::from(mult);
            count += BigInt::from(mult);
        }
        let mean = BigRational::new(total, count);
        Self {
            values,
            multiplicities,
            mean,
        }
    }

    /// Largest difference between consecutive achievable values.
    pub fn max_gap(&self) -> usize {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    pub fn max_value(&self) -> usize {
        *self.values.last().expect("spectrum nonempty")
    }

    pub fn min_value(&self) -> usize {
        *self.values.first().expect("spectrum nonempty")
    }
}

/// JSON-friendly view of a spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub values: Vec<usize>,
    pub multiplicities: BTreeMap<usize, u64>,
    pub mean: String,
    pub mean_f64: f64,
    pub max_gap: usize,
}

impl From<&SpectrumResult> for SpectrumSummary {
    fn from(s: &SpectrumResult) -> Self {
        use num_traits::ToPrimitive;
        Self {
            values: s.values.clone(),
            multiplicities: s.multiplicities.clone(),
            mean: s.mean.to_string(),
            mean_f64: s.mean.to_f64().unwrap_or(f64::NAN),
            max_gap: s.max_gap(),
        }
    }
}

/// Exact spectrum of `m⁺(G_π)` over all `n!` permutations.
///
/// Matchings, spanning cycles, and disjoint-triangle packings are enumerated
/// by their distinct edge-set images with uniform multiplicity weights; any
/// other pattern falls back to raw permutation enumeration. Both routes
/// agree exactly (checked in tests).
pub fn spectrum(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    cap: usize,
) -> Result<SpectrumResult> {
    let n = host.n();
    if pattern.n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: pattern.n(),
            what: "pattern",
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if let Some(shape) = SpecialShape::detect(pattern) {
        return Ok(spectrum_by_images(host, pattern, shape));
    }
    Ok(spectrum_raw(host, pattern))
}

/// Raw `n!` enumeration; exposed for cross-validation against the
/// image-counting route.
pub fn spectrum_raw(host: &SignedCompleteGraph, pattern: &Pattern) -> SpectrumResult {
    let n = host.n();
    // pattern edges grouped by their larger endpoint, so an edge is counted
    // the moment its second endpoint is placed
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(u, v) in pattern.edges() {
        earlier[v].push(u);
    }

    let branches: Vec<usize> = (1..=n).collect();
    let maps = map_ordered(branches, |first| {
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        let mut image = vec![0usize; n + 1];
        let mut used = vec![false; n + 1];
        image[1] = first;
        used[first] = true;
        place(host, &earlier, &mut image, &mut used, 2, 0, &mut hist);
        hist
    });
    let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
    for map in maps {
        for (v, c) in map {
            *merged.entry(v).or_default() += c;
        }
    }
    SpectrumResult::from_multiplicities(merged)
}

fn place(
    host: &SignedCompleteGraph,
    earlier: &[Vec<usize>],
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    vertex: usize,
    plus_so_far: usize,
    hist: &mut BTreeMap<usize, u64>,
) {
    let n = image.len() - 1;
    if vertex > n {
        *hist.entry(plus_so_far).or_default() += 1;
        return;
    }
    for target in 1..=n {
        if used[target] {
            continue;
        }
        used[target] = true;
        image[vertex] = target;
        let mut plus = plus_so_far;
        for &u in &earlier[vertex] {
            if host.is_plus(image[u], target) {
                plus += 1;
            }
        }
        place(host, earlier, image, used, vertex + 1, plus, hist);
        used[target] = false;
    }
}

/// Pattern shapes whose distinct images can be enumerated directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SpecialShape {
    /// `k` disjoint edges (plus isolated vertices).
    Matching { k: usize },
    /// A single spanning cycle.
    SpanningCycle,
    /// `t` disjoint triangles (plus isolated vertices).
    TrianglePacking { t: usize },
}

impl SpecialShape {
    fn detect(pattern: &Pattern) -> Option<Self> {
        let n = pattern.n();
        let m = pattern.edge_count();
        if pattern.max_degree() <= 1 {
            return Some(Self::Matching { k: m });
        }
        if pattern.max_degree() == 2 && pattern.min_degree() == 2 && m == n && n >= 3 {
            // connected 2-regular spanning graph = one cycle
            if connected_component_size(pattern, 1) == n {
                return Some(Self::SpanningCycle);
            }
            return None;
        }
        // triangle packing: every non-isolated vertex has degree 2 and its
        // component is a triangle
        if pattern.max_degree() == 2 && m.is_multiple_of(3) {
            let adj = pattern.adjacency();
            let mut is_packing = true;
            for adj_v in adj.iter().skip(1) {
                match adj_v.len() {
                    0 => {}
                    2 => {
                        if !pattern.has_edge(adj_v[0], adj_v[1]) {
                            is_packing = false;
                            break;
                        }
                    }
                    _ => {
                        is_packing = false;
                        break;
                    }
                }
            }
            if is_packing {
                return Some(Self::TrianglePacking { t: m / 3 });
            }
        }
        None
    }
}

fn connected_component_size(pattern: &Pattern, start: usize) -> usize {
    let adj = pattern.adjacency();
    let mut seen = vec![false; pattern.n() + 1];
    let mut stack = vec![start];
    seen[start] = true;
    let mut size = 0;
    while let Some(v) = stack.pop() {
        size += 1;
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    size
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn spectrum_by_images(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    shape: SpecialShape,
) -> SpectrumResult {
    let n = host.n();
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    match shape {
        SpecialShape::Matching { k } => {
            // each k-edge matching image is hit by k! 2^k (n-2k)! permutations
            let weight = factorial(k) * (1u64 << k) * factorial(n - 2 * k);
            for_each_matching(host, n, k, &mut |plus| {
                *hist.entry(plus).or_default() += weight;
            });
        }
        SpecialShape::SpanningCycle => {
            // each undirected spanning cycle is hit by 2n permutations
            let weight = 2 * n as u64;
            for_each_cycle_plus(host, &mut |plus, _| {
                *hist.entry(plus).or_default() += weight;
            });
        }
        SpecialShape::TrianglePacking { t } => {
            // each packing image is hit by t! 6^t (n-3t)! permutations
            let weight = factorial(t) * 6u64.pow(t as u32) * factorial(n - 3 * t);
            for_each_triangle_packing(host, n, t, &mut |plus| {
                *hist.entry(plus).or_default() += weight;
            });
        }
    }
    let _ = pattern;
    SpectrumResult::from_multiplicities(hist)
}

/// Visits every k-edge matching of `K_n`, reporting its plus count.
fn for_each_matching(host: &SignedCompleteGraph, n: usize, k: usize, f: &mut impl FnMut(usize)) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        host: &SignedCompleteGraph,
        n: usize,
        left: usize,
        spare_budget: usize,
        used: &mut Vec<bool>,
        from: usize,
        plus: usize,
        f: &mut impl FnMut(usize),
    ) {
        if left == 0 {
            f(plus);
            return;
        }
        let mut u = from;
        while u <= n && used[u] {
            u += 1;
        }
        if u > n {
            return;
        }
        used[u] = true;
        // u stays isolated
        if spare_budget > 0 {
            go(host, n, left, spare_budget - 1, used, u + 1, plus, f);
        }
        // u matched to some later free vertex
        for v in (u + 1)..=n {
            if !used[v] {
                used[v] = true;
                let gained = usize::from(host.is_plus(u, v));
                go(
                    host,
                    n,
                    left - 1,
                    spare_budget,
                    used,
                    u + 1,
                    plus + gained,
                    f,
                );
                used[v] = false;
            }
        }
        used[u] = false;
    }
    let mut used = vec![false; n + 1];
    go(host, n, k, n - 2 * k, &mut used, 1, 0, f);
}

/// Visits every undirected Hamiltonian cycle of the host exactly once,
/// reporting its plus count and vertex sequence. Cycles are anchored at
/// vertex 1 and deduplicated by orientation.
fn for_each_cycle_plus(host: &SignedCompleteGraph, f: &mut impl FnMut(usize, &[usize])) {
    let n = host.n();
    if n < 3 {
        return;
    }
    fn extend(
        host: &SignedCompleteGraph,
        seq: &mut Vec<usize>,
        used: &mut Vec<bool>,
        plus: usize,
        f: &mut impl FnMut(usize, &[usize]),
    ) {
        let n = used.len() - 1;
        if seq.len() == n {
            if seq[1] < seq[n - 1] {
                let closing = usize::from(host.is_plus(seq[n - 1], seq[0]));
                f(plus + closing, seq);
            }
            return;
        }
        let last = *seq.last().expect("nonempty");
        for v in 2..=n {
            if !used[v] {
                used[v] = true;
                seq.push(v);
                let gained = usize::from(host.is_plus(last, v));
                extend(host, seq, used, plus + gained, f);
                seq.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n + 1];
    used[1] = true;
    let mut seq = vec![1usize];
    extend(host, &mut seq, &mut used, 0, f);
}

/// Visits every set of `t` vertex-disjoint triangles in `K_n`.
fn for_each_triangle_packing(
    host: &SignedCompleteGraph,
    n: usize,
    t: usize,
    f: &mut impl FnMut(usize),
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        host: &SignedCompleteGraph,
        n: usize,
        left: usize,
        spare_budget: usize,
        used: &mut Vec<bool>,
        from: usize,
        plus: usize,
        f: &mut impl FnMut(usize),
    ) {
        if left == 0 {
            f(plus);
            return;
        }
        let mut a = from;
        while a <= n && used[a] {
            a += 1;
        }
        if a > n {
            return;
        }
        used[a] = true;
        if spare_budget > 0 {
            go(host, n, left, spare_budget - 1, used, a + 1, plus, f);
        }
        for b in (a + 1)..=n {
            if used[b] {
                continue;
            }
            used[b] = true;
            for c in (b + 1)..=n {
                if used[c] {
                    continue;
                }
                used[c] = true;
                let gained = usize::from(host.is_plus(a, b))
                    + usize::from(host.is_plus(a, c))
                    + usize::from(host.is_plus(b, c));
                go(
                    host,
                    n,
                    left - 1,
                    spare_budget,
                    used,
                    a + 1,
                    plus + gained,
                    f,
                );
                used[c] = false;
            }
            used[b] = false;
        }
        used[a] = false;
    }
    let mut used = vec![false; n + 1];
    go(host, n, t, n - 3 * t, &mut used, 1, 0, f);
}

/// Exhaustive optimum over all `(n-1)!/2` Hamiltonian cycles: a cycle with
/// the most plus-edges, that maximum, and the maximum of `|c(C)|`.
pub fn best_hamiltonian(
    host: &SignedCompleteGraph,
    cap: usize,
) -> Result<(Vec<usize>, usize, usize)> {
    let n = host.n();
    if n < 3 {
        return Err(Error::OrderTooSmall {
            n,
            min: 3,
            what: "Hamiltonian cycle enumeration",
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    // parallel split on the second cycle vertex
    let branches: Vec<usize> = (2..=n).collect();
    let results = map_ordered(branches, |second| {
        let mut best_cycle: Option<Vec<usize>> = None;
        let mut best_plus = 0usize;
        let mut min_plus = usize::MAX;
        let mut used = vec![false; n + 1];
        used[1] = true;
        used[second] = true;
        let mut seq = vec![1usize, second];
        let plus0 = usize::from(host.is_plus(1, second));
        cycle_search(
            host,
            &mut seq,
            &mut used,
            plus0,
            &mut best_cycle,
            &mut best_plus,
            &mut min_plus,
        );
        (best_cycle, best_plus, min_plus)
    });
    let mut best_cycle: Option<Vec<usize>> = None;
    let mut best_plus = 0usize;
    let mut min_plus = usize::MAX;
    for (cycle, plus, min_p) in results {
        if let Some(c) = cycle {
            if best_cycle.is_none() || plus > best_plus {
                best_cycle = Some(c);
                best_plus = plus;
            }
        }
        min_plus = min_plus.min(min_p);
    }
    let cycle = best_cycle.expect("n >= 3 has cycles");
    let max_abs = (2 * best_plus as i64 - n as i64)
        .abs()
        .max((2 * min_plus as i64 - n as i64).abs()) as usize;
    Ok((cycle, best_plus, max_abs))
}

fn cycle_search(
    host: &SignedCompleteGraph,
    seq: &mut Vec<usize>,
    used: &mut Vec<bool>,
    plus: usize,
    best_cycle: &mut Option<Vec<usize>>,
    best_plus: &mut usize,
    min_plus: &mut usize,
) {
    let n = used.len() - 1;
    if seq.len() == n {
        if seq[1] < seq[n - 1] {
            let total = plus + usize::from(host.is_plus(seq[n - 1], seq[0]));
            if best_cycle.is_none() || total > *best_plus {
                *best_cycle = Some(seq.clone());
                *best_plus = total;
            }
            *min_plus = (*min_plus).min(total);
        }
        return;
    }
    let last = *seq.last().expect("nonempty");
    for v in 2..=n {
        if !used[v] {
            used[v] = true;
            seq.push(v);
            cycle_search(
                host,
                seq,
                used,
                plus + usize::from(host.is_plus(last, v)),
                best_cycle,
                best_plus,
                min_plus,
            );
            seq.pop();
            used[v] = false;
        }
    }
}

/// Exhaustive optimum of `m⁺(F)` over all triangle factors (n ≡ 0 mod 3).
pub fn best_triangle_factor(
    host: &SignedCompleteGraph,
    cap: usize,
) -> Result<(Vec<[usize; 3]>, usize)> {
    let n = host.n();
    if n == 0 || !n.is_multiple_of(3) {
        return Err(Error::NotDivisible {
            n,
            divisor: 3,
            what: "a triangle factor",
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    // parallel split on the triple containing vertex 1
    let mut branches = Vec::new();
    for b in 2..n {
        for c in (b + 1)..=n {
            branches.push((b, c));
        }
    }
    let results = map_ordered(branches, |(b, c)| {
        let mut used = vec![false; n + 1];
        used[1] = true;
        used[b] = true;
        used[c] = true;
        let mut triples = vec![[1, b, c]];
        let plus0 = usize::from(host.is_plus(1, b))
            + usize::from(host.is_plus(1, c))
            + usize::from(host.is_plus(b, c));
        let mut best: Option<(Vec<[usize; 3]>, usize)> = None;
        factor_search(host, &mut used, &mut triples, plus0, &mut best);
        best
    });
    let mut best: Option<(Vec<[usize; 3]>, usize)> = None;
    for candidate in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(_, b)| candidate.1 > *b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("n divisible by 3 has factors"))
}

fn factor_search(
    host: &SignedCompleteGraph,
    used: &mut Vec<bool>,
    triples: &mut Vec<[usize; 3]>,
    plus: usize,
    best: &mut Option<(Vec<[usize; 3]>, usize)>,
) {
    let n = used.len() - 1;
    let mut a = 1;
    while a <= n && used[a] {
        a += 1;
    }
    if a > n {
        if best.as_ref().is_none_or(|(_, b)| plus > *b) {
            *best = Some((triples.clone(), plus));
        }
        return;
    }
    used[a] = true;
    for b in (a + 1)..=n {
        if used[b] {
            continue;
        }
        used[b] = true;
        for c in (b + 1)..=n {
            if used[c] {
                continue;
            }
            used[c] = true;
            triples.push([a, b, c]);
            let gained = usize::from(host.is_plus(a, b))
                + usize::from(host.is_plus(a, c))
                + usize::from(host.is_plus(b, c));
            factor_search(host, used, triples, plus + gained, best);
            triples.pop();
            used[c] = false;
        }
        used[b] = false;
    }
    used[a] = false;
}

/// Checks the averaging identity: the spectrum mean equals `d * m(G)`
/// exactly, where `d = m⁺(K) / C(n,2)`.
pub fn mean_matches_density(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    spec: &SpectrumResult,
) -> bool {
    let expected = BigRational::new(
        BigInt::from((host.plus_count() * pattern.edge_count()) as i64),
        BigInt::from(choose2(host.n()) as i64),
    );
    spec.mean == expected
}
