//! The restricted random embedding: a pattern-side perfect matching is
//! assigned bijectively, with orientations, onto a host-side perfect
//! matching rich in plus-edges. Sampling, exact expectation in closed form,
//! conditional-expectation derandomization, and the odd-order reduction.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Embedding, Pattern, SignedCompleteGraph};
use crate::matching::{build_matched_pair, MatchedPair};

/// The family of permutations mapping each `m_g` pair onto some `m_k` pair;
/// it has exactly `(n/2)! * 2^(n/2)` members.
#[derive(Clone, Debug)]
pub struct RestrictedEmbeddingSpace {
    pub pair: MatchedPair,
    pub size: BigUint,
}

impl RestrictedEmbeddingSpace {
    pub fn new(pair: MatchedPair) -> Self {
        let k = pair.m_k.len();
        let mut size = BigUint::from(1u32);
        for i in 1..=k {
            size *= BigUint::from(i);
        }
        size <<= k;
        Self { pair, size }
    }

    fn n(&self) -> usize {
        self.pair.n()
    }

    /// Builds the member given an assignment `m_g[i] -> m_k[target[i]]` and
    /// per-pair orientation flips.
    fn member(&self, target: &[usize], flip: &[bool]) -> Embedding {
        let n = self.n();
        let mut perm = vec![0usize; n];
        for (i, &(u, v)) in self.pair.m_g.iter().enumerate() {
            let (x, y) = self.pair.m_k[target[i]];
            let (iu, iv) = if flip[i] { (y, x) } else { (x, y) };
            perm[u - 1] = iu;
            perm[v - 1] = iv;
        }
        Embedding::new(perm).expect("matched pairs partition the vertex set")
    }

    /// Every member of the family, in assignment-lexicographic order.
    /// Guarded by `cap` on the order since the family grows like `(n/2)!`.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Embedding>> {
        let n = self.n();
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let k = n / 2;
        let mut out = Vec::new();
        let mut target: Vec<usize> = (0..k).collect();
        permute_all(&mut target, 0, &mut |assignment| {
            for mask in 0..(1u64 << k) {
                let flip: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
                out.push(self.member(assignment, &flip));
            }
        });
        Ok(out)
    }
}

fn permute_all<F: FnMut(&[usize])>(items: &mut Vec<usize>, at: usize, f: &mut F) {
    if at == items.len() {
        f(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute_all(items, at + 1, f);
        items.swap(at, i);
    }
}

/// Uniform sample from the restricted family, deterministic per seed:
/// Fisher–Yates over the `m_k` pair list plus independent orientation bits.
pub fn sample(space: &RestrictedEmbeddingSpace, seed: u64) -> Embedding {
    let k = space.pair.m_k.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut target: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.random_range(0..=i);
        target.swap(i, j);
    }
    let flip: Vec<bool> = (0..k).map(|_| rng.random_bool(0.5)).collect();
    space.member(&target, &flip)
}

/// Exact expectation of the plus-edge count of `G_π` over the restricted
/// family, in closed form: each pattern edge in `m_g0` lands on a uniformly
/// random `m_k` pair (plus-probability `p`), and every other pattern edge
/// joins two distinct `m_g` pairs and hits each of the `m⁺(K) - p·n/2`
/// plus-edges of `K - M_K` with probability `2 / (n(n-2))`.
pub fn exact_expectation(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    pair: &MatchedPair,
) -> Result<BigRational> {
    let n = host.n();
    if pattern.n() != n || pair.n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: if pattern.n() != n {
                pattern.n()
            } else {
                pair.n()
            },
            what: "pattern or matched pair",
        });
    }
    let m = pattern.edge_count();
    let in_matching = pair.m_g0.len();
    debug_assert!(pair.m_g0.iter().all(|&(u, v)| pattern.has_edge(u, v)));
    let cross = m - in_matching;

    let p = BigRational::new(BigInt::from(*pair.p.numer()), BigInt::from(*pair.p.denom()));
    let mut expectation = &p * BigRational::from_integer(BigInt::from(in_matching as i64));
    if cross > 0 {
        let half = BigRational::from_integer(BigInt::from((n / 2) as i64));
        let plus_total = BigRational::from_integer(BigInt::from(host.plus_count() as i64));
        let off_matching = plus_total - &p * half;
        let per_edge = BigRational::new(BigInt::from(2), BigInt::from((n * (n - 2)) as i64));
        expectation +=
            BigRational::from_integer(BigInt::from(cross as i64)) * per_edge * off_matching;
    }
    Ok(expectation)
}

/// Classification of a pattern edge relative to the `m_g` pairs.
#[derive(Clone, Copy, Debug)]
enum EdgeClass {
    /// The edge is itself an `m_g` pair (hence lies in `m_g0`).
    Matched,
    /// The edge joins two distinct `m_g` pairs.
    Cross,
}

struct PartialAssignment<'a> {
    host: &'a SignedCompleteGraph,
    mg: &'a [(usize, usize)],
    mk: &'a [(usize, usize)],
    /// pattern edges with their classification
    edges: Vec<((usize, usize), EdgeClass)>,
    /// mg index -> (mk index, flipped)
    assigned: Vec<Option<(usize, bool)>>,
    mk_used: Vec<bool>,
    /// vertex -> image under the partial assignment
    image: Vec<Option<usize>>,
}

impl<'a> PartialAssignment<'a> {
    fn new(host: &'a SignedCompleteGraph, pattern: &'a Pattern, pair: &'a MatchedPair) -> Self {
        let n = host.n();
        let mut mg_of = vec![usize::MAX; n + 1];
        for (i, &(u, v)) in pair.m_g.iter().enumerate() {
            mg_of[u] = i;
            mg_of[v] = i;
        }
        let mut edges = Vec::with_capacity(pattern.edge_count());
        for &(a, b) in pattern.edges() {
            if mg_of[a] == mg_of[b] {
                // an edge inside one m_g pair is that pair; the extension
                // uses non-pattern pairs only, so the pair lies in m_g0
                debug_assert!(pair.m_g0.contains(&(a, b)));
                edges.push(((a, b), EdgeClass::Matched));
            } else {
                edges.push(((a, b), EdgeClass::Cross));
            }
        }
        Self {
            host,
            mg: &pair.m_g,
            mk: &pair.m_k,
            edges,
            assigned: vec![None; pair.m_g.len()],
            mk_used: vec![false; pair.m_k.len()],
            image: vec![None; n + 1],
        }
    }

    fn assign(&mut self, mg_idx: usize, mk_idx: usize, flipped: bool) {
        debug_assert!(self.assigned[mg_idx].is_none() && !self.mk_used[mk_idx]);
        self.assigned[mg_idx] = Some((mk_idx, flipped));
        self.mk_used[mk_idx] = true;
        let (u, v) = self.mg[mg_idx];
        let (x, y) = self.mk[mk_idx];
        let (iu, iv) = if flipped { (y, x) } else { (x, y) };
        self.image[u] = Some(iu);
        self.image[v] = Some(iv);
    }

    fn unassign(&mut self, mg_idx: usize) {
        let (mk_idx, _) = self.assigned[mg_idx].take().expect("assigned");
        self.mk_used[mk_idx] = false;
        let (u, v) = self.mg[mg_idx];
        self.image[u] = None;
        self.image[v] = None;
    }

    fn embedding(&self) -> Embedding {
        let n = self.host.n();
        let mut perm = vec![0usize; n];
        for v in 1..=n {
            perm[v - 1] = self.image[v].expect("full assignment");
        }
        Embedding::new(perm).expect("bijection by construction")
    }

    /// Conditional expectation of the plus count given the current partial
    /// assignment. Unassigned `m_g` pairs land uniformly on the unused `m_k`
    /// pairs, so each open term reduces to an integer count over the
    /// remaining vertices divided by a small product.
    fn conditional_expectation(&self) -> BigRational {
        let remaining: Vec<usize> = (0..self.mk.len()).filter(|&i| !self.mk_used[i]).collect();
        let r = remaining.len() as i64;
        let mut remaining_vertices = Vec::with_capacity(2 * remaining.len());
        for &i in &remaining {
            remaining_vertices.push(self.mk[i].0);
            remaining_vertices.push(self.mk[i].1);
        }
        let plus_mk_rem = remaining
            .iter()
            .filter(|&&i| self.host.is_plus(self.mk[i].0, self.mk[i].1))
            .count() as i64;
        let mut plus_pairs_rem = 0i64;
        for i in 0..remaining_vertices.len() {
            for j in (i + 1)..remaining_vertices.len() {
                if self
                    .host
                    .is_plus(remaining_vertices[i], remaining_vertices[j])
                {
                    plus_pairs_rem += 1;
                }
            }
        }
        let plus_cross_rem = plus_pairs_rem - plus_mk_rem;

        let mut known = 0i64;
        let mut single_numer = 0i64;
        let mut matched_open = 0i64;
        let mut cross_open = 0i64;
        for &((a, b), class) in &self.edges {
            match (self.image[a], self.image[b]) {
                (Some(x), Some(y)) => {
                    if self.host.is_plus(x, y) {
                        known += 1;
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    single_numer += remaining_vertices
                        .iter()
                        .filter(|&&y| self.host.is_plus(x, y))
                        .count() as i64;
                }
                (None, None) => match class {
                    EdgeClass::Matched => matched_open += 1,
                    EdgeClass::Cross => cross_open += 1,
                },
            }
        }

        let mut expectation = BigRational::from_integer(BigInt::from(known));
        if single_numer > 0 {
            expectation += BigRational::new(BigInt::from(single_numer), BigInt::from(2 * r));
        }
        if matched_open > 0 {
            expectation +=
                BigRational::new(BigInt::from(matched_open * plus_mk_rem), BigInt::from(r));
        }
        if cross_open > 0 {
            debug_assert!(r >= 2);
            expectation += BigRational::new(
                BigInt::from(cross_open * plus_cross_rem),
                BigInt::from(2 * r * (r - 1)),
            );
        }
        expectation
    }
}

/// Member of the restricted family whose plus count is at least the family
/// expectation, by the method of conditional expectations: `m_g` pairs are
/// fixed in lexicographic order, each onto the unused `m_k` pair and
/// orientation maximizing the conditional expectation (ties resolved toward
/// the smaller `m_k` index and the unflipped orientation).
pub fn derandomize(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    pair: &MatchedPair,
) -> Result<Embedding> {
    let n = host.n();
    if pattern.n() != n || pair.n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: if pattern.n() != n {
                pattern.n()
            } else {
                pair.n()
            },
            what: "pattern or matched pair",
        });
    }
    let mut state = PartialAssignment::new(host, pattern, pair);
    let k = pair.m_g.len();
    for mg_idx in 0..k {
        let mut best: Option<(BigRational, usize, bool)> = None;
        for mk_idx in 0..k {
            if state.mk_used[mk_idx] {
                continue;
            }
            for flipped in [false, true] {
                state.assign(mg_idx, mk_idx, flipped);
                let value = state.conditional_expectation();
                state.unassign(mg_idx);
                if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                    best = Some((value, mk_idx, flipped));
                }
            }
        }
        let (_, mk_idx, flipped) = best.expect("at least one unused m_k pair");
        state.assign(mg_idx, mk_idx, flipped);
    }
    Ok(state.embedding())
}

/// Full pipeline for any host of order at least 4. Even orders build the
/// matched pair and derandomize. An odd order first drops the vertex `x`
/// maximizing the plus count of the remaining host (smallest index among
/// ties), swaps a minimum-degree pattern vertex onto `x`, solves the
/// even-order instance, and extends the embedding by fixing `x`.
pub fn embed_unbalanced(host: &SignedCompleteGraph, pattern: &Pattern) -> Result<Embedding> {
    let n = host.n();
    if n < 4 {
        return Err(Error::OrderTooSmall {
            n,
            min: 4,
            what: "the embedding pipeline",
        });
    }
    if pattern.n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: pattern.n(),
            what: "pattern",
        });
    }
    if n.is_multiple_of(2) {
        let pair = build_matched_pair(host, pattern)?;
        return derandomize(host, pattern, &pair);
    }

    // m⁺(K - x) = m⁺(K) - plus-degree(x): maximize by minimizing the degree.
    let x = (1..=n)
        .min_by_key(|&v| host.plus_neighbors(v).len())
        .expect("n >= 4");
    let w = pattern.min_degree_vertex();
    let tau = Embedding::transposition(n, w, x)?;
    let moved_pattern = pattern.relabeled(&tau)?;

    let host_small = host.without_vertex(x)?;
    let pattern_small = moved_pattern.without_vertex(x)?;
    let pi_small = embed_unbalanced(&host_small, &pattern_small)?;

    // lift: vertices above x shift down before applying pi_small, and its
    // images shift back up; x stays fixed
    let shift_down = |v: usize| if v > x { v - 1 } else { v };
    let shift_up = |v: usize| if v >= x { v + 1 } else { v };
    let mut perm = vec![0usize; n];
    for v in 1..=n {
        perm[v - 1] = if v == x {
            x
        } else {
            shift_up(pi_small.apply(shift_down(v)))
        };
    }
    let lifted = Embedding::new(perm)?;
    lifted.compose(&tau)
}
