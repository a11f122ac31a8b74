//! Value types for ±1-edge-labeled complete graphs, bounded-degree spanning
//! patterns, and vertex embeddings, together with plus/minus scoring.
//!
//! Vertices are the 1-based integers `1..=n`. Edge keys are canonical
//! `(min, max)` pairs. Signs are stored in a dense triangular table so that
//! a sign lookup is O(1); every algorithm in the crate sits on top of that
//! lookup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of the unordered pair `{u, v}` (1-based, `u != v`) in a triangular table.
#[inline]
pub(crate) fn pair_index(u: usize, v: usize) -> usize {
    debug_assert!(u != v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (b - 1) * (b - 2) / 2 + (a - 1)
}

/// `n * (n - 1) / 2`.
#[inline]
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A complete graph of order `n` with a `+1`/`-1` label on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCompleteGraph {
    n: usize,
    plus: Vec<bool>,
    plus_count: usize,
}

impl SignedCompleteGraph {
    /// Builds a labeling in which exactly the listed edges are plus-edges;
    /// every unlisted pair is a minus-edge.
    pub fn from_plus_edges(n: usize, plus_edges: &[(usize, usize)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::OrderTooSmall {
                n,
                min: 1,
                what: "a signed complete graph",
            });
        }
        let mut plus = vec![false; choose2(n)];
        let mut plus_count = 0;
        for &(u, v) in plus_edges {
            check_edge(n, u, v)?;
            let idx = pair_index(u, v);
            if plus[idx] {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            plus[idx] = true;
            plus_count += 1;
        }
        Ok(Self {
            n,
            plus,
            plus_count,
        })
    }

    /// The all-minus labeling on `n` vertices.
    pub fn all_minus(n: usize) -> Self {
        Self::from_plus_edges(n, &[]).expect("n >= 1 checked by callers")
    }

    /// The all-plus labeling on `n` vertices.
    pub fn all_plus(n: usize) -> Self {
        let mut g = Self::all_minus(n);
        for x in g.plus.iter_mut() {
            *x = true;
        }
        g.plus_count = g.plus.len();
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff `{u, v}` is a plus-edge.
    pub fn is_plus(&self, u: usize, v: usize) -> bool {
        debug_assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n);
        self.plus[pair_index(u, v)]
    }

    /// The label of `{u, v}` as `+1` or `-1`.
    pub fn sign(&self, u: usize, v: usize) -> i64 {
        if self.is_plus(u, v) {
            1
        } else {
            -1
        }
    }

    pub fn plus_count(&self) -> usize {
        self.plus_count
    }

    pub fn minus_count(&self) -> usize {
        choose2(self.n) - self.plus_count
    }

    /// Plus-density `m⁺ / C(n,2)`.
    pub fn density(&self) -> f64 {
        self.plus_count as f64 / choose2(self.n) as f64
    }

    /// True iff there are equally many plus- and minus-edges.
    pub fn balanced(&self) -> bool {
        2 * self.plus_count == choose2(self.n)
    }

    /// All plus-edges in canonical `(u, v)`, `u < v`, lexicographic order.
    pub fn plus_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.plus_count);
        for u in 1..self.n {
            for v in (u + 1)..=self.n {
                if self.plus[pair_index(u, v)] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Plus-neighborhood of `u` as a sorted vertex list.
    pub fn plus_neighbors(&self, u: usize) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| v != u && self.is_plus(u, v))
            .collect()
    }

    /// Plus-adjacency lists for all vertices (index 0 unused).
    pub fn plus_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for (u, v) in self.plus_edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// The labeling with every sign flipped.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            plus: self.plus.iter().map(|&b| !b).collect(),
            plus_count: choose2(self.n) - self.plus_count,
        }
    }

    /// Copy with the labels of the listed edges flipped.
    pub fn with_flipped_edges(&self, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = self.clone();
        for &(u, v) in edges {
            check_edge(self.n, u, v)?;
            let idx = pair_index(u, v);
            if g.plus[idx] {
                g.plus_count -= 1;
            } else {
                g.plus_count += 1;
            }
            g.plus[idx] = !g.plus[idx];
        }
        Ok(g)
    }

    /// The labeling relabeled by `rho`: edge `{a, b}` of the result carries the
    /// label of `{rho(a), rho(b)}`.
    pub fn relabeled(&self, rho: &Embedding) -> Result<Self> {
        if rho.n() != self.n {
            return Err(Error::OrderMismatch {
                host: self.n,
                other: rho.n(),
                what: "relabeling permutation",
            });
        }
        let mut plus = vec![false; self.plus.len()];
        for v in 2..=self.n {
            for u in 1..v {
                plus[pair_index(u, v)] = self.is_plus(rho.apply(u), rho.apply(v));
            }
        }
        Ok(Self {
            n: self.n,
            plus,
            plus_count: self.plus_count,
        })
    }

    /// Deletes vertex `x`; remaining vertices are compacted onto `1..=n-1`
    /// preserving their relative order. Returns the smaller labeling.
    pub fn without_vertex(&self, x: usize) -> Result<Self> {
        if x < 1 || x > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.n,
            });
        }
        if self.n < 2 {
            return Err(Error::OrderTooSmall {
                n: self.n,
                min: 2,
                what: "vertex deletion",
            });
        }
        let keep: Vec<usize> = (1..=self.n).filter(|&v| v != x).collect();
        let mut plus = vec![false; choose2(self.n - 1)];
        let mut plus_count = 0;
        for b in 0..keep.len() {
            for a in 0..b {
                if self.is_plus(keep[a], keep[b]) {
                    plus[pair_index(a + 1, b + 1)] = true;
                    plus_count += 1;
                }
            }
        }
        Ok(Self {
            n: self.n - 1,
            plus,
            plus_count,
        })
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<()> {
    for &w in &[u, v] {
        if w < 1 || w > n {
            return Err(Error::VertexOutOfRange { vertex: w, n });
        }
    }
    if u == v {
        return Err(Error::LoopEdge(u));
    }
    Ok(())
}

/// A spanning subgraph given as an edge set, with cached degree data.
/// Isolated vertices are allowed and count as degree 0 for `min_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    n: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
    min_degree: usize,
}

impl Pattern {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::OrderTooSmall {
                n,
                min: 1,
                what: "a pattern",
            });
        }
        let mut canonical: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            check_edge(n, u, v)?;
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &canonical {
            degree[u] += 1;
            degree[v] += 1;
        }
        let max_degree = degree[1..].iter().copied().max().unwrap_or(0);
        let min_degree = degree[1..].iter().copied().min().unwrap_or(0);
        Ok(Self {
            n,
            edges: canonical,
            max_degree,
            min_degree,
        })
    }

    /// The empty pattern on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count `m(G)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(min, max)` edges in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degree_of(&self, u: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == u || b == u)
            .count()
    }

    /// A vertex of minimum degree (smallest index among ties).
    pub fn min_degree_vertex(&self) -> usize {
        let mut degree = vec![0usize; self.n + 1];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        (1..=self.n).min_by_key(|&v| degree[v]).expect("n >= 1")
    }

    /// Adjacency lists (index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// The pattern relabeled by `rho`: edge `{u, v}` becomes `{rho(u), rho(v)}`.
    pub fn relabeled(&self, rho: &Embedding) -> Result<Self> {
        if rho.n() != self.n {
            return Err(Error::OrderMismatch {
                host: self.n,
                other: rho.n(),
                what: "relabeling permutation",
            });
        }
        let mapped: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (rho.apply(u), rho.apply(v)))
            .collect();
        Self::new(self.n, &mapped)
    }

    /// Deletes vertex `x` and compacts the remaining vertices onto `1..=n-1`.
    pub fn without_vertex(&self, x: usize) -> Result<Self> {
        if x < 1 || x > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.n,
            });
        }
        let shift = |v: usize| if v > x { v - 1 } else { v };
        let kept: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != x && v != x)
            .map(|&(u, v)| (shift(u), shift(v)))
            .collect();
        Pattern::new(self.n - 1, &kept)
    }
}

/// A permutation of `1..=n`, used both as an embedding of a pattern into a
/// host and as a relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    perm: Vec<usize>,
}

impl Embedding {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        for &v in &perm {
            if v < 1 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (1..=n).collect(),
        }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (1..=n).collect();
        if a < 1 || a > n {
            return Err(Error::VertexOutOfRange { vertex: a, n });
        }
        if b < 1 || b > n {
            return Err(Error::VertexOutOfRange { vertex: b, n });
        }
        perm.swap(a - 1, b - 1);
        Ok(Self { perm })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `π(u)`.
    #[inline]
    pub fn apply(&self, u: usize) -> usize {
        self.perm[u - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { perm: inv }
    }

    /// Composition `self ∘ other`: `u ↦ self(other(u))`.
    pub fn compose(&self, other: &Embedding) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::OrderMismatch {
                host: self.n(),
                other: other.n(),
                what: "composed permutation",
            });
        }
        Ok(Self {
            perm: other.perm.iter().map(|&v| self.apply(v)).collect(),
        })
    }
}

/// Plus/minus tally of an embedded pattern copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingScore {
    /// `m⁺(G_π)`.
    pub plus: usize,
    /// `m⁻(G_π)`.
    pub minus: usize,
    /// `c(G_π) = plus - minus`.
    pub signed_sum: i64,
}

/// Scores the copy `G_π`: counts plus- and minus-edges among the images
/// `{π(u), π(v)}` of the pattern edges.
pub fn score(
    host: &SignedCompleteGraph,
    pattern: &Pattern,
    emb: &Embedding,
) -> Result<EmbeddingScore> {
    if pattern.n() != host.n() {
        return Err(Error::OrderMismatch {
            host: host.n(),
            other: pattern.n(),
            what: "pattern",
        });
    }
    if emb.n() != host.n() {
        return Err(Error::OrderMismatch {
            host: host.n(),
            other: emb.n(),
            what: "embedding",
        });
    }
    let mut plus = 0usize;
    for &(u, v) in pattern.edges() {
        if host.is_plus(emb.apply(u), emb.apply(v)) {
            plus += 1;
        }
    }
    let minus = pattern.edge_count() - plus;
    Ok(EmbeddingScore {
        plus,
        minus,
        signed_sum: plus as i64 - minus as i64,
    })
}

/// The spanning pattern whose edges are exactly the host's plus-edges.
pub fn plus_subgraph(host: &SignedCompleteGraph) -> Pattern {
    Pattern::new(host.n(), &host.plus_edges()).expect("plus-edges are valid edges")
}

/// On-disk instance format: unlisted pairs are minus-edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub plus_edges: Vec<(usize, usize)>,
}

/// On-disk pattern format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&SignedCompleteGraph> for InstanceFile {
    fn from(g: &SignedCompleteGraph) -> Self {
        Self {
            n: g.n(),
            plus_edges: g.plus_edges(),
        }
    }
}

impl TryFrom<&InstanceFile> for SignedCompleteGraph {
    type Error = Error;
    fn try_from(f: &InstanceFile) -> Result<Self> {
        SignedCompleteGraph::from_plus_edges(f.n, &f.plus_edges).map_err(|e| match e {
            Error::VertexOutOfRange { vertex, n } => Error::InvalidField {
                field: "plus_edges".into(),
                message: format!("vertex {vertex} out of range 1..={n}"),
            },
            Error::LoopEdge(v) => Error::InvalidField {
                field: "plus_edges".into(),
                message: format!("loop edge at vertex {v}"),
            },
            Error::DuplicateEdge(u, v) => Error::InvalidField {
                field: "plus_edges".into(),
                message: format!("duplicate edge ({u}, {v})"),
            },
            other => other,
        })
    }
}

impl From<&Pattern> for PatternFile {
    fn from(p: &Pattern) -> Self {
        Self {
            n: p.n(),
            edges: p.edges().to_vec(),
        }
    }
}

impl TryFrom<&PatternFile> for Pattern {
    type Error = Error;
    fn try_from(f: &PatternFile) -> Result<Self> {
        Pattern::new(f.n, &f.edges).map_err(|e| match e {
            Error::VertexOutOfRange { vertex, n } => Error::InvalidField {
                field: "edges".into(),
                message: format!("vertex {vertex} out of range 1..={n}"),
            },
            Error::LoopEdge(v) => Error::InvalidField {
                field: "edges".into(),
                message: format!("loop edge at vertex {v}"),
            },
            Error::DuplicateEdge(u, v) => Error::InvalidField {
                field: "edges".into(),
                message: format!("duplicate edge ({u}, {v})"),
            },
            other => other,
        })
    }
}

fn fnv1a(words: impl Iterator<Item = u64>) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for word in words {
        for byte in word.to_le_bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    }
    format!("{hash:016x}")
}

/// Content digest of an instance, stable under field and edge reordering of
/// the source file. FNV-1a over the canonical edge list.
pub fn instance_digest(g: &SignedCompleteGraph) -> String {
    let n = std::iter::once(g.n() as u64);
    let edges = g
        .plus_edges()
        .into_iter()
        .flat_map(|(u, v)| [u as u64, v as u64]);
    fnv1a(n.chain(edges))
}

/// Content digest of a pattern, stable under edge reordering.
pub fn pattern_digest(p: &Pattern) -> String {
    let n = std::iter::once(p.n() as u64);
    let edges = p.edges().iter().flat_map(|&(u, v)| [u as u64, v as u64]);
    fnv1a(n.chain(edges))
}
