//! Exchange-move local search growing a system of vertex-disjoint plus-edge
//! paths, certificates that hold at every fixed point, greedy assembly into
//! a Hamiltonian cycle, and the label-rebalancing discrepancy pipeline.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{plus_subgraph, SignedCompleteGraph};
use crate::matching::greedy_maximal_matching;

/// Vertex-disjoint non-trivial paths, all of whose edges are plus-edges of
/// the bound host. Paths are stored oriented from their smaller endpoint and
/// sorted by first vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    paths: Vec<Vec<usize>>,
    host_n: usize,
}

impl PathSystem {
    pub fn new(host: &SignedCompleteGraph, paths: Vec<Vec<usize>>) -> Result<Self> {
        let n = host.n();
        let mut seen = vec![false; n + 1];
        for path in &paths {
            if path.len() < 2 {
                return Err(Error::InconsistentSystem(format!(
                    "trivial path of length {}",
                    path.len()
                )));
            }
            for &v in path {
                if v < 1 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if seen[v] {
                    return Err(Error::InconsistentSystem(format!(
                        "vertex {v} appears twice"
                    )));
                }
                seen[v] = true;
            }
            for pair in path.windows(2) {
                if !host.is_plus(pair[0], pair[1]) {
                    return Err(Error::InconsistentSystem(format!(
                        "edge ({}, {}) is a minus-edge",
                        pair[0], pair[1]
                    )));
                }
            }
        }
        Ok(Self {
            paths: canonical_paths(paths),
            host_n: n,
        })
    }

    pub fn empty(host_n: usize) -> Self {
        Self {
            paths: Vec::new(),
            host_n,
        }
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    /// `k`, the number of paths.
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// `m(H)`, the total edge count.
    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum()
    }

    /// Canonical edge list of the union.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for path in &self.paths {
            for pair in path.windows(2) {
                out.push((pair[0].min(pair[1]), pair[0].max(pair[1])));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn stats(&self) -> PathSystemStats {
        let k = self.path_count();
        let m_h = self.edge_count();
        let ell = self.paths.iter().filter(|p| p.len() >= 3).count();
        PathSystemStats {
            k,
            m_h,
            n1: 2 * k,
            n2: m_h - k,
            n0: self.host_n - m_h - k,
            ell,
        }
    }
}

fn canonical_paths(mut paths: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for path in paths.iter_mut() {
        if path.first() > path.last() {
            path.reverse();
        }
    }
    paths.sort();
    paths
}

/// Degree-class sizes of a path system: `n1 = 2k`, `n2 = m(H) - k`,
/// `n0 = n - m(H) - k`, and `ell` counts the paths still non-trivial after
/// their endpoints are removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystemStats {
    pub k: usize,
    pub m_h: usize,
    pub n1: usize,
    pub n2: usize,
    pub n0: usize,
    pub ell: usize,
}

/// Rebuilds the path list from an edge set; `None` if some vertex exceeds
/// degree 2 or a cycle appears.
fn paths_from_edges(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
        if adj[u].len() > 2 || adj[v].len() > 2 {
            return None;
        }
    }
    let mut visited = vec![false; n + 1];
    let mut paths = Vec::new();
    for start in 1..=n {
        if visited[start] || adj[start].len() != 1 {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0];
        loop {
            visited[cur] = true;
            path.push(cur);
            let next = adj[cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        paths.push(path);
    }
    // any vertex with edges left unvisited sits on a cycle
    for v in 1..=n {
        if !visited[v] && !adj[v].is_empty() {
            return None;
        }
    }
    Some(canonical_paths(paths))
}

struct Search<'a> {
    host: &'a SignedCompleteGraph,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    deg: Vec<usize>,
    adj: Vec<Vec<usize>>,
    paths: Vec<Vec<usize>>,
    m: usize,
    k: usize,
    accepted: usize,
}

impl<'a> Search<'a> {
    fn new(host: &'a SignedCompleteGraph, start: &PathSystem) -> Self {
        let mut search = Self {
            host,
            n: host.n(),
            edges: start.edges().into_iter().collect(),
            deg: Vec::new(),
            adj: Vec::new(),
            paths: Vec::new(),
            m: 0,
            k: 0,
            accepted: 0,
        };
        search.rebuild();
        search
    }

    fn rebuild(&mut self) {
        self.paths =
            paths_from_edges(self.n, &self.edges).expect("search state is a valid path union");
        self.deg = vec![0; self.n + 1];
        self.adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
        self.m = self.edges.len();
        self.k = self.paths.len();
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Applies the swap if the result is a valid union of non-trivial
    /// disjoint plus-paths that improves `(m, -k)` lexicographically.
    fn try_apply(&mut self, remove: &[(usize, usize)], add: &[(usize, usize)]) -> bool {
        let mut next = self.edges.clone();
        for &(u, v) in remove {
            if !next.remove(&(u.min(v), u.max(v))) {
                return false;
            }
        }
        for &(u, v) in add {
            debug_assert!(self.host.is_plus(u, v));
            if !next.insert((u.min(v), u.max(v))) {
                return false;
            }
        }
        let Some(paths) = paths_from_edges(self.n, &next) else {
            return false;
        };
        // lexicographic improvement: more edges, or equal edges and fewer paths
        let m = next.len();
        let k = paths.len();
        if !(m > self.m || (m == self.m && k < self.k)) {
            return false;
        }
        self.edges = next;
        self.paths = paths;
        self.deg = vec![0; self.n + 1];
        self.adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
        self.m = self.edges.len();
        self.k = self.paths.len();
        self.accepted += 1;
        true
    }

    /// Join two degree-≤1 vertices by a plus-edge.
    fn try_m1(&mut self) -> bool {
        for u in 1..self.n {
            if self.deg[u] > 1 {
                continue;
            }
            for v in (u + 1)..=self.n {
                if self.deg[v] > 1 || self.has_edge(u, v) || !self.host.is_plus(u, v) {
                    continue;
                }
                if self.try_apply(&[], &[(u, v)]) {
                    return true;
                }
            }
        }
        false
    }

    /// Merge two paths through an isolated vertex adjacent to their
    /// next-to-endpoint vertices: equal edges, one path fewer.
    fn try_m3(&mut self) -> bool {
        let paths = self.paths.clone();
        for u in 1..=self.n {
            if self.deg[u] != 0 {
                continue;
            }
            for i in 0..paths.len() {
                for j in (i + 1)..paths.len() {
                    for (rem_i, att_i) in end_options(&paths[i]) {
                        if !self.host.is_plus(u, att_i) {
                            continue;
                        }
                        for (rem_j, att_j) in end_options(&paths[j]) {
                            if !self.host.is_plus(u, att_j) {
                                continue;
                            }
                            if self.try_apply(&[rem_i, rem_j], &[(u, att_i), (u, att_j)]) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Insert an isolated vertex into a path edge.
    fn try_m2(&mut self) -> bool {
        let edges: Vec<(usize, usize)> = self.edges.iter().copied().collect();
        for u in 1..=self.n {
            if self.deg[u] != 0 {
                continue;
            }
            for &(v, w) in &edges {
                if self.host.is_plus(u, v)
                    && self.host.is_plus(u, w)
                    && self.try_apply(&[(v, w)], &[(u, v), (u, w)])
                {
                    return true;
                }
            }
        }
        false
    }

    /// Reroute through an isolated vertex adjacent to two interior vertices
    /// whose predecessors are joined by a plus-edge.
    fn try_m4(&mut self) -> bool {
        for u in 1..=self.n {
            if self.deg[u] != 0 {
                continue;
            }
            for v in 1..self.n {
                if self.deg[v] != 2 || !self.host.is_plus(u, v) {
                    continue;
                }
                for w in (v + 1)..=self.n {
                    if self.deg[w] != 2 || w == u || !self.host.is_plus(u, w) {
                        continue;
                    }
                    let v_nbrs = self.adj[v].clone();
                    let w_nbrs = self.adj[w].clone();
                    for &vm in &v_nbrs {
                        if vm == u || vm == w {
                            continue;
                        }
                        for &wm in &w_nbrs {
                            if wm == u || wm == v || wm == vm {
                                continue;
                            }
                            if !self.host.is_plus(vm, wm) || self.has_edge(vm, wm) {
                                continue;
                            }
                            if self.try_apply(&[(v, vm), (w, wm)], &[(vm, wm), (u, v), (u, w)]) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Open a path edge and reconnect its halves to two path endpoints.
    fn try_m5(&mut self) -> bool {
        let endpoints: Vec<usize> = (1..=self.n).filter(|&v| self.deg[v] == 1).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().copied().collect();
        for &a in &endpoints {
            for &b in &endpoints {
                if a == b {
                    continue;
                }
                for &(x, y) in &edges {
                    if a == x || a == y || b == x || b == y {
                        continue;
                    }
                    for (ea, eb) in [((a, y), (b, x)), ((a, x), (b, y))] {
                        if self.host.is_plus(ea.0, ea.1)
                            && self.host.is_plus(eb.0, eb.1)
                            && !self.has_edge(ea.0, ea.1)
                            && !self.has_edge(eb.0, eb.1)
                            && self.try_apply(&[(x, y)], &[ea, eb])
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

fn end_options(path: &[usize]) -> Vec<((usize, usize), usize)> {
    let l = path.len();
    vec![
        ((path[0], path[1]), path[1]),
        ((path[l - 2], path[l - 1]), path[l - 2]),
    ]
}

/// Runs the exchange-move search to a fixed point under the lexicographic
/// objective (maximize `m(H)`, then minimize the path count). Moves are
/// scanned first-improvement in a fixed deterministic order, so the fixed
/// point is reproducible. With no start system, a greedy plus-edge matching
/// promoted to 2-paths seeds the search.
pub fn path_local_search(
    host: &SignedCompleteGraph,
    start: Option<&PathSystem>,
) -> Result<PathSystem> {
    let start_system = match start {
        Some(s) => {
            if s.host_n() != host.n() {
                return Err(Error::OrderMismatch {
                    host: host.n(),
                    other: s.host_n(),
                    what: "start path system",
                });
            }
            s.clone()
        }
        None => {
            let matched = greedy_maximal_matching(&plus_subgraph(host));
            PathSystem::new(host, matched.into_iter().map(|(u, v)| vec![u, v]).collect())?
        }
    };
    let mut search = Search::new(host, &start_system);
    let move_cap = 2 * host.n() * host.n() + 4;
    loop {
        let moved = search.try_m1()
            || search.try_m3()
            || search.try_m2()
            || search.try_m4()
            || search.try_m5();
        if !moved {
            break;
        }
        assert!(
            search.accepted <= move_cap,
            "accepted moves exceeded the termination bound"
        );
    }
    PathSystem::new(host, search.paths)
}

/// Fixed-point certificates. Each flag asserts an inequality that must hold
/// whenever the corresponding exchange move no longer applies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathCertificates {
    /// Every plus-edge among degree-≤1 vertices joins the two ends of one
    /// path; in particular there are at most `k` of them.
    pub low_degree_ok: bool,
    /// Every degree-0 vertex has at most `(n2 - ell + 2)/2` plus-neighbors
    /// among interior vertices and touches interior endpoints of at most
    /// one trimmed path.
    pub insertion_ok: bool,
    /// For `k >= 2` and the endpoint pairing `(x_i, y_{i+1})`, at most
    /// `p + 1` plus-edges reach any trimmed path of order `p`.
    pub rewiring_ok: bool,
    pub first_violation: Option<String>,
}

impl PathCertificates {
    pub fn all_ok(&self) -> bool {
        self.low_degree_ok && self.insertion_ok && self.rewiring_ok
    }
}

/// Evaluates the fixed-point certificates on a path system.
pub fn certify_path_fixed_point(
    host: &SignedCompleteGraph,
    system: &PathSystem,
) -> PathCertificates {
    let n = host.n();
    let stats = system.stats();
    let mut deg = vec![0usize; n + 1];
    let mut path_of = vec![usize::MAX; n + 1];
    for (i, path) in system.paths().iter().enumerate() {
        for pair in path.windows(2) {
            deg[pair[0]] += 1;
            deg[pair[1]] += 1;
        }
        for &v in path {
            path_of[v] = i;
        }
    }

    let mut cert = PathCertificates {
        low_degree_ok: true,
        insertion_ok: true,
        rewiring_ok: true,
        first_violation: None,
    };
    let violate = |flag: &mut bool, first: &mut Option<String>, msg: String| {
        *flag = false;
        if first.is_none() {
            *first = Some(msg);
        }
    };

    // plus-edges among degree-<=1 vertices must join the ends of one path
    let endpoints: Vec<(usize, usize)> = system
        .paths()
        .iter()
        .map(|p| (p[0], *p.last().expect("non-trivial")))
        .collect();
    for u in 1..n {
        for v in (u + 1)..=n {
            if deg[u] <= 1 && deg[v] <= 1 && host.is_plus(u, v) {
                let joins_one_path = endpoints
                    .iter()
                    .any(|&(x, y)| (x, y) == (u, v) || (x, y) == (v, u));
                if !joins_one_path {
                    violate(
                        &mut cert.low_degree_ok,
                        &mut cert.first_violation,
                        format!("plus-edge ({u}, {v}) joins low-degree vertices across paths"),
                    );
                }
            }
        }
    }

    // insertion immunity for isolated vertices
    let interiors: Vec<Vec<usize>> = system
        .paths()
        .iter()
        .map(|p| p[1..p.len() - 1].to_vec())
        .collect();
    for u in 1..=n {
        if deg[u] != 0 || path_of[u] != usize::MAX {
            continue;
        }
        let mut v2_neighbors = 0usize;
        for (path_idx, inner) in interiors.iter().enumerate() {
            let _ = path_idx;
            for &w in inner {
                if host.is_plus(u, w) {
                    v2_neighbors += 1;
                }
            }
        }
        if 2 * v2_neighbors > stats.n2 + 2 - stats.ell {
            violate(
                &mut cert.insertion_ok,
                &mut cert.first_violation,
                format!(
                    "vertex {u} has {v2_neighbors} interior plus-neighbors, cap {}",
                    stats.n2 + 2 - stats.ell
                ),
            );
        }
        let end_touches = interiors
            .iter()
            .filter(|inner| {
                !inner.is_empty()
                    && (host.is_plus(u, inner[0])
                        || host.is_plus(u, *inner.last().expect("nonempty")))
            })
            .count();
        if end_touches > 1 {
            violate(
                &mut cert.insertion_ok,
                &mut cert.first_violation,
                format!("vertex {u} touches interior endpoints of {end_touches} paths"),
            );
        }
    }

    // rewiring immunity for consecutive endpoint pairs
    let k = stats.k;
    if k >= 2 {
        for i in 0..k {
            let a = endpoints[i].0;
            let b = endpoints[(i + 1) % k].1;
            for (j, inner) in interiors.iter().enumerate() {
                let p = inner.len();
                if p == 0 {
                    continue;
                }
                let count: usize = inner
                    .iter()
                    .map(|&w| usize::from(host.is_plus(a, w)) + usize::from(host.is_plus(b, w)))
                    .sum();
                if count > p + 1 {
                    violate(
                        &mut cert.rewiring_ok,
                        &mut cert.first_violation,
                        format!(
                            "endpoints ({a}, {b}) send {count} plus-edges into the interior of path {j} (order {p})"
                        ),
                    );
                }
            }
        }
    }
    cert
}

/// Plus count and signed sum of a vertex cycle.
pub fn cycle_score(host: &SignedCompleteGraph, cycle: &[usize]) -> (usize, i64) {
    let n = cycle.len();
    let mut plus = 0usize;
    for i in 0..n {
        if host.is_plus(cycle[i], cycle[(i + 1) % n]) {
            plus += 1;
        }
    }
    (plus, 2 * plus as i64 - n as i64)
}

/// Concatenates the path system and the leftover isolated vertices into a
/// Hamiltonian cycle containing every system edge; connector edges are
/// chosen greedily preferring plus-edges. The cycle keeps at least `m(H)`
/// plus-edges.
pub fn assemble_hamiltonian(host: &SignedCompleteGraph, system: &PathSystem) -> Result<Vec<usize>> {
    let n = host.n();
    if n < 3 {
        return Err(Error::OrderTooSmall {
            n,
            min: 3,
            what: "Hamiltonian assembly",
        });
    }
    if system.host_n() != n {
        return Err(Error::OrderMismatch {
            host: n,
            other: system.host_n(),
            what: "path system",
        });
    }
    // revalidate against this host: edges must be plus and vertices disjoint
    PathSystem::new(host, system.paths().to_vec())?;

    let mut fragments: Vec<Vec<usize>> = system.paths().to_vec();
    let mut covered = vec![false; n + 1];
    for path in &fragments {
        for &v in path {
            covered[v] = true;
        }
    }
    for (v, seen) in covered.iter().enumerate().skip(1) {
        if !seen {
            fragments.push(vec![v]);
        }
    }
    fragments.sort();

    let mut cycle = fragments.remove(0);
    while !fragments.is_empty() {
        let tail = *cycle.last().expect("nonempty");
        let mut chosen: Option<(usize, bool, bool)> = None; // (index, reversed, plus)
        for (idx, frag) in fragments.iter().enumerate() {
            let head = frag[0];
            let back = *frag.last().expect("nonempty");
            for (reversed, join) in [(false, head), (true, back)] {
                let plus = host.is_plus(tail, join);
                let better = match chosen {
                    None => true,
                    Some((_, _, best_plus)) => plus && !best_plus,
                };
                if better {
                    chosen = Some((idx, reversed, plus));
                }
                if reversed && head == back {
                    break; // singleton fragment: both orientations equal
                }
            }
        }
        let (idx, reversed, _) = chosen.expect("fragments remain");
        let mut frag = fragments.remove(idx);
        if reversed {
            frag.reverse();
        }
        cycle.extend(frag);
    }
    Ok(cycle)
}

/// Report of the rebalancing pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    /// Hamiltonian cycle of the full host.
    pub cycle: Vec<usize>,
    /// `c₀(C)` in the original labeling.
    pub signed_sum: i64,
    /// True if the host was minus-heavy and was negated before solving; the
    /// guarantees then apply to `-signed_sum`.
    pub negated: bool,
    /// Plus count of the solved cycle under the balanced labeling.
    pub balanced_plus: usize,
    /// Order of the balanced sub-host the cycle was solved on.
    pub balanced_order: usize,
    /// Number of labels flipped to reach balance.
    pub flipped: usize,
    /// Vertices removed to make the order balanceable (patched back in).
    pub removed: Vec<usize>,
    /// Signed-sum change caused by patching the removed vertices back
    /// (at least -4).
    pub patch_delta: i64,
}

impl DiscrepancyReport {
    /// `2 m⁺_{c₁}(C') - n'`, the balanced-cycle signed sum the chain
    /// guarantees before patching.
    pub fn chain_bound(&self) -> i64 {
        2 * self.balanced_plus as i64 - self.balanced_order as i64
    }
}

/// Rebalancing pipeline: make the order balanceable by deleting the top one
/// or two vertices if needed, flip the lexicographically smallest surplus
/// labels to reach an exactly balanced labeling, solve for a plus-rich
/// Hamiltonian cycle there, and patch the removed vertices back through the
/// cheapest detour. Flips only weaken labels, so
/// `c₀(C') >= 2 m⁺_{c₁}(C') - n'` holds exactly on the solved order, and
/// patching costs at most 4.
pub fn discrepancy_hamiltonian(host: &SignedCompleteGraph) -> Result<DiscrepancyReport> {
    let n = host.n();
    if n < 4 {
        return Err(Error::OrderTooSmall {
            n,
            min: 4,
            what: "the discrepancy pipeline",
        });
    }

    let negated = host.minus_count() > host.plus_count();
    let oriented = if negated {
        host.negated()
    } else {
        host.clone()
    };

    // removing the top-indexed vertices keeps the remaining labels 1..=n'
    let mut removed = Vec::new();
    let mut work = oriented.clone();
    while work.n() % 4 > 1 {
        removed.push(work.n());
        work = work.without_vertex(work.n())?;
    }
    removed.reverse(); // ascending
    let n_prime = work.n();

    // flip the lexicographically smallest plus-edges down to exact balance
    let surplus = work.plus_count() as i64 - work.minus_count() as i64;
    debug_assert!(surplus >= 0, "orientation made the labeling plus-heavy");
    let flips = (surplus / 2) as usize;
    let to_flip: Vec<(usize, usize)> = work.plus_edges().into_iter().take(flips).collect();
    let balanced = work.with_flipped_edges(&to_flip)?;
    debug_assert!(balanced.balanced());

    let system = path_local_search(&balanced, None)?;
    let solved_cycle = assemble_hamiltonian(&balanced, &system)?;
    let (balanced_plus, _) = cycle_score(&balanced, &solved_cycle);

    // patch removed vertices back via the best single-edge detour
    let (cycle, patch_delta) = patch_cycle(&oriented, solved_cycle, &removed);

    let (_, oriented_signed) = cycle_score(&oriented, &cycle);
    let signed_sum = if negated {
        -oriented_signed
    } else {
        oriented_signed
    };
    Ok(DiscrepancyReport {
        cycle,
        signed_sum,
        negated,
        balanced_plus,
        balanced_order: n_prime,
        flipped: flips,
        removed,
        patch_delta,
    })
}

fn patch_cycle(
    host: &SignedCompleteGraph,
    cycle: Vec<usize>,
    removed: &[usize],
) -> (Vec<usize>, i64) {
    match removed {
        [] => (cycle, 0),
        [v] => {
            let len = cycle.len();
            let mut best: Option<(usize, i64)> = None;
            for i in 0..len {
                let (x, y) = (cycle[i], cycle[(i + 1) % len]);
                let delta = host.sign(x, *v) + host.sign(*v, y) - host.sign(x, y);
                if best.is_none_or(|(_, d)| delta > d) {
                    best = Some((i, delta));
                }
            }
            let (at, delta) = best.expect("cycle nonempty");
            let mut out = cycle;
            out.insert(at + 1, *v);
            (out, delta)
        }
        [v, w] => {
            let len = cycle.len();
            let mut best: Option<(usize, (usize, usize), i64)> = None;
            for i in 0..len {
                let (x, y) = (cycle[i], cycle[(i + 1) % len]);
                for (a, b) in [(*v, *w), (*w, *v)] {
                    let delta =
                        host.sign(x, a) + host.sign(a, b) + host.sign(b, y) - host.sign(x, y);
                    if best.is_none_or(|(_, _, d)| delta > d) {
                        best = Some((i, (a, b), delta));
                    }
                }
            }
            let (at, (a, b), delta) = best.expect("cycle nonempty");
            let mut out = cycle;
            out.insert(at + 1, b);
            out.insert(at + 1, a);
            (out, delta)
        }
        _ => unreachable!("at most two vertices are removed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::path_system_target;
    use crate::generators::random_balanced;
    use crate::oracle::best_hamiltonian;

    fn path_host() -> SignedCompleteGraph {
        SignedCompleteGraph::from_plus_edges(4, &[(1, 2), (1, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn plus_path_is_found_whole() {
        let system = path_local_search(&path_host(), None).unwrap();
        assert_eq!(system.edge_count(), 3);
        assert_eq!(system.path_count(), 1);
        assert_eq!(system.paths()[0], vec![2, 1, 3, 4]);
    }

    #[test]
    fn all_minus_yields_empty_system() {
        let system = path_local_search(&SignedCompleteGraph::all_minus(6), None).unwrap();
        assert_eq!(system.edge_count(), 0);
        assert_eq!(system.path_count(), 0);
    }

    #[test]
    fn system_invariants_and_stats() {
        let host = random_balanced(13, 3).unwrap();
        let system = path_local_search(&host, None).unwrap();
        // plus-only disjoint non-trivial paths is enforced by the constructor
        let rebuilt = PathSystem::new(&host, system.paths().to_vec()).unwrap();
        assert_eq!(rebuilt, system);
        let stats = system.stats();
        assert_eq!(stats.n1, 2 * stats.k);
        assert_eq!(stats.n2, stats.m_h - stats.k);
        assert_eq!(stats.n0 + stats.n1 + stats.n2, 13);
        assert!(stats.ell <= stats.k);
    }

    #[test]
    fn fixed_point_meets_target_on_balanced_hosts() {
        for seed in 0..10 {
            let host = random_balanced(12, seed).unwrap();
            let system = path_local_search(&host, None).unwrap();
            let target = path_system_target(12);
            assert!(
                system.edge_count() as f64 >= target - 1e-9,
                "seed {seed}: m(H) = {} below {target}",
                system.edge_count()
            );
            let cert = certify_path_fixed_point(&host, &system);
            assert!(cert.all_ok(), "seed {seed}: {:?}", cert.first_violation);
        }
    }

    #[test]
    fn fixed_point_not_above_exhaustive_optimum() {
        for seed in 0..5 {
            let host = random_balanced(8, 100 + seed).unwrap();
            let system = path_local_search(&host, None).unwrap();
            let (_, best_plus, _) = best_hamiltonian(&host, 11).unwrap();
            // a cycle drops at least one edge to become a path system
            assert!(system.edge_count() <= best_plus.max(7));
            let cycle = assemble_hamiltonian(&host, &system).unwrap();
            let (plus, _) = cycle_score(&host, &cycle);
            assert!(plus <= best_plus);
            assert!(plus >= system.edge_count());
        }
    }

    #[test]
    fn assembles_example_cycle() {
        let host = path_host();
        let system = path_local_search(&host, None).unwrap();
        let cycle = assemble_hamiltonian(&host, &system).unwrap();
        assert_eq!(cycle.len(), 4);
        let (plus, signed) = cycle_score(&host, &cycle);
        assert_eq!(plus, 3);
        assert_eq!(signed, 2);
    }

    #[test]
    fn assembles_from_empty_system_on_all_plus() {
        let host = SignedCompleteGraph::all_plus(5);
        let cycle = assemble_hamiltonian(&host, &PathSystem::empty(5)).unwrap();
        assert_eq!(cycle.len(), 5);
        let (plus, _) = cycle_score(&host, &cycle);
        assert_eq!(plus, 5);
    }

    #[test]
    fn hamiltonian_path_closes_with_one_edge() {
        let host =
            SignedCompleteGraph::from_plus_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let system = PathSystem::new(&host, vec![vec![1, 2, 3, 4, 5]]).unwrap();
        let cycle = assemble_hamiltonian(&host, &system).unwrap();
        let (plus, _) = cycle_score(&host, &cycle);
        assert_eq!(plus, 4); // the single closing edge is minus
    }

    #[test]
    fn assembly_rejects_foreign_system() {
        let host = SignedCompleteGraph::all_minus(5);
        let system_host = SignedCompleteGraph::all_plus(5);
        let system = PathSystem::new(&system_host, vec![vec![1, 2, 3]]).unwrap();
        assert!(assemble_hamiltonian(&host, &system).is_err());
    }

    #[test]
    fn system_constructor_rejects_bad_inputs() {
        let host = SignedCompleteGraph::all_plus(5);
        assert!(PathSystem::new(&host, vec![vec![1]]).is_err());
        assert!(PathSystem::new(&host, vec![vec![1, 2], vec![2, 3]]).is_err());
        let signed = SignedCompleteGraph::from_plus_edges(4, &[(1, 2)]).unwrap();
        assert!(PathSystem::new(&signed, vec![vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn discrepancy_balanced_host_has_no_flips() {
        let host = random_balanced(12, 5).unwrap();
        let report = discrepancy_hamiltonian(&host).unwrap();
        assert_eq!(report.flipped, 0);
        assert!(report.removed.is_empty());
        assert_eq!(report.signed_sum, report.chain_bound());
        let (plus, signed) = cycle_score(&host, &report.cycle);
        assert_eq!(signed, report.signed_sum);
        assert_eq!(plus, report.balanced_plus);
    }

    #[test]
    fn discrepancy_plus_surplus_example() {
        let host =
            SignedCompleteGraph::from_plus_edges(4, &[(1, 2), (1, 3), (1, 4), (2, 3)]).unwrap();
        let report = discrepancy_hamiltonian(&host).unwrap();
        assert_eq!(report.flipped, 1);
        assert!(report.signed_sum >= report.chain_bound());
        // exhaustive: the best signed sum over the 3 cycles of K4 is 2
        let (_, _, max_abs) = best_hamiltonian(&host, 11).unwrap();
        assert!(report.signed_sum <= max_abs as i64);
    }

    #[test]
    fn discrepancy_all_plus() {
        let host = SignedCompleteGraph::all_plus(8);
        let report = discrepancy_hamiltonian(&host).unwrap();
        assert_eq!(report.signed_sum, 8);
    }

    #[test]
    fn discrepancy_patches_odd_orders() {
        for n in [6usize, 7, 10, 11] {
            let host =
                crate::generators::random_labeling(n, crate::graph::choose2(n) / 2, 9).unwrap();
            let report = discrepancy_hamiltonian(&host).unwrap();
            assert_eq!(report.cycle.len(), n);
            let mut sorted = report.cycle.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=n).collect::<Vec<_>>());
            assert_eq!(report.removed.len(), if n % 4 <= 1 { 0 } else { n % 2 + 1 });
            assert!(report.patch_delta >= -4);
            let base = if report.negated { -1 } else { 1 };
            assert!(
                base * report.signed_sum >= report.chain_bound() + report.patch_delta,
                "n {n}"
            );
        }
    }

    #[test]
    fn discrepancy_minus_heavy_host() {
        let host = SignedCompleteGraph::from_plus_edges(8, &[(1, 2)]).unwrap();
        let report = discrepancy_hamiltonian(&host).unwrap();
        assert!(report.negated);
        assert!(-report.signed_sum >= report.chain_bound());
    }
}
