//! Path counting and the funnel family of DAG classes.
//!
//! `mu_s(v)` counts source-to-`v` paths, `mu_t(v)` counts `v`-to-sink paths
//! and an edge `(u, v)` lies on `mu_s(u) * mu_t(v)` source-to-sink paths.
//! Counts grow exponentially, so they are computed either exactly (checked
//! 63-bit arithmetic) or saturating at a cap: every value above the cap is
//! stored as `cap + 1`.
//!
//! Isolated vertices count as both source and sink with `mu_s = mu_t = 1`;
//! the funnel predicates ignore them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, LabeledDag};

const EXACT_LIMIT: u64 = i64::MAX as u64;

/// Arithmetic mode for path counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cap {
    /// Overflow-checked counts up to `2^63 - 1`.
    Exact,
    /// Counts above the value are reported as [`Count::Over`].
    Saturate(u64),
}

/// A path count, possibly known only to exceed a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Exact(u64),
    /// Strictly greater than the carried cap.
    Over(u64),
}

impl Count {
    /// `self > k`. For saturated counts this requires `k <= cap`.
    pub fn exceeds(self, k: u64) -> bool {
        match self {
            Count::Exact(x) => x > k,
            Count::Over(cap) => {
                debug_assert!(k <= cap, "comparison above the saturation cap");
                true
            }
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            Count::Exact(x) => Some(x),
            Count::Over(_) => None,
        }
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Exact(x) => write!(f, "{x}"),
            Count::Over(cap) => write!(f, ">{cap}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Arith {
    limit: u64,
    exact: bool,
}

impl Arith {
    fn new(cap: Cap) -> Self {
        match cap {
            Cap::Exact => Arith {
                limit: EXACT_LIMIT,
                exact: true,
            },
            Cap::Saturate(c) => Arith {
                limit: c.saturating_add(1),
                exact: false,
            },
        }
    }

    fn clamp(self, x: Option<u64>) -> Result<u64> {
        match x {
            Some(x) if x <= self.limit => Ok(x),
            _ if self.exact => Err(Error::Overflow),
            _ => Ok(self.limit),
        }
    }

    fn add(self, a: u64, b: u64) -> Result<u64> {
        self.clamp(a.checked_add(b))
    }

    fn mul(self, a: u64, b: u64) -> Result<u64> {
        self.clamp(a.checked_mul(b))
    }

    fn count(self, x: u64) -> Count {
        if !self.exact && x == self.limit {
            Count::Over(self.limit - 1)
        } else {
            Count::Exact(x)
        }
    }
}

/// Per-vertex path counts of a DAG.
#[derive(Debug, Clone)]
pub struct FunnelProfile {
    cap: Cap,
    arith: Arith,
    mu_s: Vec<u64>,
    mu_t: Vec<u64>,
}

impl FunnelProfile {
    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn n(&self) -> usize {
        self.mu_s.len()
    }

    pub fn mu_s(&self, v: usize) -> Count {
        self.arith.count(self.mu_s[v])
    }

    pub fn mu_t(&self, v: usize) -> Count {
        self.arith.count(self.mu_t[v])
    }

    /// Number of source-to-sink paths through `(u, v)`.
    pub fn mu_edge(&self, u: usize, v: usize) -> Result<Count> {
        Ok(self.arith.count(self.arith.mul(self.mu_s[u], self.mu_t[v])?))
    }

    /// `min(mu_s(v), mu_t(v))`.
    pub fn mu_min(&self, v: usize) -> Count {
        self.arith.count(self.mu_s[v].min(self.mu_t[v]))
    }

    fn raw_edge(&self, u: usize, v: usize) -> Result<u64> {
        self.arith.mul(self.mu_s[u], self.mu_t[v])
    }
}

/// Forward and backward path-count passes over the topological order.
pub fn path_counts(g: &LabeledDag, cap: Cap) -> Result<FunnelProfile> {
    let arith = Arith::new(cap);
    let n = g.n();
    let mut mu_s = vec![0u64; n];
    for &v in g.topo() {
        mu_s[v] = if g.in_degree(v) == 0 {
            1
        } else {
            let mut acc = 0;
            for &u in g.in_neighbors(v) {
                acc = arith.add(acc, mu_s[u])?;
            }
            acc
        };
    }
    let mut mu_t = vec![0u64; n];
    for &v in g.topo().iter().rev() {
        mu_t[v] = if g.out_degree(v) == 0 {
            1
        } else {
            let mut acc = 0;
            for &w in g.out_neighbors(v) {
                acc = arith.add(acc, mu_t[w])?;
            }
            acc
        };
    }
    Ok(FunnelProfile {
        cap,
        arith,
        mu_s,
        mu_t,
    })
}

/// Minimal forbidden path: first vertex merging (`in > 1`), last forking
/// (`out > 1`), interior vertices with in- and out-degree one. Works on any
/// digraph; vertices are scanned in index order.
pub fn find_minimal_forbidden_path(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.n();
    let merging = |v: usize| g.in_degree(v) > 1;
    let forking = |v: usize| g.out_degree(v) > 1;
    let unit = |v: usize| g.in_degree(v) == 1 && g.out_degree(v) == 1;

    if let Some(v) = (0..n).find(|&v| merging(v) && forking(v)) {
        return Some(vec![v]);
    }
    for u in (0..n).filter(|&u| merging(u)) {
        if let Some(&v) = g.out_neighbors(u).iter().find(|&&v| forking(v)) {
            return Some(vec![u, v]);
        }
    }

    let mut marked = vec![false; n];
    for v in 0..n {
        if marked[v] || !unit(v) {
            continue;
        }
        marked[v] = true;
        let mut back = Vec::new();
        let mut head = g.in_neighbors(v)[0];
        let mut closed = false;
        while unit(head) {
            if head == v {
                closed = true;
                break;
            }
            marked[head] = true;
            back.push(head);
            head = g.in_neighbors(head)[0];
        }
        if closed {
            continue;
        }
        let mut forward = Vec::new();
        let mut tail = g.out_neighbors(v)[0];
        while unit(tail) {
            marked[tail] = true;
            forward.push(tail);
            tail = g.out_neighbors(tail)[0];
        }
        if head != tail && merging(head) && forking(tail) {
            let mut path = vec![head];
            path.extend(back.iter().rev());
            path.push(v);
            path.extend(forward);
            path.push(tail);
            return Some(path);
        }
    }
    None
}

/// Checks the degree conditions a minimal forbidden path must satisfy.
pub fn is_minimal_forbidden_path(g: &Digraph, path: &[usize]) -> bool {
    let Some((&first, rest)) = path.split_first() else {
        return false;
    };
    let last = *path.last().unwrap();
    let mut distinct = path.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != path.len() || !path.windows(2).all(|w| g.has_edge(w[0], w[1])) {
        return false;
    }
    if g.in_degree(first) <= 1 || g.out_degree(last) <= 1 {
        return false;
    }
    if rest.is_empty() {
        return true;
    }
    let interior_unit = path[1..path.len() - 1]
        .iter()
        .all(|&v| g.in_degree(v) == 1 && g.out_degree(v) == 1);
    interior_unit && g.out_degree(first) == 1 && g.in_degree(last) == 1
}

/// Vertex partition with no edge from `v2` to `v1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub certified_k: u64,
}

/// BFS from the sources that only enters vertices of in-degree at most one.
/// Accepts with the out-forest / in-forest split when the graph is a funnel.
pub fn is_funnel_bfs(g: &LabeledDag) -> Option<Partition> {
    let n = g.n();
    let mut visited = vec![false; n];
    let mut queue: std::collections::VecDeque<usize> = g.sources().iter().copied().collect();
    for &s in g.sources() {
        visited[s] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.out_neighbors(u) {
            if !visited[w] && g.in_degree(w) <= 1 {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    let back_edge = g.edges().iter().any(|&(u, v)| !visited[u] && visited[v]);
    let v2_forks = (0..n).any(|v| !visited[v] && g.out_degree(v) > 1);
    if back_edge || v2_forks {
        return None;
    }
    let (v1, v2): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| visited[v]);
    Some(Partition {
        v1,
        v2,
        certified_k: 1,
    })
}

/// A source-to-sink path (of at least one edge) using only edges with
/// `mu(e) > k`, if one exists.
pub fn k_shared_path(g: &LabeledDag, k: u64) -> Option<Vec<usize>> {
    let prof = path_counts(g, Cap::Saturate(k)).expect("saturating counts never overflow");
    let n = g.n();
    let mut reach = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    for &v in g.topo() {
        if g.in_degree(v) == 0 {
            reach[v] = true;
            continue;
        }
        for &u in g.in_neighbors(v) {
            if reach[u] && prof.raw_edge(u, v).expect("saturating") > k {
                reach[v] = true;
                parent[v] = u;
                break;
            }
        }
    }
    let end = g
        .sinks()
        .iter()
        .copied()
        .find(|&t| g.in_degree(t) > 0 && reach[t])?;
    let mut path = vec![end];
    let mut v = end;
    while parent[v] != usize::MAX {
        v = parent[v];
        path.push(v);
    }
    path.reverse();
    Some(path)
}

/// No source-to-sink path consists only of `k`-shared edges.
pub fn is_k_funnel(g: &LabeledDag, k: u64) -> bool {
    k_shared_path(g, k).is_none()
}

/// Minimum `k` with `g` a `k`-funnel, by doubling then bisection.
pub fn min_k_funnel_search(g: &LabeledDag) -> Result<u64> {
    let mut lo = 0u64;
    let mut hi = 1u64;
    while !is_k_funnel(g, hi) {
        lo = hi;
        hi = hi.checked_mul(2).filter(|&h| h <= EXACT_LIMIT).ok_or(Error::Overflow)?;
    }
    // Invariant: not a lo-funnel (or lo = 0), is a hi-funnel.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if is_k_funnel(g, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Minimum `k` with `g` a `k`-funnel as the widest source-to-sink path under
/// edge weights `mu(e)`, with exact counts. Graphs without edges give 1.
pub fn min_k_funnel_widest(g: &LabeledDag) -> Result<u64> {
    let prof = path_counts(g, Cap::Exact)?;
    // best[v]: max over source-to-v paths of the minimum edge weight;
    // sources start unconstrained.
    let mut best = vec![0u64; g.n()];
    for &v in g.topo() {
        if g.in_degree(v) == 0 {
            best[v] = u64::MAX;
            continue;
        }
        let mut w = 0;
        for &u in g.in_neighbors(v) {
            w = w.max(best[u].min(prof.raw_edge(u, v)?));
        }
        best[v] = w;
    }
    Ok(g
        .sinks()
        .iter()
        .filter(|&&t| g.in_degree(t) > 0)
        .map(|&t| best[t])
        .max()
        .unwrap_or(1))
}

/// Smallest `k` for which the graph is in `S_k`, `T_k` and `ST_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassParams {
    pub k_s: Count,
    pub k_t: Count,
    pub k_st: Count,
}

pub fn class_min_k(g: &LabeledDag, cap: Cap) -> Result<ClassParams> {
    let prof = path_counts(g, cap)?;
    class_min_k_from(&prof)
}

pub fn class_min_k_from(prof: &FunnelProfile) -> Result<ClassParams> {
    let arith = prof.arith;
    let max = |vals: &mut dyn Iterator<Item = u64>| arith.count(vals.max().unwrap_or(1));
    Ok(ClassParams {
        k_s: max(&mut prof.mu_s.iter().copied()),
        k_t: max(&mut prof.mu_t.iter().copied()),
        k_st: max(&mut prof.mu_s.iter().zip(&prof.mu_t).map(|(&a, &b)| a.min(b))),
    })
}

pub fn in_s_k(g: &LabeledDag, k: u64) -> bool {
    let prof = path_counts(g, Cap::Saturate(k)).expect("saturating");
    (0..g.n()).all(|v| !prof.mu_s(v).exceeds(k))
}

pub fn in_t_k(g: &LabeledDag, k: u64) -> bool {
    let prof = path_counts(g, Cap::Saturate(k)).expect("saturating");
    (0..g.n()).all(|v| !prof.mu_t(v).exceeds(k))
}

pub fn in_st_k(g: &LabeledDag, k: u64) -> bool {
    let prof = path_counts(g, Cap::Saturate(k)).expect("saturating");
    (0..g.n()).all(|v| !prof.mu_min(v).exceeds(k))
}

/// `V1 = {v : mu_s(v) <= k}`, `V2` the rest; re-verifies that no edge goes
/// from `V2` to `V1`, `G[V1]` is in `S_k` and `G[V2]` is in `T_k`.
pub fn st_partition(g: &LabeledDag, k: u64) -> Result<Partition> {
    let not_in_class = Error::NotInClass { class: "ST_k", k };
    let prof = path_counts(g, Cap::Saturate(k))?;
    let (v1, v2): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&v| !prof.mu_s(v).exceeds(k));
    let mut in_v1 = vec![false; g.n()];
    for &v in &v1 {
        in_v1[v] = true;
    }
    if g.edges().iter().any(|&(u, v)| !in_v1[u] && in_v1[v]) {
        return Err(not_in_class);
    }
    let part1 = LabeledDag::new(g.induced_subgraph(&v1).graph)?;
    let part2 = LabeledDag::new(g.induced_subgraph(&v2).graph)?;
    if !in_s_k(&part1, k) || !in_t_k(&part2, k) {
        return Err(not_in_class);
    }
    Ok(Partition {
        v1,
        v2,
        certified_k: k,
    })
}

/// Membership of one graph in the four classes for a fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    pub k: u64,
    pub in_s_k: bool,
    pub in_t_k: bool,
    pub k_funnel: bool,
    pub in_st_k: bool,
}

impl Containment {
    /// `S_k ∪ T_k ⊆ k-funnels ⊆ ST_k` holds for this graph.
    pub fn chain_holds(&self) -> bool {
        let into_funnel = !(self.in_s_k || self.in_t_k) || self.k_funnel;
        let into_st = !self.k_funnel || self.in_st_k;
        into_funnel && into_st
    }
}

pub fn containment_check(g: &LabeledDag, k: u64) -> Containment {
    Containment {
        k,
        in_s_k: in_s_k(g, k),
        in_t_k: in_t_k(g, k),
        k_funnel: is_k_funnel(g, k),
        in_st_k: in_st_k(g, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{self, GenKind};

    fn dag(n: usize, edges: &[(usize, usize)]) -> LabeledDag {
        LabeledDag::new(Digraph::unlabeled(n, edges.to_vec()).unwrap()).unwrap()
    }

    fn path(n: usize) -> LabeledDag {
        dag(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
    }

    // x1=0, x2=1 -> u=2 -> v=3 -> y1=4, y2=5
    fn butterfly() -> LabeledDag {
        dag(6, &[(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)])
    }

    fn diamond() -> LabeledDag {
        dag(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    fn fig2(k: usize) -> LabeledDag {
        LabeledDag::new(generators::fixture(GenKind::Fig2 { k }).unwrap()).unwrap()
    }

    #[test]
    fn path_count_examples() {
        let p = path_counts(&path(5), Cap::Exact).unwrap();
        assert!((0..5).all(|v| p.mu_s(v) == Count::Exact(1) && p.mu_t(v) == Count::Exact(1)));

        let b = path_counts(&butterfly(), Cap::Exact).unwrap();
        assert_eq!(b.mu_edge(2, 3).unwrap(), Count::Exact(4));
        assert_eq!(b.mu_edge(0, 2).unwrap(), Count::Exact(2));

        for k in [2, 3, 5] {
            let g = fig2(k);
            let p = path_counts(&g, Cap::Exact).unwrap();
            let (x, y) = (k + 1, k + 2);
            assert_eq!(p.mu_edge(x, y).unwrap(), Count::Exact((k * k) as u64));
            assert!((0..g.n()).all(|v| !p.mu_min(v).exceeds(k as u64)));
        }
    }

    #[test]
    fn saturation() {
        let b = path_counts(&butterfly(), Cap::Saturate(3)).unwrap();
        assert_eq!(b.mu_edge(2, 3).unwrap(), Count::Over(3));
        assert_eq!(b.mu_s(3), Count::Exact(2));
        let b = path_counts(&butterfly(), Cap::Saturate(1)).unwrap();
        assert_eq!(b.mu_s(3), Count::Over(1));
        assert_eq!(b.mu_s(3).to_string(), ">1");
    }

    #[test]
    fn exact_overflow() {
        // 70 stacked diamonds: 2^70 paths.
        let mut edges = Vec::new();
        for d in 0..70 {
            let b = 3 * d;
            edges.extend([(b, b + 1), (b, b + 2), (b + 1, b + 3), (b + 2, b + 3)]);
        }
        let g = dag(3 * 70 + 1, &edges);
        assert_eq!(path_counts(&g, Cap::Exact).unwrap_err(), Error::Overflow);
        assert_eq!(min_k_funnel_widest(&g).unwrap_err(), Error::Overflow);
        let p = path_counts(&g, Cap::Saturate(1000)).unwrap();
        assert_eq!(p.mu_s(3 * 70), Count::Over(1000));
    }

    #[test]
    fn forbidden_path_examples() {
        assert_eq!(find_minimal_forbidden_path(&diamond()), None);
        assert_eq!(find_minimal_forbidden_path(&butterfly()), Some(vec![2, 3]));
        let star = Digraph::unlabeled(5, vec![(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(find_minimal_forbidden_path(&star), Some(vec![2]));
        // merging 2, unit 3, 4, forking 5
        let long = Digraph::unlabeled(8, vec![(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7)]).unwrap();
        let p = find_minimal_forbidden_path(&long).unwrap();
        assert_eq!(p, vec![2, 3, 4, 5]);
        assert!(is_minimal_forbidden_path(&long, &p));
        // A bare cycle has no forbidden path.
        let cyc = Digraph::unlabeled(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(find_minimal_forbidden_path(&cyc), None);
    }

    #[test]
    fn forbidden_path_through_cycle() {
        // 0 -> 1 -> 2 -> 0 with 3 -> 0 (0 merging) and 2 -> 4 (2 forking).
        let g = Digraph::unlabeled(5, vec![(0, 1), (1, 2), (2, 0), (3, 0), (2, 4)]).unwrap();
        let p = find_minimal_forbidden_path(&g).unwrap();
        assert_eq!(p, vec![0, 1, 2]);
        assert!(is_minimal_forbidden_path(&g, &p));
    }

    #[test]
    fn bfs_examples() {
        let tree = dag(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]);
        let p = is_funnel_bfs(&tree).unwrap();
        assert_eq!((p.v1.len(), p.v2.len()), (5, 0));
        assert!(is_funnel_bfs(&butterfly()).is_none());
        let in_star = dag(4, &[(0, 3), (1, 3), (2, 3)]);
        let p = is_funnel_bfs(&in_star).unwrap();
        assert_eq!((p.v1, p.v2), (vec![0, 1, 2], vec![3]));
    }

    #[test]
    fn k_funnel_examples() {
        let tree = dag(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]);
        assert!(is_k_funnel(&tree, 1));
        assert!(!is_k_funnel(&butterfly(), 1));
        assert!(is_k_funnel(&butterfly(), 2));
        assert_eq!(k_shared_path(&butterfly(), 1).unwrap().len(), 4);
        for k in [2u64, 3, 5] {
            assert!(!is_k_funnel(&fig2(k as usize), k));
        }
    }

    #[test]
    fn min_k_examples() {
        assert_eq!(min_k_funnel_search(&path(4)).unwrap(), 1);
        assert_eq!(min_k_funnel_widest(&path(4)).unwrap(), 1);
        assert_eq!(min_k_funnel_search(&butterfly()).unwrap(), 2);
        assert_eq!(min_k_funnel_widest(&butterfly()).unwrap(), 2);
        assert_eq!(min_k_funnel_widest(&dag(3, &[])).unwrap(), 1);
        for k in [2, 3, 5, 9] {
            let g = fig2(k);
            assert_eq!(min_k_funnel_search(&g).unwrap(), min_k_funnel_widest(&g).unwrap());
        }
    }

    #[test]
    fn class_examples() {
        let forest = dag(6, &[(0, 1), (0, 2), (2, 3), (4, 5)]);
        let c = class_min_k(&forest, Cap::Exact).unwrap();
        assert_eq!((c.k_s, c.k_st), (Count::Exact(1), Count::Exact(1)));
        let c = class_min_k(&butterfly(), Cap::Exact).unwrap();
        assert_eq!((c.k_s, c.k_t, c.k_st), (Count::Exact(2), Count::Exact(2), Count::Exact(2)));
        for k in [2, 3, 5] {
            assert_eq!(class_min_k(&fig2(k), Cap::Exact).unwrap().k_st, Count::Exact(k as u64));
        }
    }

    #[test]
    fn st_partition_examples() {
        let in_star = dag(4, &[(0, 3), (1, 3), (2, 3)]);
        let p = st_partition(&in_star, 1).unwrap();
        assert_eq!(Some(p), is_funnel_bfs(&in_star));

        for k in [2usize, 3] {
            let g = fig2(k);
            let p = st_partition(&g, k as u64).unwrap();
            // sources, x and x's private sink have mu_s <= k.
            let mut expected: Vec<usize> = (0..=k + 1).collect();
            expected.push(k + 3);
            assert_eq!(p.v1, expected);
            assert_eq!(st_partition(&g, k as u64 - 1).unwrap_err(), Error::NotInClass { class: "ST_k", k: k as u64 - 1 });
        }
        let p = st_partition(&path(4), 3).unwrap();
        assert!(p.v2.is_empty());
    }

    #[test]
    fn containment_examples() {
        let c = containment_check(&fig2(3), 3);
        assert!(c.in_st_k && !c.k_funnel && c.chain_holds());
        let c = containment_check(&butterfly(), 2);
        assert!(c.in_s_k && c.k_funnel && c.chain_holds());
    }
}
