//! Deciders for "does some path of the DAG spell the pattern".
//!
//! * [`match_baseline`] propagates the full prefix-match set `B_v` as a bit
//!   vector, extending each member one symbol: `Θ(m)` work per vertex and
//!   edge in the worst case. It is the reference the others are checked
//!   against.
//! * [`match_w_param`] propagates only the antichain `PI_v` (at most `w`
//!   elements, `w` = leaves of the failure tree).
//! * [`match_sk`] is the same pass, certified by `|PI_v| <= mu_s(v) <= k`.
//! * [`match_tk`] runs it on the reversed graph with the reversed pattern.
//! * [`match_stk`] splits the graph into an `S_k` part and a `T_k` part and
//!   checks crossing edges through the [`PsTable`].

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funnel::{self, Cap, Count};
use crate::graph::{Digraph, LabeledDag};
use crate::pattern::{failure_function, PatternIndex};
use crate::pi::{Merger, PiSet};

/// Default upper bound on the pattern length accepted by [`PsTable`].
pub const PS_DEFAULT_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Baseline,
    #[serde(rename = "w")]
    WParam,
    Sk,
    Tk,
    Stk,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Baseline,
        Algorithm::WParam,
        Algorithm::Sk,
        Algorithm::Tk,
        Algorithm::Stk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::WParam => "w",
            Algorithm::Sk => "sk",
            Algorithm::Tk => "tk",
            Algorithm::Stk => "stk",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub m: usize,
    pub w: Option<usize>,
    pub k_s: Option<Count>,
    pub k_t: Option<Count>,
    pub k_st: Option<Count>,
    /// Class bound the decider was run with.
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub vertices_processed: usize,
    /// Total size of the per-vertex match sets.
    pub pi_mass: u64,
    pub elapsed_ns: u64,
}

/// Outcome of one decider run.
///
/// `end_vertices` lists vertices where an occurrence ends, `start_vertices`
/// where one starts (filled by deciders that scan the reversed graph), and
/// `crossing_edges` the `V1 -> V2` edges used by an occurrence. For `stk`
/// each list only covers the phase that produced it. `found` holds iff any
/// of the three is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    pub found: bool,
    pub algorithm: Algorithm,
    pub end_vertices: Vec<usize>,
    pub start_vertices: Vec<usize>,
    pub crossing_edges: Vec<(usize, usize)>,
    pub parameters: Parameters,
    pub stats: Stats,
}

impl MatchReport {
    fn new(algorithm: Algorithm, m: usize) -> Self {
        MatchReport {
            found: false,
            algorithm,
            end_vertices: Vec::new(),
            start_vertices: Vec::new(),
            crossing_edges: Vec::new(),
            parameters: Parameters {
                m,
                ..Parameters::default()
            },
            stats: Stats::default(),
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.found =
            !(self.end_vertices.is_empty() && self.start_vertices.is_empty() && self.crossing_edges.is_empty());
        self.stats.elapsed_ns = started.elapsed().as_nanos().min(u64::MAX as u128) as u64;
        self
    }
}

/// Full prefix-match sets: `B_v` for every vertex, as sorted lengths.
pub fn prefix_sets(g: &LabeledDag, idx: &PatternIndex) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n()];
    bitset_pass(g, idx, false, |v, bits| {
        out[v] = iter_bits(bits).collect();
    });
    out
}

fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(wi, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Runs the bit-vector pass, calling `visit(v, B_v)` in topological order.
/// With `free`, a vertex's set is dropped once all its out-neighbors are done.
fn bitset_pass(g: &LabeledDag, idx: &PatternIndex, free: bool, mut visit: impl FnMut(usize, &[u64])) {
    let m = idx.m();
    let words = (m + 1).div_ceil(64);
    let mut sets: Vec<Vec<u64>> = vec![Vec::new(); g.n()];
    let mut pending: Vec<usize> = (0..g.n()).map(|v| g.out_degree(v)).collect();
    let mut union = vec![0u64; words];
    let pattern = idx.pattern();
    for &v in g.topo() {
        union.iter_mut().for_each(|w| *w = 0);
        union[0] = 1;
        for &u in g.in_neighbors(v) {
            for (a, b) in union.iter_mut().zip(&sets[u]) {
                *a |= b;
            }
        }
        let label = g.label(v);
        let mut next = vec![0u64; words];
        next[0] = 1;
        for i in iter_bits(&union) {
            // S[i + 1] in 1-based terms.
            if i < m && pattern[i] == label {
                next[(i + 1) / 64] |= 1 << ((i + 1) % 64);
            }
        }
        visit(v, &next);
        sets[v] = next;
        if free {
            for &u in g.in_neighbors(v) {
                pending[u] -= 1;
                if pending[u] == 0 {
                    sets[u] = Vec::new();
                }
            }
        }
    }
}

/// Reference decider over full prefix-match sets.
pub fn match_baseline(g: &LabeledDag, idx: &PatternIndex) -> MatchReport {
    let started = Instant::now();
    let m = idx.m();
    let mut report = MatchReport::new(Algorithm::Baseline, m);
    let mut mass = 0u64;
    bitset_pass(g, idx, true, |v, bits| {
        mass += bits.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        if bits[m / 64] >> (m % 64) & 1 == 1 {
            report.end_vertices.push(v);
        }
    });
    report.end_vertices.sort_unstable();
    report.stats.vertices_processed = g.n();
    report.stats.pi_mass = mass;
    report.finish(started)
}

/// Per-vertex antichains. Singletons live in the vertex slot itself, so
/// reading an in-neighbor's set is one memory access in the common case.
struct PiStore {
    slots: Vec<Slot>,
    data: Vec<u32>,
    mass: u64,
}

#[derive(Clone, Copy, Default)]
struct Slot {
    len: u32,
    /// The element itself when `len == 1`, else an offset into `data`.
    val: u32,
}

impl PiStore {
    fn get(&self, v: usize) -> &[u32] {
        let s = &self.slots[v];
        if s.len == 1 {
            std::slice::from_ref(&s.val)
        } else {
            &self.data[s.val as usize..s.val as usize + s.len as usize]
        }
    }
}

/// Computes `PI_v` for every vertex in topological order with the linear
/// merge. With a bound, fails as soon as some `|PI_v|` exceeds it.
fn pi_pass(g: &LabeledDag, idx: &PatternIndex, bound: Option<u64>) -> Result<PiStore> {
    const SOURCE: &[u32] = &[0];
    let mut store = PiStore {
        slots: vec![Slot::default(); g.n()],
        data: Vec::new(),
        mass: 0,
    };
    let mut merger = Merger::new(idx);
    let mut out = Vec::new();
    for &v in g.topo() {
        let ins = g.in_neighbors(v);
        if ins.is_empty() {
            merger.merge_linear([SOURCE], g.label(v), &mut out);
        } else {
            merger.merge_linear(ins.iter().map(|&u| store.get(u)), g.label(v), &mut out);
        }
        if let Some(k) = bound {
            if out.len() as u64 > k {
                return Err(Error::ClassViolation {
                    vertex: v,
                    size: out.len(),
                    bound: k,
                });
            }
        }
        store.mass += out.len() as u64;
        store.slots[v] = if let [one] = out[..] {
            Slot { len: 1, val: one }
        } else {
            let at = u32::try_from(store.data.len()).map_err(|_| Error::Overflow)?;
            store.data.extend_from_slice(&out);
            Slot {
                len: out.len() as u32,
                val: at,
            }
        };
    }
    Ok(store)
}

/// `PI_v` for every vertex, as computed by the antichain deciders.
pub fn pi_sets(g: &LabeledDag, idx: &PatternIndex) -> Vec<PiSet> {
    let store = pi_pass(g, idx, None).expect("unbounded pass cannot fail");
    (0..g.n()).map(|v| PiSet::from_raw(store.get(v).to_vec())).collect()
}

fn report_from_store(g: &LabeledDag, idx: &PatternIndex, store: &PiStore, algorithm: Algorithm) -> MatchReport {
    let m = idx.m() as u32;
    let mut report = MatchReport::new(algorithm, idx.m());
    report.end_vertices = (0..g.n()).filter(|&v| store.get(v).contains(&m)).collect();
    report.stats.vertices_processed = g.n();
    report.stats.pi_mass = store.mass;
    report
}

/// Antichain decider; `O((|V| + |E|) w)` after preprocessing.
pub fn match_w_param(g: &LabeledDag, idx: &PatternIndex) -> MatchReport {
    let started = Instant::now();
    let store = pi_pass(g, idx, None).expect("unbounded pass cannot fail");
    let mut report = report_from_store(g, idx, &store, Algorithm::WParam);
    report.parameters.w = Some(idx.w());
    report.finish(started)
}

/// Decider for graphs in `S_k`: `O(|V| k + |E|)`. Fails with
/// [`Error::ClassViolation`] when a set outgrows `k`, i.e. the graph is not
/// in `S_k`.
pub fn match_sk(g: &LabeledDag, idx: &PatternIndex, k: u64) -> Result<MatchReport> {
    let started = Instant::now();
    let store = pi_pass(g, idx, Some(k))?;
    let mut report = report_from_store(g, idx, &store, Algorithm::Sk);
    report.parameters.bound = Some(k);
    Ok(report.finish(started))
}

/// Decider for graphs in `T_k`, given the index of the reversed pattern.
/// Reports occurrence start vertices.
pub fn match_tk(g: &LabeledDag, idx_rev: &PatternIndex, k: u64) -> Result<MatchReport> {
    let started = Instant::now();
    let rev = g.reverse();
    let store = pi_pass(&rev, idx_rev, Some(k))?;
    let mut report = report_from_store(&rev, idx_rev, &store, Algorithm::Tk);
    report.start_vertices = std::mem::take(&mut report.end_vertices);
    report.parameters.bound = Some(k);
    Ok(report.finish(started))
}

/// `PS[i][j]` for `0 <= i, j <= m`: some border of the length-`i` prefix and
/// some border of the length-`j` suffix, both non-empty (each possibly the
/// whole string), have lengths summing to `m`.
#[derive(Debug, Clone)]
pub struct PsTable {
    m: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl PsTable {
    pub fn new(idx: &PatternIndex) -> Result<Self> {
        Self::with_cap(idx, PS_DEFAULT_CAP)
    }

    pub fn with_cap(idx: &PatternIndex, cap: usize) -> Result<Self> {
        let m = idx.m();
        if m > cap {
            return Err(Error::PatternTooLong { m, cap });
        }
        let mut rev = idx.pattern().to_vec();
        rev.reverse();
        let f_rev = failure_function(&rev)?;
        let stride = (m + 1).div_ceil(64);
        let mut t = PsTable {
            m,
            stride,
            bits: vec![0; (m + 1) * stride],
        };
        for i in 1..=m {
            let fi = idx.fail(i);
            for j in m - i..=m {
                if j == 0 {
                    continue;
                }
                let fj = f_rev[j - 1];
                if i + j == m || t.get(i, fj) || t.get(fi, j) {
                    t.bits[i * stride + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }
}

/// Some prefix match in `pi_u` joins some suffix match in `si_v` into a
/// full occurrence.
pub fn cross_edge_match(pi_u: &[u32], si_v: &[u32], ps: &PsTable) -> bool {
    pi_u.iter()
        .filter(|&&i| i > 0)
        .any(|&i| si_v.iter().any(|&j| j > 0 && ps.get(i as usize, j as usize)))
}

/// Decider for graphs in `ST_k`: `O((|V| + |E|) k^2 + m^2)`.
pub fn match_stk(g: &LabeledDag, idx: &PatternIndex, idx_rev: &PatternIndex, k: u64) -> Result<MatchReport> {
    match_stk_with(g, idx, idx_rev, k, PS_DEFAULT_CAP)
}

/// [`match_stk`] with an explicit pattern-length cap for the PS table.
pub fn match_stk_with(
    g: &LabeledDag,
    idx: &PatternIndex,
    idx_rev: &PatternIndex,
    k: u64,
    ps_cap: usize,
) -> Result<MatchReport> {
    let started = Instant::now();
    let part = funnel::st_partition(g, k)?;
    let ps = PsTable::with_cap(idx, ps_cap)?;

    let sub1 = g.induced_subgraph(&part.v1);
    let g1 = LabeledDag::new(sub1.graph)?;
    let pi = pi_pass(&g1, idx, Some(k)).map_err(|e| relabel_violation(e, &sub1.to_old))?;

    let sub2 = g.induced_subgraph(&part.v2);
    let g2 = LabeledDag::new(sub2.graph)?.reverse();
    let si = pi_pass(&g2, idx_rev, Some(k)).map_err(|e| relabel_violation(e, &sub2.to_old))?;

    let m = idx.m() as u32;
    let mut report = MatchReport::new(Algorithm::Stk, idx.m());
    report.end_vertices = (0..g1.n())
        .filter(|&v| pi.get(v).contains(&m))
        .map(|v| sub1.to_old[v])
        .collect();
    report.start_vertices = (0..g2.n())
        .filter(|&v| si.get(v).contains(&m))
        .map(|v| sub2.to_old[v])
        .collect();
    for &(u, v) in g.edges() {
        if let (Some(a), Some(b)) = (sub1.to_new[u], sub2.to_new[v]) {
            if cross_edge_match(pi.get(a), si.get(b), &ps) {
                report.crossing_edges.push((u, v));
            }
        }
    }
    report.end_vertices.sort_unstable();
    report.start_vertices.sort_unstable();
    report.crossing_edges.sort_unstable();
    report.stats.vertices_processed = g.n();
    report.stats.pi_mass = pi.mass + si.mass;
    report.parameters.bound = Some(k);
    Ok(report.finish(started))
}

fn relabel_violation(e: Error, to_old: &[usize]) -> Error {
    match e {
        Error::ClassViolation { vertex, size, bound } => Error::ClassViolation {
            vertex: to_old[vertex],
            size,
            bound,
        },
        e => e,
    }
}

/// Predicted costs (unit constants) of each decider on this instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub baseline: u128,
    pub w_param: u128,
    pub sk: u128,
    pub tk: u128,
    pub stk: u128,
}

impl CostModel {
    /// Cheapest decider; ties go to `sk`, `tk`, `baseline`, `w`, `stk`.
    pub fn choice(&self) -> Algorithm {
        let order = [
            (Algorithm::Sk, self.sk),
            (Algorithm::Tk, self.tk),
            (Algorithm::Baseline, self.baseline),
            (Algorithm::WParam, self.w_param),
            (Algorithm::Stk, self.stk),
        ];
        order.into_iter().min_by_key(|&(_, c)| c).unwrap().0
    }
}

/// Saturation cap used for class parameters in automatic selection.
const AUTO_CAP: u64 = u32::MAX as u64;

fn k_value(c: Count) -> u128 {
    match c {
        Count::Exact(x) => x as u128,
        Count::Over(cap) => cap as u128 + 1,
    }
}

pub fn cost_model(g: &Digraph, m: usize, w: usize, k_s: Count, k_t: Count, k_st: Count) -> CostModel {
    let (v, e, m, w) = (g.n() as u128, g.edge_count() as u128, m as u128, w as u128);
    let (ks, kt, kst) = (k_value(k_s), k_value(k_t), k_value(k_st));
    CostModel {
        baseline: m * (v + e),
        w_param: (v + e) * w,
        sk: v * ks + e,
        tk: v * kt + e,
        stk: (v + e) * kst * kst + m * m,
    }
}

/// Computes `w`, `k_S`, `k_T`, `k_ST`, and runs the decider with the
/// smallest predicted cost.
pub fn match_auto(g: &LabeledDag, idx: &PatternIndex) -> Result<MatchReport> {
    match_auto_with(g, idx, PS_DEFAULT_CAP)
}

pub fn match_auto_with(g: &LabeledDag, idx: &PatternIndex, ps_cap: usize) -> Result<MatchReport> {
    let started = Instant::now();
    let class = funnel::class_min_k(g, Cap::Saturate(AUTO_CAP))?;
    let costs = cost_model(g, idx.m(), idx.w(), class.k_s, class.k_t, class.k_st);
    let bound = |c: Count| c.exact().expect("a saturated class parameter is never the cheapest");
    let mut report = match costs.choice() {
        Algorithm::Baseline => match_baseline(g, idx),
        Algorithm::WParam => match_w_param(g, idx),
        Algorithm::Sk => match_sk(g, idx, bound(class.k_s))?,
        Algorithm::Tk => match_tk(g, &idx.reversed(), bound(class.k_t))?,
        Algorithm::Stk => match_stk_with(g, idx, &idx.reversed(), bound(class.k_st), ps_cap)?,
    };
    report.parameters.w = Some(idx.w());
    report.parameters.k_s = Some(class.k_s);
    report.parameters.k_t = Some(class.k_t);
    report.parameters.k_st = Some(class.k_st);
    report.stats.elapsed_ns = started.elapsed().as_nanos().min(u64::MAX as u128) as u64;
    Ok(report)
}

/// Runs one named decider (or automatic selection for `None`), computing
/// the class bound the decider needs.
pub fn run(g: &LabeledDag, idx: &PatternIndex, algorithm: Option<Algorithm>, ps_cap: usize) -> Result<MatchReport> {
    let Some(algorithm) = algorithm else {
        return match_auto_with(g, idx, ps_cap);
    };
    let exact = |c: Count| c.exact().ok_or(Error::Overflow);
    Ok(match algorithm {
        Algorithm::Baseline => match_baseline(g, idx),
        Algorithm::WParam => match_w_param(g, idx),
        Algorithm::Sk => {
            let k = exact(funnel::class_min_k(g, Cap::Exact)?.k_s)?;
            match_sk(g, idx, k)?
        }
        Algorithm::Tk => {
            let k = exact(funnel::class_min_k(g, Cap::Exact)?.k_t)?;
            match_tk(g, &idx.reversed(), k)?
        }
        Algorithm::Stk => {
            let k = exact(funnel::class_min_k(g, Cap::Exact)?.k_st)?;
            match_stk_with(g, idx, &idx.reversed(), k, ps_cap)?
        }
    })
}

/// One path spelling the pattern and ending at `end`, by memoized backward
/// search. Meant for checking reports on small instances.
pub fn witness_path(g: &Digraph, pattern: &[u8], end: usize) -> Option<Vec<usize>> {
    let m = pattern.len();
    // dead[v * m + p]: no path ending at v spells pattern[..=p].
    let mut dead = vec![false; g.n() * m];
    fn go(g: &Digraph, s: &[u8], v: usize, p: usize, dead: &mut [bool], path: &mut Vec<usize>) -> bool {
        let m = s.len();
        if dead[v * m + p] || g.label(v) != s[p] {
            return false;
        }
        path.push(v);
        if p == 0 {
            return true;
        }
        for &u in g.in_neighbors(v) {
            if go(g, s, u, p - 1, dead, path) {
                return true;
            }
        }
        path.pop();
        dead[v * m + p] = true;
        false
    }
    if m == 0 {
        return None;
    }
    let mut path = Vec::new();
    go(g, pattern, end, m - 1, &mut dead, &mut path).then(|| {
        path.reverse();
        path
    })
}
