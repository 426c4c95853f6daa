//! Brute-force oracles and random instance builders shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeSet;

use funnelmatch::{Digraph, LabeledDag};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random DAG with `n <= max_n` vertices and at most `max_e` edges over the
/// first `sigma` letters. Vertex numbering is shuffled so that index order is
/// not a topological order.
pub fn random_dag(rng: &mut ChaCha8Rng, max_n: usize, max_e: usize, sigma: u8) -> LabeledDag {
    let n = rng.random_range(1..=max_n);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let e = rng.random_range(0..=pairs.len().min(max_e));
    pairs.truncate(e);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges = pairs.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    let labels = (0..n).map(|_| b'a' + rng.random_range(0..sigma)).collect();
    LabeledDag::new(Digraph::new(labels, edges).unwrap()).unwrap()
}

pub fn random_pattern(rng: &mut ChaCha8Rng, max_m: usize, sigma: u8) -> Vec<u8> {
    let m = rng.random_range(1..=max_m);
    (0..m).map(|_| b'a' + rng.random_range(0..sigma)).collect()
}

/// Every path whose labels spell a non-empty prefix of `s`. Paths are grown
/// one vertex at a time from every start vertex; growth stops as soon as the
/// labels leave the pattern.
pub fn prefix_paths(g: &Digraph, s: &[u8]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..g.n()).filter(|&v| g.label(v) == s[0]).map(|v| vec![v]).collect();
    while let Some(path) = stack.pop() {
        let len = path.len();
        if len < s.len() {
            for &w in g.out_neighbors(*path.last().unwrap()) {
                if g.label(w) == s[len] {
                    let mut next = path.clone();
                    next.push(w);
                    stack.push(next);
                }
            }
        }
        out.push(path);
    }
    out
}

pub struct Occurrences {
    pub paths: Vec<Vec<usize>>,
    pub ends: BTreeSet<usize>,
    pub starts: BTreeSet<usize>,
}

pub fn occurrences(g: &Digraph, s: &[u8]) -> Occurrences {
    let paths: Vec<Vec<usize>> = prefix_paths(g, s).into_iter().filter(|p| p.len() == s.len()).collect();
    Occurrences {
        ends: paths.iter().map(|p| *p.last().unwrap()).collect(),
        starts: paths.iter().map(|p| p[0]).collect(),
        paths,
    }
}

/// `B_v`: every `i` such that some path ending at `v` spells `s[..i]`.
pub fn prefix_match_sets(g: &Digraph, s: &[u8]) -> Vec<BTreeSet<usize>> {
    let mut b: Vec<BTreeSet<usize>> = vec![BTreeSet::from([0]); g.n()];
    for p in prefix_paths(g, s) {
        b[*p.last().unwrap()].insert(p.len());
    }
    b
}

/// `x` is a border of the length-`y` prefix: proper, possibly empty.
pub fn is_border(s: &[u8], x: usize, y: usize) -> bool {
    x < y && s[..x] == s[y - x..y]
}

/// Elements not a border of another element, i.e. the maximal elements of
/// the set in the border order.
pub fn maximal_by_borders(s: &[u8], set: &BTreeSet<usize>) -> BTreeSet<usize> {
    set.iter()
        .copied()
        .filter(|&x| !set.iter().any(|&y| is_border(s, x, y)))
        .collect()
}

/// All source-to-sink paths with at least one edge.
pub fn source_sink_paths(g: &Digraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..g.n())
        .filter(|&v| g.in_degree(v) == 0 && g.out_degree(v) > 0)
        .map(|v| vec![v])
        .collect();
    while let Some(path) = stack.pop() {
        let v = *path.last().unwrap();
        if g.out_degree(v) == 0 {
            out.push(path);
            continue;
        }
        for &w in g.out_neighbors(v) {
            let mut next = path.clone();
            next.push(w);
            stack.push(next);
        }
    }
    out
}

/// Path counts by enumeration: `(mu_s, mu_t)`, both 1 on isolated vertices.
pub fn brute_mu(g: &Digraph) -> (Vec<u64>, Vec<u64>) {
    let n = g.n();
    let mut mu_s = vec![0u64; n];
    let mut mu_t = vec![0u64; n];
    for v in 0..n {
        if g.is_isolated(v) {
            mu_s[v] = 1;
            mu_t[v] = 1;
        }
    }
    // Every source-to-v path is a prefix of some source-to-sink path; count
    // distinct prefixes.
    let paths = source_sink_paths(g);
    let mut prefixes = BTreeSet::new();
    let mut suffixes = BTreeSet::new();
    for p in &paths {
        for i in 1..=p.len() {
            prefixes.insert(p[..i].to_vec());
            suffixes.insert(p[i - 1..].to_vec());
        }
    }
    for p in prefixes {
        mu_s[*p.last().unwrap()] += 1;
    }
    for p in suffixes {
        mu_t[p[0]] += 1;
    }
    (mu_s, mu_t)
}

/// Number of source-to-sink paths through each edge.
pub fn brute_edge_mu(g: &Digraph) -> std::collections::BTreeMap<(usize, usize), u64> {
    let mut mu = std::collections::BTreeMap::new();
    for p in source_sink_paths(g) {
        for w in p.windows(2) {
            *mu.entry((w[0], w[1])).or_insert(0) += 1;
        }
    }
    mu
}

/// Smallest `k >= 1` such that every source-to-sink path has an edge on at
/// most `k` source-to-sink paths.
pub fn brute_min_k_funnel(g: &Digraph) -> u64 {
    let mu = brute_edge_mu(g);
    source_sink_paths(g)
        .iter()
        .map(|p| p.windows(2).map(|w| mu[&(w[0], w[1])]).min().unwrap())
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Funnel by definition: no path from a merging to a forking vertex with
/// unit interior.
pub fn brute_is_funnel(g: &Digraph) -> bool {
    let n = g.n();
    for a in 0..n {
        if g.in_degree(a) <= 1 {
            continue;
        }
        // Walk through unit vertices from a.
        let mut v = a;
        let mut steps = 0;
        loop {
            if g.out_degree(v) > 1 {
                return false;
            }
            if g.out_degree(v) == 0 || steps > n {
                break;
            }
            let w = g.out_neighbors(v)[0];
            if g.out_degree(w) > 1 {
                return false;
            }
            if g.in_degree(w) != 1 {
                break;
            }
            v = w;
            steps += 1;
        }
    }
    g.is_acyclic()
}

/// Non-empty borders of the length-`i` prefix, `i` itself included, as a
/// bit mask over lengths.
pub fn prefix_border_mask(s: &[u8], i: usize) -> u64 {
    (1..=i).filter(|&x| x == i || is_border(s, x, i)).fold(0, |acc, x| acc | 1 << x)
}

/// Brute-force PS cell: some non-empty border of the length-`i` prefix and
/// some non-empty border of the length-`j` suffix have lengths summing to m.
pub fn brute_ps(s: &[u8], i: usize, j: usize) -> bool {
    let m = s.len();
    if i == 0 || j == 0 {
        return false;
    }
    let rev: Vec<u8> = s.iter().rev().copied().collect();
    let p = prefix_border_mask(s, i);
    let q = prefix_border_mask(&rev, j);
    (1..=i).any(|a| p >> a & 1 == 1 && a < m && q >> (m - a) & 1 == 1)
}
