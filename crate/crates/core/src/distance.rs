//! Deletion distance to a funnel: the fewest vertices (or edges) whose
//! removal leaves a graph with no forbidden path and no cycle.
//!
//! The search branches on a minimal forbidden path `v1 .. vk`: a solution
//! must delete a path element, one of two in-neighbors of `v1`, or one of two
//! out-neighbors of `vk`, and the first path element can stand in for any
//! other. That gives at most five children per node in both modes. Once no
//! forbidden path is left, the remaining cycles are broken one deletion each.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funnel::find_minimal_forbidden_path;
use crate::graph::Digraph;

/// Oracle size limits.
pub const BRUTE_MAX_VERTICES: usize = 10;
pub const BRUTE_MAX_EDGES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vertex,
    Edge,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vertex" => Ok(Mode::Vertex),
            "edge" => Ok(Mode::Edge),
            _ => Err(format!("unknown mode '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Vertices(Vec<usize>),
    Edges(Vec<(usize, usize)>),
}

impl Certificate {
    pub fn len(&self) -> usize {
        match self {
            Certificate::Vertices(v) => v.len(),
            Certificate::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The graph with the deletions applied; deleted vertices are dropped
    /// and the rest renumbered in order.
    pub fn apply(&self, g: &Digraph) -> Digraph {
        match self {
            Certificate::Vertices(del) => {
                let keep: Vec<usize> = (0..g.n()).filter(|v| !del.contains(v)).collect();
                g.induced_subgraph(&keep).graph
            }
            Certificate::Edges(del) => g.without_edges(del),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub mode: Mode,
    pub d: usize,
    pub certificate: Certificate,
    pub nodes_explored: u64,
}

/// Funnel test for arbitrary digraphs: acyclic and free of forbidden paths.
pub fn is_funnel(g: &Digraph) -> bool {
    find_minimal_forbidden_path(g).is_none() && g.is_acyclic()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Item {
    Vertex(usize),
    Edge(usize, usize),
}

/// Deletes an item; a deleted vertex keeps its index but loses its edges.
fn apply_item(g: &Digraph, item: Item) -> Digraph {
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| match item {
            Item::Vertex(x) => u != x && v != x,
            Item::Edge(a, b) => (u, v) != (a, b),
        })
        .collect();
    Digraph::new(g.labels().to_vec(), edges).expect("subgraph of a valid graph")
}

fn candidates(g: &Digraph, path: &[usize], mode: Mode) -> Vec<Item> {
    let first = path[0];
    let last = *path.last().unwrap();
    let mut ins: Vec<usize> = g.in_neighbors(first).to_vec();
    ins.sort_unstable();
    ins.truncate(2);
    let mut outs: Vec<usize> = g.out_neighbors(last).to_vec();
    outs.sort_unstable();
    outs.truncate(2);
    let mut items = Vec::with_capacity(5);
    match mode {
        Mode::Vertex => {
            items.push(Item::Vertex(first));
            items.extend(ins.into_iter().map(Item::Vertex));
            items.extend(outs.into_iter().map(Item::Vertex));
        }
        Mode::Edge => {
            if path.len() > 1 {
                items.push(Item::Edge(path[0], path[1]));
            }
            items.extend(ins.into_iter().map(|a| Item::Edge(a, first)));
            items.extend(outs.into_iter().map(|b| Item::Edge(last, b)));
        }
    }
    let mut seen = Vec::with_capacity(items.len());
    items.retain(|it| {
        let fresh = !seen.contains(it);
        seen.push(*it);
        fresh
    });
    items
}

/// Strongly connected components (Tarjan, iterative), each sorted, listed
/// by smallest member.
pub fn strongly_connected_components(g: &Digraph) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if let Some(&w) = g.out_neighbors(v).get(top.1) {
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// One deletion breaking the cycle through the smallest-index cyclic vertex.
fn cycle_breaker(g: &Digraph, mode: Mode) -> Option<Item> {
    let comp = strongly_connected_components(g).into_iter().find(|c| c.len() > 1)?;
    Some(match mode {
        Mode::Vertex => Item::Vertex(comp[0]),
        Mode::Edge => {
            let v = comp[0];
            let w = g
                .out_neighbors(v)
                .iter()
                .copied()
                .filter(|w| comp.binary_search(w).is_ok())
                .min()
                .expect("a vertex of a cyclic component has an edge inside it");
            Item::Edge(v, w)
        }
    })
}

struct Search {
    mode: Mode,
    nodes: u64,
    chosen: Vec<Item>,
}

impl Search {
    fn run(&mut self, g: &Digraph, budget: usize) -> bool {
        self.nodes += 1;
        if let Some(path) = find_minimal_forbidden_path(g) {
            if budget == 0 {
                return false;
            }
            for item in candidates(g, &path, self.mode) {
                self.chosen.push(item);
                if self.run(&apply_item(g, item), budget - 1) {
                    return true;
                }
                self.chosen.pop();
            }
            return false;
        }
        match cycle_breaker(g, self.mode) {
            None => true,
            Some(_) if budget == 0 => false,
            Some(item) => {
                self.chosen.push(item);
                if self.run(&apply_item(g, item), budget - 1) {
                    return true;
                }
                self.chosen.pop();
                false
            }
        }
    }
}

fn certificate(mode: Mode, items: &[Item]) -> Certificate {
    match mode {
        Mode::Vertex => {
            let mut vs: Vec<usize> = items
                .iter()
                .map(|it| match *it {
                    Item::Vertex(v) => v,
                    Item::Edge(..) => unreachable!(),
                })
                .collect();
            vs.sort_unstable();
            Certificate::Vertices(vs)
        }
        Mode::Edge => {
            let mut es: Vec<(usize, usize)> = items
                .iter()
                .map(|it| match *it {
                    Item::Edge(u, v) => (u, v),
                    Item::Vertex(_) => unreachable!(),
                })
                .collect();
            es.sort_unstable();
            Certificate::Edges(es)
        }
    }
}

/// Minimum deletions turning `g` into a funnel, by iterative deepening up to
/// `max_d`. `O(5^d (|V| + |E|))` nodes times the per-node work.
pub fn deletion_distance(g: &Digraph, mode: Mode, max_d: usize) -> Result<DistanceResult> {
    let mut search = Search {
        mode,
        nodes: 0,
        chosen: Vec::new(),
    };
    for d in 0..=max_d {
        search.chosen.clear();
        if search.run(g, d) {
            let cert = certificate(mode, &search.chosen);
            assert!(is_funnel(&cert.apply(g)), "certificate failed re-verification");
            return Ok(DistanceResult {
                mode,
                d: cert.len(),
                certificate: cert,
                nodes_explored: search.nodes,
            });
        }
    }
    Err(Error::Exceeded(max_d))
}

/// Exhaustive oracle: all deletion sets by increasing size.
pub fn brute_force_distance(g: &Digraph, mode: Mode, max_d: usize) -> Result<DistanceResult> {
    let universe = match mode {
        Mode::Vertex if g.n() > BRUTE_MAX_VERTICES => {
            return Err(Error::TooLarge(format!("{} vertices (limit {BRUTE_MAX_VERTICES})", g.n())))
        }
        Mode::Edge if g.edge_count() > BRUTE_MAX_EDGES => {
            return Err(Error::TooLarge(format!(
                "{} edges (limit {BRUTE_MAX_EDGES})",
                g.edge_count()
            )))
        }
        Mode::Vertex => g.n(),
        Mode::Edge => g.edge_count(),
    };
    let mut tried = 0u64;
    for size in 0..=max_d.min(universe) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            tried += 1;
            let cert = match mode {
                Mode::Vertex => Certificate::Vertices(combo.clone()),
                Mode::Edge => Certificate::Edges(combo.iter().map(|&i| g.edges()[i]).collect()),
            };
            if is_funnel(&cert.apply(g)) {
                return Ok(DistanceResult {
                    mode,
                    d: size,
                    certificate: cert,
                    nodes_explored: tried,
                });
            }
            if !next_combination(&mut combo, universe) {
                break;
            }
        }
    }
    Err(Error::Exceeded(max_d))
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
