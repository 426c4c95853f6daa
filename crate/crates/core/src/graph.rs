//! Vertex-labeled directed graphs and DAGs.
//!
//! A [`Digraph`] is an arbitrary simple directed graph (no self-loops, no
//! parallel edges) whose vertices carry single printable ASCII labels. A
//! [`LabeledDag`] wraps a `Digraph` that is known to be acyclic together with
//! its topological order, sources and sinks.
//!
//! The text format read by [`parse_graph`] is
//!
//! ```text
//! <n> <m>
//! <n label characters>
//! <u> <v>      (m lines, 0-indexed)
//! ```
//!
//! where blank lines and lines starting with `#` are ignored.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Labels are printable, non-space ASCII.
pub fn is_label_byte(b: u8) -> bool {
    (0x21..=0x7e).contains(&b)
}

/// Sorted set of distinct label bytes; a symbol's code is its rank.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
    codes: Vec<Option<u16>>,
}

impl Alphabet {
    pub fn from_bytes<I: IntoIterator<Item = u8>>(bytes: I) -> Self {
        let mut seen = [false; 256];
        for b in bytes {
            seen[b as usize] = true;
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        let mut codes = vec![None; 256];
        for (c, &b) in symbols.iter().enumerate() {
            codes[b as usize] = Some(c as u16);
        }
        Alphabet { symbols, codes }
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::from_bytes(self.symbols.iter().chain(other.symbols.iter()).copied())
    }

    #[inline]
    pub fn code(&self, b: u8) -> Option<usize> {
        self.codes.get(b as usize).copied().flatten().map(usize::from)
    }

    pub fn symbol(&self, code: usize) -> u8 {
        self.symbols[code]
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Neighbor lists in compressed form: `targets[offsets[v]..offsets[v + 1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    /// Lists keep the order in which the pairs appear.
    fn build(n: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, _) in pairs.clone() {
            offsets[u + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for (u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        Adjacency { offsets, targets }
    }

    fn get(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn len(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Simple directed graph with one label per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_adj: Adjacency,
    in_adj: Adjacency,
    labels: Vec<u8>,
    alphabet: Alphabet,
}

impl Digraph {
    /// Builds a graph from labels (one per vertex) and an edge list,
    /// rejecting self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(labels: Vec<u8>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if let Some((position, &byte)) = labels.iter().enumerate().find(|(_, &b)| !is_label_byte(b)) {
            return Err(Error::InvalidLabel { position, byte });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        let out_adj = Adjacency::build(n, edges.iter().copied());
        let in_adj = Adjacency::build(n, edges.iter().map(|&(u, v)| (v, u)));
        let alphabet = Alphabet::from_bytes(labels.iter().copied());
        Ok(Digraph {
            n,
            edges,
            out_adj,
            in_adj,
            labels,
            alphabet,
        })
    }

    /// Unlabeled convenience constructor: every vertex gets label `a`.
    pub fn unlabeled(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Digraph::new(vec![b'a'; n], edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        self.out_adj.get(v)
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        self.in_adj.get(v)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj.len(v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj.len(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_adj.get(u).contains(&v)
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Code of `v`'s label in the graph's own alphabet.
    pub fn label_code(&self, v: usize) -> usize {
        self.alphabet.code(self.labels[v]).expect("label is in alphabet")
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.in_adj.len(v) == 0 && self.out_adj.len(v) == 0
    }

    /// Same vertices and labels with every edge flipped.
    pub fn reverse(&self) -> Digraph {
        Digraph {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            labels: self.labels.clone(),
            alphabet: self.alphabet.clone(),
        }
    }

    /// Subgraph induced by `keep`. New vertex ids follow ascending old ids.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Subgraph {
        let mut to_new = vec![None; self.n];
        let mut to_old: Vec<usize> = keep.iter().copied().filter(|&v| v < self.n).collect();
        to_old.sort_unstable();
        to_old.dedup();
        for (i, &v) in to_old.iter().enumerate() {
            to_new[v] = Some(i);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((to_new[u]?, to_new[v]?)))
            .collect();
        let labels = to_old.iter().map(|&v| self.labels[v]).collect();
        let graph = Digraph::new(labels, edges).expect("induced subgraph of a valid graph is valid");
        Subgraph {
            graph,
            to_old,
            to_new,
        }
    }

    /// Graph with the given edges removed (edges not present are ignored).
    pub fn without_edges(&self, remove: &[(usize, usize)]) -> Digraph {
        let drop: HashSet<(usize, usize)> = remove.iter().copied().collect();
        let edges = self.edges.iter().copied().filter(|e| !drop.contains(e)).collect();
        Digraph::new(self.labels.clone(), edges).expect("edge removal keeps the graph valid")
    }

    /// Contracts `(u, v)`: `v` is merged into `u` (which keeps `u`'s label),
    /// parallel edges collapse and self-loops are dropped. Returns the new
    /// graph and the old-to-new vertex map.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<(Digraph, Vec<usize>)> {
        if !self.has_edge(u, v) {
            return Err(Error::EdgeNotPresent(u, v));
        }
        let map: Vec<usize> = (0..self.n)
            .map(|x| {
                let x = if x == v { u } else { x };
                if x > v {
                    x - 1
                } else {
                    x
                }
            })
            .collect();
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let (a, b) = (map[a], map[b]);
            if a != b && seen.insert((a, b)) {
                edges.push((a, b));
            }
        }
        let labels = (0..self.n).filter(|&x| x != v).map(|x| self.labels[x]).collect();
        Ok((Digraph::new(labels, edges)?, map))
    }

    /// Kahn's algorithm, always emitting the smallest ready vertex first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_adj.len(v)).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &v in self.out_adj.get(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if order.len() < self.n {
            return Err(Error::CycleDetected);
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Renders the graph in the text format accepted by [`parse_graph`].
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.n + 12 * self.edges.len());
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        if self.n > 0 {
            out.push_str(std::str::from_utf8(&self.labels).expect("labels are ASCII"));
            out.push('\n');
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Result of [`Digraph::induced_subgraph`].
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Digraph,
    /// New id to old id.
    pub to_old: Vec<usize>,
    /// Old id to new id, `None` for dropped vertices.
    pub to_new: Vec<Option<usize>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Parses the graph text format.
pub fn parse_graph(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(Error::MalformedHeader {
        line: 1,
        reason: "missing header".into(),
    })?;
    let (n, m) = parse_pair(header).ok_or_else(|| Error::MalformedHeader {
        line,
        reason: format!("expected \"<n> <m>\", found {header:?}"),
    })?;

    let labels: Vec<u8> = if n == 0 {
        Vec::new()
    } else {
        let (_, label_line) = lines
            .next()
            .ok_or(Error::LabelLengthMismatch { expected: n, found: 0 })?;
        let bytes = label_line.trim().as_bytes().to_vec();
        if bytes.len() != n {
            return Err(Error::LabelLengthMismatch {
                expected: n,
                found: bytes.len(),
            });
        }
        bytes
    };

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next().ok_or_else(|| Error::MalformedEdge {
            line: 0,
            reason: format!("expected {m} edges, found {}", edges.len()),
        })?;
        let e = parse_pair(text).ok_or_else(|| Error::MalformedEdge {
            line,
            reason: format!("expected \"<u> <v>\", found {text:?}"),
        })?;
        edges.push(e);
    }
    if let Some((line, text)) = lines.next() {
        return Err(Error::MalformedEdge {
            line,
            reason: format!("unexpected trailing content {text:?}"),
        });
    }
    Digraph::new(labels, edges)
}

/// Parses a pattern file: the first non-empty line, trailing whitespace removed.
pub fn parse_pattern(text: &str) -> Result<Vec<u8>> {
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let bytes = line.as_bytes().to_vec();
    if bytes.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if let Some(&b) = bytes.iter().find(|&&b| !is_label_byte(b)) {
        return Err(Error::InvalidPatternByte(b));
    }
    Ok(bytes)
}

/// A digraph certified acyclic, with its (deterministic) topological order.
#[derive(Debug, Clone)]
pub struct LabeledDag {
    graph: Digraph,
    topo: Vec<usize>,
    position: Vec<usize>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl LabeledDag {
    pub fn new(graph: Digraph) -> Result<Self> {
        let topo = graph.topological_order()?;
        let mut position = vec![0; graph.n()];
        for (i, &v) in topo.iter().enumerate() {
            position[v] = i;
        }
        let sources = (0..graph.n()).filter(|&v| graph.in_degree(v) == 0).collect();
        let sinks = (0..graph.n()).filter(|&v| graph.out_degree(v) == 0).collect();
        Ok(LabeledDag {
            graph,
            topo,
            position,
            sources,
            sinks,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn into_graph(self) -> Digraph {
        self.graph
    }

    pub fn topo(&self) -> &[usize] {
        &self.topo
    }

    /// Index of `v` in the topological order.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn reverse(&self) -> LabeledDag {
        LabeledDag::new(self.graph.reverse()).expect("reverse of a DAG is a DAG")
    }
}

impl Deref for LabeledDag {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Digraph {
        Digraph::new(b"abcd".to_vec(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = parse_graph("2 1\nab\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.labels(), b"ab");

        let g = parse_graph("1 0\na\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));

        let g = parse_graph("3 3\nabc\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.out_neighbors(0), &[1, 2]);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let g = parse_graph("# a graph\n\n2 1\n# labels\nxy\n\n0 1\n# done\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("x 1\n"), Err(Error::MalformedHeader { .. })));
        assert!(matches!(parse_graph(""), Err(Error::MalformedHeader { .. })));
        assert!(matches!(
            parse_graph("2 0\nabc\n"),
            Err(Error::LabelLengthMismatch { expected: 2, found: 3 })
        ));
        assert_eq!(parse_graph("2 1\nab\n0 2\n"), Err(Error::VertexOutOfRange { vertex: 2, n: 2 }));
        assert_eq!(parse_graph("2 1\nab\n1 1\n"), Err(Error::SelfLoop(1)));
        assert_eq!(parse_graph("2 2\nab\n0 1\n0 1\n"), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(parse_graph("2 2\nab\n0 1\n"), Err(Error::MalformedEdge { .. })));
        assert!(matches!(parse_graph("2 1\nab\n0 1\n1 0\n"), Err(Error::MalformedEdge { .. })));
    }

    #[test]
    fn topological_order_examples() {
        let path = Digraph::unlabeled(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.topological_order().unwrap(), vec![0, 1, 2]);
        let cycle = Digraph::unlabeled(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.topological_order(), Err(Error::CycleDetected));
        assert_eq!(diamond().topological_order().unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn min_index_tie_break() {
        let g = Digraph::unlabeled(4, vec![(3, 0), (2, 1)]).unwrap();
        assert_eq!(g.topological_order().unwrap(), vec![2, 1, 3, 0]);
    }

    #[test]
    fn reverse_examples() {
        let g = Digraph::unlabeled(2, vec![(0, 1)]).unwrap();
        assert_eq!(g.reverse().edges(), &[(1, 0)]);
        assert_eq!(g.reverse().reverse(), g);
        let r = LabeledDag::new(diamond().reverse()).unwrap();
        assert_eq!(r.sources(), &[3]);
        assert_eq!(r.sinks(), &[0]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let d = diamond();
        let all = d.induced_subgraph(&[0, 1, 2, 3]);
        assert_eq!(all.graph, d);

        let s = d.induced_subgraph(&[3, 0]);
        assert_eq!((s.graph.n(), s.graph.edge_count()), (2, 0));
        assert_eq!(s.to_old, vec![0, 3]);
        assert_eq!(s.to_new, vec![Some(0), None, None, Some(1)]);

        let path = Digraph::unlabeled(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.induced_subgraph(&[0, 1]).graph.edges(), &[(0, 1)]);
    }

    #[test]
    fn contraction_examples() {
        let path = Digraph::unlabeled(3, vec![(0, 1), (1, 2)]).unwrap();
        let (c, map) = path.contract_edge(0, 1).unwrap();
        assert_eq!((c.n(), c.edges()), (2, &[(0, 1)][..]));
        assert_eq!(map, vec![0, 0, 1]);

        let tri = Digraph::unlabeled(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let (c, _) = tri.contract_edge(0, 1).unwrap();
        assert_eq!((c.n(), c.edges()), (2, &[(0, 1)][..]));

        let two = Digraph::unlabeled(2, vec![(0, 1), (1, 0)]).unwrap();
        let (c, _) = two.contract_edge(0, 1).unwrap();
        assert_eq!((c.n(), c.edge_count()), (1, 0));

        assert_eq!(path.contract_edge(0, 2), Err(Error::EdgeNotPresent(0, 2)));
    }

    #[test]
    fn text_round_trip() {
        let d = diamond();
        assert_eq!(parse_graph(&d.to_text()).unwrap(), d);
        let empty = Digraph::unlabeled(0, vec![]).unwrap();
        assert_eq!(parse_graph(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn pattern_file() {
        assert_eq!(parse_pattern("abc\n").unwrap(), b"abc");
        assert_eq!(parse_pattern("\n"), Err(Error::EmptyPattern));
    }

    #[test]
    fn alphabet_codes() {
        let a = Alphabet::from_bytes(b"cab".iter().copied());
        assert_eq!(a.symbols(), b"abc");
        assert_eq!(a.code(b'c'), Some(2));
        assert_eq!(a.code(b'z'), None);
        assert_eq!(a.union(&Alphabet::from_bytes(*b"z")).len(), 4);
    }
}
