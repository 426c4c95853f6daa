//! Deterministic fixtures and seeded random instances.
//!
//! Every instance is a pure function of its [`GenSpec`]: the same spec
//! (seed included) yields a byte-identical graph file.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_label_byte, Digraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GenKind {
    Path { n: usize },
    /// Uniform random recursive tree, edges parent -> child.
    OutTree { n: usize },
    /// Mirror of `OutTree`, edges child -> parent; the root is `n - 1`.
    InTree { n: usize },
    Diamond,
    /// `x1, x2 -> u -> v -> y1, y2`, numbered 0..6 in that order.
    Butterfly,
    /// Sources `0..k` feed `x = k + 1`; the extra source `k` feeds
    /// `y = k + 2`; `x -> y`, `x -> k + 3` and `y -> k + 4 .. 2k + 4`.
    Fig2 { k: usize },
    /// Each pair `i < j` becomes an edge independently with probability `p`.
    RandomDag { n: usize, p: f64 },
    /// `base` with a random path relabeled to spell `pattern`.
    PlantedMatch { base: Box<GenKind>, pattern: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub seed: u64,
    /// Labels are drawn uniformly from the first `sigma` letters from `a`.
    pub sigma: usize,
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64, sigma: usize) -> Self {
        GenSpec { kind, seed, sigma }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Digraph,
    pub pattern: Option<Vec<u8>>,
    /// Vertices of the planted occurrence, if any.
    pub planted_path: Option<Vec<usize>>,
}

/// Unlabeled structure of a fixture (all labels `a`).
pub fn fixture(kind: GenKind) -> Result<Digraph> {
    Ok(generate(&GenSpec::new(kind, 0, 1))?.graph)
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.sigma == 0 || spec.sigma > 26 {
        return Err(Error::InvalidSpec(format!("sigma must be in 1..=26, got {}", spec.sigma)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    build(&spec.kind, spec.sigma, &mut rng)
}

fn build(kind: &GenKind, sigma: usize, rng: &mut ChaCha8Rng) -> Result<Instance> {
    if let GenKind::PlantedMatch { base, pattern } = kind {
        if matches!(**base, GenKind::PlantedMatch { .. }) {
            return Err(Error::InvalidSpec("planted-match cannot be nested".into()));
        }
        if pattern.is_empty() {
            return Err(Error::InvalidSpec("planted pattern is empty".into()));
        }
        if let Some(&b) = pattern.iter().find(|&&b| !is_label_byte(b)) {
            return Err(Error::InvalidSpec(format!("pattern byte 0x{b:02x} is not a label")));
        }
        let inst = build(base, sigma, rng)?;
        let (graph, path) = plant(&inst.graph, pattern, rng)?;
        return Ok(Instance {
            graph,
            pattern: Some(pattern.clone()),
            planted_path: Some(path),
        });
    }
    let (n, edges) = structure(kind, rng)?;
    let labels = (0..n).map(|_| b'a' + rng.random_range(0..sigma) as u8).collect();
    Ok(Instance {
        graph: Digraph::new(labels, edges)?,
        pattern: None,
        planted_path: None,
    })
}

fn structure(kind: &GenKind, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<(usize, usize)>)> {
    Ok(match *kind {
        GenKind::Path { n } => (n, (1..n).map(|i| (i - 1, i)).collect()),
        GenKind::OutTree { n } => (n, (1..n).map(|i| (rng.random_range(0..i), i)).collect()),
        GenKind::InTree { n } => (
            n,
            (0..n.saturating_sub(1)).map(|i| (i, rng.random_range(i + 1..n))).collect(),
        ),
        GenKind::Diamond => (4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]),
        GenKind::Butterfly => (6, vec![(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]),
        GenKind::Fig2 { k } => {
            if k == 0 {
                return Err(Error::InvalidSpec("fig2 needs k >= 1".into()));
            }
            let (x, y) = (k + 1, k + 2);
            let mut edges: Vec<(usize, usize)> = (0..k).map(|s| (s, x)).collect();
            edges.push((k, y));
            edges.push((x, y));
            edges.push((x, k + 3));
            edges.extend((k + 4..2 * k + 4).map(|t| (y, t)));
            (2 * k + 4, edges)
        }
        GenKind::RandomDag { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("edge probability {p} outside [0, 1]")));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            (n, edges)
        }
        GenKind::PlantedMatch { .. } => unreachable!("handled by build"),
    })
}

/// Relabels a uniformly chosen start and random walk of `pattern.len()`
/// vertices. Requires the graph to be acyclic.
fn plant(g: &Digraph, pattern: &[u8], rng: &mut ChaCha8Rng) -> Result<(Digraph, Vec<usize>)> {
    let order = g
        .topological_order()
        .map_err(|_| Error::InvalidSpec("planting needs an acyclic base".into()))?;
    let m = pattern.len();
    // height[v]: vertices on the longest path starting at v.
    let mut height = vec![1usize; g.n()];
    for &v in order.iter().rev() {
        height[v] = 1 + g.out_neighbors(v).iter().map(|&w| height[w]).max().unwrap_or(0);
    }
    let starts: Vec<usize> = (0..g.n()).filter(|&v| height[v] >= m).collect();
    if starts.is_empty() {
        return Err(Error::InvalidSpec(format!("base graph has no path of {m} vertices")));
    }
    let mut path = vec![starts[rng.random_range(0..starts.len())]];
    while path.len() < m {
        let need = m - path.len();
        let next: Vec<usize> = g
            .out_neighbors(*path.last().unwrap())
            .iter()
            .copied()
            .filter(|&w| height[w] >= need)
            .collect();
        path.push(next[rng.random_range(0..next.len())]);
    }
    let mut labels = g.labels().to_vec();
    for (&v, &c) in path.iter().zip(pattern) {
        labels[v] = c;
    }
    Ok((Digraph::new(labels, g.edges().to_vec())?, path))
}
