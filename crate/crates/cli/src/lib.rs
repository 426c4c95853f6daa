//! Subcommands behind the `funnelmatch` binary.
//!
//! Exit codes: 0 when the answer is positive (match found, class member,
//! distance within budget), 1 when it is negative, 2 on any error.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use funnelmatch::distance::{self, strongly_connected_components, DistanceResult};
use funnelmatch::funnel::{self, Cap, Count};
use funnelmatch::generators::{generate, GenKind, GenSpec};
use funnelmatch::matcher::{self, Algorithm, MatchReport, PS_DEFAULT_CAP};
use funnelmatch::{parse_graph, parse_pattern, Digraph, LabeledDag, PatternIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] funnelmatch::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "funnelmatch", version, about = "String matching and funnel analysis on labeled DAGs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Baseline,
    W,
    Sk,
    Tk,
    Stk,
    Auto,
}

impl AlgoArg {
    fn algorithm(self) -> Option<Algorithm> {
        match self {
            AlgoArg::Baseline => Some(Algorithm::Baseline),
            AlgoArg::W => Some(Algorithm::WParam),
            AlgoArg::Sk => Some(Algorithm::Sk),
            AlgoArg::Tk => Some(Algorithm::Tk),
            AlgoArg::Stk => Some(Algorithm::Stk),
            AlgoArg::Auto => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Funnel,
    Kfunnel,
    Sk,
    Tk,
    Stk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Forbidden,
    Bfs,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Path,
    OutTree,
    InTree,
    Diamond,
    Butterfly,
    Fig2,
    RandomDag,
    PlantedMatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Path text `abab...` with pattern `(ab)^(m/2)`.
    Periodic,
    OutTree,
    InTree,
    /// Edge probability `min(1, 4/n)`; generation is quadratic in `n`.
    RandomDag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether some path of the graph spells the pattern.
    Match {
        graph: PathBuf,
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Longest pattern accepted by the ST_k decider's table.
        #[arg(long, default_value_t = PS_DEFAULT_CAP)]
        ps_cap: usize,
    },
    /// Path counts, class parameters and funnel structure of a DAG.
    Analyze {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Saturate path counts above this value instead of failing on overflow.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Test membership in a graph class.
    Recognize {
        graph: PathBuf,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Minimum number of deletions turning the graph into a funnel.
    Distance {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
        mode: ModeArg,
        #[arg(long, default_value_t = 5)]
        max_d: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a generated instance in the graph file format.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        /// Base structure for planted-match.
        #[arg(long, value_enum)]
        base: Option<KindArg>,
        /// Pattern to plant (planted-match only).
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the planted pattern to this file.
        #[arg(long)]
        pattern_out: Option<PathBuf>,
    },
    /// Time deciders on a generated instance family.
    Bench {
        #[arg(long, value_enum, default_value_t = Family::OutTree)]
        family: Family,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        sizes: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "baseline,w,sk,tk,stk")]
        algos: Vec<AlgoArg>,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Runs per measurement; the fastest is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
        format: BenchFormat,
    },
    /// Dump the failure function, `w` and the failure-tree parentheses.
    Pattern {
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn read_graph(path: &Path) -> CliResult<Digraph> {
    Ok(parse_graph(&read(path)?)?)
}

fn read_dag(path: &Path) -> CliResult<LabeledDag> {
    Ok(LabeledDag::new(read_graph(path)?)?)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn edge_list(es: &[(usize, usize)]) -> String {
    if es.is_empty() {
        "-".into()
    } else {
        es.iter().map(|(u, v)| format!("({u},{v})")).collect::<Vec<_>>().join(" ")
    }
}

fn code(positive: bool) -> u8 {
    if positive {
        0
    } else {
        1
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    match &cli.command {
        Command::Match {
            graph,
            pattern,
            algo,
            format,
            ps_cap,
        } => cmd_match(graph, pattern, *algo, *format, *ps_cap, out),
        Command::Analyze { graph, format, cap } => cmd_analyze(graph, *format, *cap, out),
        Command::Recognize {
            graph,
            class,
            k,
            method,
            format,
        } => cmd_recognize(graph, *class, *k, *method, *format, out),
        Command::Distance {
            graph,
            mode,
            max_d,
            format,
        } => cmd_distance(graph, *mode, *max_d, *format, out),
        Command::Gen { .. } => cmd_gen(&cli.command, out),
        Command::Bench {
            family,
            sizes,
            algos,
            m,
            sigma,
            seed,
            reps,
            format,
        } => cmd_bench(
            &BenchConfig {
                family: *family,
                sizes: sizes.clone(),
                algos: algos.clone(),
                m: *m,
                sigma: *sigma,
                seed: *seed,
                reps: *reps,
            },
            *format,
            out,
        ),
        Command::Pattern { pattern, format } => cmd_pattern(pattern, *format, out),
    }
}

fn cmd_match(
    graph: &Path,
    pattern: &Path,
    algo: AlgoArg,
    format: Format,
    ps_cap: usize,
    out: &mut dyn Write,
) -> CliResult<u8> {
    let g = read_dag(graph)?;
    let s = parse_pattern(&read(pattern)?)?;
    let idx = PatternIndex::for_graph(&s, &g)?;
    let report = matcher::run(&g, &idx, algo.algorithm(), ps_cap)?;
    match format {
        Format::Json => emit(out, &report)?,
        Format::Text => write!(out, "{}", match_text(&report))?,
    }
    Ok(code(report.found))
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".into(), |v| v.to_string())
}

pub fn match_text(r: &MatchReport) -> String {
    let p = &r.parameters;
    let mut s = String::new();
    let _ = writeln!(s, "found: {}", if r.found { "yes" } else { "no" });
    let _ = writeln!(s, "algorithm: {}", r.algorithm);
    let _ = writeln!(s, "end vertices: {}", list(&r.end_vertices));
    if matches!(r.algorithm, Algorithm::Tk | Algorithm::Stk) {
        let _ = writeln!(s, "start vertices: {}", list(&r.start_vertices));
    }
    if r.algorithm == Algorithm::Stk {
        let _ = writeln!(s, "crossing edges: {}", edge_list(&r.crossing_edges));
    }
    let _ = writeln!(
        s,
        "parameters: m={} w={} k_S={} k_T={} k_ST={} bound={}",
        p.m,
        opt(&p.w),
        opt(&p.k_s),
        opt(&p.k_t),
        opt(&p.k_st),
        opt(&p.bound)
    );
    let _ = writeln!(
        s,
        "stats: vertices={} pi_mass={} time={:?}",
        r.stats.vertices_processed,
        r.stats.pi_mass,
        Duration::from_nanos(r.stats.elapsed_ns)
    );
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSizes {
    pub k: u64,
    pub v1: usize,
    pub v2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub edges: usize,
    pub sigma: usize,
    pub sources: usize,
    pub sinks: usize,
    /// Isolated vertices, ignored by the funnel predicates.
    pub isolated: usize,
    pub k_s: Count,
    pub k_t: Count,
    pub k_st: Count,
    /// `None` when the minimum exceeds `2^63 - 1`.
    pub min_k_funnel: Option<u64>,
    pub funnel: bool,
    /// Split at `k = k_ST`; `None` when `k_ST` is only known to exceed the cap.
    pub st_partition: Option<PartitionSizes>,
}

pub fn analyze(g: &LabeledDag, cap: Option<u64>) -> CliResult<AnalyzeReport> {
    let cap = cap.map_or(Cap::Exact, Cap::Saturate);
    let class = funnel::class_min_k(g, cap)?;
    let min_k_funnel = match funnel::min_k_funnel_search(g) {
        Ok(k) => Some(k),
        Err(funnelmatch::Error::Overflow) => None,
        Err(e) => return Err(e.into()),
    };
    let st_partition = match class.k_st.exact() {
        Some(k) => {
            let p = funnel::st_partition(g, k)?;
            Some(PartitionSizes {
                k,
                v1: p.v1.len(),
                v2: p.v2.len(),
            })
        }
        None => None,
    };
    Ok(AnalyzeReport {
        n: g.n(),
        edges: g.edge_count(),
        sigma: g.alphabet().len(),
        sources: g.sources().len(),
        sinks: g.sinks().len(),
        isolated: (0..g.n()).filter(|&v| g.is_isolated(v)).count(),
        k_s: class.k_s,
        k_t: class.k_t,
        k_st: class.k_st,
        min_k_funnel,
        funnel: funnel::is_funnel_bfs(g).is_some(),
        st_partition,
    })
}

fn cmd_analyze(graph: &Path, format: Format, cap: Option<u64>, out: &mut dyn Write) -> CliResult<u8> {
    let g = read_dag(graph)?;
    let r = analyze(&g, cap)?;
    match format {
        Format::Json => emit(out, &r)?,
        Format::Text => {
            writeln!(out, "vertices: {}", r.n)?;
            writeln!(out, "edges: {}", r.edges)?;
            writeln!(out, "sigma: {}", r.sigma)?;
            writeln!(out, "sources: {}", r.sources)?;
            writeln!(out, "sinks: {}", r.sinks)?;
            if r.isolated > 0 {
                writeln!(out, "warning: {} isolated vertices ignored by funnel predicates", r.isolated)?;
            }
            writeln!(out, "k_S: {}", r.k_s)?;
            writeln!(out, "k_T: {}", r.k_t)?;
            writeln!(out, "k_ST: {}", r.k_st)?;
            writeln!(out, "min-k-funnel: {}", opt(&r.min_k_funnel))?;
            writeln!(out, "funnel: {}", if r.funnel { "yes" } else { "no" })?;
            match &r.st_partition {
                Some(p) => writeln!(out, "ST_{} partition: |V1|={} |V2|={}", p.k, p.v1, p.v2)?,
                None => writeln!(out, "ST partition: -")?,
            }
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    None,
    /// Minimal forbidden path.
    ForbiddenPath { path: Vec<usize> },
    /// Vertices of a cycle-carrying strongly connected component.
    Cycle { vertices: Vec<usize> },
    Partition { v1: Vec<usize>, v2: Vec<usize> },
    /// Source-to-sink path of k-shared edges.
    SharedPath { path: Vec<usize> },
    /// Vertex whose path count exceeds `k`.
    Vertex { vertex: usize, count: Count },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecognizeReport {
    pub class: ClassArg,
    pub k: u64,
    pub method: Option<MethodArg>,
    pub member: bool,
    pub witness: Witness,
}

fn need_k(k: Option<u64>, class: ClassArg) -> CliResult<u64> {
    match k {
        Some(0) => Err(CliError::Usage("--k must be at least 1".into())),
        Some(k) => Ok(k),
        None => Err(CliError::Usage(format!("--class {class:?} requires --k").to_lowercase())),
    }
}

/// Vertex whose count (under `pick`) exceeds `k`.
fn excess_vertex(g: &LabeledDag, k: u64, pick: impl Fn(&funnel::FunnelProfile, usize) -> Count) -> CliResult<Witness> {
    let prof = funnel::path_counts(g, Cap::Saturate(k))?;
    Ok((0..g.n())
        .find(|&v| pick(&prof, v).exceeds(k))
        .map_or(Witness::None, |vertex| Witness::Vertex {
            vertex,
            count: pick(&prof, vertex),
        }))
}

pub fn recognize(graph: &Digraph, class: ClassArg, k: Option<u64>, method: Option<MethodArg>) -> CliResult<RecognizeReport> {
    let dag = || LabeledDag::new(graph.clone());
    let (k, method, member, witness) = match class {
        ClassArg::Funnel => {
            if k.is_some_and(|k| k != 1) {
                return Err(CliError::Usage("--class funnel takes no --k other than 1".into()));
            }
            let method = method.unwrap_or(MethodArg::Forbidden);
            let (member, witness) = match method {
                MethodArg::Forbidden => match funnel::find_minimal_forbidden_path(graph) {
                    Some(path) => (false, Witness::ForbiddenPath { path }),
                    None => match strongly_connected_components(graph).into_iter().find(|c| c.len() > 1) {
                        Some(vertices) => (false, Witness::Cycle { vertices }),
                        None => (true, Witness::None),
                    },
                },
                MethodArg::Bfs => match funnel::is_funnel_bfs(&dag()?) {
                    Some(p) => (true, Witness::Partition { v1: p.v1, v2: p.v2 }),
                    None => (false, Witness::None),
                },
                MethodArg::Shared => match funnel::k_shared_path(&dag()?, 1) {
                    Some(path) => (false, Witness::SharedPath { path }),
                    None => (true, Witness::None),
                },
            };
            (1, Some(method), member, witness)
        }
        ClassArg::Kfunnel => {
            if method.is_some_and(|m| m != MethodArg::Shared) {
                return Err(CliError::Usage("--class kfunnel supports only --method shared".into()));
            }
            let k = need_k(k, class)?;
            let (member, witness) = match funnel::k_shared_path(&dag()?, k) {
                Some(path) => (false, Witness::SharedPath { path }),
                None => (true, Witness::None),
            };
            (k, Some(MethodArg::Shared), member, witness)
        }
        ClassArg::Sk | ClassArg::Tk | ClassArg::Stk => {
            if method.is_some() {
                return Err(CliError::Usage("--method applies only to funnel and kfunnel".into()));
            }
            let k = need_k(k, class)?;
            let g = dag()?;
            let (member, witness) = match class {
                ClassArg::Sk => {
                    let w = excess_vertex(&g, k, |p, v| p.mu_s(v))?;
                    (w == Witness::None, w)
                }
                ClassArg::Tk => {
                    let w = excess_vertex(&g, k, |p, v| p.mu_t(v))?;
                    (w == Witness::None, w)
                }
                _ => match funnel::st_partition(&g, k) {
                    Ok(p) => (true, Witness::Partition { v1: p.v1, v2: p.v2 }),
                    Err(funnelmatch::Error::NotInClass { .. }) => (false, excess_vertex(&g, k, |p, v| p.mu_min(v))?),
                    Err(e) => return Err(e.into()),
                },
            };
            (k, None, member, witness)
        }
    };
    Ok(RecognizeReport {
        class,
        k,
        method,
        member,
        witness,
    })
}

fn cmd_recognize(
    graph: &Path,
    class: ClassArg,
    k: Option<u64>,
    method: Option<MethodArg>,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<u8> {
    let g = read_graph(graph)?;
    let r = recognize(&g, class, k, method)?;
    match format {
        Format::Json => emit(out, &r)?,
        Format::Text => {
            let name = format!("{class:?}").to_lowercase();
            writeln!(out, "class: {name} (k = {})", r.k)?;
            writeln!(out, "member: {}", if r.member { "yes" } else { "no" })?;
            match &r.witness {
                Witness::None => {}
                Witness::ForbiddenPath { path } => writeln!(out, "forbidden path: {}", list(path))?,
                Witness::Cycle { vertices } => writeln!(out, "cycle through: {}", list(vertices))?,
                Witness::Partition { v1, v2 } => writeln!(out, "V1: {}\nV2: {}", list(v1), list(v2))?,
                Witness::SharedPath { path } => writeln!(out, "{}-shared path: {}", r.k, list(path))?,
                Witness::Vertex { vertex, count } => writeln!(out, "vertex {vertex} has path count {count}")?,
            }
        }
    }
    Ok(code(r.member))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub max_d: usize,
    /// `None` when no solution exists within `max_d` deletions.
    pub result: Option<DistanceResult>,
}

fn cmd_distance(graph: &Path, mode: ModeArg, max_d: usize, format: Format, out: &mut dyn Write) -> CliResult<u8> {
    let g = read_graph(graph)?;
    let mode = match mode {
        ModeArg::Vertex => distance::Mode::Vertex,
        ModeArg::Edge => distance::Mode::Edge,
    };
    let result = match distance::deletion_distance(&g, mode, max_d) {
        Ok(r) => Some(r),
        Err(funnelmatch::Error::Exceeded(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let report = DistanceReport { max_d, result };
    match format {
        Format::Json => emit(out, &report)?,
        Format::Text => match &report.result {
            Some(r) => {
                writeln!(out, "d: {}", r.d)?;
                match &r.certificate {
                    distance::Certificate::Vertices(vs) => writeln!(out, "delete vertices: {}", list(vs))?,
                    distance::Certificate::Edges(es) => writeln!(out, "delete edges: {}", edge_list(es))?,
                }
                writeln!(out, "nodes explored: {}", r.nodes_explored)?;
            }
            None => writeln!(out, "exceeded {max_d}")?,
        },
    }
    Ok(code(report.result.is_some()))
}

fn gen_kind(kind: KindArg, n: usize, k: usize, p: f64) -> CliResult<GenKind> {
    Ok(match kind {
        KindArg::Path => GenKind::Path { n },
        KindArg::OutTree => GenKind::OutTree { n },
        KindArg::InTree => GenKind::InTree { n },
        KindArg::Diamond => GenKind::Diamond,
        KindArg::Butterfly => GenKind::Butterfly,
        KindArg::Fig2 => GenKind::Fig2 { k },
        KindArg::RandomDag => GenKind::RandomDag { n, p },
        KindArg::PlantedMatch => return Err(CliError::Usage("--base cannot be planted-match".into())),
    })
}

fn cmd_gen(command: &Command, out: &mut dyn Write) -> CliResult<u8> {
    let Command::Gen {
        kind,
        n,
        k,
        p,
        seed,
        sigma,
        base,
        pattern,
        out: out_path,
        pattern_out,
    } = command
    else {
        unreachable!()
    };
    let kind = match kind {
        KindArg::PlantedMatch => {
            let base = base.ok_or_else(|| CliError::Usage("planted-match requires --base".into()))?;
            let pattern = pattern
                .as_ref()
                .ok_or_else(|| CliError::Usage("planted-match requires --pattern".into()))?;
            GenKind::PlantedMatch {
                base: Box::new(gen_kind(base, *n, *k, *p)?),
                pattern: pattern.as_bytes().to_vec(),
            }
        }
        other => {
            if base.is_some() || pattern.is_some() {
                return Err(CliError::Usage("--base and --pattern apply only to planted-match".into()));
            }
            gen_kind(*other, *n, *k, *p)?
        }
    };
    let inst = generate(&GenSpec::new(kind, *seed, *sigma))?;
    let mut text = String::new();
    if let (Some(s), Some(path)) = (&inst.pattern, &inst.planted_path) {
        let _ = writeln!(text, "# planted pattern: {}", String::from_utf8_lossy(s));
        let _ = writeln!(text, "# planted path: {}", list(path));
    }
    text.push_str(&inst.graph.to_text());
    match out_path {
        Some(path) => std::fs::write(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = pattern_out {
        let s = inst
            .pattern
            .as_ref()
            .ok_or_else(|| CliError::Usage("--pattern-out needs planted-match".into()))?;
        std::fs::write(path, [s.as_slice(), b"\n"].concat())?;
    }
    Ok(0)
}

pub struct BenchConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub algos: Vec<AlgoArg>,
    pub m: usize,
    pub sigma: usize,
    pub seed: u64,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub edges: usize,
    pub algorithm: String,
    pub m: usize,
    pub w: usize,
    pub k_s: Count,
    pub k_t: Count,
    pub k_st: Count,
    pub found: bool,
    pub time_ns: u64,
    pub pi_mass: u64,
}

const BENCH_HEADER: &str = "instance,n,edges,algorithm,m,w,k_s,k_t,k_st,found,time_ns,pi_mass";

fn bench_instance(cfg: &BenchConfig, n: usize, rng: &mut ChaCha8Rng) -> CliResult<(String, Digraph, Vec<u8>)> {
    let inst_seed: u64 = rng.random();
    let letters = |rng: &mut ChaCha8Rng| -> Vec<u8> {
        (0..cfg.m.max(1)).map(|_| b'a' + rng.random_range(0..cfg.sigma.max(1)) as u8).collect()
    };
    let (name, g, s) = match cfg.family {
        Family::Periodic => {
            let labels = (0..n).map(|i| if i % 2 == 0 { b'a' } else { b'b' }).collect();
            let g = Digraph::new(labels, (1..n).map(|i| (i - 1, i)).collect())?;
            let s = b"ab".repeat(cfg.m.div_ceil(2).max(1));
            ("periodic", g, s)
        }
        Family::OutTree => {
            let g = generate(&GenSpec::new(GenKind::OutTree { n }, inst_seed, cfg.sigma))?.graph;
            ("out-tree", g, letters(rng))
        }
        Family::InTree => {
            let g = generate(&GenSpec::new(GenKind::InTree { n }, inst_seed, cfg.sigma))?.graph;
            ("in-tree", g, letters(rng))
        }
        Family::RandomDag => {
            let p = (4.0 / n.max(1) as f64).min(1.0);
            let g = generate(&GenSpec::new(GenKind::RandomDag { n, p }, inst_seed, cfg.sigma))?.graph;
            ("random-dag", g, letters(rng))
        }
    };
    let mut h = DefaultHasher::new();
    g.to_text().hash(&mut h);
    s.hash(&mut h);
    Ok((format!("{name}-n{n}-{:016x}", h.finish()), g, s))
}

pub fn bench(cfg: &BenchConfig) -> CliResult<Vec<BenchRow>> {
    if cfg.reps == 0 || cfg.sizes.is_empty() || cfg.algos.is_empty() {
        return Err(CliError::Usage("bench needs --reps >= 1, sizes and algorithms".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let (instance, g, s) = bench_instance(cfg, n, &mut rng)?;
        let g = LabeledDag::new(g)?;
        let idx = PatternIndex::for_graph(&s, &g)?;
        let class = funnel::class_min_k(&g, Cap::Saturate(u32::MAX as u64))?;
        for &algo in &cfg.algos {
            let mut best: Option<MatchReport> = None;
            for _ in 0..cfg.reps {
                let r = match matcher::run(&g, &idx, algo.algorithm(), PS_DEFAULT_CAP) {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("warning: {instance} {algo:?}: {e}");
                        break;
                    }
                };
                if best.as_ref().is_none_or(|b| r.stats.elapsed_ns < b.stats.elapsed_ns) {
                    best = Some(r);
                }
            }
            let Some(r) = best else { continue };
            rows.push(BenchRow {
                instance: instance.clone(),
                n: g.n(),
                edges: g.edge_count(),
                algorithm: r.algorithm.name().to_string(),
                m: idx.m(),
                w: idx.w(),
                k_s: class.k_s,
                k_t: class.k_t,
                k_st: class.k_st,
                found: r.found,
                time_ns: r.stats.elapsed_ns,
                pi_mass: r.stats.pi_mass,
            });
        }
    }
    Ok(rows)
}

fn cmd_bench(cfg: &BenchConfig, format: BenchFormat, out: &mut dyn Write) -> CliResult<u8> {
    let rows = bench(cfg)?;
    match format {
        BenchFormat::Json => emit(out, &rows)?,
        BenchFormat::Csv => {
            writeln!(out, "{BENCH_HEADER}")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.instance, r.n, r.edges, r.algorithm, r.m, r.w, r.k_s, r.k_t, r.k_st, r.found, r.time_ns, r.pi_mass
                )?;
            }
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDump {
    pub pattern: String,
    pub m: usize,
    pub sigma: usize,
    /// `f(1) .. f(m)`.
    pub failure: Vec<usize>,
    pub w: usize,
    pub parentheses: String,
}

fn cmd_pattern(pattern: &Path, format: Format, out: &mut dyn Write) -> CliResult<u8> {
    let s = parse_pattern(&read(pattern)?)?;
    let idx = PatternIndex::new(&s)?;
    let dump = PatternDump {
        pattern: String::from_utf8_lossy(&s).into_owned(),
        m: idx.m(),
        sigma: idx.sigma(),
        failure: (1..=idx.m()).map(|i| idx.fail(i)).collect(),
        w: idx.w(),
        parentheses: idx.bp_string(),
    };
    match format {
        Format::Json => emit(out, &dump)?,
        Format::Text => {
            writeln!(out, "pattern: {}", dump.pattern)?;
            writeln!(out, "m: {}  sigma: {}  w: {}", dump.m, dump.sigma, dump.w)?;
            writeln!(out, "failure: {}", list(&dump.failure))?;
            writeln!(out, "failure tree: {}", dump.parentheses)?;
        }
    }
    Ok(0)
}
