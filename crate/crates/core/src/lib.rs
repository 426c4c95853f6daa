//! String matching on vertex-labeled DAGs, parameterized by prefix-incomparable
//! match sets, together with recognition and analysis of funnels, k-funnels
//! and the classes `S_k`, `T_k`, `ST_k`, and deletion distance to a funnel.

pub mod distance;
pub mod error;
pub mod funnel;
pub mod generators;
pub mod graph;
pub mod matcher;
pub mod pattern;
pub mod pi;

pub use distance::{deletion_distance, Certificate, DistanceResult, Mode};
pub use error::{Error, Result};
pub use graph::{parse_graph, parse_pattern, Alphabet, Digraph, LabeledDag, Subgraph};
pub use matcher::{Algorithm, MatchReport, PsTable};
pub use pattern::PatternIndex;
pub use funnel::{Cap, Count, FunnelProfile, Partition};
pub use generators::{GenKind, GenSpec, Instance};
pub use pi::PiSet;
