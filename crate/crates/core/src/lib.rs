//! Knowledge graph of quantum network protocols.
//!
//! The resource hierarchy (functionality, protocol, protocol party, nodal
//! subroutine, physical resource) is encoded as a typed dependency DAG.
//! [`corpus`] reads the JSON corpus format, [`graph`] validates it into an
//! immutable [`KnowledgeGraph`], [`queries`] answers lineage, availability,
//! stage and centrality questions, and [`export`] renders viz JSON and DOT.

pub mod corpus;
pub mod export;
pub mod graph;
pub mod json;
pub mod queries;

pub use corpus::{load_graph, parse_corpus, serialize_corpus, CorpusDocument, CorpusError};
pub use graph::{
    Edge, EdgeKind, KnowledgeGraph, NetworkStage, Node, NodeKind, QueryError, ValidationReport,
    Violation,
};
pub use queries::{AvailabilityMode, AvailabilityResult, LineageResult};
