//! Typed node/edge model of the resource hierarchy and the validated,
//! immutable dependency graph built from it.
//!
//! Every edge points in the depends-on direction: `from` can only be
//! realised once `to` is available. The graph is acyclic by construction,
//! so reachability in either direction terminates.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CategoryTags, Page};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Functionality,
    Protocol,
    Party,
    Subroutine,
    Resource,
}

impl NodeKind {
    pub const ALL: [NodeKind; 5] = [
        NodeKind::Functionality,
        NodeKind::Protocol,
        NodeKind::Party,
        NodeKind::Subroutine,
        NodeKind::Resource,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Functionality => "functionality",
            NodeKind::Protocol => "protocol",
            NodeKind::Party => "party",
            NodeKind::Subroutine => "subroutine",
            NodeKind::Resource => "resource",
        }
    }

    /// Resources and subroutines are the atomic functions of the hierarchy.
    pub fn is_atomic(self) -> bool {
        matches!(self, NodeKind::Resource | NodeKind::Subroutine)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {what}: {value}")]
pub struct ParseEnumError {
    pub what: &'static str,
    pub value: String,
}

impl FromStr for NodeKind {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ParseEnumError {
                what: "node kind",
                value: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// functionality -> protocol
    ImplementedBy,
    /// protocol -> functionality
    RequiresFunctionality,
    /// protocol -> party
    HasParty,
    /// party -> protocol
    PartyUsesProtocol,
    /// protocol | party -> subroutine
    UsesSubroutine,
    /// protocol | party | subroutine -> resource
    UsesResource,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 6] = [
        EdgeKind::ImplementedBy,
        EdgeKind::RequiresFunctionality,
        EdgeKind::HasParty,
        EdgeKind::PartyUsesProtocol,
        EdgeKind::UsesSubroutine,
        EdgeKind::UsesResource,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::ImplementedBy => "implemented-by",
            EdgeKind::RequiresFunctionality => "requires-functionality",
            EdgeKind::HasParty => "has-party",
            EdgeKind::PartyUsesProtocol => "party-uses-protocol",
            EdgeKind::UsesSubroutine => "uses-subroutine",
            EdgeKind::UsesResource => "uses-resource",
        }
    }

    /// Whether an edge of this kind may run from `from` to `to`.
    pub fn admits(self, from: NodeKind, to: NodeKind) -> bool {
        use NodeKind::*;
        match self {
            EdgeKind::ImplementedBy => from == Functionality && to == Protocol,
            EdgeKind::RequiresFunctionality => from == Protocol && to == Functionality,
            EdgeKind::HasParty => from == Protocol && to == Party,
            EdgeKind::PartyUsesProtocol => from == Party && to == Protocol,
            EdgeKind::UsesSubroutine => matches!(from, Protocol | Party) && to == Subroutine,
            EdgeKind::UsesResource => {
                matches!(from, Protocol | Party | Subroutine) && to == Resource
            }
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ParseEnumError {
                what: "edge kind",
                value: s.to_string(),
            })
    }
}

/// Capability level of quantum network hardware, ordered from classical
/// links up to full quantum computing.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum NetworkStage {
    #[default]
    Classical = 0,
    PrepareAndMeasure = 1,
    TrustedRepeater = 2,
    EntanglementDistribution = 3,
    QuantumMemory = 4,
    QuantumComputing = 5,
}

impl NetworkStage {
    pub const ALL: [NetworkStage; 6] = [
        NetworkStage::Classical,
        NetworkStage::PrepareAndMeasure,
        NetworkStage::TrustedRepeater,
        NetworkStage::EntanglementDistribution,
        NetworkStage::QuantumMemory,
        NetworkStage::QuantumComputing,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Self> {
        NetworkStage::ALL.get(usize::from(ordinal)).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            NetworkStage::Classical => "classical",
            NetworkStage::PrepareAndMeasure => "prepare-and-measure",
            NetworkStage::TrustedRepeater => "trusted-repeater",
            NetworkStage::EntanglementDistribution => "entanglement-distribution",
            NetworkStage::QuantumMemory => "quantum-memory",
            NetworkStage::QuantumComputing => "quantum-computing",
        }
    }
}

impl fmt::Display for NetworkStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NetworkStage {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NetworkStage::ALL
            .into_iter()
            .find(|st| st.label() == s)
            .ok_or_else(|| ParseEnumError {
                what: "network stage",
                value: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<NetworkStage>,
    #[serde(default)]
    pub tags: CategoryTags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page: Option<Page>,
}

impl Node {
    pub fn new(id: impl Into<String>, label: impl Into<String>, kind: NodeKind) -> Self {
        Node {
            id: id.into(),
            label: label.into(),
            kind,
            stage: None,
            tags: CategoryTags::default(),
            page: None,
        }
    }

    pub fn with_stage(mut self, stage: NetworkStage) -> Self {
        self.stage = Some(stage);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: EdgeKind) -> Self {
        Edge {
            from: from.into(),
            to: to.into(),
            kind,
        }
    }
}

/// Lowercase slug: `[a-z0-9]([a-z0-9-]*[a-z0-9])?`.
pub fn is_valid_id(id: &str) -> bool {
    let bytes = id.as_bytes();
    let alnum = |b: &u8| b.is_ascii_lowercase() || b.is_ascii_digit();
    match (bytes.first(), bytes.last()) {
        (Some(first), Some(last)) => {
            alnum(first) && alnum(last) && bytes.iter().all(|b| alnum(b) || *b == b'-')
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum Violation {
    #[error("duplicate node id: {id}")]
    DuplicateId { id: String },
    #[error("invalid node id: {id:?}")]
    InvalidId { id: String },
    #[error("edge {from} -> {to} ({kind}) references unknown node {missing}")]
    UnknownEndpoint {
        from: String,
        to: String,
        kind: EdgeKind,
        missing: String,
    },
    #[error("edge {from} -> {to}: {kind} cannot run from a {from_kind} to a {to_kind}")]
    ForbiddenEdgePairing {
        from: String,
        to: String,
        kind: EdgeKind,
        from_kind: NodeKind,
        to_kind: NodeKind,
    },
    #[error("self-loop on {id} ({kind})")]
    SelfLoop { id: String, kind: EdgeKind },
    #[error("cycle detected: {}", cycle.join(" -> "))]
    CycleDetected { cycle: Vec<String> },
    #[error("{kind} node {id} has no network stage")]
    MissingStage { id: String, kind: NodeKind },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::DuplicateId { .. } => "duplicate-id",
            Violation::InvalidId { .. } => "invalid-id",
            Violation::UnknownEndpoint { .. } => "unknown-endpoint",
            Violation::ForbiddenEdgePairing { .. } => "forbidden-edge-pairing",
            Violation::SelfLoop { .. } => "self-loop",
            Violation::CycleDetected { .. } => "cycle-detected",
            Violation::MissingStage { .. } => "missing-stage",
        }
    }
}

/// Every violation found while building a graph, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(f, "{} violations", self.violations.len())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown node: {0}")]
    UnknownNode(String),
    #[error("not a protocol: {0}")]
    NotAProtocol(String),
    #[error("unknown mode: {0}")]
    UnknownMode(String),
}

/// Validated, immutable dependency DAG.
///
/// Nodes are stored sorted by id so that node indices, adjacency lists and
/// the topological order are reproducible for identical input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    // edge positions into `edges`, sorted
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    // node positions
    edge_ends: Vec<(usize, usize)>,
    topo: Vec<usize>,
}

impl KnowledgeGraph {
    /// Validates `nodes` and `edges` and builds the graph, or returns every
    /// violation found. Exact duplicate edges are dropped silently.
    pub fn build(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, ValidationReport> {
        let mut violations = Vec::new();

        let mut nodes = nodes;
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index: HashMap<String, usize> = HashMap::with_capacity(nodes.len());
        let mut unique: Vec<Node> = Vec::with_capacity(nodes.len());
        for node in nodes {
            if !is_valid_id(&node.id) {
                violations.push(Violation::InvalidId {
                    id: node.id.clone(),
                });
            }
            if index.contains_key(&node.id) {
                violations.push(Violation::DuplicateId { id: node.id });
                continue;
            }
            if node.kind.is_atomic() && node.stage.is_none() {
                violations.push(Violation::MissingStage {
                    id: node.id.clone(),
                    kind: node.kind,
                });
            }
            index.insert(node.id.clone(), unique.len());
            unique.push(node);
        }
        let nodes = unique;

        let mut edges = edges;
        edges.sort();
        edges.dedup();

        let mut kept = Vec::with_capacity(edges.len());
        let mut edge_ends = Vec::with_capacity(edges.len());
        for edge in edges {
            if edge.from == edge.to {
                violations.push(Violation::SelfLoop {
                    id: edge.from.clone(),
                    kind: edge.kind,
                });
                continue;
            }
            let (from, to) = match (index.get(&edge.from), index.get(&edge.to)) {
                (Some(&f), Some(&t)) => (f, t),
                (f, _) => {
                    let missing = if f.is_none() { &edge.from } else { &edge.to };
                    violations.push(Violation::UnknownEndpoint {
                        missing: missing.clone(),
                        from: edge.from,
                        to: edge.to,
                        kind: edge.kind,
                    });
                    continue;
                }
            };
            let (from_kind, to_kind) = (nodes[from].kind, nodes[to].kind);
            if !edge.kind.admits(from_kind, to_kind) {
                violations.push(Violation::ForbiddenEdgePairing {
                    from: edge.from,
                    to: edge.to,
                    kind: edge.kind,
                    from_kind,
                    to_kind,
                });
                continue;
            }
            kept.push(edge);
            edge_ends.push((from, to));
        }

        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        for (e, &(from, to)) in edge_ends.iter().enumerate() {
            outgoing[from].push(e);
            incoming[to].push(e);
        }

        let topo = match kahn_order(nodes.len(), &outgoing, &incoming, &edge_ends) {
            Ok(order) => order,
            Err(remaining) => {
                for cycle in witness_cycles(&remaining, &outgoing, &incoming, &edge_ends) {
                    violations.push(Violation::CycleDetected {
                        cycle: cycle.into_iter().map(|i| nodes[i].id.clone()).collect(),
                    });
                }
                Vec::new()
            }
        };

        if !violations.is_empty() {
            return Err(ValidationReport { violations });
        }

        Ok(KnowledgeGraph {
            nodes,
            index,
            edges: kept,
            outgoing,
            incoming,
            edge_ends,
            topo,
        })
    }

    pub fn empty() -> Self {
        KnowledgeGraph::build(Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Edges sorted by `(from, to, kind)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn outgoing<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a Edge> + 'a {
        let list = self
            .index
            .get(id)
            .map(|&i| self.outgoing[i].as_slice())
            .unwrap_or(&[]);
        list.iter().map(move |&e| &self.edges[e])
    }

    pub fn incoming<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a Edge> + 'a {
        let list = self
            .index
            .get(id)
            .map(|&i| self.incoming[i].as_slice())
            .unwrap_or(&[]);
        list.iter().map(move |&e| &self.edges[e])
    }

    /// Topological order: every edge runs from an earlier to a later id.
    pub fn topological_order(&self) -> impl Iterator<Item = &str> + '_ {
        self.topo.iter().map(|&i| self.nodes[i].id.as_str())
    }

    /// All nodes reachable over depends-on edges, excluding `id`.
    pub fn descendants(&self, id: &str) -> Result<BTreeSet<String>, QueryError> {
        let start = self.require(id)?;
        Ok(self.collect_ids(&self.reach(start, Direction::Forward)))
    }

    /// All nodes that (transitively) depend on `id`, excluding `id`.
    pub fn ascendants(&self, id: &str) -> Result<BTreeSet<String>, QueryError> {
        let start = self.require(id)?;
        Ok(self.collect_ids(&self.reach(start, Direction::Reverse)))
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize, QueryError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| QueryError::UnknownNode(id.to_string()))
    }

    pub(crate) fn node_at(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub(crate) fn successors(&self, i: usize) -> impl Iterator<Item = (usize, EdgeKind)> + '_ {
        self.outgoing[i]
            .iter()
            .map(move |&e| (self.edge_ends[e].1, self.edges[e].kind))
    }

    pub(crate) fn predecessors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.incoming[i].iter().map(move |&e| self.edge_ends[e].0)
    }

    pub(crate) fn in_degree(&self, i: usize) -> usize {
        self.incoming[i].len()
    }

    /// Marks every node reachable from `start` (not `start` itself).
    pub(crate) fn reach(&self, start: usize, direction: Direction) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let next: Vec<usize> = match direction {
                Direction::Forward => self.successors(i).map(|(t, _)| t).collect(),
                Direction::Reverse => self.predecessors(i).collect(),
            };
            for j in next {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    pub(crate) fn collect_ids(&self, mask: &[bool]) -> BTreeSet<String> {
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.nodes[i].id.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Reverse,
}

/// Kahn's algorithm, smallest index first. On failure returns the mask of
/// nodes left with nonzero in-degree.
fn kahn_order(
    n: usize,
    outgoing: &[Vec<usize>],
    incoming: &[Vec<usize>],
    ends: &[(usize, usize)],
) -> Result<Vec<usize>, Vec<bool>> {
    let mut in_deg: Vec<usize> = incoming.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| in_deg[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &e in &outgoing[i] {
            let t = ends[e].1;
            in_deg[t] -= 1;
            if in_deg[t] == 0 {
                ready.push(Reverse(t));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(in_deg.iter().map(|&d| d > 0).collect())
    }
}

/// One witness cycle per nontrivial strongly connected component among the
/// nodes Kahn's algorithm could not order. Each cycle starts and ends at
/// its smallest node.
fn witness_cycles(
    remaining: &[bool],
    outgoing: &[Vec<usize>],
    incoming: &[Vec<usize>],
    ends: &[(usize, usize)],
) -> Vec<Vec<usize>> {
    let n = remaining.len();
    let within = |mask: &[bool], start: usize, forward: bool| {
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let adj = if forward { &outgoing[i] } else { &incoming[i] };
            for &e in adj {
                let j = if forward { ends[e].1 } else { ends[e].0 };
                if mask[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };

    let mut assigned = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if !remaining[start] || assigned[start] {
            continue;
        }
        let fwd = within(remaining, start, true);
        let bwd = within(remaining, start, false);
        let component: Vec<bool> = (0..n).map(|i| fwd[i] && bwd[i]).collect();
        for (i, &c) in component.iter().enumerate() {
            if c {
                assigned[i] = true;
            }
        }
        if component.iter().filter(|&&c| c).count() < 2 {
            continue;
        }
        // walk smallest in-component successors from the smallest node until
        // a node repeats; strong connectivity guarantees a successor exists
        let mut path = vec![start];
        let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut cur = start;
        loop {
            let next = outgoing[cur]
                .iter()
                .map(|&e| ends[e].1)
                .filter(|&j| component[j])
                .min()
                .expect("strongly connected component node has a successor");
            if let Some(&p) = pos.get(&next) {
                let mut cycle = path[p..].to_vec();
                let min_at = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &v)| v)
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                cycle.rotate_left(min_at);
                cycle.push(cycle[0]);
                cycles.push(cycle);
                break;
            }
            pos.insert(next, path.len());
            path.push(next);
            cur = next;
        }
    }
    cycles
}
