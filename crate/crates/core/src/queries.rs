//! Lineage and resource-availability queries, stage inference and degree
//! centrality over a validated graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Direction, EdgeKind, KnowledgeGraph, NetworkStage, NodeKind, QueryError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineageResult {
    pub focus: String,
    pub ascendants: BTreeSet<String>,
    pub descendants: BTreeSet<String>,
}

impl LineageResult {
    /// Focus plus everything above and below it.
    pub fn highlighted(&self) -> BTreeSet<String> {
        let mut all = self.ascendants.clone();
        all.extend(self.descendants.iter().cloned());
        all.insert(self.focus.clone());
        all
    }
}

pub fn lineage(graph: &KnowledgeGraph, id: &str) -> Result<LineageResult, QueryError> {
    Ok(LineageResult {
        focus: id.to_string(),
        ascendants: graph.ascendants(id)?,
        descendants: graph.descendants(id)?,
    })
}

/// How a functionality's implementations combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AvailabilityMode {
    /// Every direct dependency must be available, implementations included.
    #[default]
    Paper,
    /// A functionality needs just one available implementation.
    AnyImpl,
}

impl AvailabilityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AvailabilityMode::Paper => "paper",
            AvailabilityMode::AnyImpl => "any-impl",
        }
    }
}

impl fmt::Display for AvailabilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AvailabilityMode {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(AvailabilityMode::Paper),
            "any-impl" => Ok(AvailabilityMode::AnyImpl),
            other => Err(QueryError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Selected,
    Downward,
    Upward,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Selected => "selected",
            Provenance::Downward => "downward",
            Provenance::Upward => "upward",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailabilityResult {
    pub available: BTreeSet<String>,
    pub mode: AvailabilityMode,
    pub provenance: BTreeMap<String, Provenance>,
}

impl AvailabilityResult {
    pub fn with(&self, provenance: Provenance) -> BTreeSet<&str> {
        self.provenance
            .iter()
            .filter(|(_, &p)| p == provenance)
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

/// Closure of nodes that can be realised once `selected` is available.
///
/// The selection and all of its descendants are available. From there,
/// direct ascendants of available nodes are examined until nothing changes:
/// a node becomes available when its direct dependency targets are (see
/// [`AvailabilityMode`]). Nodes that are never an ascendant of an available
/// node are never examined, so dependency-free nodes are not made available
/// vacuously. The rule is monotone, so the fixed point does not depend on
/// examination order.
pub fn available<S: AsRef<str>>(
    graph: &KnowledgeGraph,
    selected: &[S],
    mode: AvailabilityMode,
) -> Result<AvailabilityResult, QueryError> {
    let n = graph.node_count();
    let mut tag: Vec<Option<Provenance>> = vec![None; n];

    let mut picks = Vec::with_capacity(selected.len());
    for id in selected {
        let i = graph.require(id.as_ref())?;
        tag[i] = Some(Provenance::Selected);
        picks.push(i);
    }
    for &i in &picks {
        for (j, below) in graph.reach(i, Direction::Forward).into_iter().enumerate() {
            if below && tag[j].is_none() {
                tag[j] = Some(Provenance::Downward);
            }
        }
    }

    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&i| tag[i].is_some())
        .flat_map(|i| graph.predecessors(i))
        .collect();
    while let Some(c) = queue.pop_front() {
        if tag[c].is_some() || !satisfied(graph, c, mode, |j| tag[j].is_some()) {
            continue;
        }
        tag[c] = Some(Provenance::Upward);
        queue.extend(graph.predecessors(c));
    }

    let provenance: BTreeMap<String, Provenance> = tag
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.map(|p| (graph.node_at(i).id.clone(), p)))
        .collect();
    Ok(AvailabilityResult {
        available: provenance.keys().cloned().collect(),
        mode,
        provenance,
    })
}

/// The one-step availability rule for node `i`.
pub(crate) fn satisfied(
    graph: &KnowledgeGraph,
    i: usize,
    mode: AvailabilityMode,
    is_available: impl Fn(usize) -> bool,
) -> bool {
    let any_impl =
        mode == AvailabilityMode::AnyImpl && graph.node_at(i).kind == NodeKind::Functionality;
    let mut has_impl = false;
    let mut impl_ok = false;
    for (j, kind) in graph.successors(i) {
        if any_impl && kind == EdgeKind::ImplementedBy {
            has_impl = true;
            impl_ok |= is_available(j);
        } else if !is_available(j) {
            return false;
        }
    }
    !has_impl || impl_ok
}

/// Highest stage among the node's own stage and every resource or
/// subroutine below it; classical when there is none.
pub fn infer_stage(graph: &KnowledgeGraph, id: &str) -> Result<NetworkStage, QueryError> {
    let i = graph.require(id)?;
    Ok(infer_stage_at(graph, i))
}

pub(crate) fn infer_stage_at(graph: &KnowledgeGraph, i: usize) -> NetworkStage {
    let own = graph.node_at(i).stage;
    graph
        .reach(i, Direction::Forward)
        .into_iter()
        .enumerate()
        .filter(|&(_, below)| below)
        .map(|(j, _)| graph.node_at(j))
        .filter(|node| node.kind.is_atomic())
        .filter_map(|node| node.stage)
        .chain(own)
        .max()
        .unwrap_or_default()
}

/// Stage used for display: the declared stage, else the inferred one.
pub fn effective_stage(graph: &KnowledgeGraph, id: &str) -> Result<NetworkStage, QueryError> {
    let i = graph.require(id)?;
    Ok(graph
        .node_at(i)
        .stage
        .unwrap_or_else(|| infer_stage_at(graph, i)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralityEntry {
    pub id: String,
    pub degree: usize,
}

/// Nodes ranked by number of direct dependents, highest first, ties by id.
pub fn centrality(
    graph: &KnowledgeGraph,
    kind_filter: Option<NodeKind>,
    top: Option<usize>,
) -> Vec<CentralityEntry> {
    let mut ranked: Vec<CentralityEntry> = (0..graph.node_count())
        .filter(|&i| kind_filter.is_none_or(|k| graph.node_at(i).kind == k))
        .map(|i| CentralityEntry {
            id: graph.node_at(i).id.clone(),
            degree: graph.in_degree(i),
        })
        .collect();
    ranked.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.id.cmp(&b.id)));
    if let Some(top) = top {
        ranked.truncate(top);
    }
    ranked
}

/// Protocols whose inferred stage is at most `max_stage`.
pub fn filter_by_stage(graph: &KnowledgeGraph, max_stage: NetworkStage) -> BTreeSet<String> {
    (0..graph.node_count())
        .filter(|&i| graph.node_at(i).kind == NodeKind::Protocol)
        .filter(|&i| infer_stage_at(graph, i) <= max_stage)
        .map(|i| graph.node_at(i).id.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyProfile {
    pub party: String,
    pub id: String,
    pub subroutines: BTreeSet<String>,
    pub resources: BTreeSet<String>,
    pub stage: NetworkStage,
}

/// Requirements of each party of a protocol, in party id order. Empty when
/// the protocol attaches its requirements directly.
pub fn party_profiles(graph: &KnowledgeGraph, id: &str) -> Result<Vec<PartyProfile>, QueryError> {
    let p = graph.require(id)?;
    if graph.node_at(p).kind != NodeKind::Protocol {
        return Err(QueryError::NotAProtocol(id.to_string()));
    }
    let mut parties: Vec<usize> = graph
        .successors(p)
        .filter(|&(_, kind)| kind == EdgeKind::HasParty)
        .map(|(j, _)| j)
        .collect();
    parties.sort_unstable();

    Ok(parties
        .into_iter()
        .map(|party| {
            let below = graph.reach(party, Direction::Forward);
            let of_kind = |kind: NodeKind| -> BTreeSet<String> {
                below
                    .iter()
                    .enumerate()
                    .filter(|&(j, &b)| b && graph.node_at(j).kind == kind)
                    .map(|(j, _)| graph.node_at(j).id.clone())
                    .collect()
            };
            let node = graph.node_at(party);
            PartyProfile {
                party: node.label.clone(),
                id: node.id.clone(),
                subroutines: of_kind(NodeKind::Subroutine),
                resources: of_kind(NodeKind::Resource),
                stage: infer_stage_at(graph, party),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub by_kind: BTreeMap<String, usize>,
    /// Keyed by stage label, counting each node's effective stage.
    pub by_stage: BTreeMap<String, usize>,
}

pub fn stats(graph: &KnowledgeGraph) -> GraphStats {
    let mut by_kind = BTreeMap::new();
    let mut by_stage = BTreeMap::new();
    for (i, node) in graph.nodes().iter().enumerate() {
        *by_kind.entry(node.kind.to_string()).or_insert(0) += 1;
        let stage = node.stage.unwrap_or_else(|| infer_stage_at(graph, i));
        *by_stage.entry(stage.to_string()).or_insert(0) += 1;
    }
    GraphStats {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        by_kind,
        by_stage,
    }
}
