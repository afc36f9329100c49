//! Visualization documents: the viz JSON consumed by the explorer UI and a
//! Graphviz DOT rendering.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeKind, KnowledgeGraph, NetworkStage, NodeKind, QueryError};
use crate::queries::{self, AvailabilityMode};

impl NetworkStage {
    /// Legend colour for the stage.
    pub fn color(self) -> &'static str {
        match self {
            NetworkStage::Classical => "#006400",
            NetworkStage::PrepareAndMeasure => "#2ECC40",
            NetworkStage::TrustedRepeater => "#FFDC00",
            NetworkStage::EntanglementDistribution => "#FF851B",
            NetworkStage::QuantumMemory => "#FF4136",
            NetworkStage::QuantumComputing => "#B10DC9",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSize {
    Large,
    Small,
}

impl NodeSize {
    /// Atomic functions are drawn large, everything else small.
    pub fn for_kind(kind: NodeKind) -> Self {
        if kind.is_atomic() {
            NodeSize::Large
        } else {
            NodeSize::Small
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VizNode {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
    pub stage: u8,
    pub color: String,
    pub size: NodeSize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VizEdge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HighlightMode {
    Lineage,
    Resources,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Highlight {
    pub mode: HighlightMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected: Option<BTreeSet<String>>,
    pub highlighted: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VizDocument {
    pub nodes: Vec<VizNode>,
    pub edges: Vec<VizEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub highlight: Option<Highlight>,
}

/// What to highlight in an exported document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HighlightRequest {
    Lineage {
        focus: String,
    },
    Resources {
        selected: Vec<String>,
        mode: AvailabilityMode,
    },
}

pub fn export_viz(
    graph: &KnowledgeGraph,
    highlight: Option<&HighlightRequest>,
) -> Result<VizDocument, QueryError> {
    let highlight = match highlight {
        None => None,
        Some(HighlightRequest::Lineage { focus }) => {
            let lineage = queries::lineage(graph, focus)?;
            Some(Highlight {
                mode: HighlightMode::Lineage,
                focus: Some(focus.clone()),
                selected: None,
                highlighted: lineage.highlighted(),
            })
        }
        Some(HighlightRequest::Resources { selected, mode }) => {
            let result = queries::available(graph, selected, *mode)?;
            Some(Highlight {
                mode: HighlightMode::Resources,
                focus: None,
                selected: Some(selected.iter().cloned().collect()),
                highlighted: result.available,
            })
        }
    };

    let nodes = graph
        .nodes()
        .iter()
        .map(|node| {
            let stage = queries::effective_stage(graph, &node.id).expect("node is in graph");
            VizNode {
                id: node.id.clone(),
                label: node.label.clone(),
                kind: node.kind,
                stage: stage.ordinal(),
                color: stage.color().to_string(),
                size: NodeSize::for_kind(node.kind),
            }
        })
        .collect();
    let edges = graph
        .edges()
        .iter()
        .map(|e| VizEdge {
            from: e.from.clone(),
            to: e.to.clone(),
            kind: e.kind,
        })
        .collect();

    Ok(VizDocument {
        nodes,
        edges,
        highlight,
    })
}

/// Quoted DOT identifier.
pub fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One node statement per node and one edge statement per edge, in id order.
pub fn export_dot(graph: &KnowledgeGraph) -> String {
    let mut out = String::from("digraph knowledge_graph {\n");
    for node in graph.nodes() {
        let stage = queries::effective_stage(graph, &node.id).expect("node is in graph");
        let _ = writeln!(
            out,
            "  {} [label={}, style=filled, fillcolor={}];",
            dot_quote(&node.id),
            dot_quote(&node.label),
            dot_quote(stage.color()),
        );
    }
    for edge in graph.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_quote(&edge.from),
            dot_quote(&edge.to),
            dot_quote(edge.kind.as_str()),
        );
    }
    out.push_str("}\n");
    out
}
