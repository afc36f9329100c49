//! On-disk corpus format and its lowering into graph nodes and edges.
//!
//! A corpus is a single JSON object `{"version":1,"nodes":[...]}`. Parsing is
//! strict: unknown fields are rejected and every problem is reported with a
//! path such as `nodes[3].page.abstract`, so a hand-edited file fails loudly
//! on the first run instead of producing a subtly different graph.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::graph::{
    Edge, EdgeKind, KnowledgeGraph, NetworkStage, Node, NodeKind, ValidationReport,
};

pub const CORPUS_VERSION: u64 = 1;

/// The seed corpus shipped with the crate.
pub const SEED_CORPUS: &str = include_str!("../data/seed.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UseCase {
    FullyQuantum,
    QuantumEnhancedClassical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartyCount {
    TwoParty,
    MultiParty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    Universal,
    Specific,
    Certification,
    BuildingBlock,
}

/// Categorization axes attached to a node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryTags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_case: Option<UseCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parties: Option<PartyCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applicability: Option<Applicability>,
    /// 1..=4 on the coarse methodology scale; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methodology_stage: Option<u8>,
}

impl CategoryTags {
    pub fn is_empty(&self) -> bool {
        *self == CategoryTags::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalityPage {
    pub description: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub use_case: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub protocols: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub further_information: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolPage {
    #[serde(rename = "abstract")]
    pub abstract_: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub requirements: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<String>,
    /// Ordered protocol steps.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub description: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub further_information: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Page {
    Functionality(FunctionalityPage),
    Protocol(ProtocolPage),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartySpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subroutines: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resources: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uses_protocols: Vec<String>,
}

/// One node record as written in the corpus file. Field order here is the
/// canonical key order of the serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<NetworkStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<CategoryTags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page: Option<Page>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub implements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uses_protocols: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subroutines: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resources: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parties: Vec<PartySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl NodeRecord {
    pub fn new(id: impl Into<String>, kind: NodeKind, label: impl Into<String>) -> Self {
        NodeRecord {
            id: id.into(),
            kind,
            label: label.into(),
            stage: None,
            tags: None,
            page: None,
            implements: Vec::new(),
            uses_protocols: Vec::new(),
            subroutines: Vec::new(),
            resources: Vec::new(),
            parties: Vec::new(),
            provenance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDocument {
    pub version: u64,
    pub nodes: Vec<NodeRecord>,
}

impl CorpusDocument {
    /// Node records sorted by id, the order `parse_corpus` produces.
    pub fn canonicalized(mut self) -> Self {
        self.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaErrorKind {
    MalformedSyntax,
    UnknownField,
    MissingRequiredField,
    WrongType,
    EmptyValue,
    BadEnumValue,
    BadVersion,
}

impl SchemaErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            SchemaErrorKind::MalformedSyntax => "malformed-syntax",
            SchemaErrorKind::UnknownField => "unknown-field",
            SchemaErrorKind::MissingRequiredField => "missing-required-field",
            SchemaErrorKind::WrongType => "wrong-type",
            SchemaErrorKind::EmptyValue => "empty-value",
            SchemaErrorKind::BadEnumValue => "bad-enum-value",
            SchemaErrorKind::BadVersion => "bad-version",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub kind: SchemaErrorKind,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum LoweringError {
    #[error("{path}: unresolved reference {id}")]
    UnresolvedReference { path: String, id: String },
}

/// Anything that can go wrong between corpus bytes and a validated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    Schema(Vec<SchemaError>),
    Lowering(Vec<LoweringError>),
    Validation(ValidationReport),
}

impl CorpusError {
    /// `(code, message)` per problem, in report order.
    pub fn problems(&self) -> Vec<(String, String)> {
        match self {
            CorpusError::Schema(errs) => errs
                .iter()
                .map(|e| (e.kind.code().to_string(), e.to_string()))
                .collect(),
            CorpusError::Lowering(errs) => errs
                .iter()
                .map(|e| ("unresolved-reference".to_string(), e.to_string()))
                .collect(),
            CorpusError::Validation(report) => report
                .violations
                .iter()
                .map(|v| (v.code().to_string(), v.to_string()))
                .collect(),
        }
    }
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let problems = self.problems();
        for (_, msg) in &problems {
            writeln!(f, "{msg}")?;
        }
        write!(f, "{} violations", problems.len())
    }
}

impl std::error::Error for CorpusError {}

/// Parses and structurally validates a corpus file. Node records come back
/// sorted by id; error paths refer to positions in the input.
pub fn parse_corpus(text: &str) -> Result<CorpusDocument, Vec<SchemaError>> {
    if text.starts_with('\u{feff}') {
        return Err(vec![SchemaError {
            kind: SchemaErrorKind::MalformedSyntax,
            path: "$".into(),
            message: "byte order mark is not allowed".into(),
        }]);
    }
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![SchemaError {
            kind: SchemaErrorKind::MalformedSyntax,
            path: "$".into(),
            message: e.to_string(),
        }]
    })?;

    let mut p = Parser::default();
    let doc = p.document(&value);
    match doc {
        Some(doc) if p.errors.is_empty() => Ok(doc.canonicalized()),
        _ => Err(p.errors),
    }
}

/// Canonical text: schema key order, records sorted by id, two-space
/// indentation, trailing newline.
pub fn serialize_corpus(doc: &CorpusDocument) -> String {
    let doc = doc.clone().canonicalized();
    let mut out = serde_json::to_string_pretty(&doc).expect("corpus documents always serialize");
    out.push('\n');
    out
}

/// Slug used for synthesized party ids.
pub fn slugify(name: &str) -> String {
    let mut slug = String::with_capacity(name.len());
    for c in name.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_alphanumeric() {
            slug.push(c);
        } else if !slug.is_empty() && !slug.ends_with('-') {
            slug.push('-');
        }
    }
    while slug.ends_with('-') {
        slug.pop();
    }
    slug
}

pub fn party_node_id(protocol_id: &str, party_name: &str) -> String {
    format!("{protocol_id}--{}", slugify(party_name))
}

/// Lowers a parsed document into graph-core input.
///
/// * `implements` on record R: `target -> R` implemented-by
/// * `uses_protocols`: requires-functionality when the target is a
///   functionality, party-uses-protocol when it is a protocol
/// * `subroutines` / `resources`: uses-subroutine / uses-resource
/// * `parties`: a synthesized party node `<R>--<slug(name)>` behind a
///   has-party edge, carrying that party's own reference lists
///
/// Edge-kind pairing is left to graph validation.
pub fn lower_to_graph(doc: &CorpusDocument) -> Result<(Vec<Node>, Vec<Edge>), Vec<LoweringError>> {
    let mut kinds: HashMap<&str, NodeKind> = HashMap::with_capacity(doc.nodes.len());
    for rec in &doc.nodes {
        kinds.entry(rec.id.as_str()).or_insert(rec.kind);
    }

    let mut errors = Vec::new();
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    let mut edges = Vec::new();

    let mut resolve = |path: String, id: &str, errors: &mut Vec<LoweringError>| {
        let kind = kinds.get(id).copied();
        if kind.is_none() {
            errors.push(LoweringError::UnresolvedReference {
                path,
                id: id.to_string(),
            });
        }
        kind
    };

    for (i, rec) in doc.nodes.iter().enumerate() {
        let base = format!("nodes[{i}]");
        nodes.push(Node {
            id: rec.id.clone(),
            label: rec.label.clone(),
            kind: rec.kind,
            stage: rec.stage,
            tags: rec.tags.clone().unwrap_or_default(),
            page: rec.page.clone(),
        });

        for (j, target) in rec.implements.iter().enumerate() {
            if resolve(format!("{base}.implements[{j}]"), target, &mut errors).is_some() {
                edges.push(Edge::new(target, &rec.id, EdgeKind::ImplementedBy));
            }
        }
        lower_references(
            &rec.id,
            &base,
            &rec.uses_protocols,
            &rec.subroutines,
            &rec.resources,
            &mut resolve,
            &mut errors,
            &mut edges,
        );

        if let Some(Page::Functionality(page)) = &rec.page {
            for (j, target) in page.protocols.iter().enumerate() {
                resolve(format!("{base}.page.protocols[{j}]"), target, &mut errors);
            }
        }

        for (j, party) in rec.parties.iter().enumerate() {
            let party_id = party_node_id(&rec.id, &party.name);
            nodes.push(Node::new(&party_id, &party.name, NodeKind::Party));
            edges.push(Edge::new(&rec.id, &party_id, EdgeKind::HasParty));
            lower_references(
                &party_id,
                &format!("{base}.parties[{j}]"),
                &party.uses_protocols,
                &party.subroutines,
                &party.resources,
                &mut resolve,
                &mut errors,
                &mut edges,
            );
        }
    }

    if errors.is_empty() {
        Ok((nodes, edges))
    } else {
        Err(errors)
    }
}

#[allow(clippy::too_many_arguments)]
fn lower_references(
    source: &str,
    base: &str,
    uses_protocols: &[String],
    subroutines: &[String],
    resources: &[String],
    resolve: &mut impl FnMut(String, &str, &mut Vec<LoweringError>) -> Option<NodeKind>,
    errors: &mut Vec<LoweringError>,
    edges: &mut Vec<Edge>,
) {
    for (j, target) in uses_protocols.iter().enumerate() {
        match resolve(format!("{base}.uses_protocols[{j}]"), target, errors) {
            Some(NodeKind::Protocol) => {
                edges.push(Edge::new(source, target, EdgeKind::PartyUsesProtocol))
            }
            Some(_) => edges.push(Edge::new(source, target, EdgeKind::RequiresFunctionality)),
            None => {}
        }
    }
    for (j, target) in subroutines.iter().enumerate() {
        if resolve(format!("{base}.subroutines[{j}]"), target, errors).is_some() {
            edges.push(Edge::new(source, target, EdgeKind::UsesSubroutine));
        }
    }
    for (j, target) in resources.iter().enumerate() {
        if resolve(format!("{base}.resources[{j}]"), target, errors).is_some() {
            edges.push(Edge::new(source, target, EdgeKind::UsesResource));
        }
    }
}

/// Parse, lower and validate in one step.
pub fn load_graph(text: &str) -> Result<KnowledgeGraph, CorpusError> {
    let doc = parse_corpus(text).map_err(CorpusError::Schema)?;
    graph_from_document(&doc)
}

pub fn graph_from_document(doc: &CorpusDocument) -> Result<KnowledgeGraph, CorpusError> {
    let (nodes, edges) = lower_to_graph(doc).map_err(CorpusError::Lowering)?;
    KnowledgeGraph::build(nodes, edges).map_err(CorpusError::Validation)
}

pub fn seed_document() -> CorpusDocument {
    parse_corpus(SEED_CORPUS).expect("seed corpus parses")
}

pub fn seed_graph() -> KnowledgeGraph {
    load_graph(SEED_CORPUS).expect("seed corpus is valid")
}

const NODE_FIELDS: &[&str] = &[
    "id",
    "kind",
    "label",
    "stage",
    "tags",
    "page",
    "implements",
    "uses_protocols",
    "subroutines",
    "resources",
    "parties",
    "provenance",
];
const TAG_FIELDS: &[&str] = &["use_case", "parties", "applicability", "methodology_stage"];
const FUNCTIONALITY_PAGE_FIELDS: &[&str] = &[
    "description",
    "use_case",
    "protocols",
    "properties",
    "further_information",
];
const PROTOCOL_PAGE_FIELDS: &[&str] = &[
    "abstract",
    "assumptions",
    "requirements",
    "properties",
    "description",
    "further_information",
];
const PARTY_FIELDS: &[&str] = &["name", "subroutines", "resources", "uses_protocols"];

#[derive(Default)]
struct Parser {
    errors: Vec<SchemaError>,
}

impl Parser {
    fn err(&mut self, kind: SchemaErrorKind, path: &str, message: impl Into<String>) {
        self.errors.push(SchemaError {
            kind,
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'v>(
        &mut self,
        value: &'v Value,
        path: &str,
        allowed: &[&str],
    ) -> Option<&'v Map<String, Value>> {
        let Some(map) = value.as_object() else {
            self.err(SchemaErrorKind::WrongType, path, "expected an object");
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(
                    SchemaErrorKind::UnknownField,
                    &join(path, key),
                    format!("unknown field {key:?}"),
                );
            }
        }
        Some(map)
    }

    fn string(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<String> {
        let value = map.get(key)?;
        match value.as_str() {
            Some(s) => Some(s.to_string()),
            None => {
                self.err(
                    SchemaErrorKind::WrongType,
                    &join(path, key),
                    "expected a string",
                );
                None
            }
        }
    }

    fn required_string(
        &mut self,
        map: &Map<String, Value>,
        path: &str,
        key: &str,
    ) -> Option<String> {
        if !map.contains_key(key) {
            self.err(
                SchemaErrorKind::MissingRequiredField,
                &join(path, key),
                format!("missing required field {key:?}"),
            );
            return None;
        }
        let s = self.string(map, path, key)?;
        if s.is_empty() {
            self.err(
                SchemaErrorKind::EmptyValue,
                &join(path, key),
                "must be nonempty",
            );
            return None;
        }
        Some(s)
    }

    fn string_list(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Vec<String> {
        let Some(value) = map.get(key) else {
            return Vec::new();
        };
        let field = join(path, key);
        let Some(items) = value.as_array() else {
            self.err(
                SchemaErrorKind::WrongType,
                &field,
                "expected an array of strings",
            );
            return Vec::new();
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item.as_str() {
                Some(s) if !s.is_empty() => out.push(s.to_string()),
                Some(_) => self.err(
                    SchemaErrorKind::EmptyValue,
                    &format!("{field}[{i}]"),
                    "must be nonempty",
                ),
                None => self.err(
                    SchemaErrorKind::WrongType,
                    &format!("{field}[{i}]"),
                    "expected a string",
                ),
            }
        }
        out
    }

    fn enum_value<T: serde::de::DeserializeOwned>(
        &mut self,
        map: &Map<String, Value>,
        path: &str,
        key: &str,
    ) -> Option<T> {
        let raw = self.string(map, path, key)?;
        match serde_json::from_value::<T>(Value::String(raw.clone())) {
            Ok(v) => Some(v),
            Err(_) => {
                self.err(
                    SchemaErrorKind::BadEnumValue,
                    &join(path, key),
                    format!("bad value {raw:?}"),
                );
                None
            }
        }
    }

    fn document(&mut self, value: &Value) -> Option<CorpusDocument> {
        let map = self.object(value, "$", &["version", "nodes"])?;

        let version = match map.get("version") {
            None => {
                self.err(
                    SchemaErrorKind::MissingRequiredField,
                    "version",
                    "missing required field \"version\"",
                );
                None
            }
            Some(v) => match v.as_u64() {
                Some(CORPUS_VERSION) => Some(CORPUS_VERSION),
                _ => {
                    self.err(
                        SchemaErrorKind::BadVersion,
                        "version",
                        format!("unsupported version {v}, expected {CORPUS_VERSION}"),
                    );
                    None
                }
            },
        };

        let nodes = match map.get("nodes") {
            None => {
                self.err(
                    SchemaErrorKind::MissingRequiredField,
                    "nodes",
                    "missing required field \"nodes\"",
                );
                None
            }
            Some(Value::Array(items)) => Some(
                items
                    .iter()
                    .enumerate()
                    .filter_map(|(i, item)| self.node(item, &format!("nodes[{i}]")))
                    .collect::<Vec<_>>(),
            ),
            Some(_) => {
                self.err(SchemaErrorKind::WrongType, "nodes", "expected an array");
                None
            }
        };

        Some(CorpusDocument {
            version: version?,
            nodes: nodes?,
        })
    }

    fn node(&mut self, value: &Value, path: &str) -> Option<NodeRecord> {
        let map = self.object(value, path, NODE_FIELDS)?;
        let id = self.required_string(map, path, "id");
        let label = self.required_string(map, path, "label");
        let kind = if map.contains_key("kind") {
            self.enum_value::<NodeKind>(map, path, "kind")
        } else {
            self.err(
                SchemaErrorKind::MissingRequiredField,
                &join(path, "kind"),
                "missing required field \"kind\"",
            );
            None
        };

        let stage = self.enum_value::<NetworkStage>(map, path, "stage");
        if let Some(k) = kind {
            if k.is_atomic() && !map.contains_key("stage") {
                self.err(
                    SchemaErrorKind::MissingRequiredField,
                    &join(path, "stage"),
                    format!("{k} nodes require a stage"),
                );
            }
        }

        let tags = map
            .get("tags")
            .and_then(|t| self.tags(t, &join(path, "tags")));
        let page = match (map.get("page"), kind) {
            (None, _) | (_, None) => None,
            (Some(p), Some(NodeKind::Functionality)) => self
                .functionality_page(p, &join(path, "page"))
                .map(Page::Functionality),
            (Some(p), Some(NodeKind::Protocol)) => self
                .protocol_page(p, &join(path, "page"))
                .map(Page::Protocol),
            (Some(_), Some(k)) => {
                self.err(
                    SchemaErrorKind::UnknownField,
                    &join(path, "page"),
                    format!("{k} nodes do not carry a page"),
                );
                None
            }
        };

        let implements = self.string_list(map, path, "implements");
        let uses_protocols = self.string_list(map, path, "uses_protocols");
        let subroutines = self.string_list(map, path, "subroutines");
        let resources = self.string_list(map, path, "resources");
        let parties = match map.get("parties") {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .filter_map(|(i, item)| self.party(item, &format!("{path}.parties[{i}]")))
                .collect(),
            Some(_) => {
                self.err(
                    SchemaErrorKind::WrongType,
                    &join(path, "parties"),
                    "expected an array",
                );
                Vec::new()
            }
        };
        let provenance = self.string(map, path, "provenance");

        Some(NodeRecord {
            id: id?,
            kind: kind?,
            label: label?,
            stage,
            tags,
            page,
            implements,
            uses_protocols,
            subroutines,
            resources,
            parties,
            provenance,
        })
    }

    fn tags(&mut self, value: &Value, path: &str) -> Option<CategoryTags> {
        let map = self.object(value, path, TAG_FIELDS)?;
        let methodology_stage = match map.get("methodology_stage") {
            None => None,
            Some(v) => match v.as_u64() {
                Some(n @ 1..=4) => Some(n as u8),
                _ => {
                    self.err(
                        SchemaErrorKind::BadEnumValue,
                        &join(path, "methodology_stage"),
                        format!("expected an integer in 1..=4, got {v}"),
                    );
                    None
                }
            },
        };
        Some(CategoryTags {
            use_case: self.enum_value(map, path, "use_case"),
            parties: self.enum_value(map, path, "parties"),
            applicability: self.enum_value(map, path, "applicability"),
            methodology_stage,
        })
    }

    fn functionality_page(&mut self, value: &Value, path: &str) -> Option<FunctionalityPage> {
        let map = self.object(value, path, FUNCTIONALITY_PAGE_FIELDS)?;
        let description = self.required_string(map, path, "description");
        Some(FunctionalityPage {
            use_case: self.string(map, path, "use_case").unwrap_or_default(),
            protocols: self.string_list(map, path, "protocols"),
            properties: self.string_list(map, path, "properties"),
            further_information: self
                .string(map, path, "further_information")
                .unwrap_or_default(),
            description: description?,
        })
    }

    fn protocol_page(&mut self, value: &Value, path: &str) -> Option<ProtocolPage> {
        let map = self.object(value, path, PROTOCOL_PAGE_FIELDS)?;
        let abstract_ = self.required_string(map, path, "abstract");
        Some(ProtocolPage {
            assumptions: self.string_list(map, path, "assumptions"),
            requirements: self.string(map, path, "requirements").unwrap_or_default(),
            properties: self.string_list(map, path, "properties"),
            description: self.string_list(map, path, "description"),
            further_information: self
                .string(map, path, "further_information")
                .unwrap_or_default(),
            abstract_: abstract_?,
        })
    }

    fn party(&mut self, value: &Value, path: &str) -> Option<PartySpec> {
        let map = self.object(value, path, PARTY_FIELDS)?;
        let name = self.required_string(map, path, "name");
        Some(PartySpec {
            subroutines: self.string_list(map, path, "subroutines"),
            resources: self.string_list(map, path, "resources"),
            uses_protocols: self.string_list(map, path, "uses_protocols"),
            name: name?,
        })
    }
}

fn join(path: &str, key: &str) -> String {
    if path == "$" {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}
