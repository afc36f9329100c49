//! Test-side oracles. Nothing here calls into the engine's traversal or
//! availability code; answers are computed from raw node/edge lists.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use qpz_core::{AvailabilityMode, Edge, EdgeKind, NetworkStage, Node, NodeKind};
use rand::seq::SliceRandom;
use rand::Rng;


pub const PROPERTY_SEED: u64 = 0x0051_7a6e_2024;
pub const PROPERTY_CASES: usize = 1000;

/// Allowed (kind, from, to) triples, transcribed separately from the engine.
const PAIRINGS: &[(EdgeKind, NodeKind, NodeKind)] = &[
    (
        EdgeKind::ImplementedBy,
        NodeKind::Functionality,
        NodeKind::Protocol,
    ),
    (
        EdgeKind::RequiresFunctionality,
        NodeKind::Protocol,
        NodeKind::Functionality,
    ),
    (EdgeKind::HasParty, NodeKind::Protocol, NodeKind::Party),
    (
        EdgeKind::PartyUsesProtocol,
        NodeKind::Party,
        NodeKind::Protocol,
    ),
    (
        EdgeKind::UsesSubroutine,
        NodeKind::Protocol,
        NodeKind::Subroutine,
    ),
    (
        EdgeKind::UsesSubroutine,
        NodeKind::Party,
        NodeKind::Subroutine,
    ),
    (
        EdgeKind::UsesResource,
        NodeKind::Protocol,
        NodeKind::Resource,
    ),
    (EdgeKind::UsesResource, NodeKind::Party, NodeKind::Resource),
    (
        EdgeKind::UsesResource,
        NodeKind::Subroutine,
        NodeKind::Resource,
    ),
];

pub fn pairing_kinds(from: NodeKind, to: NodeKind) -> Vec<EdgeKind> {
    PAIRINGS
        .iter()
        .filter(|&&(_, f, t)| f == from && t == to)
        .map(|&(k, _, _)| k)
        .collect()
}

const KINDS: [NodeKind; 5] = [
    NodeKind::Functionality,
    NodeKind::Protocol,
    NodeKind::Party,
    NodeKind::Subroutine,
    NodeKind::Resource,
];

#[derive(Debug, Clone)]
pub struct RawGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

/// Random valid DAG with at most `max_nodes` nodes. Edges only run from
/// lower to higher generation index; ids are shuffled so that id order and
/// topological order disagree.
pub fn random_dag<R: Rng>(rng: &mut R, max_nodes: usize, with_parties: bool) -> RawGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut names: Vec<String> = (0..max_nodes.max(n))
        .map(|i| format!("{}{}", (b'a' + (i % 26) as u8) as char, i / 26))
        .collect();
    names.shuffle(rng);
    let density: f64 = rng.gen_range(0.15..0.7);

    let mut nodes = Vec::with_capacity(n);
    for name in names.iter().take(n) {
        let kind = loop {
            let k = *KINDS.choose(rng).unwrap();
            if with_parties || k != NodeKind::Party {
                break k;
            }
        };
        let mut node = Node::new(name.clone(), name.to_uppercase(), kind);
        if kind.is_atomic() || rng.gen_bool(0.2) {
            node = node.with_stage(NetworkStage::from_ordinal(rng.gen_range(0..6)).unwrap());
        }
        nodes.push(node);
    }

    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let options = pairing_kinds(nodes[i].kind, nodes[j].kind);
            if !options.is_empty() && rng.gen_bool(density) {
                let kind = *options.choose(rng).unwrap();
                edges.push(Edge::new(nodes[i].id.clone(), nodes[j].id.clone(), kind));
            }
        }
    }
    edges.shuffle(rng);
    RawGraph { nodes, edges }
}

/// Transitive closure by repeated relaxation over the edge list:
/// `reach[a]` holds every id reachable from `a` in one or more steps.
pub fn closure(raw: &RawGraph) -> BTreeMap<String, BTreeSet<String>> {
    let mut reach: BTreeMap<String, BTreeSet<String>> = raw
        .nodes
        .iter()
        .map(|n| (n.id.clone(), BTreeSet::new()))
        .collect();
    for e in &raw.edges {
        reach.get_mut(&e.from).unwrap().insert(e.to.clone());
    }
    loop {
        let mut changed = false;
        for e in &raw.edges {
            let below: Vec<String> = reach[&e.to].iter().cloned().collect();
            let set = reach.get_mut(&e.from).unwrap();
            for b in below {
                changed |= set.insert(b);
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// Order-scanning availability oracle: start from the selection and its
/// descendants, then sweep every node in list order, adding any direct
/// ascendant of the available set whose rule holds, until a sweep adds
/// nothing.
pub fn naive_available(
    raw: &RawGraph,
    selected: &BTreeSet<String>,
    mode: AvailabilityMode,
) -> BTreeSet<String> {
    let reach = closure(raw);
    let mut avail: BTreeSet<String> = selected.clone();
    for s in selected {
        avail.extend(reach[s].iter().cloned());
    }
    loop {
        let mut added = false;
        for node in &raw.nodes {
            if avail.contains(&node.id) {
                continue;
            }
            let outs: Vec<&Edge> = raw.edges.iter().filter(|e| e.from == node.id).collect();
            if !outs.iter().any(|e| avail.contains(&e.to)) {
                continue;
            }
            let ok = if mode == AvailabilityMode::AnyImpl && node.kind == NodeKind::Functionality {
                let (impls, rest): (Vec<&&Edge>, Vec<&&Edge>) =
                    outs.iter().partition(|e| e.kind == EdgeKind::ImplementedBy);
                rest.iter().all(|e| avail.contains(&e.to))
                    && (impls.is_empty() || impls.iter().any(|e| avail.contains(&e.to)))
            } else {
                outs.iter().all(|e| avail.contains(&e.to))
            };
            if ok {
                avail.insert(node.id.clone());
                added = true;
            }
        }
        if !added {
            return avail;
        }
    }
}

/// Random subset of node ids.
pub fn random_subset<R: Rng>(rng: &mut R, raw: &RawGraph, p: f64) -> BTreeSet<String> {
    raw.nodes
        .iter()
        .filter(|_| rng.gen_bool(p))
        .map(|n| n.id.clone())
        .collect()
}

/// Independent slug rule for table text: lowercase ASCII alphanumerics,
/// everything else collapses to single hyphens.
pub fn slug(text: &str) -> String {
    let mut out = String::new();
    let mut gap = false;
    for c in text.chars() {
        if c.is_ascii_alphanumeric() {
            if gap && !out.is_empty() {
                out.push('-');
            }
            gap = false;
            out.push(c.to_ascii_lowercase());
        } else {
            gap = true;
        }
    }
    out
}

/// The appendix atomic-functions table, one entry per protocol row, with
/// cell text as printed. `(Uses ...)` cells are kept verbatim.
pub const TABLE_ROWS: &[(&str, &[&str])] = &[
    (
        "GHZ-based Quantum Anonymous Transmission",
        &[
            "Classical authenticated channel",
            "Creation and broadcast of GHZ state",
            "Classical collision detection protocol",
            "Single qubit measurement",
            "Single qubit Hadamard gate",
            "Local memory",
            "Teleportation",
        ],
    ),
    (
        "Verifiable Quantum Anonymous Transmission",
        &[
            "Notification (private computation of classical parity, OR, Rand)",
            "Single qubit measurements in the equatorial plane",
            "Local memory",
            "(Uses GHZ anonymous transmission as a subroutine)",
        ],
    ),
    (
        "Polynomial Code based Quantum Authentication",
        &["Clifford circuits (error correction)", "Local memory"],
    ),
    (
        "Fast Quantum Byzantine Agreement",
        &[
            "Creation and broadcast of GHZ state",
            "Multipartite Entanglement Verification",
            "(Uses oblivious common coin)",
            "(Uses Verifiable Quantum Secret Sharing)",
        ],
    ),
    (
        "Quantum Bit Commitment",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
            "Secure classical channel",
            "Fast operations to keep the relativistic constraints",
        ],
    ),
    (
        "Quantum Coin Flipping",
        &["π/9 single qubit preparation", "Multi qubit POVM"],
    ),
    (
        "Gottesman and Chuang Quantum Digital Signature",
        &["Local memory", "Swap test", "Stabilizer states creation"],
    ),
    (
        "Prepare and Measure Quantum Digital Signature (QDS)",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
        ],
    ),
    (
        "Measurement Device Independent QDS",
        &[
            "Classical authenticated channel",
            "Measurement Device Independent QKD link",
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
        ],
    ),
    (
        "Multipartite Entanglement Verification",
        &[
            "Classical authenticated channel",
            "Secure classical broadcast",
            "Common shared randomness",
            "Local memory",
            "BB84 Decoding to classical data",
            "Creation and broadcast of GHZ state",
        ],
    ),
    ("Quantum Fingerprinting", &["Clifford gates", "Swap test"]),
    (
        "BB84",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
            "Authenticated classical channel",
            "Privacy amplification",
            "Information reconciliation",
        ],
    ),
    (
        "Device Independent QKD",
        &[
            "EPR distribution",
            "Information reconciliation",
            "Privacy amplification",
        ],
    ),
    ("Quantum Leader Election", &["(Uses Weak coin flipping)"]),
    (
        "Quantum Cheque",
        &[
            "Creation and broadcast of GHZ state",
            "Local memory",
            "Quantum 1-way function",
            "SWAP test",
            "(Uses QKD)",
        ],
    ),
    ("Quantum Coin", &["Clifford gates", "Local memory"]),
    (
        "Quantum Token",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
            "Local memory",
        ],
    ),
    (
        "Wiesner Quantum Money",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
            "Local memory",
        ],
    ),
    (
        "Quantum Oblivious transfer",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
        ],
    ),
    ("Classical FHE for Quantum Circuits", &["Full QC"]),
    (
        "Measurement-Only Universal Blind Quantum Computation",
        &["Graph state generation", "Equatorial plane measurements"],
    ),
    (
        "Prepare-and-Send Quantum Fully Homomorphic Encryption",
        &["Full QC (server)", "Quantum OTP (client)"],
    ),
    (
        "Prepare-and-Send Universal Blind Quantum Computation",
        &["Graph state generation", "Equatorial plane measurements"],
    ),
    (
        "Pseudo-Secret Random Qubit Generator",
        &["Full QC on server's side", "Quantum-safe one-way functions"],
    ),
    (
        "Prepare-and-Send Verifiable Universal Blind Quantum Computation",
        &[
            "Graph state generation",
            "Equatorial plane measurement",
            "Quantum One Time Pad",
            "Local memory",
        ],
    ),
    (
        "Measurement-Only Verifiable Universal Blind Quantum Computation",
        &[
            "Graph state generation",
            "Equatorial plane measurement",
            "Local memory",
        ],
    ),
    (
        "Prepare-and-Send Verifiable Quantum Fully Homomorphic Encryption",
        &["Full QC (server)", "Clifford QC (client)"],
    ),
    (
        "Secure Multiparty Delegated Quantum Computation",
        &["Graph state generation", "Verifiable secret sharing"],
    ),
    (
        "State Teleportation",
        &[
            "EPR state source and broadcasting",
            "BB84 Decoding to classical data",
        ],
    ),
    (
        "Weak String Erasure",
        &[
            "BB84 Encoding of classical data",
            "BB84 Decoding to classical data",
        ],
    ),
];

/// Row names whose slug differs from the frozen seed id.
pub const ROW_ALIASES: &[(&str, &str)] = &[
    (
        "prepare-and-measure-quantum-digital-signature-qds",
        "prepare-and-measure-quantum-digital-signature",
    ),
    (
        "measurement-device-independent-qds",
        "measurement-device-independent-quantum-digital-signature",
    ),
    (
        "device-independent-qkd",
        "device-independent-quantum-key-distribution",
    ),
    (
        "classical-fhe-for-quantum-circuits",
        "classical-fully-homomorphic-encryption-for-quantum-circuits",
    ),
];

/// Cell slugs whose seed id differs, including the `(Uses ...)` targets.
pub const CELL_ALIASES: &[(&str, &str)] = &[
    (
        "notification-private-computation-of-classical-parity-or-rand",
        "notification",
    ),
    (
        "single-qubit-measurements-in-the-equatorial-plane",
        "equatorial-plane-measurement",
    ),
    (
        "equatorial-plane-measurements",
        "equatorial-plane-measurement",
    ),
    (
        "multipartite-entanglement-verification",
        "entanglement-verification",
    ),
    (
        "fast-operations-to-keep-the-relativistic-constraints",
        "fast-operations-relativistic-constraints",
    ),
    (
        "9-single-qubit-preparation",
        "pi-over-9-single-qubit-preparation",
    ),
    (
        "authenticated-classical-channel",
        "classical-authenticated-channel",
    ),
    ("full-qc", "full-quantum-computation"),
    ("full-qc-server", "full-quantum-computation"),
    ("full-qc-on-server-s-side", "full-quantum-computation"),
    ("quantum-otp-client", "quantum-one-time-pad"),
    ("clifford-qc-client", "clifford-quantum-computation"),
    (
        "quantum-safe-one-way-functions",
        "quantum-safe-one-way-function",
    ),
    ("epr-state-source-and-broadcasting", "epr-distribution"),
    (
        "uses-ghz-anonymous-transmission-as-a-subroutine",
        "ghz-based-quantum-anonymous-transmission",
    ),
    ("uses-oblivious-common-coin", "coin-flipping"),
    ("uses-verifiable-quantum-secret-sharing", "secret-sharing"),
    ("uses-weak-coin-flipping", "coin-flipping"),
    ("uses-qkd", "key-distribution"),
];

fn alias(table: &[(&str, &str)], s: String) -> String {
    table
        .iter()
        .find(|(from, _)| *from == s)
        .map(|(_, to)| to.to_string())
        .unwrap_or(s)
}

pub fn row_id(row: &str) -> String {
    alias(ROW_ALIASES, slug(row))
}

/// A transcribed row mapped to ids: atomic requirements and `(Uses ...)`
/// targets kept apart.
pub struct MappedRow {
    pub protocol: String,
    pub atomics: BTreeSet<String>,
    pub uses: BTreeSet<String>,
}

pub fn mapped_rows() -> Vec<MappedRow> {
    TABLE_ROWS
        .iter()
        .map(|(row, cells)| {
            let mut atomics = BTreeSet::new();
            let mut uses = BTreeSet::new();
            for cell in *cells {
                let id = alias(CELL_ALIASES, slug(cell));
                if cell.starts_with("(Uses") {
                    uses.insert(id);
                } else {
                    atomics.insert(id);
                }
            }
            MappedRow {
                protocol: row_id(row),
                atomics,
                uses,
            }
        })
        .collect()
}

/// Raw seed corpus JSON, read straight from disk.
pub fn raw_seed() -> serde_json::Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/seed.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Dependency edges read straight from the raw seed JSON as
/// (from, to, field) triples. Each reference field of a record (and of each
/// party) is one edge; functionality page `protocols` lists are
/// documentation, not edges.
pub fn raw_seed_edges() -> BTreeSet<(String, String, String)> {
    let seed = raw_seed();
    let strs = |v: &serde_json::Value, key: &str| -> Vec<String> {
        v.get(key)
            .and_then(|a| a.as_array())
            .map(|a| a.iter().map(|s| s.as_str().unwrap().to_string()).collect())
            .unwrap_or_default()
    };
    let mut edges = BTreeSet::new();
    for rec in seed["nodes"].as_array().unwrap() {
        let id = rec["id"].as_str().unwrap().to_string();
        // implemented-by points from the functionality into this protocol
        for f in strs(rec, "implements") {
            edges.insert((f, id.clone(), "implements".to_string()));
        }
        for key in ["uses_protocols", "subroutines", "resources"] {
            for t in strs(rec, key) {
                edges.insert((id.clone(), t, key.to_string()));
            }
        }
        for party in rec
            .get("parties")
            .and_then(|p| p.as_array())
            .into_iter()
            .flatten()
        {
            let pid = format!("{id}--{}", slug(party["name"].as_str().unwrap()));
            edges.insert((id.clone(), pid.clone(), "parties".to_string()));
            for key in ["uses_protocols", "subroutines", "resources"] {
                for t in strs(party, key) {
                    edges.insert((pid.clone(), t, key.to_string()));
                }
            }
        }
    }
    edges
}

/// Ids of the raw seed records plus synthesized party ids.
pub fn raw_seed_ids() -> BTreeSet<String> {
    let mut ids: BTreeSet<String> = raw_seed()["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap().to_string())
        .collect();
    ids.extend(raw_seed_edges().into_iter().flat_map(|(a, b, _)| [a, b]));
    ids
}

pub fn raw_in_degrees() -> BTreeMap<String, usize> {
    let mut degree: BTreeMap<String, usize> =
        raw_seed_ids().into_iter().map(|id| (id, 0)).collect();
    for (_, to, _) in raw_seed_edges() {
        *degree.get_mut(&to).unwrap() += 1;
    }
    degree
}

/// Everything that transitively depends on `id`, by repeated scanning of
/// the raw edge list.
pub fn raw_ascendants(id: &str) -> BTreeSet<String> {
    let edges = raw_seed_edges();
    let mut found: BTreeSet<String> = BTreeSet::new();
    loop {
        let before = found.len();
        for (from, to, _) in &edges {
            if to == id || found.contains(to) {
                found.insert(from.clone());
            }
        }
        if found.len() == before {
            return found;
        }
    }
}
