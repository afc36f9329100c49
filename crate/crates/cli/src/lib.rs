//! The `qpz` command line. [`run`] holds all behaviour so it can be driven
//! from tests with in-memory streams.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qpz_core::corpus::load_graph;
use qpz_core::export::{export_dot, export_viz};
use qpz_core::json::canonical_json;
use qpz_core::queries::{self, AvailabilityMode, Provenance};
use qpz_core::{CorpusError, KnowledgeGraph, NetworkStage, NodeKind, QueryError};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qpz",
    version,
    about = "Query a knowledge graph of quantum network protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus and report every problem
    Validate {
        corpus: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Ascendants and descendants of a node
    Lineage {
        corpus: PathBuf,
        id: String,
        #[arg(long)]
        json: bool,
    },
    /// Everything that becomes available from a selection
    Available {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        select: Vec<String>,
        #[arg(long, default_value = "paper")]
        mode: AvailabilityMode,
        #[arg(long)]
        json: bool,
    },
    /// Inferred network stage of a node
    Stage { corpus: PathBuf, id: String },
    /// Protocols that run at or below a network stage
    Stages {
        corpus: PathBuf,
        #[arg(long, default_value = "quantum-computing")]
        max: NetworkStage,
    },
    /// Nodes ranked by number of direct dependents
    Centrality {
        corpus: PathBuf,
        #[arg(long)]
        kind: Option<NodeKind>,
        #[arg(long)]
        top: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Per-party requirements of a protocol
    Parties {
        corpus: PathBuf,
        id: String,
        #[arg(long)]
        json: bool,
    },
    /// Write the viz JSON or DOT document
    Export {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Viz)]
        format: Format,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Serve the read-only HTTP API
    Serve {
        corpus: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Viz,
    Dot,
}

/// `validate --json` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ValidationOutput {
    pub valid: bool,
    pub violations: Vec<Problem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Problem {
    pub code: String,
    pub message: String,
}

impl ValidationOutput {
    pub fn from_result(result: &Result<KnowledgeGraph, CorpusError>) -> Self {
        let violations: Vec<Problem> = match result {
            Ok(_) => Vec::new(),
            Err(e) => e
                .problems()
                .into_iter()
                .map(|(code, message)| Problem { code, message })
                .collect(),
        };
        ValidationOutput {
            valid: violations.is_empty(),
            violations,
        }
    }
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Style {
    color: bool,
}

impl Style {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn heading(&self, text: &str) -> String {
        self.paint("1", text)
    }

    fn bad(&self, text: &str) -> String {
        self.paint("31", text)
    }

    fn good(&self, text: &str) -> String {
        self.paint("32", text)
    }
}

/// Runs one invocation. `args` includes the program name. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let style = Style { color };
    let result = match cli.command {
        Command::Validate { corpus, json } => validate(&corpus, json, out, &style),
        other => dispatch(other, out, &style),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_IO
        }
    }
}

fn read_corpus(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<KnowledgeGraph, Failure> {
    load_graph(&read_corpus(path)?).map_err(|e| Failure::Invalid(e.to_string()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(format!("write failed: {e}")))
}

fn validate(
    path: &PathBuf,
    json: bool,
    out: &mut dyn Write,
    style: &Style,
) -> Result<i32, Failure> {
    let result = load_graph(&read_corpus(path)?);
    let report = ValidationOutput::from_result(&result);
    if json {
        emit(out, &canonical_json(&report))?;
    } else {
        let mut text = String::new();
        for p in &report.violations {
            text.push_str(&format!(
                "{} {}\n",
                style.bad(&format!("[{}]", p.code)),
                p.message
            ));
        }
        let count = format!("{} violations", report.violations.len());
        let count = if report.valid {
            style.good(&count)
        } else {
            style.bad(&count)
        };
        text.push_str(&count);
        text.push('\n');
        emit(out, &text)?;
    }
    Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
}

fn id_list(text: &mut String, ids: impl IntoIterator<Item = impl AsRef<str>>) {
    for id in ids {
        text.push_str("  ");
        text.push_str(id.as_ref());
        text.push('\n');
    }
}

fn dispatch(command: Command, out: &mut dyn Write, style: &Style) -> Result<i32, Failure> {
    match command {
        Command::Validate { .. } => unreachable!("handled by run"),
        Command::Lineage { corpus, id, json } => {
            let g = load(&corpus)?;
            let result = queries::lineage(&g, &id)?;
            if json {
                emit(out, &canonical_json(&result))?;
            } else {
                let mut text = format!("{} {}\n", style.heading("focus:"), result.focus);
                text.push_str(
                    &style.heading(&format!("ascendants ({}):", result.ascendants.len())),
                );
                text.push('\n');
                id_list(&mut text, &result.ascendants);
                text.push_str(
                    &style.heading(&format!("descendants ({}):", result.descendants.len())),
                );
                text.push('\n');
                id_list(&mut text, &result.descendants);
                emit(out, &text)?;
            }
        }
        Command::Available {
            corpus,
            select,
            mode,
            json,
        } => {
            let g = load(&corpus)?;
            let result = queries::available(&g, &select, mode)?;
            if json {
                emit(out, &canonical_json(&result))?;
            } else {
                let mut text = format!(
                    "{} {} nodes (mode {})\n",
                    style.heading("available:"),
                    result.available.len(),
                    result.mode
                );
                for tag in [
                    Provenance::Selected,
                    Provenance::Downward,
                    Provenance::Upward,
                ] {
                    let ids: BTreeSet<&str> = result.with(tag);
                    text.push_str(&style.heading(&format!("{} ({}):", tag.as_str(), ids.len())));
                    text.push('\n');
                    for id in ids {
                        let kind = g.node(id).map(|n| n.kind.as_str()).unwrap_or_default();
                        text.push_str(&format!("  {id} [{kind}]\n"));
                    }
                }
                emit(out, &text)?;
            }
        }
        Command::Stage { corpus, id } => {
            let g = load(&corpus)?;
            let stage = queries::infer_stage(&g, &id)?;
            emit(out, &format!("{} ({})\n", stage.label(), stage.ordinal()))?;
        }
        Command::Stages { corpus, max } => {
            let g = load(&corpus)?;
            let mut text = String::new();
            for id in queries::filter_by_stage(&g, max) {
                text.push_str(&id);
                text.push('\n');
            }
            emit(out, &text)?;
        }
        Command::Centrality {
            corpus,
            kind,
            top,
            json,
        } => {
            let g = load(&corpus)?;
            let ranked = queries::centrality(&g, kind, top);
            if json {
                emit(out, &canonical_json(&ranked))?;
            } else {
                let mut text = String::new();
                for entry in &ranked {
                    text.push_str(&format!("{:>4}  {}\n", entry.degree, entry.id));
                }
                emit(out, &text)?;
            }
        }
        Command::Parties { corpus, id, json } => {
            let g = load(&corpus)?;
            let profiles = queries::party_profiles(&g, &id)?;
            if json {
                emit(out, &canonical_json(&profiles))?;
            } else {
                let mut text = String::new();
                if profiles.is_empty() {
                    text.push_str("no parties\n");
                }
                for p in &profiles {
                    text.push_str(&style.heading(&format!("{} ({})", p.party, p.id)));
                    text.push_str(&format!(": {} ({})\n", p.stage.label(), p.stage.ordinal()));
                    text.push_str("  subroutines:\n");
                    for s in &p.subroutines {
                        text.push_str(&format!("    {s}\n"));
                    }
                    text.push_str("  resources:\n");
                    for r in &p.resources {
                        text.push_str(&format!("    {r}\n"));
                    }
                }
                emit(out, &text)?;
            }
        }
        Command::Export {
            corpus,
            format,
            output,
        } => {
            let g = load(&corpus)?;
            let doc = match format {
                Format::Viz => canonical_json(&export_viz(&g, None)?),
                Format::Dot => export_dot(&g),
            };
            match output {
                Some(path) => std::fs::write(&path, doc)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => emit(out, &doc)?,
            }
        }
        Command::Serve {
            corpus,
            port,
            static_dir,
        } => {
            let g = load(&corpus)?;
            let addr = SocketAddr::from(([127, 0, 0, 1], port));
            emit(out, &format!("serving on http://{addr}\n"))?;
            out.flush().map_err(|e| Failure::Io(e.to_string()))?;
            qpz_serve::serve_blocking(g, addr, static_dir)
                .map_err(|e| Failure::Io(format!("serve: {e}")))?;
        }
    }
    Ok(EXIT_OK)
}

/// True unless `QPZ_NO_COLOR=1` or stdout is not a terminal.
pub fn color_enabled() -> bool {
    use std::io::IsTerminal;
    std::env::var("QPZ_NO_COLOR").as_deref() != Ok("1") && io::stdout().is_terminal()
}
