//! The `dolc` command line.
//!
//! ```text
//! dolc check <file> [--include-path DIR]... [--report-json[=PATH]] [--lossy]
//! dolc parse <file> --dump-ast
//! dolc export <file> --format text|xml|rdf|ld [--base-iri IRI] [-o PATH]
//! dolc registry translate <logic> <logic>
//! dolc registry complete [--language L] [--logic L] [--serialization S]
//! dolc registry list logics|languages|serializations|mappings
//! dolc registry export [--format json|rdf] [-o PATH]
//! ```
//!
//! `--registry PATH` (or `DOLC_REGISTRY`) replaces the built-in registry;
//! files ending in `.ttl` are read as the registry's RDF description.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::adapters::turtle::parse_turtle;
use crate::adapters::AdapterRegistry;
use crate::analyzer::{analyze, AnalyzerOptions};
use crate::diagnostics::Diagnostic;
use crate::iri::{compact, expand, Curie, Iri, PrefixMap};
use crate::parser::{dump_ast, parse_document};
use crate::registry::{load_registry, MappingKind, RegistryGraph};
use crate::serialize::{emit, EmissionOptions, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Errors = 1,
    Usage = 2,
    Io = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "dolc", version, about = "Checks, queries and exports DOL distributed ontologies")]
struct Cli {
    /// Registry file (JSON, or Turtle when the name ends in `.ttl`).
    #[arg(long, global = true, env = "DOLC_REGISTRY")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct AnalysisArgs {
    /// Directory searched for referenced ontologies; repeatable. Defaults
    /// to the input file's directory.
    #[arg(long = "include-path", value_name = "DIR")]
    include_path: Vec<PathBuf>,
    /// Let projections drop inexpressible sentences with a warning.
    #[arg(long)]
    lossy: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, flatten and check every link.
    Check {
        file: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Write the JSON report to PATH, or to standard output when no
        /// path is given.
        #[arg(long = "report-json", value_name = "PATH", num_args = 0..=1, require_equals = true, default_missing_value = "-")]
        report_json: Option<PathBuf>,
    },
    /// Parse only.
    Parse {
        file: PathBuf,
        /// Print the syntax tree.
        #[arg(long = "dump-ast")]
        dump_ast: bool,
    },
    /// Emit a document in another format.
    Export {
        file: PathBuf,
        #[arg(long, value_parser = |s: &str| s.parse::<Format>())]
        format: Format,
        /// Linked data: IRI the descriptions are defined by.
        #[arg(long = "base-iri", value_parser = |s: &str| Iri::parse(s).map_err(|e| e.to_string()))]
        base_iri: Option<Iri>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Query the logic registry.
    Registry {
        #[command(subcommand)]
        query: RegistryQuery,
    },
}

#[derive(Debug, Subcommand)]
enum RegistryQuery {
    /// Print the default translation path between two logics.
    Translate { source: String, target: String },
    /// Complete a partial language/logic/serialization declaration.
    Complete {
        #[arg(long)]
        language: Option<String>,
        #[arg(long)]
        logic: Option<String>,
        #[arg(long)]
        serialization: Option<String>,
    },
    /// List registry entries of one kind.
    List { kind: ListKind },
    /// Write the registry as JSON or as RDF (Turtle).
    Export {
        #[arg(long, default_value = "json")]
        format: RegistryFormat,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ListKind {
    Logics,
    Languages,
    Serializations,
    Mappings,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegistryFormat {
    Json,
    Rdf,
}

/// A failed command: what to print and how to exit.
struct Failure(ExitStatus, String);

impl Failure {
    fn io(path: &Path, e: impl fmt::Display) -> Self {
        Failure(ExitStatus::Io, format!("{}: {e}", path.display()))
    }

    fn errors(msg: impl Into<String>) -> Self {
        Failure(ExitStatus::Errors, msg.into())
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn diags(&mut self, file: &str, ds: &[Diagnostic]) {
        for d in ds {
            let _ = writeln!(self.err, "{}", d.render(file));
        }
    }

    fn write_to(&mut self, output: Option<&Path>, text: &str) -> Result<(), Failure> {
        match output.filter(|p| p.as_os_str() != "-") {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e)),
            None => self.out.write_all(text.as_bytes()).map_err(|e| Failure(ExitStatus::Io, e.to_string())),
        }
    }
}

/// Runs the command line; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Success };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return status;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli, &mut io) {
        Ok(status) => status,
        Err(Failure(status, msg)) => {
            let _ = writeln!(io.err, "dolc: {msg}");
            status
        }
    }
}

fn load_registry_from(path: Option<&Path>) -> Result<RegistryGraph, Failure> {
    let Some(path) = path else { return Ok(RegistryGraph::builtin()) };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let reg = if path.extension().is_some_and(|e| e == "ttl") {
        let doc = parse_turtle(&text, &PrefixMap::new(), "b").map_err(|e| Failure::errors(format!("{}: {e}", path.display())))?;
        RegistryGraph::from_rdf(&doc.triples)
    } else {
        load_registry(&text)
    };
    reg.map_err(|e| Failure::errors(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn include_path(file: &Path, args: &AnalysisArgs) -> Vec<PathBuf> {
    if !args.include_path.is_empty() {
        return args.include_path.clone();
    }
    let dir = file.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    vec![dir.to_path_buf()]
}

fn display_name(file: &Path) -> String {
    file.display().to_string()
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> Result<ExitStatus, Failure> {
    match cli.command {
        Command::Check { file, analysis, report_json } => {
            let registry = load_registry_from(cli.registry.as_deref())?;
            let text = read(&file)?;
            let name = display_name(&file);
            let parsed = parse_document(&text);
            let opts = AnalyzerOptions { include_path: include_path(&file, &analysis), lossy: analysis.lossy };
            let a = analyze(&parsed.document, Some(&parsed.source_map), &registry, &AdapterRegistry::builtin(), &opts);
            let errors = parsed.has_errors() || a.has_errors();
            io.diags(&name, &parsed.diagnostics);
            io.diags(&name, &a.diagnostics);
            match report_json {
                Some(path) => io.write_to(Some(&path), &a.json_report(&name, &parsed.diagnostics))?,
                None => {
                    for r in &a.reports {
                        let _ = io.out.write_all(r.render().as_bytes());
                    }
                }
            }
            Ok(if errors { ExitStatus::Errors } else { ExitStatus::Success })
        }
        Command::Parse { file, dump_ast: dump } => {
            let text = read(&file)?;
            let parsed = parse_document(&text);
            io.diags(&display_name(&file), &parsed.diagnostics);
            if dump {
                let _ = io.out.write_all(dump_ast(&parsed.document).as_bytes());
            }
            Ok(if parsed.has_errors() { ExitStatus::Errors } else { ExitStatus::Success })
        }
        Command::Export { file, format, base_iri, output, analysis } => {
            let text = read(&file)?;
            let name = display_name(&file);
            let parsed = parse_document(&text);
            io.diags(&name, &parsed.diagnostics);
            if parsed.has_errors() {
                return Ok(ExitStatus::Errors);
            }
            let doc = if format == Format::LinkedData {
                let registry = load_registry_from(cli.registry.as_deref())?;
                let opts = AnalyzerOptions { include_path: include_path(&file, &analysis), lossy: analysis.lossy };
                let a = analyze(&parsed.document, Some(&parsed.source_map), &registry, &AdapterRegistry::builtin(), &opts);
                io.diags(&name, &a.diagnostics);
                if a.has_errors() {
                    return Ok(ExitStatus::Errors);
                }
                a.document
            } else {
                parsed.document
            };
            let opts = EmissionOptions { format, base_iri, pretty: true };
            let emitted = emit(&doc, &opts).map_err(|e| Failure::errors(e.to_string()))?;
            io.write_to(output.as_deref(), &emitted)?;
            Ok(ExitStatus::Success)
        }
        Command::Registry { query } => {
            let registry = load_registry_from(cli.registry.as_deref())?;
            registry_query(&registry, query, io)
        }
    }
}

/// Reads `<iri>`, an absolute IRI, or a CURIE over the registry prefixes.
fn registry_name(s: &str) -> Result<Iri, Failure> {
    let usage = |e: String| Failure(ExitStatus::Usage, format!("`{s}`: {e}"));
    if let Some(inner) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        return Iri::parse(inner).map_err(|e| usage(e.to_string()));
    }
    if s.contains("://") {
        return Iri::parse(s).map_err(|e| usage(e.to_string()));
    }
    let curie = Curie::parse(s).map_err(|e| usage(e.to_string()))?;
    expand(&curie, &RegistryGraph::prefixes()).map_err(|e| usage(e.to_string()))
}

fn short(iri: &Iri) -> String {
    compact(iri, &RegistryGraph::prefixes()).to_string()
}

fn registry_query(registry: &RegistryGraph, query: RegistryQuery, io: &mut Io<'_>) -> Result<ExitStatus, Failure> {
    let mut lines: Vec<String> = Vec::new();
    match query {
        RegistryQuery::Translate { source, target } => {
            let (s, t) = (registry_name(&source)?, registry_name(&target)?);
            let path = registry.default_translation(&s, &t).map_err(|e| Failure::errors(e.to_string()))?;
            lines.extend(path.iter().map(|m| short(&m.iri)));
        }
        RegistryQuery::Complete { language, logic, serialization } => {
            let parse = |o: Option<String>| o.as_deref().map(registry_name).transpose();
            let (la, lo, se) = (parse(language)?, parse(logic)?, parse(serialization)?);
            let t = registry
                .infer_triple(la.as_ref(), lo.as_ref(), se.as_ref())
                .map_err(|e| Failure::errors(e.to_string()))?;
            lines.push(format!("language {}", short(&t.language)));
            lines.push(format!("logic {}", short(&t.logic)));
            lines.push(format!("serialization {}", short(&t.serialization)));
        }
        RegistryQuery::List { kind } => match kind {
            ListKind::Logics => lines.extend(registry.logics.keys().map(short)),
            ListKind::Languages => lines.extend(registry.languages.values().map(|l| match &l.logic {
                Some(lo) => format!("{} {}", short(&l.iri), short(lo)),
                None => short(&l.iri),
            })),
            ListKind::Serializations => lines.extend(registry.serializations.keys().map(short)),
            ListKind::Mappings => lines.extend(registry.mappings.values().map(|m| {
                let kind = match m.kind {
                    MappingKind::Translation => "translation",
                    MappingKind::Projection => "projection",
                };
                let default = if m.default { " default" } else { "" };
                format!("{} {kind} {} -> {}{default}", short(&m.iri), short(&m.source), short(&m.target))
            })),
        },
        RegistryQuery::Export { format, output } => {
            let text = match format {
                RegistryFormat::Json => registry.to_json(),
                RegistryFormat::Rdf => registry.to_turtle(),
            };
            io.write_to(output.as_deref(), &text)?;
            return Ok(ExitStatus::Success);
        }
    }
    for l in lines {
        let _ = writeln!(io.out, "{l}");
    }
    Ok(ExitStatus::Success)
}
