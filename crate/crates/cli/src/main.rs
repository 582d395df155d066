use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pyts_core::frontend::{Project, ProjectOptions};
use pyts_core::oracle::{self, OracleRecord};
use pyts_core::par::Exec;
use pyts_core::prelude::VirtualTable;
use pyts_core::{prelude_env, FrontendError};

const OK: u8 = 0;
const REJECTED: u8 = 1;
const USAGE: u8 = 2;
const PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "pyts", version, about = "Existential types for Python classes and protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the elaborated type of every class, function and module variable.
    Elaborate(Common),
    /// Check that one class conforms structurally to another.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        subject: String,
        #[arg(long)]
        target: String,
    },
    /// Print C3 linearizations.
    Mro {
        #[command(flatten)]
        common: Common,
        /// Only this class; all user classes otherwise.
        #[arg(long)]
        class: Option<String>,
    },
    /// Print the subclass-of, object-instance-of and type-instance-of edges.
    Relations(Common),
    /// Compare static verdicts with a runtime oracle record.
    OracleDiff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        oracle: PathBuf,
    },
    /// Print the prelude definitions.
    DumpPrelude {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Python source files.
    files: Vec<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Extra nominal edges, one `Sub Base` pair per line.
    #[arg(long, env = "PYTS_VIRTUAL_TABLE")]
    virtual_table: Option<PathBuf>,
    /// Treat int <: float <: complex as subtyping.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    numeric_tower: bool,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<FrontendError> for Failure {
    fn from(e: FrontendError) -> Self {
        Failure { code: PARSE, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("pyts: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Elaborate(c) => {
            let p = load(&c)?;
            Ok((elaborate(&p, format(&c, Format::Text, &[Format::Text, Format::Json])?), OK))
        }
        Command::Check { common, subject, target } => {
            let fmt = format(&common, Format::Text, &[Format::Text, Format::Json])?;
            let p = load(&common)?;
            let report = p.check(&subject, &target).map_err(|e| Failure::usage(e.to_string()))?;
            let out = match fmt {
                Format::Json => pretty(&report),
                _ => report.to_string(),
            };
            Ok((out, if report.verdict { OK } else { REJECTED }))
        }
        Command::Mro { common, class } => {
            let fmt = format(&common, Format::Text, &[Format::Text, Format::Json])?;
            let p = load(&common)?;
            let names: Vec<String> = match class {
                Some(c) if p.class(&c).is_some() => vec![c],
                Some(c) => return Err(Failure::usage(format!("unknown class {c}"))),
                None => p.classes.iter().filter(|c| !p.is_library(&c.name)).map(|c| c.name.clone()).collect(),
            };
            let mut text = String::new();
            let mut map = serde_json::Map::new();
            let mut code = OK;
            for n in names {
                match p.mro(&n) {
                    Ok(mro) => {
                        let _ = writeln!(text, "{}", mro.join(" -> "));
                        map.insert(n, json!(mro));
                    }
                    Err(e) => {
                        eprintln!("pyts: {e}");
                        map.insert(n, json!({ "error": e.to_string() }));
                        code = PARSE;
                    }
                }
            }
            let out = if fmt == Format::Json { pretty(&map) } else { text };
            Ok((out, code))
        }
        Command::Relations(c) => {
            if c.files.is_empty() {
                return Err(Failure::usage("relations needs at least one input file"));
            }
            let fmt = format(&c, Format::Dot, &[Format::Dot, Format::Json, Format::Text])?;
            let p = load(&c)?;
            let g = p.relations();
            for (class, e) in &g.errors {
                eprintln!("pyts: {class}: {e}");
            }
            let out = match fmt {
                Format::Json => pretty(&json!({
                    "edges": g.edges,
                    "interfaces": g.interfaces,
                    "metaclasses": g.metaclasses,
                })),
                Format::Text => {
                    g.edges.iter().map(|e| format!("{} {} {}\n", e.from, e.kind.name(), e.to)).collect()
                }
                Format::Dot => g.to_dot(),
            };
            Ok((out, OK))
        }
        Command::OracleDiff { common, oracle } => {
            let fmt = format(&common, Format::Text, &[Format::Text, Format::Json])?;
            let text = std::fs::read_to_string(&oracle)
                .map_err(|e| Failure::usage(format!("{}: {e}", oracle.display())))?;
            let record: OracleRecord = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", oracle.display())))?;
            let p = load(&common)?;
            let d = oracle::diff(&p, &record);
            let code = if d.unexpected().next().is_some() { REJECTED } else { OK };
            let out = if fmt == Format::Json { pretty(&d) } else { d.render() };
            Ok((out, code))
        }
        Command::DumpPrelude { format } => {
            let env = prelude_env();
            let out = match format {
                Format::Json => pretty(&env.definitions().collect::<Vec<_>>()),
                Format::Text => env.dump(),
                Format::Dot => return Err(Failure::usage("dump-prelude supports text and json")),
            };
            Ok((out, OK))
        }
    }
}

fn format(c: &Common, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = c.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::usage("unsupported --format for this command"))
    }
}

fn load(c: &Common) -> Result<Project, Failure> {
    let virtual_table = match &c.virtual_table {
        Some(path) => read_table(path)?,
        None => VirtualTable::default(),
    };
    let exec = if c.sequential { Exec::Sequential } else { Exec::default() };
    let opts = ProjectOptions { numeric_tower: c.numeric_tower, virtual_table, exec };
    let p = Project::load_files(&c.files, opts)?;
    for w in &p.warnings {
        eprintln!("{w}");
    }
    for e in &p.errors {
        eprintln!("error: {e}");
    }
    Ok(p)
}

fn read_table(path: &Path) -> Result<VirtualTable, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    VirtualTable::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn elaborate(p: &Project, fmt: Format) -> String {
    let defs = p.user_definitions();
    if fmt == Format::Json {
        return pretty(&json!({
            "definitions": defs,
            "functions": p.functions,
            "variables": p.variables,
        }));
    }
    let mut out = String::new();
    for d in defs {
        let _ = writeln!(out, "{} = {}", d.name, d.to_type());
    }
    for (name, t) in &p.functions {
        let _ = writeln!(out, "def {name}: {t}");
    }
    for (name, t) in &p.variables {
        let _ = writeln!(out, "{name}: {t}");
    }
    out
}

fn pretty<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
