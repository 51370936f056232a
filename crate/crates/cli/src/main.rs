use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ringlat::analysis::{self, suites_for, AnalyzeOptions, Instance, Loaded};
use ringlat::fixtures::{self, FixtureClass, Origin};
use ringlat::interval::Limits;
use ringlat::poset::SupportPoset;
use ringlat::report::AnalysisReport;
use serde_json::Value;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "ringlat", version, about = "Intermediate-ring lattices of finite ring extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON spec: an extension, support poset, labelled lattice or composite
    path: Option<PathBuf>,
    /// Use a built-in fixture instead of a file (see `ringlat fixtures`)
    #[arg(long, conflicts_with = "path")]
    fixture: Option<String>,
    /// Largest ambient ring that will be built
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here; `-` or absent means standard output
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a Graphviz Hasse diagram here
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Record per-suite wall-clock time (reports are then no longer byte-stable)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and build an input without analysing it
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Enumerate the lattice with supports, metrics and cover types
    Lattice {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Run every applicable suite, or only those named with --suite
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        suite: Vec<String>,
        /// Pin a report value, as `/suite/path=JSON`; a mismatch exits with status 1
        #[arg(long, value_name = "POINTER=VALUE")]
        expect: Vec<String>,
    },
    /// Splitter table; the DOT output marks each splitter
    Splitters {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Antichain counting and B-criteria on a support poset
    Poset {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Generate a random tree poset with this many nodes instead of reading one
        #[arg(long, conflicts_with_all = ["path", "fixture"])]
        random_tree: Option<usize>,
        /// Generate a random disjoint union of chains with this many nodes
        #[arg(long, conflicts_with_all = ["path", "fixture", "random_tree"])]
        random_chains: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Almost-Pruefer suites on a composite or labelled lattice
    Composite {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// List the built-in fixtures with the origin of their expected values
    Fixtures {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

impl Input {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(n) = self.max_size {
            l.size_cap = n;
        }
        l
    }

    fn load(&self) -> Result<Loaded, CliError> {
        match (&self.path, &self.fixture) {
            (Some(p), _) => {
                let text = read(p)?;
                analysis::load_text(&text, self.limits()).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
            }
            (None, Some(name)) => {
                analysis::load_fixture(name, self.limits()).map_err(|e| CliError::Input(format!("fixture {name}: {e}")))
            }
            (None, None) => Err(CliError::Input("give an input file or --fixture NAME".into())),
        }
    }
}

/// Writes to standard output; a closed pipe (as with `| head`) is not an error.
fn out(text: &str) -> Result<(), CliError> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "stdout".into(), source: e }),
        _ => Ok(()),
    }
}

fn lower<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}").to_lowercase()
}

fn require(loaded: &Loaded, allowed: &[FixtureClass], command: &str) -> Result<(), CliError> {
    if allowed.contains(&loaded.kind()) {
        return Ok(());
    }
    Err(CliError::Input(format!("`{command}` does not take a {} input", lower(loaded.kind()))))
}

fn emit(report: &AnalysisReport, output: &Output, dot: Option<String>) -> Result<ExitCode, CliError> {
    let json = report.to_json();
    let to_stdout = output.json.as_deref().is_none_or(|p| p == Path::new("-"));
    match &output.json {
        Some(p) if !to_stdout => write(p, &json)?,
        _ => out(&json)?,
    }
    if let (Some(p), Some(d)) = (&output.dot, dot) {
        write(p, &d)?;
    }
    let mut lines = String::new();
    for s in &report.suites {
        lines += &format!("{} {}\n", if s.passed { "pass" } else { "FAIL" }, s.suite);
    }
    for e in &report.expectations {
        lines += &format!("{} {} ({})\n", if e.holds { "pass" } else { "FAIL" }, e.pointer, lower(e.origin));
    }
    if to_stdout {
        eprint!("{lines}");
    } else {
        out(&lines)?;
    }
    if report.passed() {
        return Ok(ExitCode::SUCCESS);
    }
    for f in report.failures() {
        eprintln!("witness: {f}");
    }
    Ok(ExitCode::from(1))
}

fn analyze(
    loaded: &Loaded,
    input: &Input,
    output: &Output,
    suites: &[&str],
    dot: Option<String>,
) -> Result<ExitCode, CliError> {
    analyze_pinned(loaded, input, output, suites, dot, &[])
}

/// `/suite/path=VALUE`, where VALUE is JSON or else taken as a string.
fn parse_pin(pin: &str) -> Result<(String, Value), CliError> {
    let (pointer, raw) = pin
        .split_once('=')
        .filter(|(p, _)| p.starts_with('/'))
        .ok_or_else(|| CliError::Input(format!("--expect {pin:?}: expected /suite/path=VALUE")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((pointer.to_string(), value))
}

fn analyze_pinned(
    loaded: &Loaded,
    input: &Input,
    output: &Output,
    suites: &[&str],
    dot: Option<String>,
    pins: &[String],
) -> Result<ExitCode, CliError> {
    let pins = pins.iter().map(|p| parse_pin(p)).collect::<Result<Vec<_>, _>>()?;
    let opts = AnalyzeOptions {
        suites: suites.iter().map(|s| s.to_string()).collect(),
        limits: input.limits(),
        timing: output.timing,
    };
    let mut report =
        analysis::analyze(loaded, &opts, input.fixture.as_deref()).map_err(|e| CliError::Input(e.to_string()))?;
    for (pointer, value) in pins {
        let suite = pointer.trim_start_matches('/').split('/').next().unwrap_or_default();
        if report.suite(suite).is_none() {
            return Err(CliError::Input(format!("--expect {pointer}: suite {suite:?} did not run")));
        }
        report.expect(&pointer, value, Origin::User);
    }
    emit(&report, output, dot)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    use FixtureClass::*;
    match cli.command {
        Command::Validate { input } => {
            let loaded = input.load()?;
            let report = AnalysisReport::new(loaded.name(), loaded.kind(), &loaded.source);
            out(&format!("valid {} {:?} sha256:{}\n", lower(loaded.kind()), loaded.name(), report.instance.hash))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lattice { input, output } => {
            let loaded = input.load()?;
            require(&loaded, &[Extension, Labeled, Composite], "lattice")?;
            let dot = loaded.to_dot();
            analyze(&loaded, &input, &output, &["lattice"], Some(dot))
        }
        Command::Analyze { input, output, suite, expect } => {
            let loaded = input.load()?;
            let suites: Vec<&str> = suite.iter().map(String::as_str).collect();
            let dot = loaded.to_dot();
            analyze_pinned(&loaded, &input, &output, &suites, Some(dot), &expect)
        }
        Command::Splitters { input, output } => {
            let loaded = input.load()?;
            require(&loaded, &[Extension, Labeled, Composite], "splitters")?;
            let dot = analysis::splitter_dot(&loaded).map_err(|e| CliError::Input(e.to_string()))?;
            analyze(&loaded, &input, &output, &["splitters"], dot)
        }
        Command::Poset { input, output, random_tree, random_chains, seed } => {
            let generated = match (random_tree, random_chains) {
                (Some(n), _) => Some(SupportPoset::random_tree(n, seed)),
                (_, Some(n)) => Some(SupportPoset::random_chains(n, seed)),
                _ => None,
            };
            let loaded = match generated {
                Some(p) if (1..=ringlat::poset::MAX_NODES).contains(&p.len()) => Loaded {
                    source: serde_json::to_value(p.to_spec()).expect("posets serialize"),
                    instance: Instance::Poset(p),
                },
                Some(_) => {
                    return Err(CliError::Input(format!("random posets need 1 to {} nodes", ringlat::poset::MAX_NODES)))
                }
                None => input.load()?,
            };
            require(&loaded, &[Poset], "poset")?;
            let dot = loaded.to_dot();
            analyze(&loaded, &input, &output, suites_for(Poset), Some(dot))
        }
        Command::Composite { input, output } => {
            let loaded = input.load()?;
            require(&loaded, &[Composite, Labeled], "composite")?;
            let dot = loaded.to_dot();
            analyze(&loaded, &input, &output, &[], Some(dot))
        }
        Command::Fixtures { json } => {
            let list = fixtures::catalogue();
            match json {
                Some(p) => {
                    let mut text = serde_json::to_string_pretty(&list).expect("catalogue serializes");
                    text.push('\n');
                    if p == Path::new("-") {
                        out(&text)?;
                    } else {
                        write(&p, &text)?;
                    }
                }
                None => {
                    let mut text = String::new();
                    for f in list {
                        text +=
                            &format!("{:<36} {:<10} {:<10} {}\n", f.name, lower(f.class), lower(f.origin), f.summary);
                    }
                    out(&text)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
