//! `kirby`: batch frontend for handle-diagram files.
//!
//! Exit codes: 0 success, 1 verdict unknown or a failed check, 2 usage or
//! parse error, 3 move error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kirby_core::corpus::selftest;
use kirby_core::{
    apply_script, check_gluck_triviality_hypothesis, gluck_twist, parse_certificate, parse_diagram, parse_script,
    serialize_diagram, surger_sphere, trivialize_gluck, GeneratorId, GluckError, HandleDiagram, HandleId,
    InvariantSummary, MoveError, ParseError, SearchBudget, Sign,
};

const CERT_HELP: &str = "\
Certificate files list one term per line:

    term <handle> sign <+|-> conj <word-expr>

The class is the signed sum of the handles. The product of the conjugated
boundary words conj · word(handle)^sign · conj⁻¹, taken in file order, must be
freely trivial in the surgered diagram. `#` starts a comment.";

#[derive(Parser, Debug)]
#[command(name = "kirby", version, about = "Kirby calculus on handle-diagram files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print homology and intersection-form invariants.
    Invariants { diagram: PathBuf },
    /// Apply a move script and print the resulting diagram.
    Apply {
        diagram: PathBuf,
        script: PathBuf,
        /// Also write the resulting diagram to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Print the hash chain of the applied moves.
        #[arg(long)]
        log: bool,
    },
    /// Gluck twist along a 0-framed trivial-word handle.
    Gluck {
        diagram: PathBuf,
        #[arg(long)]
        sphere: String,
        #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
        sign: SignArg,
    },
    /// Surger along a sphere handle, replacing it with a dot.
    Surger {
        diagram: PathBuf,
        #[arg(long)]
        sphere: String,
        #[arg(long)]
        dot: String,
    },
    /// Look for an odd spherical class in the surgered manifold.
    #[command(after_long_help = CERT_HELP)]
    Check {
        diagram: PathBuf,
        #[arg(long)]
        sphere: String,
        /// Certificate file (see --help).
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Search for moves undoing the Gluck twist along a sphere.
    Trivialize {
        diagram: PathBuf,
        #[arg(long)]
        sphere: String,
        /// An odd-framed handle with trivial word.
        #[arg(long)]
        handle: String,
        /// Maximum number of distinct diagrams visited.
        #[arg(long, env = "KIRBY_BUDGET", default_value_t = 10_000)]
        budget: usize,
        /// Maximum script length.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Run the embedded golden corpus.
    Selftest,
}

enum Failure {
    Usage(String),
    Parse { path: PathBuf, source: String, error: ParseError },
    Move(String),
}

impl From<MoveError> for Failure {
    fn from(e: MoveError) -> Self {
        Failure::Move(e.to_string())
    }
}

impl From<GluckError> for Failure {
    fn from(e: GluckError) -> Self {
        Failure::Move(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parsed<T>(path: &Path, parse: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, Failure> {
    let source = read(path)?;
    parse(&source).map_err(|error| Failure::Parse {
        path: path.to_path_buf(),
        source,
        error,
    })
}

fn load(path: &Path) -> Result<HandleDiagram, Failure> {
    parsed(path, parse_diagram)
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

/// Returns the text for stdout and the exit code.
fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Invariants { diagram } => {
            let d = load(&diagram)?;
            Ok((InvariantSummary::of(&d).to_string(), 0))
        }
        Command::Apply {
            diagram,
            script,
            emit,
            log,
        } => {
            let d = load(&diagram)?;
            let s = parsed(&script, parse_script)?;
            let (out, moves) = apply_script(&d, &s).map_err(|e| Failure::Move(e.to_string()))?;
            let text = serialize_diagram(&out);
            if let Some(path) = emit {
                fs::write(&path, &text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut stdout = text;
            if log {
                stdout.push_str("chain:\n");
                stdout.push_str(&moves.render());
            }
            Ok((stdout, 0))
        }
        Command::Gluck { diagram, sphere, sign } => {
            let d = load(&diagram)?;
            let out = gluck_twist(&d, &HandleId::new(sphere), sign.into())?;
            let text = format!(
                "pre:\n{}post:\n{}diagram:\n{}",
                indent(&InvariantSummary::of(&d).to_string()),
                indent(&InvariantSummary::of(&out).to_string()),
                serialize_diagram(&out)
            );
            Ok((text, 0))
        }
        Command::Surger { diagram, sphere, dot } => {
            let d = load(&diagram)?;
            let out = surger_sphere(&d, &HandleId::new(sphere), &GeneratorId::new(dot))?;
            Ok((serialize_diagram(&out), 0))
        }
        Command::Check { diagram, sphere, cert } => {
            let d = load(&diagram)?;
            let cert = cert.map(|p| parsed(&p, parse_certificate)).transpose()?;
            let v = check_gluck_triviality_hypothesis(&d, &HandleId::new(sphere), cert.as_ref())?;
            let code = if v.is_certified() { 0 } else { 1 };
            Ok((v.to_string(), code))
        }
        Command::Trivialize {
            diagram,
            sphere,
            handle,
            budget,
            depth,
        } => {
            let d = load(&diagram)?;
            let b = SearchBudget {
                max_nodes: budget,
                max_depth: depth,
                ..SearchBudget::default()
            };
            let (v, stats) = trivialize_gluck(&d, &HandleId::new(sphere), &HandleId::new(handle), &b)?;
            let code = if v.is_certified() { 0 } else { 1 };
            Ok((format!("{v}visited: {}\nexpanded: {}\n", stats.visited, stats.expanded), code))
        }
        Command::Selftest => {
            let checks = selftest();
            let mut text = String::new();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            text.push_str(&format!("{} passed, {failed} failed\n", checks.len() - failed));
            Ok((text, if failed == 0 { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Parse { path, source, error }) => {
            eprint!("{}: {}", path.display(), error.render(&source));
            ExitCode::from(2)
        }
        Err(Failure::Move(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
