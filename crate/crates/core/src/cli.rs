//! The `goppa` command line: every subcommand reads flags or JSON, calls the
//! library and prints one JSON document.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 mathematical failure
//! (a code outside the requested fiber, an audit that found collisions or
//! counterexamples).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::audit::{self, AuditError};
use crate::code::LinearCode;
use crate::field::{Field, FieldDescriptor, FieldError};
use crate::level::{LevelError, LevelStructure, Points};
use crate::moduli::{self, ModuliError};
use crate::pluecker::{self, PlueckerError, PlueckerVector};
use crate::wire::{self, WireError, SCHEMA_VERSION};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Math(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Math(m) => m,
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(FieldError, WireError, LevelError, AuditError, ModuliError, std::io::Error);

impl From<PlueckerError> for CliError {
    fn from(e: PlueckerError) -> Self {
        match e {
            PlueckerError::NotInFiber | PlueckerError::ZeroCoordinateObstruction(_) => {
                CliError::Math(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "goppa", about = "Genus-zero Goppa codes and their level structures", disable_version_flag = true)]
struct Cli {
    /// Print the JSON schema version and exit.
    #[arg(long, short = 'V')]
    version: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
struct StructureArgs {
    /// JSON input (`-` for stdin); replaces the inline flags.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Comma-separated `α_4, .., α_n`.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Comma-separated `l_1, .., l_{n-1}`.
    #[arg(long, allow_hyphen_values = true)]
    scalars: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a canonical level structure and print it.
    Construct {
        #[command(flatten)]
        s: StructureArgs,
        /// Print its code instead.
        #[arg(long)]
        as_code: bool,
    },
    /// Encode a message of length d + 1.
    Encode {
        #[command(flatten)]
        s: StructureArgs,
        #[arg(long, allow_hyphen_values = true)]
        message: String,
    },
    GenMatrix {
        #[command(flatten)]
        s: StructureArgs,
    },
    ParityMatrix {
        #[command(flatten)]
        s: StructureArgs,
    },
    /// Dual structure, or dual code when the input is a code.
    Dual {
        #[command(flatten)]
        s: StructureArgs,
    },
    Tensor {
        #[command(flatten)]
        s: StructureArgs,
        /// Second structure as JSON.
        #[arg(long)]
        other: PathBuf,
    },
    /// The canonical differential structure on the given points.
    CanonicalDiff {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        alphas: String,
    },
    SelfdualCheck {
        #[command(flatten)]
        s: StructureArgs,
    },
    /// Bring a raw structure (JSON) into canonical position.
    ClassicalNormalize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Plücker vector of a code, or closed form of a structure.
    Pluecker {
        #[command(flatten)]
        s: StructureArgs,
    },
    /// Solve for the scalars of a code over known points.
    RecoverScalars {
        /// Code JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "")]
        alphas: String,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Dimension count `Ξ` and related parameters.
    Xi {
        #[arg(long, default_value_t = 0)]
        g: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sweep")]
        d: Option<i64>,
        #[arg(long)]
        sweep: bool,
    },
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
        #[arg(long)]
        field: String,
        /// Length (for delsarte: the largest length).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        d: i64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random codes for delsarte.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Also check every code of length <= n (delsarte).
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AuditKind {
    Injectivity,
    Census,
    Selfdual,
    Delsarte,
}

/// Runs the CLI, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if cli.version {
        let _ = writeln!(stdout, "{}", json!({"schema_version": SCHEMA_VERSION, "version": env!("CARGO_PKG_VERSION")}));
        return 0;
    }
    let Some(command) = cli.command else {
        let _ = writeln!(stderr, "error: a subcommand is required (see --help)");
        return 1;
    };
    let outcome = dispatch(command, stderr).and_then(|(value, status)| {
        emit(&value, cli.out.as_ref(), stdout)?;
        Ok(status)
    });
    match outcome {
        Ok(None) => 0,
        Ok(Some(failure)) => {
            let _ = writeln!(stderr, "{}", failure.message());
            failure.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn emit(value: &Value, out: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_json(path: &PathBuf) -> CliResult<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(wire::parse(&text)?)
}

/// Splits a comma-separated list, keeping commas inside brackets or braces.
pub fn split_list(s: &str) -> Vec<&str> {
    let s = s.trim();
    if s.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub fn parse_elems<F: Field>(f: &F, s: &str) -> Result<Vec<F::Elem>, FieldError> {
    split_list(s).into_iter().map(|x| f.parse_literal(x)).collect()
}

macro_rules! with_field {
    ($desc:expr, $f:ident => $body:expr) => {
        match $desc {
            FieldDescriptor::Finite($f) => $body,
            FieldDescriptor::RationalFunction($f) => $body,
        }
    };
}

/// Either a structure or a code, read from `--input` or inline flags.
enum Input<F: Field> {
    Structure(LevelStructure<F>),
    Code(LinearCode<F>),
}

impl StructureArgs {
    fn descriptor(&self) -> CliResult<(FieldDescriptor, Option<Value>)> {
        if let Some(path) = &self.input {
            let v = read_json(path)?;
            return Ok((wire::field_of(&v)?, Some(v)));
        }
        let spec = self.field.as_deref().ok_or_else(|| CliError::Usage("--field or --input is required".into()))?;
        Ok((FieldDescriptor::parse(spec)?, None))
    }

    fn input<F: Field>(&self, f: &F, json: Option<Value>) -> CliResult<Input<F>> {
        if let Some(v) = json {
            return if v.get("generator").is_some() {
                Ok(Input::Code(wire::code_from_json(f, &v)?))
            } else {
                Ok(Input::Structure(wire::level_from_json(f, &v)?))
            };
        }
        let missing = |name: &str| CliError::Usage(format!("--{name} is required without --input"));
        let n = self.n.ok_or_else(|| missing("n"))?;
        let d = self.d.ok_or_else(|| missing("d"))?;
        let alphas = parse_elems(f, self.alphas.as_deref().unwrap_or(""))?;
        let scalars = match &self.scalars {
            Some(s) => parse_elems(f, s)?,
            None => vec![f.one(); n.saturating_sub(1)],
        };
        Ok(Input::Structure(LevelStructure::new(f.clone(), n, d, alphas, scalars)?))
    }

    fn structure<F: Field>(&self, f: &F, json: Option<Value>) -> CliResult<LevelStructure<F>> {
        match self.input(f, json)? {
            Input::Structure(g) => Ok(g),
            Input::Code(_) => Err(CliError::Usage("expected a level structure, got a code".into())),
        }
    }
}

type Outcome = (Value, Option<CliError>);

fn ok(v: Value) -> CliResult<Outcome> {
    Ok((v, None))
}

fn dispatch(command: Command, stderr: &mut dyn Write) -> CliResult<Outcome> {
    match command {
        Command::Construct { s, as_code } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => {
                let g = s.structure(&f, json)?;
                if as_code {
                    ok(wire::code_to_json(&g.code()?))
                } else {
                    ok(wire::level_to_json(&g))
                }
            })
        }
        Command::Encode { s, message } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => {
                let g = s.structure(&f, json)?;
                let m = parse_elems(&f, &message)?;
                let word = g.encode(&m)?;
                ok(json!({"field": f.spec(), "n": g.n(), "codeword": wire::elems_to_json(&f, &word)}))
            })
        }
        Command::GenMatrix { s } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => ok(wire::matrix_to_json(&s.structure(&f, json)?.generator_matrix()?)))
        }
        Command::ParityMatrix { s } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => ok(wire::matrix_to_json(&s.structure(&f, json)?.parity_check_matrix()?)))
        }
        Command::Dual { s } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => match s.input(&f, json)? {
                Input::Structure(g) => ok(wire::level_to_json(&g.dual_structure()?)),
                Input::Code(c) => ok(wire::code_to_json(&c.dual())),
            })
        }
        Command::Tensor { s, other } => {
            let (desc, json) = s.descriptor()?;
            let second = read_json(&other)?;
            with_field!(desc, f => {
                let g = s.structure(&f, json)?;
                let h = wire::level_from_json(&f, &second)?;
                ok(wire::level_to_json(&g.tensor(&h)?))
            })
        }
        Command::CanonicalDiff { field, n, alphas } => {
            with_field!(FieldDescriptor::parse(&field)?, f => {
                let points = Arc::new(Points::new(f.clone(), n, parse_elems(&f, &alphas)?)?);
                ok(wire::level_to_json(&LevelStructure::canonical_differential_structure(&points)))
            })
        }
        Command::SelfdualCheck { s } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => {
                let g = s.structure(&f, json)?;
                let code = g.code()?;
                ok(json!({
                    "structure": wire::level_to_json(&g),
                    "self_dual": g.is_self_dual(),
                    "code_self_dual": code.is_self_dual(),
                }))
            })
        }
        Command::ClassicalNormalize { input } => {
            let v = read_json(&input)?;
            with_field!(wire::field_of(&v)?, f => ok(wire::level_to_json(&wire::raw_from_json(&f, &v)?.to_canonical()?)))
        }
        Command::Pluecker { s } => {
            let (desc, json) = s.descriptor()?;
            with_field!(desc, f => match s.input(&f, json)? {
                Input::Code(c) => ok(wire::with(
                    wire::pluecker_to_json(&PlueckerVector::of_code(&c)?),
                    &[("source", json!("code"))],
                )),
                Input::Structure(g) => {
                    let closed = PlueckerVector::closed_form(&g)?;
                    let direct = PlueckerVector::of_code(&g.code()?)?;
                    ok(wire::with(
                        wire::pluecker_to_json(&closed),
                        &[("source", json!("closed_form")), ("matches_code", json!(closed == direct))],
                    ))
                }
            })
        }
        Command::RecoverScalars { input, alphas, d } => {
            let v = read_json(&input)?;
            with_field!(wire::field_of(&v)?, f => {
                let code = wire::code_from_json(&f, &v)?;
                let alphas = parse_elems(&f, &alphas)?;
                let scalars = pluecker::recover_scalars(&code, &alphas, d)?;
                ok(wire::level_to_json(&LevelStructure::new(f.clone(), code.n(), d, alphas, scalars)?))
            })
        }
        Command::Xi { g, n, d, sweep } => {
            if sweep {
                ok(to_value(&moduli::sweep(g, n)?))
            } else {
                ok(to_value(&moduli::parameter_report(g, n, d.expect("clap enforces --d"))?))
            }
        }
        Command::Audit { kind, field, n, d, jobs, seed, samples, exhaustive } => {
            let desc = FieldDescriptor::parse(&field)?;
            let f = desc.as_finite().ok_or(AuditError::InfiniteField)?;
            let (value, clean, elapsed) = match kind {
                AuditKind::Injectivity | AuditKind::Census => {
                    let r = if matches!(kind, AuditKind::Injectivity) {
                        audit::injectivity_audit(f, n, d, jobs)?
                    } else {
                        audit::image_census(f, n, d, jobs)?
                    };
                    // collisions only fail an injectivity run inside the predicted range
                    let clean = !matches!(kind, AuditKind::Injectivity) || r.exploratory || r.is_clean();
                    (to_value(&r), clean, r.elapsed)
                }
                AuditKind::Selfdual => {
                    let r = audit::selfdual_census(f, n, d, jobs)?;
                    (to_value(&r), r.is_clean(), r.elapsed)
                }
                AuditKind::Delsarte => {
                    let r = audit::delsarte_audit(f, n, exhaustive, samples, seed, jobs)?;
                    (to_value(&r), r.is_clean(), r.elapsed)
                }
            };
            let _ = writeln!(stderr, "elapsed: {:.3}s", elapsed.as_secs_f64());
            let failure = (!clean).then(|| CliError::Math("audit found collisions or counterexamples".into()));
            Ok((value, failure))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}
