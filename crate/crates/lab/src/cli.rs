//! Command-line frontend. Exit codes: 0 when every check passes, 1 when a
//! check fails, 2 on usage, configuration or lookup errors.

use std::io::Write;

use clap::{Parser, Subcommand};
use noetherlab_core::catalog::{CatalogError, EntryData, EntryKind};
use noetherlab_core::euler_map::{to_eulerian, MapError};
use noetherlab_core::jet::Entropy;
use noetherlab_core::model::{GammaMode, ModelConfig};
use noetherlab_core::noether::detect_scale;

use crate::catalog_io::{self, Entry};
use crate::config::{ConfigError, Partial, RunConfig};
use crate::identities::{commutation_checks, noether_identity_checks, MIN_PAIRS};
use crate::report::{write_records, Format, Record, Status};
use crate::suite::{self, catalog, pretty_tuple};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "noetherlab", version, about = "Symbolic and numeric verification of conservation laws of 2D Lagrangian gas dynamics")]
struct Cli {
    /// Adiabatic exponent: `symbolic` or a rational such as 5/3.
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// `isentropic` or `general`.
    #[arg(long, global = true)]
    entropy: Option<String>,
    /// Comma-separated subset of admitted, noether, claws, eulerian, oracle, or `all`.
    #[arg(long = "suite", global = true)]
    suite: Option<String>,
    /// Relative tolerance of numeric checks.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Random points per numeric check.
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Seed of numeric checks (fallback: NOETHERLAB_SEED).
    #[arg(long, global = true)]
    seed: Option<String>,
    /// `text` or `json-lines`; `show` also accepts `toml`.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the selected suites over the catalog.
    Verify,
    /// Print a catalog entry, or every entry with `all`.
    Show { id: String },
    /// Print the Eulerian image of a Lagrangian conserved vector.
    Map { id: String },
    /// Check the Noether identity on random pairs and the commutation identity on the catalog.
    CheckIdentity,
    /// Run the numeric checks of one entry.
    Oracle { id: String },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("unknown catalog id '{0}'")]
    UnknownId(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Unknown(id) => CliError::UnknownId(id),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Flags over the config file over the environment.
fn resolve(cli: &Cli, allow_toml: bool) -> Result<(RunConfig, bool), CliError> {
    let mut flags = Partial::default();
    let mut toml = false;
    let pairs = [
        ("gamma", &cli.gamma),
        ("entropy", &cli.entropy),
        ("suites", &cli.suite),
        ("tol", &cli.tol),
        ("trials", &cli.trials),
        ("seed", &cli.seed),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            flags.set(k, v)?;
        }
    }
    match cli.format.as_deref() {
        Some("toml") if allow_toml => toml = true,
        Some(f) => flags.set("format", f)?,
        None => {}
    }
    let file = match &cli.config {
        Some(p) => Partial::from_file(p)?,
        None => Partial::default(),
    };
    Ok((flags.or(file).or(Partial::from_env()?).resolve(), toml))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify => {
            let (rc, _) = resolve(&cli, false)?;
            let records = suite::run(&rc);
            emit(out, &records, rc.format)
        }
        Command::Show { id } => {
            let (rc, toml) = resolve(&cli, true)?;
            show(out, id, &rc, toml)
        }
        Command::Map { id } => {
            let (rc, _) = resolve(&cli, false)?;
            map(out, id, &rc)
        }
        Command::CheckIdentity => {
            let (rc, _) = resolve(&cli, false)?;
            let opts = rc.oracle();
            let mut records = Vec::new();
            let outs = noether_identity_checks(MIN_PAIRS, &opts)?;
            for o in outs {
                let ok = o.passed(opts.tol);
                let mut r = Record::new(&o.label, "noether-identity", "gamma=symbolic, entropy=general", Status::from_bool(ok))
                    .reference("Noether identity")
                    .seed(opts.seed)
                    .detail(format!("symbolic residual {}, worst numeric residual {:.3e}", if o.symbolic { "zero" } else { "nonzero" }, o.numeric.worst));
                if !ok {
                    r = r.witness(o.witness.clone());
                }
                records.push(r);
            }
            for c in rc.model_configs() {
                for (id, ok, witness) in commutation_checks(&c)? {
                    records.push(
                        Record::new(&id, "commutation-identity", &c.describe(), Status::from_bool(ok))
                            .reference("variational derivative of a symmetry action")
                            .witness(witness),
                    );
                }
            }
            emit(out, &records, rc.format)
        }
        Command::Oracle { id } => {
            let (rc, _) = resolve(&cli, false)?;
            let entry = catalog().get(id)?;
            let mut tasks = Vec::new();
            // negative controls of an entry run outside its scope
            for c in rc.model_configs() {
                tasks.extend(suite::oracle_entry(entry, &c, rc.oracle()));
            }
            if tasks.is_empty() {
                return Err(CliError::Usage(format!("no numeric checks for {id} under the selected configuration")));
            }
            emit(out, &suite::execute(&tasks), rc.format)
        }
    }
}

fn emit(out: &mut dyn Write, records: &[Record], format: Format) -> Result<i32, CliError> {
    write_records(out, records, format)?;
    Ok(if records.iter().all(Record::passed) { EXIT_PASS } else { EXIT_FAIL })
}

/// A configuration in which `e` holds, honoring explicit settings.
fn config_for(e: &EntryData, rc: &RunConfig) -> Result<ModelConfig, CliError> {
    let gamma = match (&rc.gamma, e.scope.gamma_two) {
        (Some(g), _) => g.clone(),
        (None, true) => GammaMode::Rational(noetherlab_core::coeff::rat(2, 1)),
        (None, false) => GammaMode::Symbolic,
    };
    let entropy = rc.entropy.or(e.scope.entropy).unwrap_or(Entropy::General);
    let c = ModelConfig::new(gamma, entropy).map_err(|x| CliError::Usage(x.to_string()))?;
    if !e.scope.basis_only && !e.scope.applies(&c) {
        return Err(CatalogError::NotApplicable { id: e.id.clone(), config: c.describe() }.into());
    }
    Ok(c)
}

fn show(out: &mut dyn Write, id: &str, rc: &RunConfig, toml: bool) -> Result<i32, CliError> {
    let cat = catalog();
    let entries: Vec<&EntryData> = if id == "all" { cat.entries().iter().collect() } else { vec![cat.get(id)?] };
    if toml {
        let text = catalog_io::to_toml(entries.iter().copied()).map_err(|e| CliError::Usage(e.to_string()))?;
        write!(out, "{text}")?;
        return Ok(EXIT_PASS);
    }
    for e in entries {
        match rc.format {
            Format::JsonLines => {
                serde_json::to_writer(&mut *out, &Entry::from(e)).map_err(std::io::Error::other)?;
                writeln!(out)?;
            }
            Format::Text => show_text(out, e, rc)?,
        }
    }
    Ok(EXIT_PASS)
}

fn show_text(out: &mut dyn Write, e: &EntryData, rc: &RunConfig) -> Result<(), CliError> {
    writeln!(out, "{} [{}] {}", e.id, e.kind.name(), e.reference)?;
    let scope = match (e.scope.entropy, e.scope.gamma_two) {
        (None, false) => "all configurations".to_string(),
        (Some(x), false) => format!("{x:?} entropy").to_lowercase(),
        (None, true) => "gamma = 2".into(),
        (Some(x), true) => format!("{x:?} entropy, gamma = 2").to_lowercase(),
    };
    writeln!(out, "  scope: {scope}{}", if e.scope.basis_only { " (building block only)" } else { "" })?;
    let pretty = config_for(e, rc).ok().and_then(|c| e.components(&c).ok());
    for (k, raw) in e.components.iter().enumerate() {
        match pretty.as_ref().and_then(|p| p.get(k)) {
            Some(p) => writeln!(out, "  [{k}] {}", p.pretty())?,
            None => writeln!(out, "  [{k}] {raw}")?,
        }
    }
    if let Some(s) = &e.source {
        writeln!(out, "  source: {s}, scale {}", e.scale.as_deref().unwrap_or("1"))?;
    }
    if let Some(b) = &e.certificate {
        writeln!(out, "  certificate: ({})", b.join(", "))?;
    }
    for a in &e.alternates {
        writeln!(out, "  {}: ({})", a.label, a.components.join(", "))?;
    }
    if let Some(n) = &e.note {
        writeln!(out, "  note: {n}")?;
    }
    Ok(())
}

fn map(out: &mut dyn Write, id: &str, rc: &RunConfig) -> Result<i32, CliError> {
    let cat = catalog();
    let e = cat.get(id)?;
    if e.kind != EntryKind::ConservedVector {
        return Err(CatalogError::Kind { id: id.into(), found: e.kind, expected: EntryKind::ConservedVector }.into());
    }
    let c = config_for(e, rc)?;
    let t = e.vector(&c)?;
    match to_eulerian(&t) {
        Ok(m) => {
            writeln!(out, "{}", pretty_tuple(&m))?;
            let known = cat.of_kind(EntryKind::EulerianVector).filter(|x| x.source.as_deref() == Some(id) && x.scope.applies(&c));
            for x in known {
                let v = x.vector(&c)?;
                match detect_scale(&m, &v) {
                    Some(s) => writeln!(out, "  = {} x {} ({})", s.to_grammar(), x.id, x.reference)?,
                    None => writeln!(out, "  differs from {} ({})", x.id, x.reference)?,
                }
            }
            Ok(EXIT_PASS)
        }
        Err(MapError::NoEulerianRepresentation { atoms }) => {
            writeln!(out, "no Eulerian representation for {id} [{}]: Lagrangian atoms remain: {}", c.describe(), atoms.join(", "))?;
            Ok(EXIT_PASS)
        }
        Err(x) => Err(CliError::Usage(x.to_string())),
    }
}

