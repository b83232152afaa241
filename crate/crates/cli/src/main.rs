//! `quadforms`: batch interface to the quadratic-forms library.

mod campaign;
mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quadforms::oracle::decide_isotropy;
use quadforms::rings::{find_irreducible, Ring, DEFAULT_CAP};
use quadforms::springer::{
    construct_isotropic_subspace, springer_descend, transfer_space, verify_trace, DescentTrace,
    EtaleExtension, DEFAULT_BUDGET,
};
use quadforms::witt::{diagonalize, find_isotropic, witt_decompose};
use quadforms::QuadraticSpace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use files::{load_extension, load_form, load_ring, read_json, ExtensionFile};

#[derive(Parser)]
#[command(name = "quadforms", version, about = "Quadratic spaces over finite semi-local rings")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Candidates tried per descent step.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Largest enumeration the oracles may perform.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ring inspection.
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Diagonalize, decompose or test a form for isotropy.
    Form { action: FormAction, form: PathBuf },
    /// Write an extension file `R[t]/(f)`; without `--modulus`, `f` is
    /// irreducible in every residue field.
    Extend {
        ring: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// JSON array of coefficients, lowest degree first.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Transfer a form over the extension (or the base change of a form over
    /// the base; the unit form if omitted) down to the base ring.
    Transfer { ext: PathBuf, form: Option<PathBuf> },
    /// Rank-n subspace whose combination becomes isotropic over the extension.
    Subspace { form: PathBuf, ext: PathBuf },
    /// Descend an isotropic vector from an odd-degree extension; writes a trace.
    Descend { form: PathBuf, ext: PathBuf },
    /// Re-check a descent trace.
    VerifyTrace { form: PathBuf, ext: PathBuf, trace: PathBuf },
    /// Run a verification campaign (the built-in default if no file is given).
    Verify { campaign: Option<PathBuf> },
}

#[derive(Subcommand)]
enum RingAction {
    Info { ring: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormAction {
    Diagonalize,
    Witt,
    Isotropy,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Parse(String),
    /// A library precondition failed.
    Precondition(String),
    /// Nothing to descend; carries the oracle report.
    Anisotropic(Value),
    /// A check ran and failed; carries the report.
    Failed(Value),
}

impl From<quadforms::Error> for CliError {
    fn from(e: quadforms::Error) -> Self {
        use quadforms::Error as E;
        match e {
            E::InvalidRing(_) | E::MalformedElement(_) | E::DimensionMismatch { .. } | E::NotSymmetric => {
                CliError::Parse(e.to_string())
            }
            E::Anisotropic => CliError::Anisotropic(json!({ "anisotropic": true })),
            E::Precondition(msg) => CliError::Precondition(msg),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Anisotropic(_) => 4,
        }
    }
}

fn emit(out: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn ring_info(r: &Ring) -> Value {
    json!({
        "ring": r.to_string(),
        "descriptor": r.descriptor(),
        "cardinality": r.cardinality(),
        "is_field": r.is_field(),
        "residue_fields": r.residue_field_sizes(),
    })
}

fn require_odd(ext: &EtaleExtension) -> Result<(), CliError> {
    if ext.degree().is_multiple_of(2) {
        return Err(CliError::Precondition(format!(
            "extension degree {} is not odd",
            ext.degree()
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match &cli.command {
        Command::Ring { action: RingAction::Info { ring } } => Ok(ring_info(&load_ring(ring)?)),
        Command::Form { action, form } => {
            let space = load_form(form)?;
            let r = space.ring();
            Ok(match action {
                FormAction::Diagonalize => {
                    let d = diagonalize(&space);
                    json!({
                        "entries": r.encode_vec(&d.entries),
                        "basis": d.basis.iter().map(|v| r.encode_vec(v)).collect::<Vec<_>>(),
                    })
                }
                FormAction::Witt => {
                    let d = witt_decompose(&space, &mut rng);
                    json!({
                        "index": d.index,
                        "kernel_rank": d.kernel.rank(),
                        "certificate": d.to_json(r),
                    })
                }
                FormAction::Isotropy => {
                    let (iso, mode) = decide_isotropy(&space, cli.cap)?;
                    let mut out = json!({ "isotropic": iso, "oracle": mode });
                    if let Some(v) = iso.then(|| find_isotropic(&space, &mut rng)).flatten() {
                        out["witness"] = r.encode_vec(&v);
                    }
                    out
                }
            })
        }
        Command::Extend { ring, degree, modulus } => {
            let r = load_ring(ring)?;
            let f = match modulus {
                Some(text) => {
                    let v: Value = serde_json::from_str(text)
                        .map_err(|e| CliError::Parse(format!("--modulus: {e}")))?;
                    r.decode_poly(&v)?
                }
                None => find_irreducible(&r, *degree, 1_000_000)?,
            };
            let ext = EtaleExtension::new(&r, &f)?;
            let mut out = serde_json::to_value(ExtensionFile::from_extension(&ext)).expect("serializes");
            out["degree"] = json!(ext.degree());
            out["extension"] = ring_info(ext.ring());
            Ok(out)
        }
        Command::Transfer { ext, form } => {
            let ext = load_extension(ext)?;
            let space = match form {
                Some(path) => load_form(path)?,
                None => QuadraticSpace::diagonal(ext.ring(), &[ext.ring().one()])?,
            };
            let space = if space.ring() == ext.ring() {
                space
            } else if space.ring() == ext.base() {
                ext.base_change(&space)?
            } else {
                return Err(CliError::Precondition("form is over neither ring of the extension".into()));
            };
            let t = transfer_space(&ext, &space)?;
            let d = witt_decompose(&t, &mut rng);
            Ok(json!({
                "form": t.to_json(),
                "rank": t.rank(),
                "witt_index": d.index,
                "kernel_rank": d.kernel.rank(),
            }))
        }
        Command::Subspace { form, ext } => {
            let space = load_form(form)?;
            let ext = load_extension(ext)?;
            let out = construct_isotropic_subspace(&space, &ext, &mut rng)?;
            let r = space.ring();
            Ok(json!({
                "vectors": out.vectors.iter().map(|v| r.encode_vec(v)).collect::<Vec<_>>(),
                "gram_det": r.encode(&out.witness.gram_det),
                "combination": ext.ring().encode_vec(&out.combination),
            }))
        }
        Command::Descend { form, ext } => {
            let space = load_form(form)?;
            let ext = load_extension(ext)?;
            require_odd(&ext)?;
            let space_s = ext.base_change(&space)?;
            let Some(u) = find_isotropic(&space_s, &mut rng) else {
                let mut report = json!({ "anisotropic": true, "ring": ext.ring().to_string() });
                if let Ok((iso, mode)) = decide_isotropy(&space_s, cli.cap) {
                    report["oracle"] = json!(mode);
                    report["oracle_isotropic"] = json!(iso);
                }
                return Err(CliError::Anisotropic(report));
            };
            let trace = springer_descend(&space, &ext, &u, &mut rng, cli.budget)?;
            Ok(trace.to_json(space.ring()))
        }
        Command::VerifyTrace { form, ext, trace } => {
            let space = load_form(form)?;
            let ext = load_extension(ext)?;
            let r = space.ring();
            let trace = DescentTrace::from_json(r, &read_json(trace)?)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            match verify_trace(&space, ext.modulus(), &trace) {
                Ok(()) => Ok(json!({
                    "valid": true,
                    "steps": trace.steps.len(),
                    "fallback": trace.fallback,
                    "vector": r.encode_vec(&trace.vector),
                })),
                Err(e) => Err(CliError::Failed(json!({ "valid": false, "error": e.to_string() }))),
            }
        }
        Command::Verify { campaign } => {
            let config = match campaign {
                Some(path) => campaign::CampaignConfig::from_value(read_json(path)?)?,
                None => campaign::CampaignConfig::default_campaign(),
            };
            let report = campaign::run_campaign(&config, cli.seed, cli.budget, cli.cap)?;
            if report.summary.fail > 0 {
                return Err(CliError::Failed(serde_json::to_value(&report).expect("serializes")));
            }
            Ok(serde_json::to_value(&report).expect("serializes"))
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
    let out = cli.out.as_deref();
    match run(&cli) {
        Ok(value) => match emit(out, &value) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report_error(out, e),
        },
        Err(e) => report_error(out, e),
    }
}

fn report_error(out: Option<&Path>, e: CliError) -> ExitCode {
    let code = e.exit_code();
    match e {
        CliError::Parse(msg) => eprintln!("error: {msg}"),
        CliError::Precondition(msg) => eprintln!("precondition violated: {msg}"),
        CliError::Anisotropic(report) => {
            eprintln!("the form is anisotropic over the extension");
            let _ = emit(out, &report);
        }
        CliError::Failed(report) => {
            eprintln!("verification failed");
            let _ = emit(out, &report);
        }
    }
    ExitCode::from(code)
}
