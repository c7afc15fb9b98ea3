use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nlogic::calculus::{check_proof, proof_from_json, proof_to_json, CheckResult, LogicId, ProofNode, Sequent};
use nlogic::cutelim::eliminate_cuts;
use nlogic::formula::{parse_formula, Atom, Formula};
use nlogic::gen;
use nlogic::interp::{lyndon_interpolant_with, verify_interpolant_with, InterpError, Mode};
use nlogic::prop18n::{emulate_with, Direction, TranslationCache};
use nlogic::prover::{Decision, Prover, DEFAULT_BUDGET};
use nlogic::report::Report;
use nlogic::ulip::{modal_post_interpolant_with, sample_pool, verify_post_interpolant_with, ForbiddenSets};
use serde_json::{json, Value};

/// Command-line front end for the NA(m,n), N+A(m,n) and NRA(m,n) toolkit.
#[derive(Parser, Debug)]
#[command(name = "nlogic", version)]
struct Cli {
    /// Logic: NA(m,n), N+A(m,n), NRA(m,n) or N.
    #[arg(long, global = true, default_value = "N")]
    logic: LogicId,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search node budget per query.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Craig,
    Lyndon,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirArg {
    Sharp,
    Flat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a sequent; exit 1 if it is unprovable.
    Prove {
        sequent: String,
        /// Write the proof as JSON.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Interpolant of a provable implication phi -> psi.
    Interpolate {
        phi: String,
        psi: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Lyndon)]
        mode: ModeArg,
    },
    /// Uniform Lyndon post-interpolant of phi.
    Uniform {
        phi: String,
        /// Forbidden positive atoms, comma separated.
        #[arg(long, value_delimiter = ',')]
        ppos: Vec<String>,
        /// Forbidden negative atoms, comma separated.
        #[arg(long, value_delimiter = ',')]
        pneg: Vec<String>,
        /// Random consequences to add to the verification pool.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sharp or flat translation into classical logic.
    Translate {
        phi: String,
        #[arg(long, value_enum)]
        dir: DirArg,
    },
    /// Check a proof in JSON form; exit 1 if it is invalid.
    CheckProof { file: PathBuf },
    /// Eliminate cuts from a proof in JSON form.
    ElimCut {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emulate a cut-free proof in LK through the sharp/flat translation.
    Emulate {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn formula(text: &str) -> Result<Formula> {
    parse_formula(text).with_context(|| format!("cannot parse formula {text:?}"))
}

fn read_proof(path: &Path) -> Result<ProofNode> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    proof_from_json(&text).with_context(|| format!("cannot parse proof in {}", path.display()))
}

fn proof_value(p: &ProofNode) -> Value {
    serde_json::from_str(&proof_to_json(p)).expect("proof JSON is valid")
}

fn write_proof(path: Option<&Path>, p: &ProofNode) -> Result<()> {
    let text = proof_to_json(p);
    match path {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit(format: Format, text: impl FnOnce() -> String, value: Value) {
    match format {
        Format::Text => print!("{}", text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn reject_invalid(proof: &ProofNode, logic: &LogicId) -> Result<()> {
    if let CheckResult::Invalid { path, reason } = check_proof(proof, logic) {
        bail!("input proof is invalid in {logic} at {path:?}: {reason}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let logic = cli.logic;
    let format = cli.format;
    match cli.command {
        Command::Prove { sequent, proof } => {
            let s = Sequent::parse(&sequent).with_context(|| format!("cannot parse sequent {sequent:?}"))?;
            let decision = Prover::with_budget(logic, cli.budget).decide(&s)?;
            let provable = decision.is_provable();
            if let (Decision::Provable(p), Some(path)) = (&decision, &proof) {
                write_proof(Some(path), p)?;
            }
            let value = json!({
                "logic": logic.to_string(),
                "sequent": s.to_string(),
                "provable": provable,
                "proof": match &decision {
                    Decision::Provable(p) => proof_value(p),
                    Decision::Unprovable => Value::Null,
                },
            });
            emit(
                format,
                || match &decision {
                    Decision::Provable(p) => format!("provable in {logic}\n{}", p.render()),
                    Decision::Unprovable => format!("unprovable in {logic}\n"),
                },
                value,
            );
            Ok(code(provable))
        }
        Command::Interpolate { phi, psi, mode } => {
            let (phi, psi) = (formula(&phi)?, formula(&psi)?);
            let mut prover = Prover::with_budget(logic, cli.budget);
            let chi = match lyndon_interpolant_with(&mut prover, &phi, &psi) {
                Ok(chi) => chi,
                Err(InterpError::NotProvable(s)) => {
                    emit(
                        format,
                        || format!("{s} is not provable in {logic}\n"),
                        json!({ "logic": logic.to_string(), "provable": false }),
                    );
                    return Ok(code(false));
                }
                Err(e) => return Err(e.into()),
            };
            let mode = match mode {
                ModeArg::Craig => Mode::Craig,
                ModeArg::Lyndon => Mode::Lyndon,
            };
            let report = verify_interpolant_with(&mut prover, &phi, &psi, &chi, mode)?;
            emit(
                format,
                || format!("{chi}\n{report}"),
                json!({ "logic": logic.to_string(), "provable": true, "interpolant": chi.to_string(), "report": report }),
            );
            Ok(code(report.all_passed()))
        }
        Command::Uniform {
            phi,
            ppos,
            pneg,
            samples,
            seed,
        } => {
            let phi = formula(&phi)?;
            let atoms = |names: &[String]| names.iter().filter(|n| !n.is_empty()).map(|n| Atom::base(n)).collect::<Vec<_>>();
            let forbidden = ForbiddenSets::new(atoms(&ppos), atoms(&pneg));
            let mut cache = TranslationCache::with_budget(cli.budget);
            let chi = modal_post_interpolant_with(&mut cache, &phi, &forbidden, &logic)?;
            let pool = sample_pool(&mut gen::rng(seed), &mut cache, &phi, &forbidden, &logic, samples)?;
            let mut prover = Prover::with_budget(logic, cli.budget);
            let report = verify_post_interpolant_with(&mut prover, &phi, &chi, &forbidden, &pool)?;
            emit(
                format,
                || format!("{chi}\n{report}"),
                json!({ "logic": logic.to_string(), "interpolant": chi.to_string(), "report": report }),
            );
            Ok(code(report.all_passed()))
        }
        Command::Translate { phi, dir } => {
            let phi = formula(&phi)?;
            let dir = match dir {
                DirArg::Sharp => Direction::Sharp,
                DirArg::Flat => Direction::Flat,
            };
            let out = TranslationCache::with_budget(cli.budget).translate(dir, &phi, &logic)?;
            emit(
                format,
                || format!("{out}\n"),
                json!({ "logic": logic.to_string(), "input": phi.to_string(), "translation": out.to_string() }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckProof { file } => {
            let proof = read_proof(&file)?;
            let result = check_proof(&proof, &logic);
            let value = match &result {
                CheckResult::Valid => json!({ "logic": logic.to_string(), "valid": true }),
                CheckResult::Invalid { path, reason } => json!({
                    "logic": logic.to_string(),
                    "valid": false,
                    "path": path,
                    "code": reason.code(),
                    "reason": reason.to_string(),
                }),
            };
            emit(
                format,
                || match &result {
                    CheckResult::Valid => format!("valid in {logic}\n"),
                    CheckResult::Invalid { path, reason } => format!("invalid in {logic} at {path:?}: {reason}\n"),
                },
                value,
            );
            Ok(code(result.is_valid()))
        }
        Command::ElimCut { input, output } => {
            let proof = read_proof(&input)?;
            reject_invalid(&proof, &logic)?;
            let out = eliminate_cuts(&proof, &logic)?;
            finish_transform(format, output.as_deref(), &proof, &out)
        }
        Command::Emulate { input, output } => {
            let proof = read_proof(&input)?;
            reject_invalid(&proof, &logic)?;
            let out = emulate_with(&mut TranslationCache::with_budget(cli.budget), &proof, &logic)?;
            finish_transform(format, output.as_deref(), &proof, &out)
        }
    }
}

/// Writes the transformed proof and a short summary. Without `-o` the
/// proof itself goes to stdout.
fn finish_transform(format: Format, output: Option<&Path>, input: &ProofNode, out: &ProofNode) -> Result<ExitCode> {
    match output {
        Some(path) => {
            write_proof(Some(path), out)?;
            let mut report = Report::new();
            report.push_detail("input", true, format!("{} ({} nodes)", input.conclusion, input.size()));
            report.push_detail("output", true, format!("{} ({} nodes)", out.conclusion, out.size()));
            emit(
                format,
                || report.to_string(),
                json!({
                    "conclusion": out.conclusion.to_string(),
                    "nodes": out.size(),
                    "output": path.display().to_string(),
                }),
            );
        }
        None => match format {
            Format::Text => write_proof(None, out)?,
            Format::Json => println!("{}", serde_json::to_string_pretty(&json!({ "proof": proof_value(out) }))?),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
