//! `ncflat` — exact verification of connections and hom-connections over
//! finite-dimensional algebras, from JSON instance documents.
//!
//! Exit codes: 0 every check passed (skips allowed), 1 at least one check
//! failed, 2 the input could not be used (parse error, missing object,
//! degree cap too low, usage error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncflat_cli::digest::sha256_tag;
use ncflat_cli::instance::{
    hom_instance, instance_json, parse_instance, preset_instance, random_instance, Instance,
    InstanceDto,
};
use ncflat_cli::reportjson::ReportDto;
use ncflat_cli::suites::{run_solve, run_suite, validate_report, SolveTarget, Suite};

use ncflat_core::field::FieldSpec;
use ncflat_core::report::Report;

#[derive(Parser)]
#[command(
    name = "ncflat",
    version,
    about = "Exact verification of connections and hom-connections over finite-dimensional algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rebuild every object in an instance file, reporting axiom violations.
    Validate {
        file: PathBuf,
        /// Write the JSON report here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a verification suite over an instance file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Write the JSON report here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve the affine system for a (hom-)connection on a named module.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: SolveTarget,
        /// Module name inside the instance file.
        #[arg(long)]
        module: String,
        /// Write the instance with the particular solution appended.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the JSON report here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Emit a seeded flat connection on a free module as an instance file.
    Random {
        /// Preset algebra name.
        #[arg(long)]
        algebra: String,
        /// Free rank of the module (at least 1).
        #[arg(long)]
        vdim: usize,
        #[arg(long)]
        seed: u64,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the canonical instance file for a preset algebra.
    Emit {
        /// Preset algebra name.
        #[arg(long)]
        algebra: String,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the graded-complex suite for a preset algebra.
    Dga {
        /// Preset algebra name.
        #[arg(long)]
        algebra: String,
        /// Degree cap for the complex (default 3).
        #[arg(long)]
        cap: Option<usize>,
        /// Write the JSON report here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the hom-connection suite for a preset algebra module.
    Hom {
        /// Preset algebra name.
        #[arg(long)]
        algebra: String,
        /// "regular", or "column" over mat2.
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Random-sample budget for the sweep.
        #[arg(long)]
        samples: Option<usize>,
        /// Write the JSON report here as well.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Anything that stops a command before it can judge its input.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<(String, String), InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_tag(text.as_bytes());
    Ok((text, digest))
}

fn load(path: &Path) -> Result<(InstanceDto, Instance, String), InputError> {
    let (text, digest) = read_input(path)?;
    let dto = parse_instance(&text)?;
    let inst = dto.build()?;
    Ok((dto, inst, digest))
}

fn write_text(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text)
        .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))
}

/// Print the human rendering, write the JSON twin on request, and turn the
/// tally into the exit code.
fn conclude(
    suite: &str,
    digest: &str,
    seed: u64,
    report: &Report,
    json: Option<&Path>,
) -> Result<ExitCode, InputError> {
    let dto = ReportDto::new(suite, digest, seed, report);
    if let Some(path) = json {
        let bytes = dto.json_bytes();
        std::fs::write(path, &bytes)
            .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", dto.human());
    Ok(if dto.summary.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn emit_instance(dto: &InstanceDto, output: Option<&Path>) -> Result<(), InputError> {
    let text = instance_json(dto);
    match output {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.cmd {
        Cmd::Validate { file, json } => {
            let (text, digest) = read_input(&file)?;
            let dto = parse_instance(&text)?;
            let report = validate_report(&dto);
            conclude("validate", &digest, 0, &report, json.as_deref())
        }
        Cmd::Verify { file, suite, json } => {
            let (_, inst, digest) = load(&file)?;
            let report = run_suite(&inst, suite)?;
            conclude(suite.name(), &digest, inst.options.seed, &report, json.as_deref())
        }
        Cmd::Solve { file, target, module, output, json } => {
            let (dto, inst, digest) = load(&file)?;
            let outcome = run_solve(&dto, &inst, target, &module)?;
            if let (Some(emitted), Some(path)) = (&outcome.emitted, output.as_deref()) {
                write_text(path, &instance_json(emitted))?;
            }
            let label = match target {
                SolveTarget::Connection => "solve:connection",
                SolveTarget::HomConnection => "solve:homconnection",
            };
            conclude(label, &digest, inst.options.seed, &outcome.report, json.as_deref())
        }
        Cmd::Random { algebra, vdim, seed, output } => {
            let dto = random_instance(&algebra, FieldSpec::Rationals, vdim, seed)?;
            emit_instance(&dto, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Emit { algebra, output } => {
            let dto = preset_instance(&algebra, FieldSpec::Rationals)?;
            emit_instance(&dto, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dga { algebra, cap, json } => {
            let mut dto = preset_instance(&algebra, FieldSpec::Rationals)?;
            dto.options.degree_cap = cap;
            let inst = dto.build()?;
            let digest = sha256_tag(instance_json(&dto).as_bytes());
            let report = run_suite(&inst, Suite::Dga)?;
            conclude("dga", &digest, inst.options.seed, &report, json.as_deref())
        }
        Cmd::Hom { algebra, module, seed, samples, json } => {
            let dto = hom_instance(&algebra, &module, FieldSpec::Rationals, seed, samples)?;
            let inst = dto.build()?;
            let digest = sha256_tag(instance_json(&dto).as_bytes());
            let report = run_suite(&inst, Suite::Hom)?;
            conclude("hom", &digest, inst.options.seed, &report, json.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
