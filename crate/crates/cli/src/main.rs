//! Command-line front-end.
//!
//! Subcommands: `run` (one run, JSON record), `sweep` (trial grid, CSV),
//! `verify` (lemma suite, JSON report), `refpoints` (lattice CSV) and
//! `front` (Pareto-front listing).
//!
//! Exit codes: 0 success / all checks passed, 1 usage error, 2 check
//! failure, 3 capacity exceeded.

mod config_file;
mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use nsga3_core::engine::{
    derive_theorem_parameters, run_until_covered, AssociationChoice, CheckSet, RunConfig,
    RunOutcome,
};
use nsga3_core::error::Error;
use nsga3_core::objectives::{
    front_cardinality, pareto_front_fitness_set, ProblemDescriptor, ProblemKind,
};
use nsga3_core::refpoints::generate_reference_points;
use nsga3_core::verify::{default_manifest, run_suite, SuiteSelection};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_CHECK_FAILURE: i32 = 2;
const EXIT_CAPACITY: i32 = 3;

#[derive(Parser)]
#[command(name = "nsga3", version, about = "NSGA-III runs, sweeps and lemma verification on the m-LOTZ / m-OMM / m-COCZ benchmark families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write its JSON record.
    Run(RunArgs),
    /// Run a (problem, n, seed) grid in parallel and emit one CSV row per
    /// trial.
    Sweep(sweep::SweepArgs),
    /// Run the empirical verification suite.
    Verify(VerifyArgs),
    /// Emit the reference-point lattice as CSV.
    Refpoints(RefpointsArgs),
    /// List the Pareto-front fitness vectors next to the closed-form count.
    Front(FrontArgs),
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Problem family: lotz, omm, cocz or omm3.
    #[arg(long)]
    problem: String,
    /// Objective count.
    #[arg(short, long)]
    m: usize,
    /// Bitstring length.
    #[arg(short, long)]
    n: usize,
}

impl ProblemArgs {
    fn descriptor(&self) -> Result<ProblemDescriptor, Error> {
        let kind: ProblemKind = self.problem.parse()?;
        ProblemDescriptor::new(kind, self.m, self.n)
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ParamsMode {
    /// Derive mu, p and eps_nad from the instance.
    Auto,
    /// Take mu and p from the flags (eps_nad defaults to f_max).
    Manual,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ChecksMode {
    /// No per-generation audits.
    Off,
    /// Record violations in the run record.
    Record,
    /// Abort the run on the first violation.
    Strict,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AssocMode {
    Auto,
    Exhaustive,
    Lattice,
}

/// Flags left unset fall back to the `--config` file, then to defaults.
/// Boolean flags can be enabled (but not disabled) by the file.
#[derive(Args)]
pub(crate) struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    pub(crate) params: Option<ParamsMode>,
    /// Population size (manual mode).
    #[arg(long)]
    pub(crate) mu: Option<usize>,
    /// Reference-point divisions (manual mode).
    #[arg(long)]
    pub(crate) p: Option<u32>,
    /// Intercept validity threshold (manual mode; defaults to f_max).
    #[arg(long)]
    pub(crate) eps_nad: Option<f64>,
    /// Run seed (default 1).
    #[arg(long)]
    pub(crate) seed: Option<u64>,
    /// Generation cap; defaults to ten times the theorem budget.
    #[arg(long)]
    pub(crate) max_generations: Option<u64>,
    /// Per-generation audits: off, record (default) or strict.
    #[arg(long, value_enum)]
    pub(crate) checks: Option<ChecksMode>,
    #[arg(long, value_enum)]
    pub(crate) assoc: Option<AssocMode>,
    /// Candidate radius for lattice association (default 2).
    #[arg(long)]
    pub(crate) lattice_radius: Option<u32>,
    /// Iterate the literal materialized lattice during selection.
    #[arg(long)]
    pub(crate) faithful: bool,
    /// Keep a per-generation trace in the record.
    #[arg(long)]
    pub(crate) trace: bool,
    /// Record every niching pick (implies trace content).
    #[arg(long)]
    pub(crate) audit: bool,
    /// Optional key=value file supplying flags not given on the line.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path for the JSON record (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which checks to run: all, trig, angle, same-reference, survival,
    /// antichain.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Output path for the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RefpointsArgs {
    #[arg(short, long)]
    m: usize,
    #[arg(short, long)]
    p: u32,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrontArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Write the vectors as CSV instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::InvariantViolation { .. } => EXIT_CHECK_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => sweep::cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Refpoints(args) => cmd_refpoints(args),
        Command::Front(args) => cmd_front(args),
    }
}

fn checks_for(mode: ChecksMode) -> (CheckSet, bool) {
    match mode {
        ChecksMode::Off => (CheckSet::none(), false),
        ChecksMode::Record => (CheckSet::lemmas(), false),
        ChecksMode::Strict => (CheckSet::lemmas(), true),
    }
}

fn association_for(mode: AssocMode, radius: u32) -> AssociationChoice {
    match mode {
        AssocMode::Auto => AssociationChoice::Auto,
        AssocMode::Exhaustive => AssociationChoice::Exhaustive,
        AssocMode::Lattice => AssociationChoice::Lattice { radius },
    }
}

pub(crate) fn build_run_config(
    problem: ProblemDescriptor,
    params: ParamsMode,
    mu: Option<usize>,
    p: Option<u32>,
    eps_nad: Option<f64>,
    seed: u64,
    max_generations: Option<u64>,
) -> Result<RunConfig, Error> {
    let (mu, divisions, eps_nad) = match params {
        ParamsMode::Auto => {
            if mu.is_some() || p.is_some() || eps_nad.is_some() {
                return Err(Error::InvalidParameter(
                    "--mu, --p and --eps-nad require --params manual".into(),
                ));
            }
            derive_theorem_parameters(&problem)?
        }
        ParamsMode::Manual => {
            let mu = mu.ok_or_else(|| {
                Error::InvalidParameter("--params manual requires --mu".into())
            })?;
            let p = p.ok_or_else(|| {
                Error::InvalidParameter("--params manual requires --p".into())
            })?;
            (mu, p, eps_nad.unwrap_or_else(|| f64::from(problem.f_max())))
        }
    };
    Ok(RunConfig {
        problem,
        mu,
        divisions,
        eps_nad,
        seed,
        max_generations: max_generations
            .unwrap_or_else(|| 10 * nsga3_core::engine::theorem_generation_budget(&problem)),
        checks: CheckSet::none(),
        strict_checks: false,
        association: AssociationChoice::Auto,
        faithful_selection: false,
        trace: false,
        selection_audit: false,
    })
}

fn cmd_run(mut args: RunArgs) -> Result<i32, Error> {
    if let Some(path) = &args.config {
        let overlay = config_file::load(path)?;
        config_file::apply_run(&overlay, &mut args)?;
    }
    let problem = args.problem.descriptor()?;
    let mut config = build_run_config(
        problem,
        args.params.unwrap_or(ParamsMode::Auto),
        args.mu,
        args.p,
        args.eps_nad,
        args.seed.unwrap_or(1),
        args.max_generations,
    )?;
    let (checks, strict) = checks_for(args.checks.unwrap_or(ChecksMode::Record));
    config.checks = checks;
    config.strict_checks = strict;
    config.association = association_for(
        args.assoc.unwrap_or(AssocMode::Auto),
        args.lattice_radius.unwrap_or(2),
    );
    config.faithful_selection = args.faithful;
    config.trace = args.trace || args.audit;
    config.selection_audit = args.audit;

    let record = run_until_covered(config)?;
    eprintln!(
        "{}: {}/{} front fitness vectors after {} generations ({} evaluations), {} violations",
        match record.outcome {
            RunOutcome::Covered => "covered",
            RunOutcome::BudgetExhausted => "budget exhausted",
        },
        record.covered,
        record.front_size,
        record.generations,
        record.evaluations,
        record.violations.len(),
    );
    let json = serde_json::to_string_pretty(&record)?;
    write_output(args.out.as_deref(), &json)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let selection: SuiteSelection = args.suite.parse()?;
    let manifest = default_manifest();
    let report = run_suite(&manifest, selection)?;
    for check in &report.checks {
        println!(
            "[{}]{} {}: {} violations / {} samples ({})",
            if check.passed { "PASS" } else { "FAIL" },
            if check.informational { " (informational)" } else { "" },
            check.name,
            check.violations,
            check.samples,
            check.detail
        );
    }
    println!(
        "manifest {} sha256 {}",
        report.manifest_version, report.manifest_sha256
    );
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if report.all_passed { EXIT_OK } else { EXIT_CHECK_FAILURE })
}

fn cmd_refpoints(args: RefpointsArgs) -> Result<i32, Error> {
    let points = generate_reference_points(args.m, args.p)?;
    let mut out: Vec<u8> = Vec::new();
    {
        let mut wtr = csv::Writer::from_writer(&mut out);
        let header: Vec<String> = (1..=args.m).map(|i| format!("r{i}")).collect();
        wtr.write_record(&header).map_err(csv_error)?;
        for point in &points {
            let row: Vec<String> = point.coords().iter().map(f64::to_string).collect();
            wtr.write_record(&row).map_err(csv_error)?;
        }
        wtr.flush()?;
    }
    write_output_bytes(args.out.as_deref(), &out)?;
    Ok(EXIT_OK)
}

fn cmd_front(args: FrontArgs) -> Result<i32, Error> {
    let problem = args.problem.descriptor()?;
    let front = pareto_front_fitness_set(&problem)?;
    let closed_form = front_cardinality(&problem)?;
    match &args.out {
        Some(path) => {
            let mut wtr = csv::Writer::from_path(path).map_err(csv_error)?;
            let header: Vec<String> = (1..=problem.m()).map(|i| format!("f{i}")).collect();
            wtr.write_record(&header).map_err(csv_error)?;
            for v in &front {
                let row: Vec<String> = v.iter().map(u32::to_string).collect();
                wtr.write_record(&row).map_err(csv_error)?;
            }
            wtr.flush()?;
        }
        None => {
            for v in &front {
                println!(
                    "{}",
                    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                );
            }
        }
    }
    println!("vectors: {}  closed_form: {closed_form}", front.len());
    Ok(EXIT_OK)
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::InvalidState(format!("csv write failed: {e}"))
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn write_output_bytes(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}
