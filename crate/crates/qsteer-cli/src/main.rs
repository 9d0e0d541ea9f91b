//! Batch front door: read the JSON schemas, dispatch synthesis and
//! verification jobs, write reports and CSV atomically, and map failures to
//! a stable exit-code contract.
//!
//! Exit codes: 0 success; 2 input validation failure; 3 synthesis completed
//! but the tolerance was not met; 4 resource cap hit; 1 anything else.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsteer::io;
use qsteer::{Error, Limits, SweepKind};

#[derive(Parser)]
#[command(
    name = "qsteer",
    about = "Steering of states and density operators on l2(Z) with shift + U(2) + P0 generators",
    version
)]
struct Cli {
    /// Cap on window lengths (absolute index spans).
    #[arg(long, global = true, default_value_t = 4096)]
    window_cap: usize,

    /// Record real wall-clock times in serialized outputs. Off by default so
    /// identical runs produce byte-identical files.
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steer a pure state file onto a target state file.
    SteerState(SteerArgs),
    /// Steer a density file onto a target density file.
    SteerDensity(SteerArgs),
    /// Compile a dense unitary file into a generator program.
    CompileUnitary(CompileArgs),
    /// Apply a program file to a state or density file.
    Apply(ApplyArgs),
    /// Run a verification suite (universality, negative, coverage).
    Verify(Box<VerifyArgs>),
    /// Benchmark steering cost across dimensions and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SteerArgs {
    /// Source state/density JSON file.
    #[arg(long)]
    source: PathBuf,
    /// Target state/density JSON file.
    #[arg(long)]
    target: PathBuf,
    /// Tolerance on the final error (fidelity defect or trace distance).
    #[arg(long)]
    eps: f64,
    /// Output path for the synthesized program JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the synthesis report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    /// Unitary matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Max-norm tolerance on the materialized program.
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ApplyArgs {
    /// Input state or density JSON file (schema is sniffed from its fields).
    #[arg(long)]
    input: PathBuf,
    /// Program JSON file.
    #[arg(long)]
    program: PathBuf,
    /// Output path for the resulting state/density JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Universality,
    Negative,
    Coverage,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    State,
    Density,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// What a universality sweep steers.
    #[arg(long, value_enum, default_value_t = KindArg::State)]
    kind: KindArg,
    /// Comma list (2,4,8) or inclusive range (2:8) of dimensions.
    #[arg(long, default_value = "2,4,8")]
    dims: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial CSV output path (universality suite).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Negative control: target basis index outside {0, 1}.
    #[arg(long, default_value_t = 2)]
    target_index: i64,
    /// Negative control: length of the random U2-only word.
    #[arg(long, default_value_t = 10_000)]
    word_length: usize,
    /// Coverage oracle: steps per angle in the U(2) parameter grid.
    #[arg(long, default_value_t = 16)]
    grid_steps: usize,
    /// Coverage oracle: longest word length to enumerate.
    #[arg(long, default_value_t = 4)]
    max_word_length: usize,
    /// Coverage oracle: enumeration budget.
    #[arg(long, default_value_t = 500_000_000)]
    node_cap: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "2:6")]
    dims: String,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path.
    #[arg(long)]
    csv: PathBuf,
}

const EXIT_OK: u8 = 0;
const EXIT_OTHER: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: String) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::WindowOverflow { .. }
            | Error::ProgramOverflow { .. }
            | Error::BudgetExceeded { .. } => EXIT_RESOURCE,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure {
            code: EXIT_OTHER,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure::validation(format!("cannot read {}: {e}", path.display()))
    })
}

/// Write via a temp file in the destination directory plus an atomic rename:
/// outputs are either complete or absent.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Failure {
        code: EXIT_OTHER,
        message: format!("cannot persist {}: {}", path.display(), e.error),
    })?;
    Ok(())
}

/// Parse `2,4,8` or the inclusive range `2:8`.
fn parse_dims(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = |detail: &str| Failure::validation(format!("bad --dims '{text}': {detail}"));
    if let Some((a, b)) = text.split_once(':') {
        let lo: usize = a.trim().parse().map_err(|_| bad("range start"))?;
        let hi: usize = b.trim().parse().map_err(|_| bad("range end"))?;
        if lo == 0 || hi < lo {
            return Err(bad("need 1 <= start <= end"));
        }
        return Ok((lo..=hi).collect());
    }
    let mut dims = Vec::new();
    for part in text.split(',') {
        let d: usize = part.trim().parse().map_err(|_| bad("list entry"))?;
        if d == 0 {
            return Err(bad("dimensions start at 1"));
        }
        dims.push(d);
    }
    if dims.is_empty() {
        return Err(bad("empty"));
    }
    Ok(dims)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if cli.window_cap < 16 {
        return Err(Failure::validation(format!(
            "--window-cap must be at least 16, got {}",
            cli.window_cap
        )));
    }
    let limits = Limits::with_window_cap(cli.window_cap);
    let timings = cli.timings;
    match cli.command {
        Command::SteerState(args) => steer_state_cmd(args, &limits, timings),
        Command::SteerDensity(args) => steer_density_cmd(args, &limits, timings),
        Command::CompileUnitary(args) => compile_cmd(args, &limits, timings),
        Command::Apply(args) => apply_cmd(args, &limits),
        Command::Verify(args) => verify_cmd(*args, &limits, timings),
        Command::Bench(args) => bench_cmd(args, &limits, timings),
    }
}

fn finish_synthesis(
    program_json: String,
    mut report: qsteer::SynthesisReport,
    eps: f64,
    out: &Path,
    report_path: Option<&Path>,
    timings: bool,
) -> Result<u8, Failure> {
    if !timings {
        report.zero_timings();
    }
    write_atomic(out, &program_json)?;
    if let Some(path) = report_path {
        write_atomic(path, &io::to_canonical_json(&report))?;
    }
    if report.final_error > eps {
        eprintln!(
            "tolerance unmet: final_error {} exceeds eps {}",
            report.final_error, eps
        );
        return Ok(EXIT_TOLERANCE);
    }
    Ok(EXIT_OK)
}

fn steer_state_cmd(args: SteerArgs, limits: &Limits, timings: bool) -> Result<u8, Failure> {
    let source = io::parse_state(&read_input(&args.source)?, limits)?;
    let target = io::parse_state(&read_input(&args.target)?, limits)?;
    let (seq, report) = qsteer::steer_state(&source, &target, args.eps, limits)?;
    let prog = qsteer::ChannelProgram::from(seq);
    let json = io::to_canonical_json(&io::program_to_file(&prog));
    finish_synthesis(json, report, args.eps, &args.out, args.report.as_deref(), timings)
}

fn steer_density_cmd(args: SteerArgs, limits: &Limits, timings: bool) -> Result<u8, Failure> {
    let rho = io::parse_density(&read_input(&args.source)?, limits)?;
    let sigma = io::parse_density(&read_input(&args.target)?, limits)?;
    let (prog, report) = qsteer::steer_density(&rho, &sigma, args.eps, limits)?;
    let json = io::to_canonical_json(&io::program_to_file(&prog));
    finish_synthesis(json, report, args.eps, &args.out, args.report.as_deref(), timings)
}

fn compile_cmd(args: CompileArgs, limits: &Limits, timings: bool) -> Result<u8, Failure> {
    let (window, u) = io::parse_unitary(&read_input(&args.matrix)?, limits)?;
    let (seq, report) = qsteer::compile_unitary(&u, window, args.eps, limits)?;
    let prog = qsteer::ChannelProgram::from(seq);
    let json = io::to_canonical_json(&io::program_to_file(&prog));
    finish_synthesis(json, report, args.eps, &args.out, args.report.as_deref(), timings)
}

fn apply_cmd(args: ApplyArgs, limits: &Limits) -> Result<u8, Failure> {
    let input_text = read_input(&args.input)?;
    let program = io::parse_program(&read_input(&args.program)?, limits)?;
    let out_json = match io::parse_state_or_density(&input_text, limits)? {
        io::StateOrDensity::State(state) => {
            let result = program.apply_to_state(&state, limits)?;
            io::to_canonical_json(&io::state_to_file(&result))
        }
        io::StateOrDensity::Density(rho) => {
            let result = program.apply_to_density(&rho, limits)?;
            io::to_canonical_json(&io::density_to_file(&result))
        }
    };
    write_atomic(&args.out, &out_json)?;
    Ok(EXIT_OK)
}

fn verify_cmd(args: VerifyArgs, limits: &Limits, timings: bool) -> Result<u8, Failure> {
    match args.suite {
        SuiteArg::Universality => {
            let dims = parse_dims(&args.dims)?;
            let kind = match args.kind {
                KindArg::State => SweepKind::State,
                KindArg::Density => SweepKind::Density,
            };
            let mut result =
                qsteer::universality_sweep(kind, &dims, args.trials, args.eps, args.seed, limits)?;
            if !timings {
                result.zero_timings();
            }
            if let Some(csv) = &args.csv {
                write_atomic(csv, &io::rows_to_csv(&result.rows))?;
            }
            if let Some(out) = &args.out {
                write_atomic(out, &io::to_canonical_json(&result))?;
            }
            if result.passed {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "sweep failed: max_final_error {} exceeds eps {} (worst seed {:?})",
                    result.max_final_error, result.eps, result.worst_seed
                );
                Ok(EXIT_TOLERANCE)
            }
        }
        SuiteArg::Negative => {
            let report =
                qsteer::negative_control(args.target_index, args.word_length, args.seed, limits)?;
            if let Some(out) = &args.out {
                write_atomic(out, &io::to_canonical_json(&report))?;
            }
            if report.passed {
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "negative control failed: fidelity {} drift {}",
                    report.fidelity_to_target, report.max_modulus_drift
                );
                Ok(EXIT_TOLERANCE)
            }
        }
        SuiteArg::Coverage => {
            let report = qsteer::net_coverage_oracle(
                args.grid_steps,
                args.max_word_length,
                args.node_cap,
            )?;
            if let Some(out) = &args.out {
                write_atomic(out, &io::to_canonical_json(&report))?;
            }
            if report.passed {
                Ok(EXIT_OK)
            } else {
                eprintln!("coverage oracle failed: covering radius not monotone");
                Ok(EXIT_TOLERANCE)
            }
        }
    }
}

fn bench_cmd(args: BenchArgs, limits: &Limits, timings: bool) -> Result<u8, Failure> {
    let dims = parse_dims(&args.dims)?;
    let mut rows = qsteer::bench(&dims, args.eps, args.trials, args.seed, limits)?;
    if !timings {
        qsteer::verify::zero_row_timings(&mut rows);
    }
    write_atomic(&args.csv, &io::rows_to_csv(&rows))?;
    Ok(EXIT_OK)
}
