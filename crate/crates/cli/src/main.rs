//! `skewcubes`: law suites, cube tuples, symmetric sequences and Weiss
//! covers from the command line.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use skewcubes::conf::{check_complete_weiss, check_weiss_cover, CompleteWeissReport, CoverSpec, WeissReport};
use skewcubes::cubes::{interchange_check, validate_tuple, DeviationReport, GroupTag, SkewCubeTuple, DEFAULT_TOL};
use skewcubes::operad::{check_operad_laws, load_operad, LawReport, OperadSpec};
use skewcubes::retraction::{is_equidiameter, is_freewheeling, trace, Coefficient, Stage, TraceReport};
use skewcubes::rng::stream;
use skewcubes::suite::{default_trials, operad_law_suite, run_suite, SuiteReport, SUITES};
use skewcubes::symseq::{composition_product, graded_tensor, matrix_tensor, FinSymSeq};
use skewcubes::{with_operad, Error};

#[derive(Parser)]
#[command(name = "skewcubes", version, about = "Skew little cubes, set operads and symmetric sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    Equi,
    Free,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqOp {
    Graded,
    Matrix,
    Compose,
    Union,
}

#[derive(Subcommand)]
enum Command {
    /// Validity report of a cube tuple.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// The cube operad law suite.
    CheckOperad {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Dimensions under test.
        #[arg(long = "dim", value_delimiter = ',', default_values_t = [1, 2, 3])]
        dims: Vec<usize>,
        /// Dilation groups under test, e.g. `Lambda,O*Lambda,SO*Lambda`.
        #[arg(long = "group", value_delimiter = ',', default_values_t = ["Λ".to_string(), "O·Λ".to_string(), "SO·Λ".to_string()])]
        groups: Vec<String>,
    },
    /// Trace of the equidiameter or freewheeling homotopy.
    Retract {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        stage: StageArg,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        /// Use the literal coefficient `√2` without the boundary clamp.
        #[arg(long)]
        paper_coeff: bool,
    },
    /// Interchange of two generators `p`, `q`.
    Interchange {
        p: PathBuf,
        q: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Products of finite symmetric sequences.
    Symseq {
        #[arg(value_enum)]
        op: SeqOp,
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled Weiss and complete-Weiss checks of a cover.
    Weiss {
        cover: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Also check completeness on sub-collections of at most this size.
        #[arg(long)]
        complete: Option<usize>,
        #[arg(long, default_value_t = 100)]
        collections: usize,
    },
    /// A named property suite, or `all`.
    Suite {
        name: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Operad laws of a set operad given by a builtin name or a JSON file.
    CheckSetOperad {
        operad: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
    },
}

enum Failure {
    Input(String),
    Semantic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotEquidiameter | Error::NotFreewheeling | Error::InterchangeViolation { .. } | Error::NotOperadMap(_) | Error::Capacity(_) => {
                Failure::Semantic(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> std::result::Result<SkewCubeTuple, Failure> {
    SkewCubeTuple::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(common: &Common, text: &str) -> std::result::Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes()).ok();
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn checks_csv(checks: &[DeviationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["law", "checked", "max_deviation", "failures", "pass"]).expect("in-memory write");
    for c in checks {
        let row = [c.law.clone(), c.checked.to_string(), c.max_deviation.to_string(), c.failures.to_string(), c.pass.to_string()];
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn emit_suites(common: &Common, reports: &[SuiteReport]) -> Outcome {
    let text = match common.format {
        Format::Json if reports.len() == 1 => reports[0].to_json_string(),
        Format::Json => to_json(&reports),
        Format::Csv => reports.iter().map(|r| checks_csv(&r.checks)).collect::<Vec<_>>().join(""),
    };
    emit(common, &text)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn check_tol(tol: f64) -> std::result::Result<(), Failure> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("tolerance must be positive, got {tol}")))
    }
}

fn check_trials(trials: usize) -> std::result::Result<(), Failure> {
    if trials == 0 {
        return Err(Failure::Input("trials must be at least 1".into()));
    }
    Ok(())
}

fn validate(file: &Path, common: &Common) -> Outcome {
    check_tol(common.tol)?;
    let t = load_tuple(file)?;
    let report = validate_tuple(&t, common.tol)?;
    emit(common, &to_json(&report))?;
    for (i, j) in &report.overlapping {
        eprintln!("cubes {} and {} overlap", i + 1, j + 1);
    }
    for i in &report.outside {
        eprintln!("cube {} leaves the unit cube", i + 1);
    }
    Ok(report.valid)
}

fn check_operad(common: &Common, trials: usize, dims: &[usize], groups: &[String]) -> Outcome {
    check_tol(common.tol)?;
    check_trials(trials)?;
    if let Some(&m) = dims.iter().find(|&&m| m == 0) {
        return Err(Failure::Input(format!("dimension must be positive, got {m}")));
    }
    let tags = groups.iter().map(|g| GroupTag::parse(g)).collect::<skewcubes::Result<Vec<_>>>()?;
    let report = operad_law_suite(common.seed, common.tol, trials, dims, &tags)?;
    emit_suites(common, &[report])
}

#[derive(Serialize)]
struct RetractSummary {
    stage: &'static str,
    coefficient: &'static str,
    samples: usize,
    check: TraceReport,
    endpoint_equidiameter: bool,
    endpoint_freewheeling: bool,
}

fn retract(file: &Path, common: &Common, stage: StageArg, samples: usize, paper_coeff: bool) -> Outcome {
    check_tol(common.tol)?;
    let t = load_tuple(file)?;
    let coeff = if paper_coeff { Coefficient::Literal } else { Coefficient::Default };
    let (stage, name) = match stage {
        StageArg::Equi => (Stage::Equidiameter, "equi"),
        StageArg::Free => {
            if !is_equidiameter(&t, common.tol) {
                return Err(Failure::Semantic("the freewheeling stage needs an equidiameter tuple".into()));
            }
            (Stage::Freewheeling, "free")
        }
    };
    let tr = trace(&t, stage, samples, coeff, common.tol)?;
    let check = tr.check(common.tol)?;
    let end = tr.frames.last().unwrap_or(&t);
    let summary = RetractSummary {
        stage: name,
        coefficient: if paper_coeff { "literal" } else { "default" },
        samples,
        endpoint_equidiameter: is_equidiameter(end, common.tol),
        endpoint_freewheeling: is_freewheeling(end, common.tol),
        check,
    };
    let body = match common.format {
        Format::Json => tr.to_json_string(),
        Format::Csv => tr.to_csv()?,
    };
    emit(common, &body)?;
    // the trace owns stdout unless it went to a file
    if common.out.is_some() {
        println!("{}", to_json(&summary));
    } else {
        eprintln!("{}", to_json(&summary));
    }
    if !summary.check.pass {
        eprintln!("invalid frames at samples {:?}", summary.check.invalid_frames);
        return Ok(false);
    }
    let endpoint_ok = match stage {
        Stage::Equidiameter => summary.endpoint_equidiameter,
        Stage::Freewheeling => summary.endpoint_freewheeling,
    };
    if !endpoint_ok {
        if paper_coeff && stage == Stage::Freewheeling {
            eprintln!("WARN: endpoint fails the ball oracle with the literal coefficient");
            return Ok(true);
        }
        return Ok(false);
    }
    Ok(true)
}

fn interchange(p: &Path, q: &Path, common: &Common) -> Outcome {
    check_tol(common.tol)?;
    let (p, q) = (load_tuple(p)?, load_tuple(q)?);
    let report = interchange_check(&p, &q, common.tol)?;
    emit(common, &to_json(&report))?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct SeqResult {
    op: &'static str,
    sizes: std::collections::BTreeMap<usize, usize>,
    sequence: FinSymSeq,
}

fn symseq(op: SeqOp, files: &[PathBuf], common: &Common) -> Outcome {
    if files.len() != 2 {
        return Err(Failure::Input(format!("expected two sequence files, got {}", files.len())));
    }
    let x: FinSymSeq = parse_json(&files[0])?;
    let y: FinSymSeq = parse_json(&files[1])?;
    let (name, seq) = match op {
        SeqOp::Graded => ("graded", graded_tensor(&x, &y)?.seq),
        SeqOp::Matrix => ("matrix", matrix_tensor(&x, &y)?.seq),
        SeqOp::Compose => ("compose", composition_product(&x, &y)?.seq),
        SeqOp::Union => ("union", x.union(&y)?),
    };
    let sizes = seq.arities().map(|k| (k, seq.len(k))).collect();
    emit(common, &to_json(&SeqResult { op: name, sizes, sequence: seq }))?;
    Ok(true)
}

#[derive(Serialize)]
struct WeissOutput {
    seed: u64,
    trials: usize,
    k_max: usize,
    weiss: WeissReport,
    complete: Option<CompleteWeissReport>,
}

fn weiss(cover: &Path, common: &Common, trials: usize, k_max: usize, complete: Option<usize>, collections: usize) -> Outcome {
    check_trials(trials)?;
    let spec: CoverSpec = parse_json(cover)?;
    let report = check_weiss_cover(&spec, k_max, trials, common.seed)?;
    let complete = match complete {
        Some(size) => Some(check_complete_weiss(&spec, size, k_max, collections, trials, common.seed)?),
        None => None,
    };
    let pass = report.pass && complete.as_ref().is_none_or(|c| c.pass);
    let out = WeissOutput {
        seed: common.seed,
        trials,
        k_max,
        weiss: report,
        complete,
    };
    emit(common, &to_json(&out))?;
    Ok(pass)
}

fn suite(name: &str, common: &Common, trials: Option<usize>) -> Outcome {
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    if default_trials(name).is_none() && name != "all" {
        return Err(Failure::Input(format!("unknown suite {name:?}; expected all or one of {}", SUITES.join(", "))));
    }
    let reports = names
        .iter()
        .map(|s| run_suite(s, common.seed, common.tol, trials))
        .collect::<skewcubes::Result<Vec<_>>>()?;
    emit_suites(common, &reports)
}

#[derive(Serialize)]
struct SetOperadReport {
    operad: String,
    seed: u64,
    max_arity: usize,
    trials: usize,
    pass: bool,
    laws: Vec<LawReport>,
}

fn check_set_operad(operad: &str, common: &Common, max_arity: usize, trials: usize) -> Outcome {
    let path = Path::new(operad);
    let spec: OperadSpec = if path.exists() { parse_json(path)? } else { OperadSpec::Builtin(operad.to_string()) };
    let op = load_operad(&spec)?;
    let rng = &mut stream(common.seed, "check-set-operad", 0);
    let laws = with_operad!(&op, |o| check_operad_laws(o, max_arity, trials, rng))?;
    let report = SetOperadReport {
        operad: op.name(),
        seed: common.seed,
        max_arity,
        trials,
        pass: laws.iter().all(|l| l.passed()),
        laws,
    };
    emit(common, &to_json(&report))?;
    Ok(report.pass)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Validate { file, common } => validate(file, common),
        Command::CheckOperad { common, trials, dims, groups } => check_operad(common, *trials, dims, groups),
        Command::Retract {
            file,
            common,
            stage,
            samples,
            paper_coeff,
        } => retract(file, common, *stage, *samples, *paper_coeff),
        Command::Interchange { p, q, common } => interchange(p, q, common),
        Command::Symseq { op, files, common } => symseq(*op, files, common),
        Command::Weiss {
            cover,
            common,
            trials,
            k_max,
            complete,
            collections,
        } => weiss(cover, common, *trials, *k_max, *complete, *collections),
        Command::Suite { name, common, trials } => suite(name, common, *trials),
        Command::CheckSetOperad {
            operad,
            common,
            max_arity,
            trials,
        } => check_set_operad(operad, common, *max_arity, *trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
