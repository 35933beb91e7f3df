use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use regincl::algebra::EmbeddedInclusion;
use regincl::basis::UnitaryFamily;
use regincl::classify::{decompose, depth};
use regincl::inclusion::canonicalize;
use regincl::report::{
    self, emit_basis_payload, exit_code, parse_basis_payload, refusal_value, render, run_analyze,
    run_build_basis, summarize, BasisSummary, OutputMode, RunOptions, EXIT_OK, EXIT_UNVERIFIED,
};
use regincl::{Error, InclusionDescriptor, Result};

#[derive(Parser)]
#[command(name = "regincl", version, about = "Regular inclusions of multi-matrix algebras")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Flags {
    /// Solver target and verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, global = true, default_value_t = 20)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 6)]
    depth_max: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Machine)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Machine,
    Human,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Classify, check the spectral condition and compute depth. A directory
    /// is processed file by file into --out-dir.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Canonical block-diagonal form of a normalizer matrix.
    Canonicalize { path: PathBuf },
    /// Building-block decomposition of a regular inclusion.
    Decompose { path: PathBuf },
    /// Build and verify a unitary orthonormal basis in the normalizer.
    BuildBasis {
        path: PathBuf,
        /// Also write the bare basis payload here (input for `verify`).
        #[arg(long)]
        payload_out: Option<PathBuf>,
    },
    /// Re-certify a basis payload.
    Verify {
        payload: PathBuf,
        /// Descriptor to check against; defaults to the one in the payload.
        #[arg(long)]
        descriptor: Option<PathBuf>,
    },
    /// Depth and minimal q of the inclusion matrix.
    Depth { path: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn load(path: &Path) -> Result<(InclusionDescriptor, Option<String>)> {
    let doc = report::parse_document(&read(path)?)?;
    Ok((doc.to_descriptor()?, doc.label))
}

/// Writes through a sibling temp file and renames, so readers never see a
/// partial report.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

struct Outcome {
    value: Value,
    code: i32,
}

fn refused(err: Error) -> Result<Outcome> {
    match exit_code(&err) {
        regincl::report::EXIT_REFUSED => Ok(Outcome { value: refusal_value(&err), code: exit_code(&err) }),
        _ => Err(err),
    }
}

fn done(value: Value) -> Result<Outcome> {
    Ok(Outcome { value, code: EXIT_OK })
}

fn analyze_file(path: &Path, opts: &RunOptions) -> Result<Outcome> {
    let (d, label) = load(path)?;
    done(run_analyze(&d, label, opts).to_value())
}

fn analyze_dir(dir: &Path, out_dir: &Path, opts: &RunOptions, mode: OutputMode) -> Result<Outcome> {
    let io = |e: std::io::Error| Error::Io { path: dir.display().to_string(), message: e.to_string() };
    let mut inputs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    inputs.sort();
    fs::create_dir_all(out_dir).map_err(|e| Error::Io { path: out_dir.display().to_string(), message: e.to_string() })?;
    let ext = if matches!(mode, OutputMode::Human) { "txt" } else { "json" };
    let results: Vec<(String, i32, Option<String>)> = inputs
        .par_iter()
        .map(|input| {
            let name = input.file_name().unwrap_or_default().to_string_lossy().into_owned();
            let stem = input.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let target = out_dir.join(format!("{stem}.report.{ext}"));
            let written = analyze_file(input, opts)
                .and_then(|o| write_atomic(&target, &render(&o.value, mode)).map(|_| o.code));
            match written {
                Ok(code) => (name, code, None),
                Err(e) => (name, exit_code(&e), Some(e.to_string())),
            }
        })
        .collect();
    let code = results.iter().map(|r| r.1).max().unwrap_or(EXIT_OK);
    let files: Vec<Value> = results
        .into_iter()
        .map(|(file, code, error)| match error {
            Some(e) => json!({ "file": file, "exit_code": code, "error": e }),
            None => json!({ "file": file, "exit_code": code }),
        })
        .collect();
    Ok(Outcome { value: json!({ "files": files }), code })
}

fn build_basis(path: &Path, payload_out: Option<&Path>, opts: &RunOptions) -> Result<Outcome> {
    let (d, label) = load(path)?;
    let (report, family) = match run_build_basis(&d, label, opts) {
        Ok(x) => x,
        Err(e) => return refused(e),
    };
    let payload = emit_basis_payload(&family, None);
    if let Some(out) = payload_out {
        write_atomic(out, &payload)?;
    }
    let mut value = report.to_value();
    value["basis"] = serde_json::from_str::<Value>(&payload).expect("own payload parses")["members"].take();
    done(value)
}

fn verify(payload: &Path, descriptor: Option<&Path>, opts: &RunOptions) -> Result<Outcome> {
    let parsed = parse_basis_payload(&read(payload)?)?;
    let embedded = parsed.descriptor.map(|doc| doc.to_descriptor()).transpose()?;
    let d = match (descriptor, embedded) {
        (Some(p), embedded) => {
            let (d, _) = load(p)?;
            if embedded.is_some_and(|e| e != d) {
                return Err(Error::Validation {
                    path: "descriptor".into(),
                    message: "payload was built for a different inclusion".into(),
                });
            }
            d
        }
        (None, Some(d)) => d,
        (None, None) => {
            return Err(Error::Validation { path: "descriptor".into(), message: "missing; pass --descriptor".into() })
        }
    };
    let inc = std::sync::Arc::new(EmbeddedInclusion::new(d));
    let family = UnitaryFamily::new_unchecked(inc, parsed.members)?;
    let summary = summarize(&family, opts.tolerance)?;
    let ok = matches!(&summary, BasisSummary::Built { verification, span, .. } if verification.overall && span.certified);
    let value = serde_json::to_value(&summary).expect("summary serializes");
    Ok(Outcome { value, code: if ok { EXIT_OK } else { EXIT_UNVERIFIED } })
}

fn run(cli: &Cli, opts: &RunOptions, mode: OutputMode) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { path, out_dir } if path.is_dir() => {
            let out = out_dir.clone().unwrap_or_else(|| path.join("reports"));
            analyze_dir(path, &out, opts, mode)
        }
        Command::Analyze { path, .. } => analyze_file(path, opts),
        Command::Canonicalize { path } => {
            let (d, _) = load(path)?;
            match canonicalize(d.matrix()) {
                Ok(cf) => done(serde_json::to_value(&cf).expect("serializes")),
                Err(e) => refused(e),
            }
        }
        Command::Decompose { path } => {
            let (d, _) = load(path)?;
            match decompose(&d) {
                Ok(t) => done(serde_json::to_value(&t).expect("serializes")),
                Err(e) => refused(e),
            }
        }
        Command::BuildBasis { path, payload_out } => build_basis(path, payload_out.as_deref(), opts),
        Command::Verify { payload, descriptor } => verify(payload, descriptor.as_deref(), opts),
        Command::Depth { path } => {
            let (d, _) = load(path)?;
            match depth(d.matrix(), opts.depth_max) {
                Ok(r) => done(serde_json::to_value(&r).expect("serializes")),
                Err(Error::DepthExceeds { n_max }) => done(json!({ "exceeds_n_max": n_max })),
                Err(e) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = &cli.flags;
    let opts = RunOptions {
        tolerance: f.tolerance,
        seed: f.seed,
        max_iters: f.max_iters,
        restarts: f.restarts,
        depth_max: f.depth_max,
    };
    let mode = match f.output {
        Output::Machine => OutputMode::Machine,
        Output::Human => OutputMode::Human,
        Output::Both => OutputMode::Both,
    };
    let code = match run(&cli, &opts, mode) {
        Ok(o) => {
            print!("{}", render(&o.value, mode));
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
