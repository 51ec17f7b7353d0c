use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use compspec::report::{self, region_from_doc, ReportDocument};
use compspec::{fail, svg, tasks, Failure, SymbolDocument, SCHEMA};
use compspec_core::algebra_lab::{Lemma, ORDER_LIMIT, TRUNCATION_LIMIT};
use compspec_core::spectrum::synthesize;
use compspec_core::Tolerances;
use serde::Serialize;

const EXIT_REJECTED: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Spectra of composition operators with S(2) symbols.
#[derive(Parser)]
#[command(name = "compspec", version)]
struct Cli {
    /// Global within-tolerance threshold.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Matching tolerance for boundary iteration.
    #[arg(long, global = true, default_value_t = 1e-7)]
    match_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: certificate, partition, type, spectra.
    Analyze {
        input: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the regions to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print JSON instead of the text summary.
        #[arg(long)]
        json: bool,
    },
    /// Spectrum and essential spectrum only.
    Spectrum {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Denjoy-Wolff point and type class.
    Classify {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contact set with second-order data.
    Boundary {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded randomized checks of the annihilation-sum spectral identities.
    LemmaCheck {
        /// One of fl, flc, ta, cta, lip, n2c, rsm.
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of the N×N monomial-basis truncation (heuristic).
    Truncate {
        input: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the regions of a saved report as SVG.
    Render {
        report: PathBuf,
        /// Output file; standard output when absent.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

enum Outcome {
    Done,
    Rejected,
}

enum Stop {
    Usage(String),
    Hard(Failure),
}

impl From<Failure> for Stop {
    fn from(f: Failure) -> Self {
        Stop::Hard(f)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| fail("io error", format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail("io error", format!("writing {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(path: &Path) -> Result<SymbolDocument, Failure> {
    SymbolDocument::parse(&read(path)?)
}

/// Prints `text` and, when asked, writes it to `out`.
fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = out {
        write_file(p, text)?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| fail("io error", format!("stdout: {e}")))
}

fn render_report(r: &ReportDocument) -> Result<Option<String>, Failure> {
    let (Some(full), Some(essential)) = (&r.full, &r.essential) else {
        return Ok(None);
    };
    Ok(Some(svg::render(
        &region_from_doc(full)?,
        &region_from_doc(essential)?,
    )))
}

fn run(cli: Cli) -> Result<Outcome, Stop> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Stop::Usage(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    if !(cli.match_tol.is_finite() && cli.match_tol > 0.0) {
        return Err(Stop::Usage(format!(
            "--match-tol must be positive, got {}",
            cli.match_tol
        )));
    }
    let tol = Tolerances::default()
        .with_eps(cli.tol)
        .with_match_tol(cli.match_tol);
    match cli.command {
        Command::Analyze {
            input,
            out,
            svg: svg_path,
            json,
        } => {
            let doc = load(&input)?;
            let r = report::analyze(&doc, &tol)?;
            let text = to_json(&r);
            let picture = match &svg_path {
                Some(_) => render_report(&r)?,
                None => None,
            };
            if let Some(p) = &out {
                write_file(p, &text)?;
            }
            if let (Some(p), Some(pic)) = (&svg_path, &picture) {
                write_file(p, pic)?;
            }
            if json {
                emit(&text, None)?;
            } else {
                emit(&report::summary(&r), None)?;
            }
            Ok(if r.accepted() {
                Outcome::Done
            } else {
                Outcome::Rejected
            })
        }
        Command::Spectrum { input, out } => {
            let symbol = load(&input)?.to_symbol(&tol)?;
            let rep = synthesize(&symbol, &tol).map_err(Failure::from)?;
            let v = serde_json::json!({
                "schema": SCHEMA,
                "essential": report::region_doc(&rep.essential),
                "full": report::region_doc(&rep.full),
            });
            emit(&to_json(&v), out.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Classify { input, out } => {
            let symbol = load(&input)?.to_symbol(&tol)?;
            emit(&to_json(&report::classify(&symbol, &tol)?), out.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Boundary { input, out } => {
            let symbol = load(&input)?.to_symbol(&tol)?;
            emit(&to_json(&report::boundary(&symbol, &tol)?), out.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::LemmaCheck {
            lemma,
            n,
            order,
            trials,
            seed,
            out,
        } => {
            let lemma = Lemma::parse(&lemma).ok_or_else(|| {
                Stop::Usage(format!(
                    "unknown lemma `{lemma}`; expected one of fl, flc, ta, cta, lip, n2c, rsm"
                ))
            })?;
            let n = lemma.effective_n(n);
            let blocks = match lemma {
                Lemma::Lip => 3,
                _ => n,
            };
            if !(2..=16).contains(&n) {
                return Err(Stop::Usage(format!("--n must be in 2..=16, got {n}")));
            }
            if order < blocks || order > ORDER_LIMIT {
                return Err(Stop::Usage(format!(
                    "--order must be in {blocks}..={ORDER_LIMIT} for {}, got {order}",
                    lemma.name()
                )));
            }
            if trials == 0 {
                return Err(Stop::Usage("--trials must be at least 1".into()));
            }
            let summary = tasks::lemma_check(lemma, n, order, trials, seed);
            emit(&to_json(&summary), out.as_deref())?;
            if summary.passed {
                Ok(Outcome::Done)
            } else {
                Err(Stop::Hard(fail(
                    "lemma check failed",
                    format!("{} of {trials} trials failed", summary.failures.len()),
                )))
            }
        }
        Command::Truncate { input, order, out } => {
            if order == 0 || order > TRUNCATION_LIMIT.min(ORDER_LIMIT) {
                return Err(Stop::Usage(format!(
                    "--order must be in 1..={}, got {order}",
                    TRUNCATION_LIMIT.min(ORDER_LIMIT)
                )));
            }
            let doc = load(&input)?;
            let t = tasks::truncate(&doc, order, &tol)?;
            emit(&to_json(&t), out.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Render { report: path, svg } => {
            let text = read(&path)?;
            let r: ReportDocument = serde_json::from_str(&text)
                .map_err(|e| fail("parse error", format!("report: {e}")))?;
            let picture = render_report(&r)?
                .ok_or_else(|| fail("no regions", "report carries no spectral regions".into()))?;
            match svg {
                Some(p) => write_file(&p, &picture)?,
                None => emit(&picture, None)?,
            }
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(EXIT_REJECTED),
        Err(Stop::Usage(msg)) => {
            eprintln!("compspec: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Stop::Hard(f)) => {
            eprintln!("{}", f.to_json());
            ExitCode::FAILURE
        }
    }
}
