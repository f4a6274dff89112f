use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use longreid_core::exact::{prime_factors, ProjectiveMatrix};
use longreid_core::family::{Generators, RepFamily};
use longreid_core::search::{
    bfs_resume, run_search, Frontier, SearchConfig, SearchError, SearchMode,
};
use longreid_core::tree::{displacement, PrimeContext};
use longreid_core::verify_certificate;
use longreid_core::witness::WitnessRecord;
use longreid_core::words::{paper_witness_word, Word, WordStyle};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "longreid")]
#[command(
    about = "Exact certificate verification and witness search for the Long-Reid group acting on T3 x T4"
)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Flat,
    Exponent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bfs,
    Mitm,
}

#[derive(Subcommand)]
enum Command {
    /// Check the length-82 certificate (or another word) against the published matrix
    Verify {
        /// Word to check instead of the built-in certificate
        #[arg(short, long, default_value = "@paper")]
        word: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a word and report its matrix, order and tree displacements
    Eval {
        /// Word in flat (aAbB) or exponent (a^2b^-1) form; `@paper` for the certificate
        #[arg(short, long)]
        word: String,
        /// Family parameter, an integer or fraction such as 9 or 3/2
        #[arg(short, long, default_value = "9")]
        t: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Distance moved by the base vertex of the tree at a prime
    Displace {
        #[arg(short, long)]
        word: String,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, default_value = "9")]
        t: String,
    },
    /// Freely reduce a word
    Reduce {
        #[arg(short, long)]
        word: String,
        #[arg(long, value_enum, default_value = "flat")]
        style: Style,
    },
    /// Enumerate group elements and stream improperness witnesses
    Search {
        #[arg(long)]
        max_length: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short, long, default_value = "9")]
        t: String,
        /// Explicit first generator `m11,m12,m21,m22` (requires --gen-b; overrides -t)
        #[arg(long, requires = "gen_b")]
        gen_a: Option<String>,
        /// Explicit second generator `m11,m12,m21,m22`
        #[arg(long, requires = "gen_a")]
        gen_b: Option<String>,
        /// Abort once stored layers are estimated to exceed this many bytes
        #[arg(long)]
        memory_budget: Option<u64>,
        /// Save the frontier here after every completed layer
        #[arg(long)]
        persist: Option<PathBuf>,
        /// Continue a breadth-first search from a saved frontier
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Also emit finite-order stabilizer elements
        #[arg(long)]
        emit_torsion: bool,
        /// Write records here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RESOURCE,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::resource(e.to_string())
    }
}

fn parse_word_arg(text: &str) -> Result<Word, Failure> {
    if text == "@paper" {
        return Ok(paper_witness_word());
    }
    text.parse()
        .map_err(|e| Failure::usage(format!("invalid word {text:?}: {e}")))
}

fn parse_family(t: &str) -> Result<RepFamily, Failure> {
    let t: BigRational = t
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("invalid parameter t = {t:?}")))?;
    RepFamily::new(t).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_matrix(text: &str) -> Result<ProjectiveMatrix, Failure> {
    let fields: Vec<&str> = text.split(',').collect();
    let [a, b, c, d] = fields[..] else {
        return Err(Failure::usage(format!(
            "expected four comma-separated entries, got {text:?}"
        )));
    };
    ProjectiveMatrix::from_decimal([a, b, c, d])
        .map_err(|e| Failure::usage(format!("invalid generator {text:?}: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Verify { word, format } => {
            let word = parse_word_arg(&word)?;
            let report = verify_certificate(&word);
            match format {
                Format::Text => out.write_all(report.to_text().as_bytes())?,
                Format::Structured => out.write_all(report.to_json_lines().as_bytes())?,
            }
            out.flush()?;
            if let Some(failure) = report.first_failure() {
                return Err(Failure {
                    code: EXIT_VERIFICATION,
                    message: format!("verification failed: {failure}"),
                });
            }
        }
        Command::Eval { word, t, format } => {
            let word = parse_word_arg(&word)?;
            let family = parse_family(&t)?;
            let record = WitnessRecord::evaluate(word, family.generators());
            match format {
                Format::Structured => writeln!(out, "{}", record.to_json())?,
                Format::Text => {
                    let smooth = prime_factors(&record.det).iter().all(|&p| p == 2 || p == 3);
                    let text = record.to_text();
                    for line in text.lines() {
                        if smooth || !line.starts_with("displacements") {
                            writeln!(out, "{line}")?;
                        }
                    }
                }
            }
        }
        Command::Displace { word, p, t } => {
            let word = parse_word_arg(&word)?;
            let family = parse_family(&t)?;
            let ctx = PrimeContext::new(p).map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out, "{}", displacement(&family.evaluate_word(&word), ctx))?;
        }
        Command::Reduce { word, style } => {
            let word = parse_word_arg(&word)?;
            let style = match style {
                Style::Flat => WordStyle::Flat,
                Style::Exponent => WordStyle::Exponent,
            };
            writeln!(out, "{}", word.free_reduce().format(style))?;
        }
        Command::Search {
            max_length,
            mode,
            t,
            gen_a,
            gen_b,
            memory_budget,
            persist,
            resume,
            emit_torsion,
            out: out_path,
            format,
        } => {
            let generators = match (gen_a, gen_b) {
                (Some(a), Some(b)) => Generators::new(parse_matrix(&a)?, parse_matrix(&b)?),
                _ => parse_family(&t)?.generators().clone(),
            };
            let mode = match mode {
                Mode::Bfs => SearchMode::Bfs,
                Mode::Mitm => SearchMode::Mitm,
            };
            let mut cfg = SearchConfig::with_generators(max_length, mode, generators);
            cfg.memory_budget = memory_budget;
            cfg.persist_path = persist;
            cfg.emit_torsion = emit_torsion;
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            if resume.is_some() && mode == SearchMode::Mitm {
                return Err(Failure::usage("--resume is only supported with --mode bfs"));
            }

            let mut sink: Box<dyn Write> = match out_path {
                Some(path) => Box::new(BufWriter::new(File::create(&path).map_err(|e| {
                    Failure::resource(format!("cannot create {}: {e}", path.display()))
                })?)),
                None => Box::new(BufWriter::new(io::stdout())),
            };
            let mut emit = |r: &WitnessRecord| -> io::Result<()> {
                match format {
                    Format::Structured => writeln!(sink, "{}", r.to_json()),
                    Format::Text => writeln!(
                        sink,
                        "{}\tlength {}\torder {}\t{}",
                        r.word,
                        r.word.len(),
                        r.order,
                        r.matrix
                    ),
                }
            };
            let start = Instant::now();
            let result = match resume {
                Some(path) => Frontier::load(&path)
                    .map_err(SearchError::from)
                    .and_then(|frontier| bfs_resume(&cfg, frontier, &mut emit)),
                None => run_search(&cfg, &mut emit),
            };
            sink.flush()?;
            let summary = result.map_err(|e| match e {
                SearchError::InvalidConfig(msg) => Failure::usage(msg),
                other => Failure::resource(other.to_string()),
            })?;
            eprintln!(
                "layers: {}, elements: {}, witnesses: {}, wall time: {:.3}s",
                summary.layers_completed(),
                summary.elements(),
                summary.witnesses,
                start.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
