//! Command-line front end. Results go to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 not null-homologous,
//! 3 move limit exceeded, 4 trace check failed, 5 fuzz failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::Canonical;
use crate::curve::{parse_curve_relaxed, parse_word, CurveSystem};
use crate::rewrite::{parse_trace, reduce_main, replay, Direction, EngineConfig, EngineError};
use crate::surface::{parse_surface, Surface};
use crate::verify::{check_reduction, check_trace, random_word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_NULL_HOMOLOGOUS: i32 = 2;
pub const EXIT_MOVE_LIMIT: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_FUZZ_FAILED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "braidcell", version, about = "Reduce surface braids to edge transpositions")]
pub struct Cli {
    /// Print move counts and timings to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SurfaceSource {
    /// Surface file.
    #[arg(long, value_name = "PATH")]
    pub surface: Option<PathBuf>,
    /// Built-in surface: tetrahedron, cube, torus_grid(R,C), refined_cube(N).
    #[arg(long, value_name = "KIND", conflicts_with = "surface")]
    pub canonical: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a surface and print its face, edge and vertex counts and genus.
    Validate {
        /// Surface file (alternative to --surface).
        path: Option<PathBuf>,
        #[command(flatten)]
        source: SurfaceSource,
    },
    /// Reduce a curve system or word to a word in edge transpositions.
    Reduce {
        #[command(flatten)]
        source: SurfaceSource,
        /// Curve file to reduce.
        #[arg(long, value_name = "PATH", conflicts_with = "word")]
        curve: Option<PathBuf>,
        /// Word file; its curve system is reduced.
        #[arg(long, value_name = "PATH")]
        word: Option<PathBuf>,
        /// Write the move trace here.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Maximum number of moves (overrides BRAIDCELL_MOVE_LIMIT).
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
    },
    /// Replay a trace in both directions and audit its invariants.
    Check {
        trace: PathBuf,
        /// Needed only when the trace names a surface that is not built in.
        #[command(flatten)]
        source: SurfaceSource,
    },
    /// Round-trip random words through the reduction.
    Fuzz {
        #[command(flatten)]
        source: SurfaceSource,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Maximum word length; each case draws a length in 0..=L.
        #[arg(long, default_value_t = 30)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for counterexample files.
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
    },
}

struct Failure(i32, String);

impl Failure {
    fn invalid(msg: impl Into<String>) -> Self {
        Failure(EXIT_INVALID, msg.into())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn canonical(kind: &str) -> Result<Arc<Surface>, Failure> {
    let k: Canonical = kind.parse().map_err(|e| Failure::invalid(format!("{e}")))?;
    k.build().map(Arc::new).map_err(|e| Failure::invalid(format!("invalid surface: {e}")))
}

impl SurfaceSource {
    fn load(&self, path: Option<&Path>) -> Result<Arc<Surface>, Failure> {
        match (path.or(self.surface.as_deref()), &self.canonical) {
            (Some(p), None) => {
                let s = parse_surface(&read(p)?)
                    .map_err(|e| Failure::invalid(format!("invalid surface {}: {e}", p.display())))?;
                Ok(Arc::new(s))
            }
            (None, Some(k)) => canonical(k),
            (Some(_), Some(_)) => Err(Failure::invalid("give either a surface file or --canonical, not both")),
            (None, None) => Err(Failure::invalid("no surface given: use --surface PATH or --canonical KIND")),
        }
    }

    fn is_given(&self) -> bool {
        self.surface.is_some() || self.canonical.is_some()
    }
}

fn config(limit: Option<u64>) -> EngineConfig {
    let mut c = EngineConfig::from_env();
    if let Some(l) = limit {
        c.move_limit = l as usize;
    }
    c
}

fn engine_failure(e: EngineError) -> Failure {
    let code = match e {
        EngineError::NotNullHomologous { .. } => EXIT_NOT_NULL_HOMOLOGOUS,
        EngineError::MoveLimitExceeded { .. } => EXIT_MOVE_LIMIT,
        _ => EXIT_INVALID,
    };
    Failure(code, e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::invalid(format!("write failed: {e}"))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate { path, source } => {
            let s = source.load(path.as_deref())?;
            writeln!(out, "F={} E={} V={} g={}", s.face_count(), s.edge_count(), s.vertex_count(), s.genus()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { source, curve, word, trace, limit } => {
            let s = source.load(None)?;
            let gamma = match (curve, word) {
                (Some(p), None) => parse_curve_relaxed(&s, &read(p)?)
                    .map_err(|e| Failure::invalid(format!("invalid curve {}: {e}", p.display())))?,
                (None, Some(p)) => {
                    let w = parse_word(&s, &read(p)?)
                        .map_err(|e| Failure::invalid(format!("invalid word {}: {e}", p.display())))?;
                    CurveSystem::of_word(s.clone(), &w).map_err(|e| Failure::invalid(e.to_string()))?
                }
                _ => return Err(Failure::invalid("give exactly one of --curve PATH or --word PATH")),
            };
            let t0 = Instant::now();
            let red = reduce_main(&gamma, &config(*limit)).map_err(engine_failure)?;
            if let Some(p) = trace {
                fs::write(p, red.trace.serialize())
                    .map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?;
            }
            out.write_all(red.word.serialize(&s).as_bytes()).map_err(io)?;
            if cli.verbose {
                let _ = writeln!(err, "moves {} letters {} elapsed_ms {}", red.trace.moves.len(), red.word.len(), t0.elapsed().as_millis());
            }
            Ok(EXIT_OK)
        }
        Command::Check { trace, source } => {
            let text = read(trace)?;
            let s = if source.is_given() {
                source.load(None)?
            } else {
                let name = text
                    .lines()
                    .find_map(|l| l.trim().strip_prefix("trace "))
                    .map(str::trim)
                    .ok_or_else(|| Failure::invalid("trace has no `trace` header"))?;
                canonical(name).map_err(|_| {
                    Failure::invalid(format!("surface `{name}` is not built in; pass --surface PATH"))
                })?
            };
            let t = parse_trace(&s, &text).map_err(|e| Failure::invalid(format!("invalid trace: {e}")))?;
            let report = check_trace(&t);
            out.write_all(report.render().as_bytes()).map_err(io)?;
            if report.passed() {
                return Ok(EXIT_OK);
            }
            for dir in [Direction::Forward, Direction::Backward] {
                if let Err(e) = replay(&t, dir) {
                    let _ = writeln!(err, "error: {dir:?} replay: {e}");
                }
            }
            Ok(EXIT_CHECK_FAILED)
        }
        Command::Fuzz { source, count, length, seed, out: dir, limit } => {
            let s = source.load(None)?;
            let cfg = config(*limit);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let t0 = Instant::now();
            let (mut max_moves, mut max_letters, mut total_moves) = (0, 0, 0);
            for i in 0..*count {
                let case_seed: u64 = rng.gen();
                let len = rng.gen_range(0..=*length);
                let w = random_word(&s, len, case_seed);
                let gamma = CurveSystem::of_word(s.clone(), &w).map_err(|e| Failure::invalid(e.to_string()))?;
                let (ok, payload) = match reduce_main(&gamma, &cfg) {
                    Ok(red) => {
                        let report = check_reduction(&gamma, &red);
                        max_moves = max_moves.max(red.trace.moves.len());
                        max_letters = max_letters.max(red.word.len());
                        total_moves += red.trace.moves.len();
                        (report.passed(), report.render())
                    }
                    Err(e) => (false, format!("# reduce failed: {e}\n{}", gamma.serialize())),
                };
                if !ok {
                    let path = dir.join(format!("fuzz-counterexample-{seed}-{i}.txt"));
                    fs::write(&path, &payload).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
                    writeln!(out, "fuzz {} count={count} length={length} seed={seed}", s.name()).map_err(io)?;
                    writeln!(out, "pass {i}\nfail 1\ncounterexample {}", path.display()).map_err(io)?;
                    return Err(Failure(EXIT_FUZZ_FAILED, format!("case {i} failed; counterexample at {}", path.display())));
                }
            }
            writeln!(out, "fuzz {} count={count} length={length} seed={seed}", s.name()).map_err(io)?;
            writeln!(out, "pass {count}\nfail 0").map_err(io)?;
            writeln!(out, "max_moves {max_moves}\nmax_letters {max_letters}\ntotal_moves {total_moves}").map_err(io)?;
            let _ = writeln!(err, "elapsed_ms {}", t0.elapsed().as_millis());
            Ok(EXIT_OK)
        }
    }
}
