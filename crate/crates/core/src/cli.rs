//! Command-line front end: `analyze`, `split` and `verify`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::centralizer::{compute_orbitals, compute_structure_constants, CentralizerConfig, OrbitalBasis, StructureConstants};
use crate::error::{Error, Result};
use crate::perm::{parse_generators, GeneratorSet};
use crate::report::{decomposition_to_json, decomposition_to_text, parse_decomposition, AnalyzeReport};
use crate::solver::GroebnerEngine;
use crate::splitter::{split_basis, Decomposition, SplitConfig};
use crate::verify::{
    compare_to_reference, verify_family_algebraic, verify_matrix_level, MatrixMode, VerificationReport,
    DEFAULT_MATRIX_CAP,
};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INTRANSITIVE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
        Error::IntransitiveAction { .. } => EXIT_INTRANSITIVE,
        Error::ResourceLimit(_)
        | Error::SliceExhausted { .. }
        | Error::MatrixCapExceeded { .. }
        | Error::RankCapExceeded { .. } => EXIT_RESOURCE,
        Error::InvariantViolation(_)
        | Error::DivisionByZero
        | Error::NotZeroDimensional(_)
        | Error::MultiplicityMismatch { .. }
        | Error::IncompleteDecomposition { .. }
        | Error::OrthogonalityViolation { .. } => EXIT_INVARIANT,
    }
}

#[derive(Parser, Debug)]
#[command(name = "permsplit", version, about = "Split transitive permutation representations into irreducible projectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the data-parallel stages
    #[arg(long, global = true, env = "PERMSPLIT_THREADS")]
    pub threads: Option<usize>,

    /// Print stage timings to stderr
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbital basis: rank, suborbit lengths, transpose pairing
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Include the structure-constant tensor
        #[arg(long)]
        tensor: bool,
    },
    /// Full decomposition into irreducible projectors
    Split {
        file: PathBuf,
        #[command(flatten)]
        opts: SplitOpts,
    },
    /// Check a stored decomposition against the generators
    Verify {
        file: PathBuf,
        decomposition: PathBuf,
        /// Only run the algebraic checks, without recomputing the split
        #[arg(long)]
        no_compare: bool,
        #[command(flatten)]
        opts: SplitOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Algebraic,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Modular,
    Exact,
}

#[derive(clap::Args, Debug, Clone)]
pub struct SplitOpts {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "algebraic")]
    pub verify: VerifyLevel,
    /// Seed for the slicing hyperplanes
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub max_groebner_pairs: Option<usize>,
    /// Starting precision in bits for numeric roots
    #[arg(long)]
    pub precision: Option<u32>,
    #[arg(long)]
    pub max_dimension: Option<usize>,
    #[arg(long, value_enum, default_value = "modular")]
    pub engine: Engine,
    /// Largest degree for matrix-level checks
    #[arg(long, default_value_t = DEFAULT_MATRIX_CAP)]
    pub matrix_cap: usize,
}

impl SplitOpts {
    pub fn config(&self) -> SplitConfig {
        let mut cfg = SplitConfig {
            seed: self.seed,
            max_dimension: self.max_dimension,
            ..SplitConfig::default()
        };
        if let Some(p) = self.max_groebner_pairs {
            cfg.solver.limits.max_pairs = p;
        }
        if let Some(p) = self.precision {
            cfg.solver.roots.precision = p;
            cfg.solver.roots.max_precision = cfg.solver.roots.max_precision.max(p);
        }
        cfg.solver.engine = match self.engine {
            Engine::Modular => GroebnerEngine::Modular,
            Engine::Exact => GroebnerEngine::Exact,
        };
        cfg
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_generators(path: &Path) -> Result<GeneratorSet> {
    parse_generators(&read(path)?)
}

fn analyze_stage(gens: &GeneratorSet, cfg: &CentralizerConfig) -> Result<(OrbitalBasis, StructureConstants)> {
    let basis = compute_orbitals(gens, cfg)?;
    let constants = compute_structure_constants(&basis)?;
    constants.check_invariants(basis.suborbit_lengths(), basis.transposes())?;
    Ok((basis, constants))
}

/// Buffered streams, so the work can run inside a thread pool.
#[derive(Default)]
struct Io {
    out: Vec<u8>,
    err: Vec<u8>,
    timing: bool,
}

impl Io {
    fn time(&mut self, stage: &str, t: Instant) {
        if self.timing {
            let _ = writeln!(self.err, "time {stage}: {:.3} s", t.elapsed().as_secs_f64());
        }
    }
}

/// Failure of a command: an error or a report with failed checks.
enum Failure {
    Error(Error),
    Checks(VerificationReport),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn matrix_checks(gens: &GeneratorSet, basis: &OrbitalBasis, d: &Decomposition, cap: usize) -> Result<VerificationReport> {
    let mode = if d.is_exact() { MatrixMode::Exact } else { MatrixMode::Numeric };
    verify_matrix_level(gens, basis, d, mode, cap)
}

fn analyze_cmd(io: &mut Io, file: &Path, json: bool, tensor: bool) -> std::result::Result<(), Failure> {
    let gens = load_generators(file)?;
    let t = Instant::now();
    let basis = compute_orbitals(&gens, &CentralizerConfig::default())?;
    let constants = if tensor {
        let c = compute_structure_constants(&basis)?;
        c.check_invariants(basis.suborbit_lengths(), basis.transposes())?;
        Some(c)
    } else {
        None
    };
    io.time("analyze", t);
    let report = AnalyzeReport::new(&basis, constants.as_ref());
    let text = if json { report.to_json() + "\n" } else { report.to_text() };
    let _ = io.out.write_all(text.as_bytes());
    Ok(())
}

fn split_cmd(io: &mut Io, file: &Path, opts: &SplitOpts) -> std::result::Result<(), Failure> {
    let gens = load_generators(file)?;
    let cfg = opts.config();
    let t = Instant::now();
    let (basis, constants) = analyze_stage(&gens, &cfg.centralizer)?;
    io.time("analyze", t);
    let t = Instant::now();
    let outcome = split_basis(basis, constants, &cfg)?;
    io.time("split", t);
    if opts.verify == VerifyLevel::Matrix {
        let t = Instant::now();
        let rep = matrix_checks(&gens, &outcome.basis, &outcome.decomposition, opts.matrix_cap)?;
        io.time("verify", t);
        if !rep.passed() {
            return Err(Failure::Checks(rep));
        }
    }
    let text = match opts.format {
        Format::Text => decomposition_to_text(&outcome.decomposition),
        Format::Json => decomposition_to_json(&outcome.decomposition) + "\n",
    };
    let _ = io.out.write_all(text.as_bytes());
    Ok(())
}

fn verify_cmd(
    io: &mut Io,
    file: &Path,
    decomposition: &Path,
    no_compare: bool,
    opts: &SplitOpts,
) -> std::result::Result<(), Failure> {
    let gens = load_generators(file)?;
    let stored = parse_decomposition(&read(decomposition)?)?;
    let cfg = opts.config();
    let t = Instant::now();
    let (basis, constants) = analyze_stage(&gens, &cfg.centralizer)?;
    io.time("analyze", t);
    let mut rep = VerificationReport::default();
    let shape_ok = stored.degree == basis.degree()
        && stored.rank == basis.rank()
        && stored.suborbit_lengths == basis.suborbit_lengths();
    rep.push(
        "basis matches",
        (!shape_ok).then(|| {
            format!(
                "file has degree {}, rank {}, lengths {:?}; generators give degree {}, rank {}, lengths {:?}",
                stored.degree,
                stored.rank,
                stored.suborbit_lengths,
                basis.degree(),
                basis.rank(),
                basis.suborbit_lengths()
            )
        }),
    );
    let coefficient_count_ok = stored.projectors.iter().all(|p| p.coefficients.len() == basis.rank());
    if shape_ok && coefficient_count_ok {
        rep.merge(verify_family_algebraic(&constants, &stored));
        if opts.verify == VerifyLevel::Matrix {
            rep.merge(matrix_checks(&gens, &basis, &stored, opts.matrix_cap)?);
        }
        if !no_compare {
            let t = Instant::now();
            let computed = split_basis(basis, constants, &cfg)?;
            io.time("split", t);
            rep.merge(compare_to_reference(&computed.decomposition, &stored));
        }
    }
    let _ = write!(io.out, "{rep}");
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Checks(VerificationReport::default()))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut io = Io {
        timing: cli.timing,
        ..Io::default()
    };
    let work = |io: &mut Io| match &cli.command {
        Command::Analyze { file, json, tensor } => analyze_cmd(io, file, *json, *tensor),
        Command::Split { file, opts } => split_cmd(io, file, opts),
        Command::Verify {
            file,
            decomposition,
            no_compare,
            opts,
        } => verify_cmd(io, file, decomposition, *no_compare, opts),
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| work(&mut io)),
            Err(e) => {
                let _ = writeln!(err, "error: cannot start {n} threads: {e}");
                return EXIT_RESOURCE;
            }
        },
        None => work(&mut io),
    };
    let _ = out.write_all(&io.out);
    let _ = err.write_all(&io.err);
    match result {
        Ok(()) => 0,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Checks(rep)) => {
            for c in rep.failures() {
                let _ = writeln!(err, "FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
            }
            EXIT_CHECK_FAILED
        }
    }
}
