//! The `dnaword` command line.
//!
//! Exit codes: 0 success, 1 constraint violations, 2 invalid input or
//! arguments, 3 not-found and internal errors. Results go to standard output
//! (or `--out`), summaries and diagnostics to standard error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, Suite, Timing, CSV_HEADER};
use crate::energy::{
    build, count_dp_in, extract, slow_build, CoeffRing, CountLadder, ExactRing, GammaTable, ModularRing, NttPrime,
    StartPair, EXACT_RING_MAX_LENGTH,
};
use crate::verify::{all_hold, verify_all_with, ConstraintId, ConstraintParams, GcFraction, VerifyOptions, ViolationReport};
use crate::wordgen::{derive_seed, generate, GenRequest, GenResult, Problem};
use crate::words::{format_fasta, format_word_list, parse_word_list, WordSet};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dnaword", version, about = "Design and check DNA word sets")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a word set.
    Generate(GenerateArgs),
    /// Check a word-list file against selected constraints.
    Verify(VerifyArgs),
    /// Print the energy histogram of all strings of one length.
    Count(CountArgs),
    /// Print one string of a given length and energy.
    Extract(ExtractArgs),
    /// Run an instrumented benchmark suite, printing CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct KFlags {
    /// Sets k1..k6 together.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    #[arg(long)]
    k3: Option<usize>,
    #[arg(long)]
    k4: Option<usize>,
    #[arg(long)]
    k5: Option<usize>,
    #[arg(long)]
    k6: Option<usize>,
}

impl KFlags {
    fn resolve(&self) -> Option<[usize; 6]> {
        let each = [self.k1, self.k2, self.k3, self.k4, self.k5, self.k6];
        if self.k.is_none() && each.iter().all(Option::is_none) {
            return None;
        }
        Some(each.map(|v| v.or(self.k).unwrap_or(0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WordFormat {
    Plain,
    Fasta,
    JsonLines,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// basic, gc, runs or energy.
    #[arg(long)]
    problem: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    k: KFlags,
    /// GC fraction, `p/q` or decimal (gc and runs).
    #[arg(long)]
    gamma: Option<String>,
    /// Maximum run length (runs).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Pairwise energy table file (energy).
    #[arg(long)]
    gamma_table: Option<PathBuf>,
    /// Check the advertised constraints afterwards; exit 1 on violation.
    #[arg(long)]
    verify: bool,
    /// Regenerate with derived seeds up to this many times until the
    /// constraints hold. Not part of the published algorithms.
    #[arg(long, default_value_t = 0)]
    retries: u64,
    #[arg(long, value_enum, default_value = "plain")]
    format: WordFormat,
    /// Include `Y = X` in C2 when verifying.
    #[arg(long)]
    include_rc_diagonal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Plain,
    Json,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Word-list file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    c1: Option<usize>,
    #[arg(long)]
    c2: Option<usize>,
    #[arg(long)]
    c3: Option<usize>,
    #[arg(long)]
    c4: Option<usize>,
    #[arg(long)]
    c5: Option<usize>,
    #[arg(long)]
    c6: Option<usize>,
    /// GC fraction.
    #[arg(long)]
    c7: Option<String>,
    /// Maximum run length.
    #[arg(long)]
    c8: Option<usize>,
    /// Free-energy spread bound; needs --gamma-table.
    #[arg(long)]
    c9: Option<u64>,
    #[arg(long)]
    gamma_table: Option<PathBuf>,
    #[arg(long)]
    include_rc_diagonal: bool,
    #[arg(long, value_enum, default_value = "plain")]
    format: ReportFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Fft,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RingChoice {
    Exact,
    Mod,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    length: usize,
    #[arg(long)]
    gamma_table: PathBuf,
    #[arg(long, value_enum, default_value = "fft")]
    engine: Engine,
    #[arg(long, value_enum, default_value = "exact")]
    ring: RingChoice,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    length: usize,
    #[arg(long)]
    energy: u64,
    #[arg(long)]
    gamma_table: PathBuf,
    /// Defaults to exact up to length 64, modular beyond.
    #[arg(long, value_enum)]
    ring: Option<RingChoice>,
    /// Walk by scanning child counts instead of building a witness index.
    #[arg(long)]
    no_witness: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// counting, generation or extraction.
    #[arg(long)]
    suite: String,
    /// Lengths for counting and extraction.
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    /// Set sizes for generation.
    #[arg(long, value_delimiter = ',', default_value = "100,1000")]
    ns: Vec<usize>,
    /// Values of k for generation.
    #[arg(long, value_delimiter = ',', default_value = "4,6")]
    ks: Vec<usize>,
    /// Extractions per length.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Defaults to a built-in table with D = 1.
    #[arg(long)]
    gamma_table: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print 0 in the nanos column so output is reproducible.
    #[arg(long)]
    no_timing: bool,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start thread pool: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut out = String::new();
    let mut diag = Vec::new();
    let outcome = pool.install(|| dispatch(&cli.command, &mut out, &mut diag));
    let _ = stderr.write_all(&diag);
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out),
        None => stdout.write_all(out.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    code
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) => EXIT_INVALID,
        Error::NotAchievable { .. } | Error::NoEnergyInRange { .. } | Error::Internal(_) => EXIT_FAILURE,
    }
}

fn dispatch(command: &Command, out: &mut String, err: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Generate(a) => cmd_generate(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Count(a) => cmd_count(a, out),
        Command::Extract(a) => cmd_extract(a, out, err),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<GammaTable> {
    read_file(path)?.parse().map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn cmd_generate(a: &GenerateArgs, out: &mut String, err: &mut dyn Write) -> Result<i32> {
    let problem: Problem = a.problem.parse()?;
    let k = a.k.resolve().ok_or_else(|| Error::invalid("--k or one of --k1..--k6 is required"))?;
    let mut params = ConstraintParams::uniform(0);
    params.k = k;
    if matches!(problem, Problem::Gc | Problem::Runs) {
        let gamma = a.gamma.as_deref().ok_or_else(|| Error::invalid(format!("--gamma is required for {}", problem.name())))?;
        params.gamma = gamma.parse()?;
    }
    if problem == Problem::Runs {
        params.d = a.d.ok_or_else(|| Error::invalid("--d is required for runs"))?;
        params.validate()?;
    }
    let table = match (&a.gamma_table, problem) {
        (Some(path), _) => Some(load_table(path)?),
        (None, Problem::Energy) => return Err(Error::invalid("--gamma-table is required for energy")),
        (None, _) => None,
    };
    let check = a.verify || a.retries > 0;
    let options = VerifyOptions { include_rc_diagonal: a.include_rc_diagonal };
    let mut attempt = 0;
    let (result, reports) = loop {
        let seed = derive_seed(a.seed, attempt);
        let mut req = GenRequest::new(problem, a.n, params, seed);
        req.table = table;
        let result = generate(&req)?;
        if !check {
            break (result, Vec::new());
        }
        let vp = result.verify_params(&params);
        let reports = verify_all_with(&result.words, &vp, table.as_ref(), &problem.constraints(), options)?;
        if all_hold(&reports) || attempt >= a.retries {
            break (result, reports);
        }
        attempt += 1;
    };
    write_summary(err, &result, attempt)?;
    out.push_str(&format_words(&result.words, a.format));
    if !check {
        return Ok(EXIT_OK);
    }
    for report in &reports {
        for line in report.lines() {
            writeln!(err, "{line}")?;
        }
    }
    let pass = all_hold(&reports);
    writeln!(err, "verify: {}", if pass { "PASS" } else { "FAIL" })?;
    Ok(if pass { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn write_summary(err: &mut dyn Write, r: &GenResult, attempt: u64) -> Result<()> {
    write!(
        err,
        "problem={} n={} k={} ell={} final_length={}",
        r.problem.name(),
        r.words.len(),
        r.k,
        r.ell_base,
        r.final_length
    )?;
    if attempt > 0 {
        write!(err, " retries={attempt}")?;
    }
    if let Some(e) = &r.energy {
        write!(
            err,
            " D={} gamma_max={} w_min={} w_max={} padded={} sigma={}",
            e.d, e.gamma_max, e.w_min, e.w_max, e.padded, e.sigma
        )?;
        if e.padded {
            write!(err, " m={} delta={} alpha={} beta={}", e.m, e.delta, e.alpha, e.beta)?;
        }
    }
    writeln!(err)?;
    Ok(())
}

fn format_words(ws: &WordSet, format: WordFormat) -> String {
    match format {
        WordFormat::Plain => format_word_list(ws),
        WordFormat::Fasta => format_fasta(ws),
        WordFormat::JsonLines => ws
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}\n", serde_json::json!({ "index": i + 1, "word": w.to_string() })))
            .collect(),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut String) -> Result<i32> {
    let ws = parse_word_list(&read_file(&a.input)?)?;
    let mut params = ConstraintParams::uniform(0);
    let mut selection = BTreeSet::new();
    let ks = [a.c1, a.c2, a.c3, a.c4, a.c5, a.c6];
    for (i, k) in ks.iter().enumerate() {
        if let Some(k) = k {
            params.k[i] = *k;
            selection.insert(ConstraintId::HAMMING[i]);
        }
    }
    if let Some(gamma) = &a.c7 {
        params.gamma = gamma.parse::<GcFraction>()?;
        selection.insert(ConstraintId::C7);
    }
    if let Some(d) = a.c8 {
        params.d = d;
        params.validate()?;
        selection.insert(ConstraintId::C8);
    }
    let table = a.gamma_table.as_deref().map(load_table).transpose()?;
    if let Some(sigma) = a.c9 {
        if table.is_none() {
            return Err(Error::invalid("--c9 needs --gamma-table"));
        }
        params.sigma = sigma;
        selection.insert(ConstraintId::C9);
    }
    if selection.is_empty() {
        return Err(Error::invalid("select at least one constraint with --c1..--c9"));
    }
    let options = VerifyOptions { include_rc_diagonal: a.include_rc_diagonal };
    let reports = verify_all_with(&ws, &params, table.as_ref(), &selection, options)?;
    let pass = all_hold(&reports);
    match a.format {
        ReportFormat::Plain => {
            for line in reports.iter().flat_map(ViolationReport::lines) {
                out.push_str(&line);
                out.push('\n');
            }
            out.push_str(if pass { "PASS\n" } else { "FAIL\n" });
        }
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "pass": pass,
                "reports": reports.iter().map(ViolationReport::to_json).collect::<Vec<_>>(),
            });
            out.push_str(&format!("{doc}\n"));
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn cmd_count(a: &CountArgs, out: &mut String) -> Result<i32> {
    let table = load_table(&a.gamma_table)?;
    match a.ring {
        RingChoice::Exact => write_histogram(out, a.length, &table, a.engine, ExactRing),
        RingChoice::Mod => {
            let ring = ModularRing::new(NttPrime::default());
            out.push_str(&format!("# ring=mod {}\n", ring.modulus()));
            write_histogram(out, a.length, &table, a.engine, ring)
        }
    }?;
    Ok(EXIT_OK)
}

fn write_histogram<R: CoeffRing>(out: &mut String, len: usize, table: &GammaTable, engine: Engine, ring: R) -> Result<()> {
    let rows: Vec<(u64, R::Elem)> = match engine {
        Engine::Fft => build(len, table, ring)?.histogram(len)?,
        Engine::Dp => {
            let mut ops = 0;
            let polys = count_dp_in(len, table, &ring, &mut ops)?;
            let low = polys[0].low();
            let mut sum = vec![ring.zero(); polys[0].coeffs().len()];
            for p in &polys {
                for (acc, c) in sum.iter_mut().zip(p.coeffs()) {
                    ring.add_assign(acc, c);
                }
            }
            sum.into_iter()
                .enumerate()
                .filter(|(_, c)| !ring.is_zero(c))
                .map(|(i, c)| (low + i as u64, c))
                .collect()
        }
    };
    for (e, c) in rows {
        out.push_str(&format!("{e}\t{c}\n"));
    }
    Ok(())
}

fn cmd_extract(a: &ExtractArgs, out: &mut String, err: &mut dyn Write) -> Result<i32> {
    let table = load_table(&a.gamma_table)?;
    if a.length == 0 {
        return Err(Error::invalid("--length must be at least 1"));
    }
    let exact = match a.ring {
        Some(r) => r == RingChoice::Exact,
        None => a.length <= EXACT_RING_MAX_LENGTH,
    };
    let word = if exact {
        extract_one(build(a.length, &table, ExactRing)?, a.energy, !a.no_witness)
    } else {
        extract_one(build(a.length, &table, ModularRing::new(NttPrime::default()))?, a.energy, !a.no_witness)
    };
    match word {
        Ok(w) => {
            out.push_str(&format!("{w}\n"));
            Ok(EXIT_OK)
        }
        Err(Error::NotAchievable { energy, length }) => {
            writeln!(err, "energy not achievable: no string of length {length} has energy {energy}")?;
            Ok(EXIT_FAILURE)
        }
        Err(e) => Err(e),
    }
}

fn extract_one<R: CoeffRing>(ladder: CountLadder<R>, energy: u64, witness: bool) -> Result<crate::words::Word> {
    let index = if witness { Some(slow_build(&ladder)?) } else { None };
    extract(energy, &ladder, index.as_ref(), StartPair::Any)
}

fn cmd_bench(a: &BenchArgs, out: &mut String) -> Result<i32> {
    let suite: Suite = a.suite.parse()?;
    let timing = Timing(!a.no_timing);
    let table = match &a.gamma_table {
        Some(path) => load_table(path)?,
        None => bench::bench_table(),
    };
    let rows = match suite {
        Suite::Counting => {
            let lengths = a.lengths.clone().unwrap_or_else(|| vec![256, 512, 1024, 2048, 4096]);
            bench::counting(&lengths, &table, timing)?
        }
        Suite::Generation => bench::generation(&Problem::ALL, &a.ns, &a.ks, &table, a.seed, timing)?,
        Suite::Extraction => {
            let lengths = a.lengths.clone().unwrap_or_else(|| vec![256, 1024, 4096]);
            bench::extraction(&lengths, a.samples, &table, timing)?
        }
    };
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{row}\n"));
    }
    Ok(EXIT_OK)
}
