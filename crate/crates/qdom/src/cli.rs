//! The `qdom` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdom_core::cube::split;
use qdom_core::encode::{decode_queens, encode_domination, EncodingConfig};
use qdom_core::enumerate::{
    check_frequency_symmetry, completeness_formula, enumerate_classes, frequency_matrix,
    probe_domination_number, EnumerateError, ProbeError,
};
use qdom_core::oracle::{self, MAX_ORACLE_N};
use qdom_core::sat::Backend;
use qdom_core::{Board, CardinalityKind, CnfFormula, OrderingStrategy, SolutionClass, SolveStatus};

use crate::backend::SolverChoice;
use crate::bench::{bench_one, bench_tsv_row, BENCH_HEADER};
use crate::conquer::{conquer_decide, conquer_enumerate, reports_tsv, ConquerError};
use crate::external::ExternalSolverConfig;
use crate::files::{heatmap_for, parse_solutions, write_heatmap, write_solutions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INTEGRITY: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("unknown: {0}")]
    Unknown(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Integrity(_) => EXIT_INTEGRITY,
            CliError::Unknown(_) => EXIT_UNKNOWN,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<qdom_core::Error> for CliError {
    fn from(e: qdom_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<qdom_core::sat::IntegrityError> for CliError {
    fn from(e: qdom_core::sat::IntegrityError) -> Self {
        CliError::Integrity(e.0)
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::Encoding(e) => e.into(),
            EnumerateError::Partial { .. } => CliError::Unknown(e.to_string()),
            EnumerateError::BelowGamma { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Integrity(e.to_string()),
        }
    }
}

impl From<ProbeError> for CliError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Encoding(e) => e.into(),
            ProbeError::Backend(e) => e.into(),
            ProbeError::UpperBoundUnsat(_) => CliError::Usage(e.to_string()),
            ProbeError::Unknown { .. } => CliError::Unknown(e.to_string()),
        }
    }
}

impl From<ConquerError> for CliError {
    fn from(e: ConquerError) -> Self {
        match e {
            ConquerError::NoWorkers => CliError::Usage(e.to_string()),
            ConquerError::Enumerate { source, index } => match CliError::from(source) {
                CliError::Integrity(m) => CliError::Integrity(format!("cube {index}: {m}")),
                other => other,
            },
            ConquerError::Integrity { .. } => CliError::Integrity(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qdom",
    version,
    about = "Queen domination via SAT: encode, solve, enumerate and verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the DIMACS (or iCNF) encoding for n and gamma.
    Encode(EncodeCmd),
    /// Decide whether gamma queens dominate the board.
    Solve(SolveCmd),
    /// Enumerate all minimum dominating sets up to symmetry.
    Enumerate(EnumerateCmd),
    /// Brute-force domination number and solution counts (n <= 8).
    Oracle(OracleCmd),
    /// Time every encoder and ordering on the gamma - 1 instance.
    Bench(BenchCmd),
    /// Split into cubes and conquer them in parallel.
    Cube(CubeCmd),
    /// Check a solutions file and optionally its completeness.
    Verify(VerifyCmd),
    /// Frequency matrix of a solutions file as CSV.
    Heatmap(HeatmapCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CardArg {
    Seqcard,
    Totalizer,
    Mtotalizer,
}

impl From<CardArg> for CardinalityKind {
    fn from(c: CardArg) -> Self {
        match c {
            CardArg::Seqcard => CardinalityKind::SeqCard,
            CardArg::Totalizer => CardinalityKind::Totalizer,
            CardArg::Mtotalizer => CardinalityKind::MTotalizer,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderArg {
    Default,
    Random,
    Occurrence,
    Hilbert,
}

impl OrderArg {
    fn strategy(self, seed: u64) -> OrderingStrategy {
        match self {
            OrderArg::Default => OrderingStrategy::Default,
            OrderArg::Random => OrderingStrategy::Random { seed },
            OrderArg::Occurrence => OrderingStrategy::Occurrence,
            OrderArg::Hilbert => OrderingStrategy::Hilbert,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Args, Debug, Clone)]
pub struct EncodingArgs {
    #[arg(long, value_enum, default_value = "mtotalizer")]
    pub card: CardArg,
    #[arg(long, value_enum, default_value = "hilbert")]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// mTotalizer modulus; defaults to ceil(sqrt(gamma + 1)).
    #[arg(long)]
    pub modulus: Option<u32>,
    /// Lex-leader symmetry breaking; the default depends on the command.
    #[arg(long, value_enum)]
    pub symmetry: Option<OnOff>,
}

impl EncodingArgs {
    fn config(&self, symmetry_default: bool) -> CliResult<EncodingConfig> {
        if let Some(p) = self.modulus {
            if p < 2 {
                return Err(usage("--modulus must be at least 2"));
            }
        }
        let mut cfg = EncodingConfig::new(
            self.card.into(),
            self.order.strategy(self.seed),
            self.symmetry.map_or(symmetry_default, |s| s == OnOff::On),
        );
        cfg.modulus = self.modulus;
        Ok(cfg)
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// External solver executable; the embedded solver is used otherwise.
    #[arg(long, env = "QDOM_SOLVER")]
    pub solver: Option<PathBuf>,
    /// Extra argument for the external solver (repeatable).
    #[arg(long = "solver-arg", allow_hyphen_values = true)]
    pub solver_args: Vec<String>,
    /// Per-solve wall clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Proof path forwarded to the external solver.
    #[arg(long)]
    pub proof: Option<PathBuf>,
}

impl SolverArgs {
    pub fn choice(&self) -> CliResult<SolverChoice> {
        let timeout = match self.timeout {
            Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
            Some(_) => return Err(usage("--timeout must be a positive number of seconds")),
            None => None,
        };
        match &self.solver {
            Some(exe) if !exe.as_os_str().is_empty() => {
                let mut cfg = ExternalSolverConfig::new(exe);
                cfg.args = self.solver_args.clone();
                cfg.proof = self.proof.clone();
                if let Some(t) = timeout {
                    cfg.timeout = t;
                }
                Ok(SolverChoice::External(cfg))
            }
            _ => {
                if self.proof.is_some() {
                    return Err(usage("--proof needs an external --solver"));
                }
                Ok(SolverChoice::Embedded { timeout })
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct EncodeCmd {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub gamma: usize,
    #[command(flatten)]
    pub enc: EncodingArgs,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit iCNF with 2^depth cubes instead of plain DIMACS.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveCmd {
    #[arg(long, required_unless_present = "cnf")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "cnf")]
    pub gamma: Option<usize>,
    /// Solve an existing DIMACS file instead of encoding.
    #[arg(long, conflicts_with_all = ["n", "gamma"])]
    pub cnf: Option<PathBuf>,
    /// Print the model as a `v` line.
    #[arg(long)]
    pub model: bool,
    #[command(flatten)]
    pub enc: EncodingArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct EnumerateCmd {
    #[arg(long)]
    pub n: usize,
    /// Domination number; found by the oracle for n <= 8 when omitted.
    #[arg(long)]
    pub gamma: Option<usize>,
    /// Known satisfiable bound to probe downward from when gamma is unknown.
    #[arg(long = "gamma-upper")]
    pub gamma_upper: Option<usize>,
    #[command(flatten)]
    pub enc: EncodingArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Solutions file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the frequency matrix CSV here.
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    /// Split into 2^depth cubes and conquer them.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Args, Debug)]
pub struct OracleCmd {
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct BenchCmd {
    /// Board size or inclusive range such as `4..8`.
    #[arg(long)]
    pub n: String,
    /// Domination number; required for boards above 8.
    #[arg(long)]
    pub gamma: Option<usize>,
    /// Comma separated encoders; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub card: Vec<CardArg>,
    /// Comma separated orderings; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub order: Vec<OrderArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub modulus: Option<u32>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CubeCmd {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub gamma: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Enumerate classes per cube instead of deciding.
    #[arg(long)]
    pub enumerate: bool,
    /// Read formula and cubes from an iCNF file instead of splitting.
    #[arg(long)]
    pub cubes: Option<PathBuf>,
    /// Write the split as iCNF and exit.
    #[arg(long)]
    pub icnf: Option<PathBuf>,
    #[command(flatten)]
    pub enc: EncodingArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Per-cube status table; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyCmd {
    #[arg(long)]
    pub solutions: PathBuf,
    /// Write the completeness formula (no symmetry breaking, one blocking
    /// clause per labeled solution) here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Solve the completeness formula; it must be unsatisfiable.
    #[arg(long)]
    pub complete: bool,
    #[command(flatten)]
    pub enc: EncodingArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct HeatmapCmd {
    #[arg(long)]
    pub solutions: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "qdom: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Encode(c) => cmd_encode(c, out),
        Command::Solve(c) => cmd_solve(c, out),
        Command::Enumerate(c) => cmd_enumerate(c, out),
        Command::Oracle(c) => cmd_oracle(c, out),
        Command::Bench(c) => cmd_bench(c, out),
        Command::Cube(c) => cmd_cube(c, out),
        Command::Verify(c) => cmd_verify(c, out),
        Command::Heatmap(c) => cmd_heatmap(c, out),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))
}

fn write_or_emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => emit(out, text),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn board(n: usize) -> CliResult<Board> {
    Board::new(n).map_err(|_| usage("--n must be at least 1"))
}

fn cmd_encode(c: EncodeCmd, out: &mut dyn Write) -> CliResult {
    let b = board(c.n)?;
    let cfg = c.enc.config(false)?;
    let f = encode_domination(&b, c.gamma, &cfg)?;
    let text = match c.depth {
        Some(d) => f.to_icnf(&split(&f, &b, d)?)?,
        None => f.to_dimacs(),
    };
    match &c.out {
        Some(p) => {
            fs::write(p, &text).map_err(io_err(p))?;
            emit(
                out,
                &format!("# vars {} clauses {}\n", f.num_vars(), f.num_clauses()),
            )
        }
        None => emit(out, &text),
    }
}

fn status_exit(status: SolveStatus, diagnostic: Option<String>) -> CliResult {
    match status {
        SolveStatus::Unknown => Err(CliError::Unknown(
            diagnostic.unwrap_or_else(|| "no answer".into()),
        )),
        _ => Ok(()),
    }
}

fn cmd_solve(c: SolveCmd, out: &mut dyn Write) -> CliResult {
    let choice = c.solver.choice()?;
    let (f, b) = match &c.cnf {
        Some(p) => (CnfFormula::parse_dimacs(&read(p)?)?, None),
        None => {
            let b = board(c.n.expect("required by clap"))?;
            let f = encode_domination(
                &b,
                c.gamma.expect("required by clap"),
                &c.enc.config(false)?,
            )?;
            (f, Some(b))
        }
    };
    let start = Instant::now();
    let mut backend = choice.make();
    backend.add_formula(&f);
    let r = backend.solve(&[])?;
    let line = match r.status {
        SolveStatus::Sat => "SATISFIABLE",
        SolveStatus::Unsat => "UNSATISFIABLE",
        SolveStatus::Unknown => "UNKNOWN",
    };
    emit(out, &format!("s {line}\n"))?;
    if let (true, Some(model)) = (c.model, &r.model) {
        let lits: Vec<String> = (1..model.len())
            .map(|v| {
                if model[v] {
                    v.to_string()
                } else {
                    format!("-{v}")
                }
            })
            .collect();
        emit(out, &format!("v {} 0\n", lits.join(" ")))?;
    }
    if let (Some(b), Some(model)) = (&b, &r.model) {
        let queens: Vec<String> = decode_queens(b, model)
            .iter()
            .map(|q| q.to_string())
            .collect();
        emit(out, &format!("queens {}\n", queens.join(" ")))?;
    }
    emit(
        out,
        &format!("# seconds {:.3}\n", start.elapsed().as_secs_f64()),
    )?;
    status_exit(r.status, r.diagnostic)
}

/// Domination number from `--gamma`, the oracle (n <= 8) or descending
/// probes from `--gamma-upper`.
fn resolve_gamma(
    b: &Board,
    gamma: Option<usize>,
    upper: Option<usize>,
    cfg: &EncodingConfig,
    choice: &SolverChoice,
) -> CliResult<usize> {
    if let Some(g) = gamma {
        if g == 0 {
            return Err(usage("--gamma must be at least 1"));
        }
        return Ok(g);
    }
    if let Some(u) = upper {
        return Ok(probe_domination_number(b, u, cfg, || choice.make())?);
    }
    if b.n() <= MAX_ORACLE_N {
        return Ok(oracle::min_domination_number(b, b.n())?);
    }
    Err(usage(format!(
        "n = {} is above {MAX_ORACLE_N}; pass --gamma or --gamma-upper",
        b.n()
    )))
}

fn cmd_enumerate(c: EnumerateCmd, out: &mut dyn Write) -> CliResult {
    let b = board(c.n)?;
    let cfg = c.enc.config(true)?;
    let choice = c.solver.choice()?;
    let gamma = resolve_gamma(&b, c.gamma, c.gamma_upper, &cfg, &choice)?;

    let (classes, complete, note) = match c.depth {
        Some(d) => {
            let f = encode_domination(&b, gamma, &cfg)?;
            let cubes = split(&f, &b, d)?;
            let r = conquer_enumerate(&b, gamma, &f, &cubes, c.workers, || choice.make())?;
            (
                r.classes,
                r.complete,
                "some cube returned unknown".to_string(),
            )
        }
        None => match enumerate_classes(&b, gamma, &cfg, &mut choice.make()) {
            Ok(e) => (e.classes, true, String::new()),
            Err(EnumerateError::Partial {
                classes,
                diagnostic,
            }) => (classes, false, diagnostic),
            Err(e) => return Err(e.into()),
        },
    };
    finish_enumeration(
        &b,
        gamma,
        &classes,
        complete,
        &note,
        c.out.as_deref(),
        c.heatmap.as_deref(),
        out,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_enumeration(
    b: &Board,
    gamma: usize,
    classes: &[SolutionClass],
    complete: bool,
    note: &str,
    path: Option<&Path>,
    heatmap: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let mut text = write_solutions(b.n(), gamma, classes);
    if !complete {
        text.insert_str(0, "# partial: non-authoritative\n");
    }
    write_or_emit(path, &text, out)?;
    let m = frequency_matrix(b, classes);
    if let Some(p) = heatmap {
        fs::write(p, write_heatmap(&m)).map_err(io_err(p))?;
    }
    let labeled: usize = classes.iter().map(|c| c.orbit_size()).sum();
    let mut summary = format!(
        "# n={} gamma={gamma}: {} classes, {labeled} labeled\n",
        b.n(),
        classes.len()
    );
    let sym = check_frequency_symmetry(&m);
    match &sym {
        Ok(()) => summary.push_str("# frequency symmetry: pass\n"),
        Err(v) => summary.push_str(&format!("# frequency symmetry: FAIL ({v})\n")),
    }
    if heatmap.is_some() {
        summary.push_str(&format!("# heatmap total {}\n", m.total()));
    }
    if !complete {
        summary.push_str(&format!("# partial result: {note}\n"));
    }
    emit(out, &summary)?;
    if !complete {
        return Err(CliError::Unknown(format!("enumeration incomplete: {note}")));
    }
    sym.map_err(|v| CliError::Integrity(format!("frequency matrix not symmetric: {v}")))
}

fn cmd_oracle(c: OracleCmd, out: &mut dyn Write) -> CliResult {
    let b = board(c.n)?;
    if c.n > MAX_ORACLE_N {
        return Err(usage(format!("the oracle handles n <= {MAX_ORACLE_N}")));
    }
    let r = oracle::report(&b)?;
    emit(
        out,
        &format!(
            "n\tgamma\tlabeled\tclasses\n{}\t{}\t{}\t{}\n",
            r.n, r.gamma, r.labeled, r.classes
        ),
    )
}

fn parse_range(s: &str) -> CliResult<Vec<usize>> {
    let bad = || usage(format!("bad --n `{s}`; expected N or A..B"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v: usize = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn cmd_bench(c: BenchCmd, out: &mut dyn Write) -> CliResult {
    let ns = parse_range(&c.n)?;
    if c.gamma.is_some() && ns.len() > 1 {
        return Err(usage("--gamma applies to a single board size"));
    }
    let choice = c.solver.choice()?;
    let cards: Vec<CardinalityKind> = if c.card.is_empty() {
        CardinalityKind::ALL.to_vec()
    } else {
        c.card.iter().map(|&k| k.into()).collect()
    };
    let orders: Vec<OrderingStrategy> = if c.order.is_empty() {
        [
            OrderArg::Default,
            OrderArg::Random,
            OrderArg::Occurrence,
            OrderArg::Hilbert,
        ]
        .iter()
        .map(|o| o.strategy(c.seed))
        .collect()
    } else {
        c.order.iter().map(|o| o.strategy(c.seed)).collect()
    };
    let mut table = String::from(BENCH_HEADER);
    if c.out.is_none() {
        emit(out, BENCH_HEADER)?;
    }
    for n in ns {
        let b = board(n)?;
        let cfg = EncodingConfig::default().without_symmetry();
        let gamma = resolve_gamma(&b, c.gamma, None, &cfg, &choice)?;
        for &card in &cards {
            for &order in &orders {
                let row =
                    bench_one(&b, gamma, card, order, c.modulus, &choice).map_err(|e| match e {
                        crate::bench::BenchError::Integrity(i) => CliError::Integrity(i.0),
                        other => usage(other.to_string()),
                    })?;
                let line = bench_tsv_row(&row);
                table.push_str(&line);
                if c.out.is_none() {
                    emit(out, &line)?;
                }
                if row.status == SolveStatus::Sat {
                    return Err(CliError::Integrity(format!(
                        "{n}x{n} with {} queens is satisfiable; gamma {gamma} is wrong",
                        row.queens
                    )));
                }
            }
        }
    }
    if let Some(p) = &c.out {
        fs::write(p, &table).map_err(io_err(p))?;
    }
    Ok(())
}

fn cmd_cube(c: CubeCmd, out: &mut dyn Write) -> CliResult {
    let b = board(c.n)?;
    let cfg = c.enc.config(c.enumerate)?;
    let choice = c.solver.choice()?;
    let (f, cubes, gamma) = match &c.cubes {
        Some(p) => {
            let (f, cubes) = CnfFormula::parse_icnf(&read(p)?)?;
            if f.queen_vars() != 0 && f.queen_vars() as usize != b.num_squares() {
                return Err(usage(format!(
                    "{} declares {} queen variables, expected {}",
                    p.display(),
                    f.queen_vars(),
                    b.num_squares()
                )));
            }
            let gamma = if c.enumerate {
                resolve_gamma(&b, c.gamma, None, &cfg, &choice)?
            } else {
                c.gamma.unwrap_or(0)
            };
            (f, cubes, gamma)
        }
        None => {
            let gamma = resolve_gamma(&b, c.gamma, None, &cfg, &choice)?;
            let f = encode_domination(&b, gamma, &cfg)?;
            let cubes = split(&f, &b, c.depth)?;
            (f, cubes, gamma)
        }
    };
    if let Some(p) = &c.icnf {
        fs::write(p, f.to_icnf(&cubes)?).map_err(io_err(p))?;
        return emit(
            out,
            &format!("# {} cubes written to {}\n", cubes.len(), p.display()),
        );
    }
    if c.enumerate {
        let r = conquer_enumerate(&b, gamma, &f, &cubes, c.workers, || choice.make())?;
        write_or_emit(c.out.as_deref(), &reports_tsv(&r.reports), out)?;
        let labeled: usize = r.classes.iter().map(|c| c.orbit_size()).sum();
        emit(
            out,
            &format!(
                "# {} cubes: {} classes, {labeled} labeled\n",
                cubes.len(),
                r.classes.len()
            ),
        )?;
        if !r.complete {
            return Err(CliError::Unknown("some cube returned unknown".into()));
        }
        Ok(())
    } else {
        let r = conquer_decide(&f, &cubes, c.workers, || choice.make())?;
        write_or_emit(c.out.as_deref(), &reports_tsv(&r.reports), out)?;
        emit(
            out,
            &format!("# {} cubes: {}\n", cubes.len(), r.decision.status),
        )?;
        status_exit(r.decision.status, Some("some cube returned unknown".into()))
    }
}

fn cmd_verify(c: VerifyCmd, out: &mut dyn Write) -> CliResult {
    let file = parse_solutions(&read(&c.solutions)?)
        .map_err(|e| usage(format!("{}: {e}", c.solutions.display())))?;
    let b = board(file.n)?;
    let mut report = String::from("check\tresult\n");
    let mut failed = Vec::new();
    let mut record = |name: &str, ok: bool, detail: String| {
        report.push_str(&format!("{name}\t{}\n", if ok { "pass" } else { "FAIL" }));
        if !ok {
            failed.push(format!("{name}: {detail}"));
        }
    };

    let bad = file
        .classes
        .iter()
        .find(|cl| cl.canonical.len() != file.gamma || !oracle::is_dominating(&b, &cl.canonical));
    record(
        "dominating",
        bad.is_none(),
        bad.map(|cl| cl.canonical.to_string()).unwrap_or_default(),
    );

    let m = frequency_matrix(&b, &file.classes);
    let sym = check_frequency_symmetry(&m);
    record(
        "frequency_symmetry",
        sym.is_ok(),
        sym.err().map(|v| v.to_string()).unwrap_or_default(),
    );

    if file.n <= 7 {
        let expected = oracle::all_dominating_sets(&b, file.gamma)?;
        let got = qdom_core::enumerate::labeled_solutions(&file.classes);
        let gamma_ok = oracle::min_domination_number(&b, file.gamma).ok() == Some(file.gamma);
        record(
            "oracle",
            gamma_ok && expected == got,
            format!(
                "oracle has {} labeled solutions, file has {}",
                expected.len(),
                got.len()
            ),
        );
    }

    let cfg = c.enc.config(false)?;
    if c.certificate.is_some() || c.complete {
        let f = completeness_formula(&b, file.gamma, &file.classes, &cfg)?;
        if let Some(p) = &c.certificate {
            fs::write(p, f.to_dimacs()).map_err(io_err(p))?;
        }
        if c.complete {
            let mut backend = c.solver.choice()?.make();
            backend.add_formula(&f);
            let r = backend.solve(&[])?;
            match r.status {
                SolveStatus::Unsat => record("complete", true, String::new()),
                SolveStatus::Sat => {
                    let missing = decode_queens(&b, r.model.as_deref().unwrap_or(&[]));
                    record("complete", false, format!("missing solution {missing:?}"));
                }
                SolveStatus::Unknown => {
                    emit(out, &report)?;
                    return Err(CliError::Unknown(r.diagnostic.unwrap_or_default()));
                }
            }
        }
    }
    emit(out, &report)?;
    emit(
        out,
        &format!(
            "# n={} gamma={}: {} classes, {} labeled\n",
            file.n,
            file.gamma,
            file.classes.len(),
            file.labeled()
        ),
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Integrity(failed.join("; ")))
    }
}

fn cmd_heatmap(c: HeatmapCmd, out: &mut dyn Write) -> CliResult {
    let file = parse_solutions(&read(&c.solutions)?)
        .map_err(|e| usage(format!("{}: {e}", c.solutions.display())))?;
    let b = board(file.n)?;
    write_or_emit(c.out.as_deref(), &heatmap_for(&b, &file.classes), out)?;
    match check_frequency_symmetry(&frequency_matrix(&b, &file.classes)) {
        Ok(()) => emit(out, "# frequency symmetry: pass\n"),
        Err(v) => {
            emit(out, &format!("# frequency symmetry: FAIL ({v})\n"))?;
            Err(CliError::Integrity(format!(
                "frequency matrix not symmetric: {v}"
            )))
        }
    }
}
