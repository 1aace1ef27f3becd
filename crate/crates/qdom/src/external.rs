//! Adapter for external SAT solvers following the usual process contract:
//! the DIMACS path is the first argument, exit code 10 means satisfiable
//! and 20 unsatisfiable, and the model arrives on `v` lines.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use qdom_core::sat::{Backend, IntegrityError, SolveResult, SolveStats};
use qdom_core::{CnfFormula, Lit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolverConfig {
    pub executable: PathBuf,
    /// Appended after the input path (and proof path, when set).
    pub args: Vec<String>,
    /// Forwarded as the second positional argument, CaDiCaL style. The
    /// file is never read back.
    pub proof: Option<PathBuf>,
    pub timeout: Duration,
    /// Where temporary CNF files go; defaults to the system temp dir.
    pub workdir: Option<PathBuf>,
}

impl ExternalSolverConfig {
    pub fn new(executable: impl Into<PathBuf>) -> Self {
        ExternalSolverConfig {
            executable: executable.into(),
            args: Vec::new(),
            proof: None,
            timeout: Duration::from_secs(3600),
            workdir: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

/// Runs the solver on `path` and re-verifies any model against the file's
/// clauses. Process failures, malformed output and timeouts come back as
/// `Unknown` with a diagnostic; only a model that falsifies the formula is
/// an error.
pub fn run_external(
    path: &Path,
    cfg: &ExternalSolverConfig,
) -> Result<SolveResult, IntegrityError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Ok(unknown(format!("cannot read {}: {e}", path.display()))),
    };
    let formula = match CnfFormula::parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => return Ok(unknown(format!("{}: {e}", path.display()))),
    };
    run_on_file(path, &formula, cfg)
}

fn unknown(msg: impl Into<String>) -> SolveResult {
    SolveResult::unknown(SolveStats::default(), msg)
}

fn run_on_file(
    path: &Path,
    formula: &CnfFormula,
    cfg: &ExternalSolverConfig,
) -> Result<SolveResult, IntegrityError> {
    if cfg.timeout.is_zero() {
        return Ok(unknown("timeout must be positive"));
    }
    let mut cmd = Command::new(&cfg.executable);
    cmd.arg(path);
    if let Some(proof) = &cfg.proof {
        cmd.arg(proof);
    }
    cmd.args(&cfg.args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null());
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            return Ok(unknown(format!(
                "cannot start {}: {e}",
                cfg.executable.display()
            )))
        }
    };
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout.read_to_string(&mut buf);
        buf
    });

    let deadline = Instant::now() + cfg.timeout;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                // A grandchild may still hold the pipe; leave the reader behind.
                drop(reader);
                return Ok(unknown(format!("timeout after {:?}", cfg.timeout)));
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return Ok(unknown(format!("wait failed: {e}"))),
        }
    };
    let output = reader.join().unwrap_or_default();
    interpret(status.code(), &output, formula)
}

/// Maps exit code and standard output to a result, verifying models.
pub fn interpret(
    code: Option<i32>,
    output: &str,
    formula: &CnfFormula,
) -> Result<SolveResult, IntegrityError> {
    let mut status_line = None;
    let mut values = Vec::new();
    let mut terminated = false;
    for line in output.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status_line = Some(rest.trim().to_string());
        } else if let Some(rest) = line
            .strip_prefix("v ")
            .or_else(|| (line == "v").then_some(""))
        {
            for tok in rest.split_whitespace() {
                match tok.parse::<i32>() {
                    Ok(0) => terminated = true,
                    Ok(v) => values.push(v),
                    Err(_) => return Ok(unknown(format!("malformed value token `{tok}`"))),
                }
            }
        }
    }
    match (code, status_line.as_deref()) {
        (Some(20), None | Some("UNSATISFIABLE")) => Ok(SolveResult::unsat(SolveStats::default())),
        (Some(10), None | Some("SATISFIABLE")) => {
            if values.is_empty() && !terminated {
                return Ok(unknown("solver reported SAT without a model"));
            }
            let n = formula.num_vars() as usize;
            let mut model = vec![false; n + 1];
            for v in values {
                let lit = match Lit::from_dimacs(v) {
                    Some(l) => l,
                    None => return Ok(unknown(format!("bad literal {v}"))),
                };
                let idx = lit.var() as usize;
                if idx > n {
                    return Ok(unknown(format!("model mentions variable {idx} beyond {n}")));
                }
                model[idx] = lit.is_positive();
            }
            if let Some(i) = formula.first_violated(&model) {
                return Err(IntegrityError(format!(
                    "external model falsifies clause {i}"
                )));
            }
            Ok(SolveResult::sat(model, SolveStats::default()))
        }
        (code, line) => Ok(unknown(format!(
            "unexpected solver outcome: exit {code:?}, status line {line:?}"
        ))),
    }
}

static FILE_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Non-incremental [`Backend`]: clauses accumulate in memory and each
/// `solve` writes the whole formula plus assumption units to a fresh file.
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    cfg: ExternalSolverConfig,
    formula: CnfFormula,
}

impl ExternalBackend {
    pub fn new(cfg: ExternalSolverConfig) -> Self {
        ExternalBackend {
            cfg,
            formula: CnfFormula::default(),
        }
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }
}

impl Backend for ExternalBackend {
    fn add_clause(&mut self, lits: &[Lit]) {
        if !lits.is_empty() {
            self.formula.add_clause(lits).expect("non-empty clause");
        }
    }

    fn reserve_vars(&mut self, num_vars: u32) {
        while self.formula.num_vars() < num_vars {
            self.formula.fresh_var();
        }
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError> {
        let mut f = self.formula.clone();
        for &a in assumptions {
            f.add_clause(&[a]).expect("unit clause");
        }
        let dir = self.cfg.workdir.clone().unwrap_or_else(std::env::temp_dir);
        let path = dir.join(format!(
            "qdom-{}-{}.cnf",
            std::process::id(),
            FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        if let Err(e) = std::fs::write(&path, f.to_dimacs()) {
            return Ok(unknown(format!("cannot write {}: {e}", path.display())));
        }
        let result = run_on_file(&path, &f, &self.cfg);
        let _ = std::fs::remove_file(&path);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula() -> CnfFormula {
        let mut f = CnfFormula::default();
        f.add_clause(&[Lit::pos(1), Lit::pos(2)]).unwrap();
        f.add_clause(&[Lit::neg(1)]).unwrap();
        f
    }

    #[test]
    fn interprets_standard_contract() {
        let f = formula();
        let r = interpret(Some(10), "c hi\ns SATISFIABLE\nv -1 2 0\n", &f).unwrap();
        assert!(r.is_sat());
        assert_eq!(r.model.unwrap(), vec![false, false, true]);
        assert!(interpret(Some(20), "s UNSATISFIABLE\n", &f)
            .unwrap()
            .is_unsat());
        let r = interpret(Some(0), "", &f).unwrap();
        assert_eq!(r.status, qdom_core::SolveStatus::Unknown);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn bad_model_is_integrity_error() {
        let f = formula();
        assert!(interpret(Some(10), "s SATISFIABLE\nv 1 2 0\n", &f).is_err());
    }

    #[test]
    fn malformed_output_is_unknown() {
        let f = formula();
        for out in [
            "s SATISFIABLE\n",
            "s SATISFIABLE\nv x 0\n",
            "s UNSATISFIABLE\nv 1 0\n",
        ] {
            let r = interpret(Some(10), out, &f).unwrap();
            assert_eq!(r.status, qdom_core::SolveStatus::Unknown, "{out}");
        }
        let r = interpret(Some(10), "s SATISFIABLE\nv 9 0\n", &f).unwrap();
        assert_eq!(r.status, qdom_core::SolveStatus::Unknown);
    }

    #[test]
    fn missing_executable_is_unknown() {
        let dir = std::env::temp_dir();
        let path = dir.join(format!("qdom-missing-exe-{}.cnf", std::process::id()));
        std::fs::write(&path, formula().to_dimacs()).unwrap();
        let cfg = ExternalSolverConfig::new("/nonexistent/solver");
        let r = run_external(&path, &cfg).unwrap();
        assert_eq!(r.status, qdom_core::SolveStatus::Unknown);
        let _ = std::fs::remove_file(path);
    }
}
