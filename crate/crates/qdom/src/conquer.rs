//! Parallel cube conquest. Workers pull cube indices from a shared counter,
//! solve on their own backend and send reports back over a channel.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use qdom_core::cube::{merge_classes, merge_decisions, CubeReport, Decision};
use qdom_core::enumerate::{enumerate_formula, EnumerateError};
use qdom_core::sat::{Backend, IntegrityError, SolveResult, SolveStats};
use qdom_core::{Board, CnfFormula, CubeSet, SolutionClass, SolveStatus};

/// Result of a decision run over all cubes.
#[derive(Debug, Clone)]
pub struct DecideOutcome {
    pub decision: Decision,
    pub reports: Vec<CubeReport>,
}

/// Result of an enumeration run over all cubes. `complete` is false when
/// some cube came back unknown; `classes` then holds what was found.
#[derive(Debug, Clone)]
pub struct EnumerateOutcome {
    pub classes: Vec<SolutionClass>,
    pub reports: Vec<CubeReport>,
    pub complete: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConquerError {
    #[error("workers must be at least 1")]
    NoWorkers,
    #[error("cube {index}: {source}")]
    Integrity {
        index: usize,
        source: IntegrityError,
    },
    #[error("cube {index}: {source}")]
    Enumerate {
        index: usize,
        source: EnumerateError,
    },
}

fn run_parallel<T, F>(count: usize, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    thread::scope(|scope| {
        for _ in 0..workers.min(count.max(1)) {
            let tx = tx.clone();
            let next = &next;
            let job = &job;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                if tx.send((i, job(i))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut out: Vec<(usize, T)> = rx.into_iter().collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, t)| t).collect()
}

fn report(
    index: usize,
    cube: &[qdom_core::Lit],
    status: SolveStatus,
    stats: SolveStats,
    start: Instant,
) -> CubeReport {
    CubeReport {
        index,
        cube: cube.to_vec(),
        status,
        classes: 0,
        conflicts: stats.conflicts,
        millis: start.elapsed().as_millis(),
        diagnostic: None,
    }
}

/// Decides `f` under every cube. `make_backend` is called once per cube.
pub fn conquer_decide<B, M>(
    f: &CnfFormula,
    cubes: &CubeSet,
    workers: usize,
    make_backend: M,
) -> Result<DecideOutcome, ConquerError>
where
    B: Backend,
    M: Fn() -> B + Sync,
{
    if workers == 0 {
        return Err(ConquerError::NoWorkers);
    }
    let results = run_parallel(cubes.len(), workers, |i| {
        let cube = &cubes.cubes()[i];
        let start = Instant::now();
        let mut b = make_backend();
        b.add_formula(f);
        b.solve(cube)
            .map(|r| (report(i, cube, r.status, r.stats, start), r))
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut solved: Vec<SolveResult> = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        let (mut rep, res) = r.map_err(|source| ConquerError::Integrity { index, source })?;
        rep.diagnostic = res.diagnostic.clone();
        reports.push(rep);
        solved.push(res);
    }
    Ok(DecideOutcome {
        decision: merge_decisions(&solved),
        reports,
    })
}

/// Enumerates classes inside every cube and merges them by canonical form.
pub fn conquer_enumerate<B, M>(
    board: &Board,
    gamma: usize,
    f: &CnfFormula,
    cubes: &CubeSet,
    workers: usize,
    make_backend: M,
) -> Result<EnumerateOutcome, ConquerError>
where
    B: Backend,
    M: Fn() -> B + Sync,
{
    if workers == 0 {
        return Err(ConquerError::NoWorkers);
    }
    let results = run_parallel(cubes.len(), workers, |i| {
        let cube = &cubes.cubes()[i];
        let start = Instant::now();
        let mut b = make_backend();
        let r = enumerate_formula(board, gamma, f, cube, &mut b);
        (start, r)
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut parts: Vec<Vec<SolutionClass>> = Vec::with_capacity(results.len());
    let mut complete = true;
    for (index, (start, r)) in results.into_iter().enumerate() {
        let cube = &cubes.cubes()[index];
        match r {
            Ok(e) => {
                let mut rep = report(index, cube, SolveStatus::Unsat, e.stats, start);
                rep.classes = e.classes.len();
                reports.push(rep);
                parts.push(e.classes);
            }
            Err(EnumerateError::Partial {
                classes,
                diagnostic,
            }) => {
                complete = false;
                let mut rep = report(
                    index,
                    cube,
                    SolveStatus::Unknown,
                    SolveStats::default(),
                    start,
                );
                rep.classes = classes.len();
                rep.diagnostic = Some(diagnostic);
                reports.push(rep);
                parts.push(classes);
            }
            Err(source) => return Err(ConquerError::Enumerate { index, source }),
        }
    }
    Ok(EnumerateOutcome {
        classes: merge_classes(parts.iter().map(|p| p.as_slice())),
        reports,
        complete,
    })
}

/// Per-cube status table. In enumeration mode `status` is `unsat` once the
/// cube is exhausted.
pub fn reports_tsv(reports: &[CubeReport]) -> String {
    let mut out = String::from("cube\tliterals\tstatus\tclasses\tconflicts\tmillis\n");
    for r in reports {
        let lits: Vec<String> = r.cube.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.index,
            lits.join(" "),
            r.status,
            r.classes,
            r.conflicts,
            r.millis
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdom_core::cube::split;
    use qdom_core::encode::{encode_domination, EncodingConfig};
    use qdom_core::Solver;

    #[test]
    fn parallel_matches_sequential_on_five() {
        let b = Board::new(5).unwrap();
        let f = encode_domination(&b, 3, &EncodingConfig::default()).unwrap();
        let cubes = split(&f, &b, 3).unwrap();
        let out = conquer_enumerate(&b, 3, &f, &cubes, 3, Solver::new).unwrap();
        assert!(out.complete);
        assert_eq!(out.classes.len(), 37);
        assert_eq!(out.reports.len(), 8);
        assert_eq!(
            out.reports.iter().map(|r| r.index).collect::<Vec<_>>(),
            (0..8).collect::<Vec<_>>()
        );
    }

    #[test]
    fn decide_unsat_and_sat() {
        let b = Board::new(5).unwrap();
        let cfg = EncodingConfig::default().without_symmetry();
        let f = encode_domination(&b, 2, &cfg).unwrap();
        let cubes = split(&f, &b, 2).unwrap();
        let out = conquer_decide(&f, &cubes, 2, Solver::new).unwrap();
        assert_eq!(out.decision.status, SolveStatus::Unsat);
        assert!(out.reports.iter().all(|r| r.status == SolveStatus::Unsat));

        let f = encode_domination(&b, 3, &cfg).unwrap();
        let out = conquer_decide(&f, &cubes, 4, Solver::new).unwrap();
        assert_eq!(out.decision.status, SolveStatus::Sat);
        assert!(f.is_satisfied_by(out.decision.model.as_ref().unwrap()));
    }

    #[test]
    fn zero_workers_rejected() {
        let b = Board::new(3).unwrap();
        let f = encode_domination(&b, 1, &EncodingConfig::default()).unwrap();
        let cubes = split(&f, &b, 1).unwrap();
        assert!(matches!(
            conquer_decide(&f, &cubes, 0, Solver::new),
            Err(ConquerError::NoWorkers)
        ));
    }

    #[test]
    fn unknown_cube_makes_decision_unknown() {
        let b = Board::new(6).unwrap();
        let f = encode_domination(&b, 2, &EncodingConfig::default().without_symmetry()).unwrap();
        let cubes = split(&f, &b, 1).unwrap();
        let out = conquer_decide(&f, &cubes, 1, || {
            let mut s = Solver::new();
            s.set_conflict_budget(Some(0));
            s
        })
        .unwrap();
        assert_ne!(out.decision.status, SolveStatus::Sat);
        let tsv = reports_tsv(&out.reports);
        assert!(tsv.starts_with("cube\tliterals\tstatus"));
        assert_eq!(tsv.lines().count(), 3);
    }
}
