//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! The external-solver part of criterion 5 uses `QDOM_SOLVER` when set,
//! otherwise the bundled `scripts/pysat-cadical` wrapper when python-sat is
//! importable; without either it reports that part as not run.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qdom::backend::SolverChoice;
use qdom::bench::bench_one;
use qdom::conquer::{conquer_decide, conquer_enumerate};
use qdom::external::ExternalSolverConfig;
use qdom_core::cardinality::{encode_at_most_k, CardinalityEncoder};
use qdom_core::cube::split;
use qdom_core::encode::{decode_queens, encode_domination, EncodingConfig};
use qdom_core::enumerate::{
    check_frequency_symmetry, completeness_formula, enumerate_embedded, frequency_matrix,
    labeled_solutions, probe_domination_number, SolutionClass,
};
use qdom_core::oracle;
use qdom_core::sat::solve;
use qdom_core::symmetry::{encode_lex_leq, occupancy};
use qdom_core::{
    Board, CardinalityKind, CnfFormula, Lit, OrderingStrategy, SolveStatus, Solver, SquareSet,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn board(n: usize) -> Board {
    Board::new(n).unwrap()
}

const ORDERS: [OrderingStrategy; 4] = [
    OrderingStrategy::Default,
    OrderingStrategy::Random { seed: 0 },
    OrderingStrategy::Occurrence,
    OrderingStrategy::Hilbert,
];

/// Classes found with the embedded solver, symmetry breaking on.
struct Shared {
    classes: Vec<(usize, usize, Vec<SolutionClass>)>,
}

fn class_counts(shared: &mut Shared) -> Outcome {
    let expected = [(3, 1), (4, 3), (5, 37), (6, 1), (7, 13), (8, 638), (9, 21)];
    let mut got = Vec::new();
    for (n, want) in expected {
        let b = board(n);
        let gamma = if n <= oracle::MAX_ORACLE_N {
            oracle::min_domination_number(&b, n).map_err(|e| e.to_string())?
        } else {
            probe_domination_number(&b, 5, &EncodingConfig::default(), Solver::new)
                .map_err(|e| e.to_string())?
        };
        let e =
            enumerate_embedded(&b, gamma, &EncodingConfig::default()).map_err(|e| e.to_string())?;
        ensure!(
            e.classes.len() == want,
            "n={n}: {} classes, expected {want}",
            e.classes.len()
        );
        got.push(format!("{n}:{}", e.classes.len()));
        shared.classes.push((n, gamma, e.classes));
    }
    Ok(format!("classes {}", got.join(" ")))
}

fn fig_one() -> Outcome {
    let b = board(4);
    let e = enumerate_embedded(&b, 2, &EncodingConfig::default()).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = e.classes.iter().map(|c| c.orbit_size()).collect();
    let labeled = labeled_solutions(&e.classes);
    ensure!(e.classes.len() == 3, "{} orbits", e.classes.len());
    ensure!(sizes.iter().sum::<usize>() == 12, "orbit sizes {sizes:?}");
    ensure!(labeled.len() == 12, "{} labeled", labeled.len());
    ensure!(
        labeled.iter().all(|s| oracle::is_dominating(&b, s)),
        "non-dominating member"
    );
    Ok(format!("3 orbits, sizes {sizes:?}, 12 labeled"))
}

fn oracle_equivalence() -> Outcome {
    for n in 1..=7 {
        let b = board(n);
        let gamma = oracle::min_domination_number(&b, n).map_err(|e| e.to_string())?;
        let probed = probe_domination_number(&b, n, &EncodingConfig::default(), Solver::new)
            .map_err(|e| e.to_string())?;
        ensure!(probed == gamma, "n={n}: probed {probed}, oracle {gamma}");
        let sat = labeled_solutions(
            &enumerate_embedded(&b, gamma, &EncodingConfig::default())
                .map_err(|e| e.to_string())?
                .classes,
        );
        let brute = oracle::all_min_sets(&b).map_err(|e| e.to_string())?;
        ensure!(
            sat == brute,
            "n={n}: SAT has {} labeled, oracle {}",
            sat.len(),
            brute.len()
        );
    }
    Ok("labeled sets and gamma agree for n=1..7".into())
}

fn bounds(shared: &Shared) -> Outcome {
    let mut gammas: Vec<(usize, usize)> = (1..=2)
        .map(|n| (n, oracle::min_domination_number(&board(n), n).unwrap()))
        .collect();
    gammas.extend(shared.classes.iter().map(|(n, g, _)| (*n, *g)));
    ensure!(gammas.len() == 9, "missing gamma values: {gammas:?}");
    for w in gammas.windows(2) {
        let ((n0, g0), (n1, g1)) = (w[0], w[1]);
        ensure!(n1 == n0 + 1, "gap between {n0} and {n1}");
        ensure!(g1 <= g0 + 1, "gamma jumps from {g0} to {g1} at n={n1}");
    }
    for &(n, g) in &gammas {
        ensure!(
            oracle::lower_bound(n) <= g,
            "n={n}: gamma {g} below lower bound"
        );
    }
    let list: Vec<String> = gammas.iter().map(|(n, g)| format!("{n}:{g}")).collect();
    Ok(format!("gamma {}", list.join(" ")))
}

fn bundled_solver() -> Option<PathBuf> {
    if let Ok(s) = std::env::var("QDOM_SOLVER") {
        if !s.is_empty() {
            return Some(PathBuf::from(s));
        }
    }
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/pysat-cadical");
    let ok = Command::new("python3")
        .args(["-c", "import pysat.solvers"])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false);
    (ok && script.exists()).then_some(script)
}

fn unsat_variant() -> Outcome {
    let b = board(8);
    let mut worst = 0.0f64;
    for card in CardinalityKind::ALL {
        for order in ORDERS {
            let r = bench_one(&b, 5, card, order, None, &SolverChoice::embedded())
                .map_err(|e| e.to_string())?;
            ensure!(
                r.status == SolveStatus::Unsat,
                "n=8 {} {}: {}",
                card.name(),
                order.name(),
                r.status
            );
            worst = worst.max(r.seconds);
        }
    }
    let mut note = format!("n=8 x4 unsat in 12/12 (max {worst:.2}s)");
    let Some(exe) = bundled_solver() else {
        note.push_str("; external part not run (no solver configured)");
        return Ok(note);
    };
    let ext = |timeout: Duration| {
        SolverChoice::External(ExternalSolverConfig::new(&exe).with_timeout(timeout))
    };
    let hour = Duration::from_secs(3600);
    for (n, gamma) in [(12, 6), (13, 7)] {
        let b = board(n);
        let fast = bench_one(
            &b,
            gamma,
            CardinalityKind::MTotalizer,
            OrderingStrategy::Hilbert,
            None,
            &ext(hour),
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            fast.status == SolveStatus::Unsat,
            "n={n} hilbert+mtotalizer: {}",
            fast.status
        );
        // The slow cell only has to show it is not faster, so twice the fast
        // time is enough to decide the comparison.
        let budget = if n == 12 {
            hour
        } else {
            Duration::from_secs_f64((2.0 * fast.seconds).max(5.0))
        };
        let slow = bench_one(
            &b,
            gamma,
            CardinalityKind::SeqCard,
            OrderingStrategy::Default,
            None,
            &ext(budget),
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            slow.status != SolveStatus::Sat,
            "n={n} default+seqcard is sat"
        );
        if n == 12 {
            ensure!(
                slow.status == SolveStatus::Unsat,
                "n=12 default+seqcard: {}",
                slow.status
            );
        }
        ensure!(
            fast.seconds <= slow.seconds,
            "n={n}: hilbert+mtotalizer {:.1}s slower than default+seqcard {:.1}s",
            fast.seconds,
            slow.seconds
        );
        let slow_desc = match slow.status {
            SolveStatus::Unsat => format!("{:.1}s", slow.seconds),
            _ => format!(">{:.1}s", slow.seconds),
        };
        note.push_str(&format!(
            "; n={n} x{}: hilbert+mtot {:.1}s <= default+seqcard {slow_desc}",
            gamma - 1,
            fast.seconds
        ));
    }
    Ok(note)
}

fn projected_models(kind: CardinalityKind, m: usize, k: usize) -> Result<Vec<bool>, String> {
    let mut f = CnfFormula::new(m as u32);
    let lits: Vec<Lit> = (1..=m as u32).map(Lit::pos).collect();
    encode_at_most_k(&mut f, &lits, &CardinalityEncoder::new(kind, k))
        .map_err(|e| e.to_string())?;
    let mut s = Solver::from_formula(&f);
    (0u32..1 << m)
        .map(|mask| {
            let assume: Vec<Lit> = (0..m)
                .map(|i| Lit::new(i as u32 + 1, mask >> i & 1 == 1))
                .collect();
            s.solve_checked(&assume)
                .map(|r| r.is_sat())
                .map_err(|e| e.0)
        })
        .collect()
}

fn cross_encoder() -> Outcome {
    let mut cases = 0;
    for m in 1..=8 {
        for k in 0..=4 {
            let truth: Vec<bool> = (0u32..1 << m)
                .map(|x| x.count_ones() as usize <= k)
                .collect();
            for kind in CardinalityKind::ALL {
                let got = projected_models(kind, m, k)?;
                ensure!(
                    got == truth,
                    "{} m={m} k={k} differs from popcount",
                    kind.name()
                );
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} (encoder, m, k) cases match the truth table"
    ))
}

fn lex_leq(x: &[bool], y: &[bool]) -> bool {
    x <= y
}

fn lex_semantics() -> Outcome {
    for n in 1..=3usize {
        let mut f = CnfFormula::new(2 * n as u32);
        let x: Vec<Lit> = (1..=n as u32).map(Lit::pos).collect();
        let y: Vec<Lit> = (n as u32 + 1..=2 * n as u32).map(Lit::pos).collect();
        encode_lex_leq(&mut f, &x, &y).map_err(|e| e.to_string())?;
        let ternary = f.clauses().iter().filter(|c| c.len() == 3).count();
        let units = f.clauses().iter().filter(|c| c.len() == 1).count();
        ensure!(
            ternary == 3 * n && units == 2 && f.num_clauses() == 3 * n + 2,
            "N={n}: {ternary} ternary, {units} units"
        );
        for mask in 0u32..1 << (2 * n) {
            let bits: Vec<bool> = (0..2 * n).map(|i| mask >> i & 1 == 1).collect();
            let assume: Vec<Lit> = bits
                .iter()
                .enumerate()
                .map(|(i, &b)| Lit::new(i as u32 + 1, b))
                .collect();
            let sat = solve(&f, &assume).is_sat();
            ensure!(
                sat == lex_leq(&bits[..n], &bits[n..]),
                "N={n} pair {bits:?}: encoding says {sat}"
            );
        }
    }
    Ok("N=1..3 truth tables exact; 3N ternary + 2 units".into())
}

fn orbit_lex_min(b: &Board, set: &SquareSet) -> bool {
    let own = occupancy(b, set);
    b.orbit(set)
        .unwrap()
        .iter()
        .all(|img| own <= occupancy(b, img))
}

fn symmetry_soundness() -> Outcome {
    for n in 1..=6 {
        let b = board(n);
        let gamma = oracle::min_domination_number(&b, n).map_err(|e| e.to_string())?;
        for card in CardinalityKind::ALL {
            let on_cfg = EncodingConfig::new(card, OrderingStrategy::Hilbert, true);
            let on = enumerate_embedded(&b, gamma, &on_cfg).map_err(|e| e.to_string())?;
            let off = enumerate_embedded(&b, gamma, &on_cfg.without_symmetry())
                .map_err(|e| e.to_string())?;
            ensure!(
                on.classes == off.classes,
                "n={n} {}: on/off class sets differ",
                card.name()
            );
            for m in &on.models {
                ensure!(
                    orbit_lex_min(&b, m),
                    "n={n}: model {m} is not the lex-min of its orbit"
                );
            }
        }
    }
    Ok("n=1..6 on/off identical; every symmetry-on model is its orbit's lex-min".into())
}

fn frequency_symmetry(shared: &Shared) -> Outcome {
    let mut totals = Vec::new();
    for want in [4, 5, 8] {
        let (n, gamma, classes) = shared
            .classes
            .iter()
            .find(|(n, _, _)| *n == want)
            .ok_or(format!("no classes for n={want}"))?;
        let b = board(*n);
        let m = frequency_matrix(&b, classes);
        ensure!(
            m.counts().iter().sum::<u64>() == *gamma as u64 * m.total(),
            "n={n}: counts do not sum to gamma * total"
        );
        check_frequency_symmetry(&m).map_err(|v| format!("n={n}: {v}"))?;
        totals.push(format!("{n}:{}", m.total()));

        let mut spoiled = m.clone();
        let extra = SquareSet::new(&b, (1..=*gamma).collect()).unwrap();
        spoiled.add_solution(&extra);
        match check_frequency_symmetry(&spoiled) {
            Ok(()) => return Err(format!("n={n}: injected solution not detected")),
            Err(v) => ensure!(
                spoiled.count(v.square) != spoiled.count(v.image),
                "n={n}: reported violation is not one"
            ),
        }
    }
    Ok(format!(
        "symmetric with totals {}; injected solution located",
        totals.join(" ")
    ))
}

fn cube_partition(shared: &Shared) -> Outcome {
    let b = board(8);
    let whole = &shared
        .classes
        .iter()
        .find(|(n, _, _)| *n == 8)
        .ok_or("no n=8 classes")?
        .2;
    let f = encode_domination(&b, 5, &EncodingConfig::default()).map_err(|e| e.to_string())?;
    let cubes = split(&f, &b, 4).map_err(|e| e.to_string())?;
    let r = conquer_enumerate(&b, 5, &f, &cubes, 4, Solver::new).map_err(|e| e.to_string())?;
    ensure!(r.complete, "a cube returned unknown");
    ensure!(
        &r.classes == whole,
        "split found {} classes, unsplit {}",
        r.classes.len(),
        whole.len()
    );

    let g = encode_domination(&b, 4, &EncodingConfig::default().without_symmetry())
        .map_err(|e| e.to_string())?;
    let gc = split(&g, &b, 4).map_err(|e| e.to_string())?;
    let d = conquer_decide(&g, &gc, 4, Solver::new).map_err(|e| e.to_string())?;
    ensure!(
        d.decision.status == SolveStatus::Unsat,
        "gamma-1 split decision {}",
        d.decision.status
    );
    ensure!(
        d.reports.iter().all(|c| c.status == SolveStatus::Unsat),
        "some gamma-1 cube not unsat"
    );
    Ok(format!(
        "16 cubes -> {} classes; gamma-1 unsat in 16/16 cubes",
        r.classes.len()
    ))
}

fn completeness() -> Outcome {
    let mut checked = 0;
    for n in 3..=6 {
        let b = board(n);
        let gamma = oracle::min_domination_number(&b, n).map_err(|e| e.to_string())?;
        let cfg = EncodingConfig::default();
        let classes = enumerate_embedded(&b, gamma, &cfg)
            .map_err(|e| e.to_string())?
            .classes;
        let f = completeness_formula(&b, gamma, &classes, &cfg).map_err(|e| e.to_string())?;
        ensure!(
            solve(&f, &[]).is_unsat(),
            "n={n}: completeness formula is not unsat"
        );
        let labeled: BTreeSet<SquareSet> = labeled_solutions(&classes);
        let base = f.num_clauses() - labeled.len();
        for skip in 0..labeled.len() {
            let mut g = CnfFormula::new(f.queen_vars());
            for (i, c) in f.clauses().iter().enumerate() {
                if i != base + skip {
                    g.add_clause(c).unwrap();
                }
            }
            let removed: Vec<usize> = f.clauses()[base + skip]
                .iter()
                .map(|l| l.var() as usize)
                .collect();
            let r = solve(&g, &[]);
            ensure!(
                r.is_sat(),
                "n={n}: dropping blocking clause {skip} leaves it unsat"
            );
            let queens = decode_queens(&b, r.model.as_ref().unwrap());
            ensure!(
                queens == removed,
                "n={n}: model {queens:?} is not the removed solution {removed:?}"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "n=3..6 unsat; {checked} single removals each recover exactly the removed solution"
    ))
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let selected = |id: &str| filter.is_empty() || filter.iter().any(|f| id.contains(f.as_str()));
    let mut shared = Shared {
        classes: Vec::new(),
    };
    let mut failed = 0;
    let mut report = |id: &str, what: &str, tol: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("{id} PASS [{tol}] {what}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL [{tol}] {what}: {msg} ({secs:.1}s)");
            }
        }
    };
    let needs_classes = ["AC01", "AC04", "AC09", "AC10"]
        .iter()
        .any(|id| selected(id));
    if needs_classes {
        report("AC01", "class counts n=3..9", "exact", &mut || {
            class_counts(&mut shared)
        });
    }
    if selected("AC02") {
        report(
            "AC02",
            "4x4 labeled solutions and orbits",
            "exact",
            &mut fig_one,
        );
    }
    if selected("AC03") {
        report(
            "AC03",
            "oracle equivalence n=1..7",
            "exact",
            &mut oracle_equivalence,
        );
    }
    if selected("AC04") {
        report("AC04", "domination number bounds", "exact", &mut || {
            bounds(&shared)
        });
    }
    if selected("AC05") {
        report(
            "AC05",
            "gamma-1 instances unsat",
            "status exact; times reported",
            &mut unsat_variant,
        );
    }
    if selected("AC06") {
        report(
            "AC06",
            "cross-encoder projected equivalence",
            "exact",
            &mut cross_encoder,
        );
    }
    if selected("AC07") {
        report(
            "AC07",
            "lex encoding semantics",
            "exact",
            &mut lex_semantics,
        );
    }
    if selected("AC08") {
        report(
            "AC08",
            "symmetry-breaking soundness",
            "exact",
            &mut symmetry_soundness,
        );
    }
    if selected("AC09") {
        report("AC09", "frequency-matrix symmetry", "exact", &mut || {
            frequency_symmetry(&shared)
        });
    }
    if selected("AC10") {
        report("AC10", "cube partition n=8 depth 4", "exact", &mut || {
            cube_partition(&shared)
        });
    }
    if selected("AC11") {
        report(
            "AC11",
            "completeness formula n=3..6",
            "exact",
            &mut completeness,
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
