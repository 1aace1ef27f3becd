//! Solving backends.
//!
//! [`Solver`] is an incremental conflict-driven clause-learning solver with
//! two watched literals, first-UIP learning, VSIDS branching, phase saving
//! and Luby restarts. It is sized for desk-scale encodings (a few thousand
//! variables); large instances go to an external solver through the
//! [`Backend`] trait implemented in the `qdom` crate.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cnf::{CnfFormula, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Sat => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Total assignment indexed by variable (`model[0]` unused); present
    /// exactly when `status` is `Sat`.
    pub model: Option<Vec<bool>>,
    pub stats: SolveStats,
    pub diagnostic: Option<String>,
}

impl SolveResult {
    pub fn unsat(stats: SolveStats) -> Self {
        SolveResult {
            status: SolveStatus::Unsat,
            model: None,
            stats,
            diagnostic: None,
        }
    }

    pub fn unknown(stats: SolveStats, diagnostic: impl Into<String>) -> Self {
        SolveResult {
            status: SolveStatus::Unknown,
            model: None,
            stats,
            diagnostic: Some(diagnostic.into()),
        }
    }

    pub fn sat(model: Vec<bool>, stats: SolveStats) -> Self {
        SolveResult {
            status: SolveStatus::Sat,
            model: Some(model),
            stats,
            diagnostic: None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == SolveStatus::Sat
    }

    pub fn is_unsat(&self) -> bool {
        self.status == SolveStatus::Unsat
    }
}

/// A model came back that does not satisfy the formula it was solved for.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("model verification failed: {0}")]
pub struct IntegrityError(pub String);

/// Anything that can take clauses and answer satisfiability queries under
/// assumptions. Clauses accumulate across calls.
pub trait Backend {
    fn add_clause(&mut self, lits: &[Lit]);

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError>;

    fn add_formula(&mut self, f: &CnfFormula) {
        self.reserve_vars(f.num_vars());
        for c in f.clauses() {
            self.add_clause(c);
        }
    }

    /// Makes variables up to `num_vars` known even if no clause uses them.
    fn reserve_vars(&mut self, num_vars: u32) {
        let _ = num_vars;
    }
}

/// One-shot solve with the embedded solver.
pub fn solve(f: &CnfFormula, assumptions: &[Lit]) -> SolveResult {
    Solver::from_formula(f).solve_with(assumptions)
}

/// Asserts `assumptions` one decision level each and runs unit propagation
/// only. Returns `None` on conflict, otherwise the partial assignment
/// (`Some(value)` per variable, index 0 unused).
pub fn unit_propagate(f: &CnfFormula, assumptions: &[Lit]) -> Option<Vec<Option<bool>>> {
    let mut s = Solver::from_formula(f);
    let out = s.propagate_only(assumptions);
    s.cancel_until(0);
    out
}

const NO_REASON: u32 = u32::MAX;

#[inline]
fn code(l: Lit) -> u32 {
    (l.var() - 1) * 2 + u32::from(!l.is_positive())
}

#[inline]
fn decode(c: u32) -> Lit {
    Lit::new(c / 2 + 1, c & 1 == 0)
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: u32,
}

struct Clause {
    lits: Vec<u32>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f32,
}

/// Incremental CDCL solver.
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    free_slots: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watch>>,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    original: Vec<Vec<Lit>>,
    ok: bool,
    stats: SolveStats,
    next_reduce: u64,
    reduce_step: u64,
    conflict_budget: Option<u64>,
    terminate: Option<Box<dyn FnMut() -> bool + Send>>,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solver")
            .field("num_vars", &self.num_vars)
            .field("clauses", &self.original.len())
            .field("learnts", &self.learnts.len())
            .field("stats", &self.stats)
            .finish()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            num_vars: 0,
            clauses: Vec::new(),
            free_slots: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            values: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            original: Vec::new(),
            ok: true,
            stats: SolveStats::default(),
            next_reduce: 2000,
            reduce_step: 300,
            conflict_budget: None,
            terminate: None,
        }
    }

    pub fn from_formula(f: &CnfFormula) -> Self {
        let mut s = Solver::new();
        Backend::add_formula(&mut s, f);
        s
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    /// Give up with `Unknown` after this many conflicts per `solve` call.
    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.conflict_budget = budget;
    }

    /// Polled periodically; returning `true` aborts the search with `Unknown`.
    pub fn set_terminate(&mut self, callback: Option<Box<dyn FnMut() -> bool + Send>>) {
        self.terminate = callback;
    }

    pub fn ensure_vars(&mut self, n: usize) {
        while self.num_vars < n {
            let v = self.num_vars;
            self.num_vars += 1;
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.values.push(0);
            self.level.push(0);
            self.reason.push(NO_REASON);
            self.activity.push(0.0);
            self.phase.push(false);
            self.seen.push(false);
            self.heap.grow(v + 1);
            self.heap.insert(v as u32, &self.activity);
        }
    }

    #[inline]
    fn value(&self, lit: u32) -> i8 {
        let v = self.values[(lit >> 1) as usize];
        if lit & 1 == 0 {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, lit: u32, reason: u32) {
        let v = (lit >> 1) as usize;
        debug_assert_eq!(self.values[v], 0);
        self.values[v] = if lit & 1 == 0 { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = (lit >> 1) as usize;
            self.phase[v] = lit & 1 == 0;
            self.values[v] = 0;
            self.reason[v] = NO_REASON;
            if !self.heap.contains(v as u32) {
                self.heap.insert(v as u32, &self.activity);
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = start;
    }

    fn alloc_clause(&mut self, lits: Vec<u32>, learnt: bool, lbd: u32) -> u32 {
        let clause = Clause {
            lits,
            learnt,
            deleted: false,
            lbd,
            activity: 0.0,
        };
        let cref = match self.free_slots.pop() {
            Some(slot) => {
                self.clauses[slot as usize] = clause;
                slot
            }
            None => {
                self.clauses.push(clause);
                (self.clauses.len() - 1) as u32
            }
        };
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a as usize].push(Watch { cref, blocker: b });
        self.watches[b as usize].push(Watch { cref, blocker: a });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn add_clause_internal(&mut self, lits: &[Lit]) {
        let max_var = lits.iter().map(|l| l.var() as usize).max().unwrap_or(0);
        self.ensure_vars(max_var);
        self.original.push(lits.to_vec());
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut cs: Vec<u32> = lits.iter().map(|&l| code(l)).collect();
        cs.sort_unstable();
        cs.dedup();
        let mut kept = Vec::with_capacity(cs.len());
        for (i, &c) in cs.iter().enumerate() {
            if i + 1 < cs.len() && cs[i + 1] == c ^ 1 {
                return; // tautology
            }
            match self.value(c) {
                1 => return,
                -1 => {}
                _ => kept.push(c),
            }
        }
        match kept.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.alloc_clause(kept, false, 0);
            }
        }
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = core::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                let clause = &mut self.clauses[cref].lits;
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let new_watch = Watch {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && value_of(&self.values, first) == 1 {
                    ws[j] = new_watch;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    if value_of(&self.values, clause[k]) != -1 {
                        clause.swap(1, k);
                        let target = clause[1] as usize;
                        self.watches[target].push(new_watch);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = new_watch;
                j += 1;
                if self.value(first) == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if self.heap.contains(v as u32) {
            self.heap.bumped(v as u32, &self.activity);
        }
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let mut learnt = vec![0u32];
        let mut path = 0usize;
        let mut p: Option<u32> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = (lit >> 1) as usize;
            p = Some(lit);
            confl = self.reason[v];
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.expect("conflict has a UIP") ^ 1;

        // Drop literals implied by other literals of the clause.
        let before = learnt.clone();
        let mut kept = 1;
        for i in 1..learnt.len() {
            let v = (learnt[i] >> 1) as usize;
            let r = self.reason[v];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|&q| {
                    let u = (q >> 1) as usize;
                    self.seen[u] || self.level[u] == 0
                });
            if !redundant {
                learnt[kept] = learnt[i];
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for &l in &before {
            self.seen[(l >> 1) as usize] = false;
        }

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i] >> 1) as usize] > self.level[(learnt[max_i] >> 1) as usize]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[(learnt[1] >> 1) as usize];
        }
        (learnt, bt)
    }

    fn lbd(&mut self, lits: &[u32]) -> u32 {
        let mut levels: Vec<u32> = lits
            .iter()
            .map(|&l| self.level[(l >> 1) as usize])
            .collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let first = c.lits[0];
        self.reason[(first >> 1) as usize] == cref && self.value(first) == 1
    }

    fn reduce_db(&mut self) {
        let mut candidates: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| self.clauses[c as usize].lbd > 2 && !self.locked(c))
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(
                ca.activity
                    .partial_cmp(&cb.activity)
                    .unwrap_or(core::cmp::Ordering::Equal),
            )
        });
        let remove = candidates.len() / 2;
        for &c in &candidates[..remove] {
            let clause = &mut self.clauses[c as usize];
            clause.deleted = true;
            clause.lits = Vec::new();
        }
        if remove == 0 {
            return;
        }
        let clauses = &self.clauses;
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        let mut survivors = Vec::with_capacity(self.learnts.len() - remove);
        for &c in &self.learnts {
            if self.clauses[c as usize].deleted {
                self.free_slots.push(c);
            } else {
                survivors.push(c);
            }
        }
        self.learnts = survivors;
    }

    fn pick_branch(&mut self) -> Option<u32> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.values[v as usize] == 0 {
                let positive = self.phase[v as usize];
                return Some(v * 2 + u32::from(!positive));
            }
        }
        None
    }

    fn should_stop(&mut self, conflicts_at_start: u64) -> bool {
        if let Some(budget) = self.conflict_budget {
            if self.stats.conflicts - conflicts_at_start >= budget {
                return true;
            }
        }
        if self.stats.conflicts.is_multiple_of(64) {
            if let Some(cb) = self.terminate.as_mut() {
                return cb();
            }
        }
        false
    }

    /// Solves under `assumptions`. On return the solver is back at decision
    /// level 0 and accepts more clauses. A model that fails verification
    /// against the input clauses is reported as `Unknown`.
    pub fn solve_with(&mut self, assumptions: &[Lit]) -> SolveResult {
        let before = self.stats;
        self.solve_checked(assumptions).unwrap_or_else(|e| {
            let after = self.stats;
            SolveResult::unknown(
                SolveStats {
                    decisions: after.decisions - before.decisions,
                    conflicts: after.conflicts - before.conflicts,
                    propagations: after.propagations - before.propagations,
                },
                alloc::string::ToString::to_string(&e),
            )
        })
    }

    /// Like [`Solver::solve_with`] but surfaces a failed model check as an error.
    pub fn solve_checked(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError> {
        let before = self.stats;
        let status = self.search_all(assumptions);
        let stats = SolveStats {
            decisions: self.stats.decisions - before.decisions,
            conflicts: self.stats.conflicts - before.conflicts,
            propagations: self.stats.propagations - before.propagations,
        };
        let result = match status {
            Search::Sat => {
                let mut model = vec![false; self.num_vars + 1];
                for v in 0..self.num_vars {
                    model[v + 1] = self.values[v] == 1;
                }
                match self
                    .original
                    .iter()
                    .position(|c| !c.iter().any(|l| l.eval(&model)))
                {
                    None => Ok(SolveResult::sat(model, stats)),
                    Some(i) => Err(IntegrityError(alloc::format!(
                        "embedded model falsifies input clause {i}"
                    ))),
                }
            }
            Search::Unsat => Ok(SolveResult::unsat(stats)),
            Search::Unknown | Search::Restart => {
                Ok(SolveResult::unknown(stats, "search interrupted"))
            }
        };
        self.cancel_until(0);
        result
    }

    fn search_all(&mut self, assumptions: &[Lit]) -> Search {
        if !self.ok {
            return Search::Unsat;
        }
        let max_var = assumptions
            .iter()
            .map(|l| l.var() as usize)
            .max()
            .unwrap_or(0);
        self.ensure_vars(max_var);
        let assumptions: Vec<u32> = assumptions.iter().map(|&l| code(l)).collect();
        let start = self.stats.conflicts;
        let mut restart = 0u32;
        loop {
            let limit = luby(restart) * 100;
            restart += 1;
            match self.search(&assumptions, limit, start) {
                Search::Restart => continue,
                other => return other,
            }
        }
    }

    fn search(&mut self, assumptions: &[u32], limit: u64, start: u64) -> Search {
        let mut local = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                local += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Search::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let first = learnt[0];
                    let cref = self.alloc_clause(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                if self.should_stop(start) {
                    return Search::Unknown;
                }
                continue;
            }

            if local >= limit {
                self.cancel_until(0);
                return Search::Restart;
            }
            if self.stats.conflicts >= self.next_reduce {
                self.next_reduce = self.stats.conflicts + 2000 + self.reduce_step;
                self.reduce_step += 300;
                self.reduce_db();
            }

            let mut next = None;
            while (self.decision_level() as usize) < assumptions.len() {
                let a = assumptions[self.decision_level() as usize];
                match self.value(a) {
                    1 => self.trail_lim.push(self.trail.len()),
                    -1 => return Search::Unsat,
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let lit = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => return Search::Sat,
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit, NO_REASON);
        }
    }

    fn propagate_only(&mut self, assumptions: &[Lit]) -> Option<Vec<Option<bool>>> {
        if !self.ok {
            return None;
        }
        let max_var = assumptions
            .iter()
            .map(|l| l.var() as usize)
            .max()
            .unwrap_or(0);
        self.ensure_vars(max_var);
        for &a in assumptions {
            let c = code(a);
            match self.value(c) {
                1 => continue,
                -1 => return None,
                _ => {}
            }
            self.trail_lim.push(self.trail.len());
            self.enqueue(c, NO_REASON);
            if self.propagate().is_some() {
                return None;
            }
        }
        let mut out = vec![None; self.num_vars + 1];
        for &l in &self.trail {
            let lit = decode(l);
            out[lit.var() as usize] = Some(lit.is_positive());
        }
        Some(out)
    }
}

fn value_of(values: &[i8], lit: u32) -> i8 {
    let v = values[(lit >> 1) as usize];
    if lit & 1 == 0 {
        v
    } else {
        -v
    }
}

enum Search {
    Sat,
    Unsat,
    Unknown,
    Restart,
}

/// Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(i: u32) -> u64 {
    let mut x = u64::from(i);
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

impl Backend for Solver {
    fn add_clause(&mut self, lits: &[Lit]) {
        self.add_clause_internal(lits);
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SolveResult, IntegrityError> {
        self.solve_checked(assumptions)
    }

    fn reserve_vars(&mut self, num_vars: u32) {
        self.ensure_vars(num_vars as usize);
    }
}

/// Binary max-heap of variables keyed by activity.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    index: Vec<i32>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        if self.index.len() < n {
            self.index.resize(n, -1);
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.index[v as usize] >= 0
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        self.index[v as usize] = self.heap.len() as i32;
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    /// Called after `v`'s activity increased.
    fn bumped(&mut self, v: u32, act: &[f64]) {
        let i = self.index[v as usize] as usize;
        self.sift_up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.index[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if act[pv as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = pv;
            self.index[pv as usize] = i as i32;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                r
            } else {
                l
            };
            let cv = self.heap[child];
            if act[cv as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = cv;
            self.index[cv as usize] = i as i32;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as i32;
    }
}
