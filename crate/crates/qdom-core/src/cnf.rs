//! CNF container plus DIMACS (`p cnf`) and incremental CNF (`p inccnf`)
//! text formats.
//!
//! Variables `1..=queen_vars` are the queen variables `Q(i)` in row-major
//! order; encoders allocate auxiliaries strictly above them.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::Not;

use crate::{Error, Result};

/// A literal in DIMACS convention: `v` or `-v` with `v >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable out of range");
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        !Lit::pos(var)
    }

    pub fn new(var: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(var)
        } else {
            Lit::neg(var)
        }
    }

    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0 && value != i32::MIN).then_some(Lit(value))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// Truth value of the literal under a model indexed by variable
    /// (`model[0]` unused). Variables beyond the model read as false.
    pub fn eval(self, model: &[bool]) -> bool {
        model.get(self.var() as usize).copied().unwrap_or(false) == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    queen_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    /// Formula with `queen_vars` reserved problem variables and no clauses.
    pub fn new(queen_vars: u32) -> Self {
        CnfFormula {
            num_vars: queen_vars,
            queen_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn queen_vars(&self) -> u32 {
        self.queen_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Appends a clause, growing `num_vars` to cover its literals.
    pub fn add_clause(&mut self, lits: &[Lit]) -> Result<()> {
        if lits.is_empty() {
            return Err(Error::EmptyClause);
        }
        for l in lits {
            self.num_vars = self.num_vars.max(l.var());
        }
        self.clauses.push(lits.to_vec());
        Ok(())
    }

    pub fn fresh_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    pub fn fresh_vars(&mut self, count: usize) -> Vec<u32> {
        (0..count).map(|_| self.fresh_var()).collect()
    }

    /// Checks every clause against a model indexed by variable.
    /// Returns the index of the first falsified clause.
    pub fn first_violated(&self, model: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(model)))
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.first_violated(model).is_none()
    }

    fn write_body(&self, out: &mut String) {
        for clause in &self.clauses {
            write_lits(out, clause);
        }
    }

    fn write_queen_comment(&self, out: &mut String) {
        if self.queen_vars > 0 {
            let _ = writeln!(out, "c queen_vars {}", self.queen_vars);
        }
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        self.write_queen_comment(&mut out);
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        self.write_body(&mut out);
        out
    }

    /// Clause body followed by one `a <lits> 0` line per cube.
    pub fn to_icnf(&self, cubes: &CubeSet) -> Result<String> {
        for cube in cubes.cubes() {
            for l in cube {
                if l.var() > self.num_vars {
                    return Err(Error::CubeVariableOutOfRange {
                        var: l.var(),
                        num_vars: self.num_vars,
                    });
                }
            }
        }
        let mut out = String::new();
        self.write_queen_comment(&mut out);
        out.push_str("p inccnf\n");
        self.write_body(&mut out);
        for cube in cubes.cubes() {
            out.push_str("a ");
            write_lits(&mut out, cube);
        }
        Ok(out)
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let parsed = parse(text, false)?;
        Ok(parsed.formula)
    }

    /// Parses an iCNF file into its clause body and cube list.
    pub fn parse_icnf(text: &str) -> Result<(Self, CubeSet)> {
        let parsed = parse(text, true)?;
        Ok((parsed.formula, CubeSet::new(parsed.cubes)?))
    }
}

fn write_lits(out: &mut String, lits: &[Lit]) {
    for l in lits {
        let _ = write!(out, "{} ", l.0);
    }
    out.push_str("0\n");
}

struct Parsed {
    formula: CnfFormula,
    cubes: Vec<Vec<Lit>>,
}

fn parse_err(line: usize, message: impl ToString) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

fn parse(text: &str, incremental: bool) -> Result<Parsed> {
    let mut formula = CnfFormula::default();
    let mut declared: Option<(u32, usize)> = None;
    let mut header_seen = false;
    let mut cubes = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_cube = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if !header_seen {
                let mut it = rest.split_whitespace();
                if it.next() == Some("queen_vars") {
                    let q: u32 = it
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| parse_err(lineno, "bad queen_vars comment"))?;
                    formula.queen_vars = q;
                    formula.num_vars = formula.num_vars.max(q);
                }
            }
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                continue;
            }
        }
        if line.starts_with('p') {
            if header_seen {
                return Err(parse_err(lineno, "duplicate header"));
            }
            header_seen = true;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (incremental, fields.as_slice()) {
                (false, ["p", "cnf", v, c]) => {
                    let v = v
                        .parse()
                        .map_err(|_| parse_err(lineno, "bad variable count"))?;
                    let c = c
                        .parse()
                        .map_err(|_| parse_err(lineno, "bad clause count"))?;
                    declared = Some((v, c));
                }
                (true, ["p", "inccnf"]) => {}
                _ => return Err(parse_err(lineno, format!("unexpected header `{line}`"))),
            }
            continue;
        }
        if !header_seen {
            return Err(parse_err(lineno, "data before header"));
        }
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek() == Some(&"a") {
            if !incremental {
                return Err(parse_err(lineno, "assumption line in plain CNF"));
            }
            if !pending.is_empty() {
                return Err(parse_err(lineno, "cube starts inside an open clause"));
            }
            tokens.next();
            pending_cube = true;
        }
        for tok in tokens {
            let value: i32 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad literal `{tok}`")))?;
            if value == 0 {
                let lits = core::mem::take(&mut pending);
                if pending_cube {
                    cubes.push(lits);
                    pending_cube = false;
                } else {
                    formula
                        .add_clause(&lits)
                        .map_err(|_| parse_err(lineno, "empty clause"))?;
                }
            } else {
                let lit = Lit::from_dimacs(value)
                    .ok_or_else(|| parse_err(lineno, "literal out of range"))?;
                pending.push(lit);
            }
        }
    }
    if !header_seen {
        return Err(parse_err(0, "missing header"));
    }
    if !pending.is_empty() || pending_cube {
        return Err(parse_err(text.lines().count(), "unterminated clause"));
    }
    if let Some((vars, clauses)) = declared {
        if formula.num_vars > vars {
            return Err(parse_err(0, "literal exceeds declared variable count"));
        }
        if formula.clauses.len() != clauses {
            return Err(parse_err(
                0,
                format!(
                    "header declares {clauses} clauses, found {}",
                    formula.clauses.len()
                ),
            ));
        }
        formula.num_vars = vars;
    }
    Ok(Parsed { formula, cubes })
}

/// Assumption cubes, each a conjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSet {
    cubes: Vec<Vec<Lit>>,
}

impl CubeSet {
    pub fn new(cubes: Vec<Vec<Lit>>) -> Result<Self> {
        if cubes.is_empty() {
            return Err(Error::EmptyCubeSet);
        }
        let mut seen = BTreeSet::new();
        for (i, cube) in cubes.iter().enumerate() {
            let mut key = cube.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::DuplicateCube(i));
            }
        }
        Ok(CubeSet { cubes })
    }

    pub fn cubes(&self) -> &[Vec<Lit>] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }
}
