//! AtMost-k encoders over an ordered literal sequence.
//!
//! All three encoders share the same contract: projected onto the input
//! literals, the added clauses admit exactly the assignments with at most
//! `k` true inputs. Inputs are consumed left to right, so the literal
//! ordering shapes the auxiliary structure but never the semantics.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cnf::{CnfFormula, Lit};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardinalityKind {
    /// Sinz sequential counter.
    SeqCard,
    /// Unary totalizer over a balanced binary tree.
    Totalizer,
    /// Modulo totalizer: counts kept as quotient/remainder pairs.
    MTotalizer,
}

impl CardinalityKind {
    pub const ALL: [CardinalityKind; 3] = [
        CardinalityKind::SeqCard,
        CardinalityKind::Totalizer,
        CardinalityKind::MTotalizer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CardinalityKind::SeqCard => "seqcard",
            CardinalityKind::Totalizer => "totalizer",
            CardinalityKind::MTotalizer => "mtotalizer",
        }
    }
}

impl fmt::Display for CardinalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CardinalityKind {
    type Err = &'static str;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seqcard" => Ok(CardinalityKind::SeqCard),
            "totalizer" => Ok(CardinalityKind::Totalizer),
            "mtotalizer" => Ok(CardinalityKind::MTotalizer),
            _ => Err("expected one of seqcard, totalizer, mtotalizer"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityEncoder {
    pub kind: CardinalityKind,
    pub k: usize,
    /// Modulus override for the modulo totalizer; defaults to `ceil(sqrt(k + 1))`.
    pub modulus: Option<u32>,
}

impl CardinalityEncoder {
    pub fn new(kind: CardinalityKind, k: usize) -> Self {
        CardinalityEncoder {
            kind,
            k,
            modulus: None,
        }
    }

    pub fn with_modulus(mut self, modulus: Option<u32>) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn encode(&self, f: &mut CnfFormula, lits: &[Lit]) -> Result<()> {
        encode_at_most_k(f, lits, self)
    }
}

/// Smallest `p` with `p * p >= k + 1`.
pub fn default_modulus(k: usize) -> u32 {
    let target = k as u64 + 1;
    let mut p = 1u64;
    while p * p < target {
        p += 1;
    }
    p as u32
}

fn check_inputs(lits: &[Lit]) -> Result<()> {
    if lits.is_empty() {
        return Err(Error::EmptyCardinalityInput);
    }
    let mut seen = BTreeSet::new();
    for l in lits {
        if !seen.insert(l.var()) {
            return Err(Error::DuplicateVariable(l.var()));
        }
    }
    Ok(())
}

/// Adds clauses enforcing `sum(lits) <= enc.k`.
///
/// `k >= lits.len()` adds nothing; `k == 0` adds `¬ℓ` for every input
/// regardless of the encoder kind.
pub fn encode_at_most_k(f: &mut CnfFormula, lits: &[Lit], enc: &CardinalityEncoder) -> Result<()> {
    check_inputs(lits)?;
    if let Some(p) = enc.modulus {
        if p < 2 {
            return Err(Error::InvalidModulus(p));
        }
    }
    if enc.k >= lits.len() {
        return Ok(());
    }
    if enc.k == 0 {
        for &l in lits {
            f.add_clause(&[!l])?;
        }
        return Ok(());
    }
    match enc.kind {
        CardinalityKind::SeqCard => encode_seqcard(f, lits, enc.k),
        CardinalityKind::Totalizer => encode_totalizer(f, lits, enc.k),
        CardinalityKind::MTotalizer => {
            let p = enc.modulus.unwrap_or_else(|| default_modulus(enc.k));
            encode_mtotalizer(f, lits, enc.k, p as usize)
        }
    }
}

/// Sequential counter with one register row per input: `s[i][j]` means
/// at least `j + 1` of the first `i + 1` inputs are true. Allocates
/// `lits.len() * k` auxiliaries.
pub fn encode_seqcard(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Result<()> {
    check_inputs(lits)?;
    if k >= lits.len() {
        return Ok(());
    }
    if k == 0 {
        for &l in lits {
            f.add_clause(&[!l])?;
        }
        return Ok(());
    }
    let regs: Vec<Vec<Lit>> = lits
        .iter()
        .map(|_| f.fresh_vars(k).into_iter().map(Lit::pos).collect())
        .collect();

    f.add_clause(&[!lits[0], regs[0][0]])?;
    for &r in &regs[0][1..] {
        f.add_clause(&[!r])?;
    }
    for i in 1..lits.len() {
        let (x, prev, cur) = (lits[i], &regs[i - 1], &regs[i]);
        f.add_clause(&[!x, cur[0]])?;
        f.add_clause(&[!prev[0], cur[0]])?;
        for j in 1..k {
            f.add_clause(&[!x, !prev[j - 1], cur[j]])?;
            f.add_clause(&[!prev[j], cur[j]])?;
        }
        f.add_clause(&[!x, !prev[k - 1]])?;
    }
    Ok(())
}

/// Adds the unary-sum clauses of one totalizer node and returns the
/// node's outputs, truncated at `cap`.
fn unary_merge(f: &mut CnfFormula, left: &[Lit], right: &[Lit], cap: usize) -> Result<Vec<Lit>> {
    let width = (left.len() + right.len()).min(cap);
    let out: Vec<Lit> = f.fresh_vars(width).into_iter().map(Lit::pos).collect();
    for i in 0..=left.len() {
        for j in 0..=right.len() {
            if i + j == 0 {
                continue;
            }
            let mut clause = Vec::with_capacity(3);
            if i > 0 {
                clause.push(!left[i - 1]);
            }
            if j > 0 {
                clause.push(!right[j - 1]);
            }
            clause.push(out[(i + j).min(cap) - 1]);
            f.add_clause(&clause)?;
        }
    }
    Ok(out)
}

fn totalizer_tree(f: &mut CnfFormula, lits: &[Lit], cap: usize) -> Result<Vec<Lit>> {
    if lits.len() == 1 {
        return Ok(lits.to_vec());
    }
    let mid = lits.len().div_ceil(2);
    let left = totalizer_tree(f, &lits[..mid], cap)?;
    let right = totalizer_tree(f, &lits[mid..], cap)?;
    unary_merge(f, &left, &right, cap)
}

/// Totalizer over a balanced binary tree, outputs capped at `k + 1`; the
/// root's `(k+1)`-th output is forced false.
pub fn encode_totalizer(f: &mut CnfFormula, lits: &[Lit], k: usize) -> Result<()> {
    check_inputs(lits)?;
    if k >= lits.len() {
        return Ok(());
    }
    if k == 0 {
        for &l in lits {
            f.add_clause(&[!l])?;
        }
        return Ok(());
    }
    let root = totalizer_tree(f, lits, k + 1)?;
    f.add_clause(&[!root[k]])
}

/// Count at a modulo-totalizer node: `lower[r-1]` means remainder `>= r`,
/// `upper[q-1]` means quotient `>= q`.
struct ModCount {
    lower: Vec<Lit>,
    upper: Vec<Lit>,
}

fn mtot_tree(f: &mut CnfFormula, lits: &[Lit], p: usize, upper_cap: usize) -> Result<ModCount> {
    if lits.len() == 1 {
        return Ok(ModCount {
            lower: lits.to_vec(),
            upper: Vec::new(),
        });
    }
    let mid = lits.len().div_ceil(2);
    let a = mtot_tree(f, &lits[..mid], p, upper_cap)?;
    let b = mtot_tree(f, &lits[mid..], p, upper_cap)?;

    let has_carry = a.lower.len() + b.lower.len() >= p;
    let lower_w = (p - 1).min(a.lower.len() + b.lower.len());
    // The carry may be set without a real overflow, so the quotient width
    // follows the children rather than the input count. Saturating at
    // `upper_cap` is sound because reaching it already violates the bound.
    let upper_w = (a.upper.len() + b.upper.len() + usize::from(has_carry)).min(upper_cap);
    let lower: Vec<Lit> = f.fresh_vars(lower_w).into_iter().map(Lit::pos).collect();
    let upper: Vec<Lit> = f.fresh_vars(upper_w).into_iter().map(Lit::pos).collect();
    let carry = has_carry.then(|| Lit::pos(f.fresh_var()));

    // Remainders: ra >= i and rb >= j implies, without a carry,
    // r >= i + j, and with a carry (forced when i + j >= p) r >= i + j - p.
    for i in 0..=a.lower.len() {
        for j in 0..=b.lower.len() {
            if i + j == 0 {
                continue;
            }
            let mut premise = Vec::with_capacity(4);
            if i > 0 {
                premise.push(!a.lower[i - 1]);
            }
            if j > 0 {
                premise.push(!b.lower[j - 1]);
            }
            let sum = i + j;
            if sum < p {
                let mut clause = premise.clone();
                if let Some(c) = carry {
                    clause.push(c);
                }
                clause.push(lower[sum - 1]);
                f.add_clause(&clause)?;
            } else {
                let c = carry.expect("carry exists when remainders can overflow");
                let mut clause = premise.clone();
                clause.push(c);
                f.add_clause(&clause)?;
                if sum > p {
                    let mut clause = premise;
                    clause.push(lower[sum - p - 1]);
                    f.add_clause(&clause)?;
                }
            }
        }
    }

    // Quotients: qa >= i and qb >= j implies q >= i + j, plus one more
    // with a carry. Indices saturate at the truncated width.
    if !upper.is_empty() {
        let top = upper.len();
        for i in 0..=a.upper.len() {
            for j in 0..=b.upper.len() {
                let mut premise = Vec::with_capacity(4);
                if i > 0 {
                    premise.push(!a.upper[i - 1]);
                }
                if j > 0 {
                    premise.push(!b.upper[j - 1]);
                }
                let sum = i + j;
                if sum > 0 {
                    let mut clause = premise.clone();
                    clause.push(upper[sum.min(top) - 1]);
                    f.add_clause(&clause)?;
                }
                if let Some(c) = carry {
                    let mut clause = premise;
                    clause.push(!c);
                    clause.push(upper[(sum + 1).min(top) - 1]);
                    f.add_clause(&clause)?;
                }
            }
        }
    }
    Ok(ModCount { lower, upper })
}

/// Modulo totalizer with modulus `p >= 2`. With `k = p * kq + kr` the root
/// forbids quotient `>= kq + 1` and the pair (quotient `>= kq`,
/// remainder `>= kr + 1`).
pub fn encode_mtotalizer(f: &mut CnfFormula, lits: &[Lit], k: usize, p: usize) -> Result<()> {
    check_inputs(lits)?;
    if p < 2 {
        return Err(Error::InvalidModulus(p as u32));
    }
    if k >= lits.len() {
        return Ok(());
    }
    if k == 0 {
        for &l in lits {
            f.add_clause(&[!l])?;
        }
        return Ok(());
    }
    let (kq, kr) = (k / p, k % p);
    let root = mtot_tree(f, lits, p, kq + 1)?;
    if let Some(&q) = root.upper.get(kq) {
        f.add_clause(&[!q])?;
    }
    if kr + 1 < p {
        if let Some(&r) = root.lower.get(kr) {
            let mut clause = Vec::with_capacity(2);
            if kq > 0 {
                match root.upper.get(kq - 1) {
                    Some(&q) => clause.push(!q),
                    None => return Ok(()),
                }
            }
            clause.push(!r);
            f.add_clause(&clause)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{unit_propagate, Solver};
    use alloc::vec;

    fn inputs(m: usize) -> Vec<Lit> {
        (1..=m as u32).map(Lit::pos).collect()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Projected models: every input assignment for which the encoded
    /// formula is satisfiable under the corresponding assumptions.
    fn projected(kind: CardinalityKind, m: usize, k: usize) -> Vec<u32> {
        let lits = inputs(m);
        let mut f = CnfFormula::new(m as u32);
        encode_at_most_k(&mut f, &lits, &CardinalityEncoder::new(kind, k)).unwrap();
        let mut solver = Solver::from_formula(&f);
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            let assumptions: Vec<Lit> = (0..m)
                .map(|i| Lit::new(i as u32 + 1, mask >> i & 1 == 1))
                .collect();
            if solver.solve_with(&assumptions).is_sat() {
                out.push(mask);
            }
        }
        out
    }

    fn truth_table(m: usize, k: usize) -> Vec<u32> {
        (0u32..(1 << m))
            .filter(|mask| mask.count_ones() as usize <= k)
            .collect()
    }

    #[test]
    fn six_choose_at_most_two() {
        assert_eq!(
            truth_table(6, 2).len(),
            binomial(6, 0) + binomial(6, 1) + binomial(6, 2)
        );
        for kind in CardinalityKind::ALL {
            assert_eq!(projected(kind, 6, 2).len(), 22, "{kind}");
        }
    }

    #[test]
    fn degenerate_bounds() {
        for kind in CardinalityKind::ALL {
            let mut f = CnfFormula::new(5);
            encode_at_most_k(&mut f, &inputs(5), &CardinalityEncoder::new(kind, 5)).unwrap();
            assert_eq!(f.num_clauses(), 0);
            assert_eq!(f.num_vars(), 5);

            let mut f = CnfFormula::new(5);
            encode_at_most_k(&mut f, &inputs(5), &CardinalityEncoder::new(kind, 0)).unwrap();
            let expected: Vec<Vec<Lit>> = (1..=5).map(|v| vec![Lit::neg(v)]).collect();
            assert_eq!(f.clauses(), &expected[..]);
        }
    }

    #[test]
    fn input_errors() {
        let mut f = CnfFormula::new(3);
        let enc = CardinalityEncoder::new(CardinalityKind::Totalizer, 1);
        assert_eq!(
            encode_at_most_k(&mut f, &[], &enc),
            Err(Error::EmptyCardinalityInput)
        );
        assert_eq!(
            encode_at_most_k(&mut f, &[Lit::pos(1), Lit::neg(1)], &enc),
            Err(Error::DuplicateVariable(1))
        );
        let bad = CardinalityEncoder::new(CardinalityKind::MTotalizer, 2).with_modulus(Some(1));
        assert_eq!(
            encode_at_most_k(&mut f, &inputs(3), &bad),
            Err(Error::InvalidModulus(1))
        );
    }

    #[test]
    fn seqcard_aux_count() {
        for (m, k) in [(6, 2), (10, 3), (16, 5)] {
            let mut f = CnfFormula::new(m as u32);
            encode_seqcard(&mut f, &inputs(m), k).unwrap();
            assert_eq!(f.num_vars() as usize - m, m * k);
        }
    }

    #[test]
    fn modulus_heuristic() {
        assert_eq!(default_modulus(1), 2);
        assert_eq!(default_modulus(3), 2);
        assert_eq!(default_modulus(4), 3);
        assert_eq!(default_modulus(8), 3);
        assert_eq!(default_modulus(9), 4);
    }

    #[test]
    fn cross_encoder_equivalence() {
        for m in 1..=8 {
            for k in 0..=m.min(4) {
                let expected = truth_table(m, k);
                for kind in CardinalityKind::ALL {
                    assert_eq!(projected(kind, m, k), expected, "{kind} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn mtotalizer_any_modulus() {
        for m in 1..=8 {
            for k in 1..m {
                for p in 2..=5 {
                    let lits = inputs(m);
                    let mut f = CnfFormula::new(m as u32);
                    encode_mtotalizer(&mut f, &lits, k, p).unwrap();
                    let mut solver = Solver::from_formula(&f);
                    for mask in 0u32..(1 << m) {
                        let assumptions: Vec<Lit> = (0..m)
                            .map(|i| Lit::new(i as u32 + 1, mask >> i & 1 == 1))
                            .collect();
                        let sat = solver.solve_with(&assumptions).is_sat();
                        assert_eq!(sat, mask.count_ones() as usize <= k, "m={m} k={k} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn propagation_detects_overflow() {
        for kind in [CardinalityKind::SeqCard, CardinalityKind::Totalizer] {
            for m in 2..=9 {
                for k in 1..m {
                    let lits = inputs(m);
                    let mut f = CnfFormula::new(m as u32);
                    encode_at_most_k(&mut f, &lits, &CardinalityEncoder::new(kind, k)).unwrap();
                    // every (k+1)-subset: the first k+1 and the last k+1
                    for subset in [&lits[..k + 1], &lits[m - k - 1..]] {
                        assert!(unit_propagate(&f, subset).is_none(), "{kind} m={m} k={k}");
                    }
                    // k true inputs alone never conflict
                    assert!(unit_propagate(&f, &lits[..k]).is_some());
                }
            }
        }
    }

    #[test]
    fn ordering_does_not_change_semantics() {
        let m = 7;
        let k = 3;
        let forward = inputs(m);
        let mut reversed = forward.clone();
        reversed.reverse();
        for kind in CardinalityKind::ALL {
            for order in [&forward, &reversed] {
                let mut f = CnfFormula::new(m as u32);
                encode_at_most_k(&mut f, order, &CardinalityEncoder::new(kind, k)).unwrap();
                let mut solver = Solver::from_formula(&f);
                for mask in 0u32..(1 << m) {
                    let a: Vec<Lit> = (0..m)
                        .map(|i| Lit::new(i as u32 + 1, mask >> i & 1 == 1))
                        .collect();
                    assert_eq!(solver.solve_with(&a).is_sat(), mask.count_ones() <= 3);
                }
            }
        }
    }
}
