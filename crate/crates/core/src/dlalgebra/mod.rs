//! The Dyer–Lashof algebra at a fixed twist class.
//!
//! An operation is `β^ε Q^s` with `s` an integer (untwisted) or a strict
//! half-integer (twisted). Words are stored outermost first, so
//! `[βQ^{3/2}, Q^{1/2}]` acts by `Q^{1/2}` first.

mod adem;
mod lower;
mod normalize;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{Fp, HalfInt, Prime, Sign};

pub use adem::adem_expand;
pub use lower::{
    adem_expand_lower, lower_from_upper, lower_op_vanishes, reduce_lower_terms, upper_route, AdemCase, LowerConversion,
    LowerOp, LowerTerm,
};
pub use normalize::{Normalizer, Strategy, DEFAULT_REWRITE_BUDGET, DEFAULT_TERM_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlError {
    #[error("pair {outer} {inner} is already admissible")]
    AlreadyAdmissible { outer: Op, inner: Op },
    #[error("lower-indexed relation needs r {relation} s, got r = {r}, s = {s}")]
    LowerRange { r: i64, s: i64, relation: &'static str },
    #[error("rewrite budget of {0} Adem expansions exhausted")]
    BudgetExhausted(u64),
    #[error("rewriting produced more than {0} intermediate terms")]
    TermLimit(usize),
}

/// A single operation `β^ε Q^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Op {
    pub bockstein: bool,
    pub index: HalfInt,
}

impl DlError {
    /// Whether this is a resource limit rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, DlError::BudgetExhausted(_) | DlError::TermLimit(_))
    }
}

impl Op {
    pub fn new(bockstein: bool, index: HalfInt) -> Self {
        Op { bockstein, index }
    }

    /// `Q^s` with `s` given doubled.
    pub fn q(doubled: i64) -> Self {
        Op { bockstein: false, index: HalfInt::from_doubled(doubled) }
    }

    /// `βQ^s` with `s` given doubled.
    pub fn bq(doubled: i64) -> Self {
        Op { bockstein: true, index: HalfInt::from_doubled(doubled) }
    }

    pub fn epsilon(self) -> i64 {
        self.bockstein as i64
    }

    /// Internal degree raised by this operation: `2s(p-1) - ε`.
    pub fn degree(self, prime: Prime) -> i64 {
        self.index.doubled() * (prime.as_i64() - 1) - self.epsilon()
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bockstein {
            f.write_str("b")?;
        }
        write!(f, "Q^{{{}}}", self.index)
    }
}

/// Excess of a word; the empty word has infinite excess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

impl Excess {
    /// Whether the excess is at least `n`.
    pub fn at_least(self, n: i64) -> bool {
        self >= Excess::Finite(n)
    }
}

/// A composite operation, outermost first, tagged with the twist class of
/// the argument it is meant to act on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpWord {
    pub ops: Vec<Op>,
    pub twist: Sign,
}

impl OpWord {
    pub fn new(ops: Vec<Op>, twist: Sign) -> Self {
        OpWord { ops, twist }
    }

    pub fn empty(twist: Sign) -> Self {
        OpWord { ops: Vec::new(), twist }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn degree(&self, prime: Prime) -> i64 {
        word_degree(&self.ops, prime)
    }

    pub fn excess(&self, prime: Prime) -> Excess {
        excess(&self.ops, prime)
    }

    pub fn is_admissible(&self, prime: Prime) -> bool {
        self.parity_consistent() && ops_admissible(&self.ops, prime)
    }

    /// `p^length`
    pub fn charge(&self, prime: Prime) -> u64 {
        prime.pow(self.ops.len() as u32)
    }

    /// Every index lies in the operative class of the twist.
    pub fn parity_consistent(&self) -> bool {
        self.ops.iter().all(|op| op.index.twist_class() == self.twist)
    }

    pub fn bockstein_count(&self) -> usize {
        self.ops.iter().filter(|op| op.bockstein).count()
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ops(f, &self.ops)
    }
}

pub(crate) fn write_ops(f: &mut fmt::Formatter<'_>, ops: &[Op]) -> fmt::Result {
    for (i, op) in ops.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{op}")?;
    }
    Ok(())
}

/// `Σ (2 s_i (p-1) - ε_i)`
pub fn word_degree(ops: &[Op], prime: Prime) -> i64 {
    ops.iter().map(|op| op.degree(prime)).sum()
}

/// `2 s_1 - ε_1 - Σ_{i ≥ 2} (2 s_i (p-1) - ε_i)`
pub fn excess(ops: &[Op], prime: Prime) -> Excess {
    match ops.split_first() {
        None => Excess::Infinite,
        Some((first, rest)) => Excess::Finite(first.index.doubled() - first.epsilon() - word_degree(rest, prime)),
    }
}

/// Whether `outer` may sit directly on top of `inner`: `s_outer <= p s_inner - ε_inner`.
pub fn pair_admissible(outer: Op, inner: Op, prime: Prime) -> bool {
    outer.index.doubled() <= prime.as_i64() * inner.index.doubled() - 2 * inner.epsilon()
}

/// The admissibility inequalities alone, ignoring index parity.
pub fn ops_admissible(ops: &[Op], prime: Prime) -> bool {
    ops.windows(2).all(|w| pair_admissible(w[0], w[1], prime))
}

/// An `F_p`-linear combination of words of a single twist class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlElement {
    prime: Prime,
    twist: Sign,
    terms: BTreeMap<Vec<Op>, Fp>,
}

impl DlElement {
    pub fn zero(prime: Prime, twist: Sign) -> Self {
        DlElement { prime, twist, terms: BTreeMap::new() }
    }

    pub fn from_word(word: &OpWord, prime: Prime) -> Self {
        let mut e = Self::zero(prime, word.twist);
        e.add_term(word.ops.clone(), Fp::one(prime));
        e
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn twist(&self) -> Sign {
        self.twist
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, ops: Vec<Op>, coeff: Fp) {
        add_into(&mut self.terms, ops, coeff);
    }

    pub fn coefficient(&self, ops: &[Op]) -> Fp {
        self.terms.get(ops).copied().unwrap_or_else(|| Fp::zero(self.prime))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Op], Fp)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn words(&self) -> impl Iterator<Item = (OpWord, Fp)> + '_ {
        self.terms.iter().map(|(k, &v)| (OpWord::new(k.clone(), self.twist), v))
    }

    pub(crate) fn from_terms(prime: Prime, twist: Sign, terms: BTreeMap<Vec<Op>, Fp>) -> Self {
        DlElement { prime, twist, terms }
    }
}

impl fmt::Display for DlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (ops, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.value() != 1 {
                write!(f, "{c}")?;
                if !ops.is_empty() {
                    f.write_str(" ")?;
                }
            } else if ops.is_empty() {
                f.write_str("1")?;
            }
            write_ops(f, ops)?;
        }
        Ok(())
    }
}

pub(crate) fn add_into<K: Ord>(map: &mut BTreeMap<K, Fp>, key: K, coeff: Fp) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            let sum = *o.get() + coeff;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(word_degree(&[], p(3)), 0);
        assert_eq!(word_degree(&[Op::bq(1)], p(3)), 1);
        assert_eq!(word_degree(&[Op::q(2)], p(3)), 4);
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&[], p(3)), Excess::Infinite);
        assert_eq!(excess(&[Op::bq(4)], p(3)), Excess::Finite(3));
        assert_eq!(excess(&[Op::bq(3), Op::q(1)], p(3)), Excess::Finite(0));
        assert!(Excess::Infinite.at_least(1_000_000));
    }

    #[test]
    fn admissibility_examples() {
        assert!(OpWord::empty(Sign::Plus).is_admissible(p(3)));
        assert!(OpWord::new(vec![Op::q(6), Op::q(2)], Sign::Plus).is_admissible(p(3)));
        assert!(!OpWord::new(vec![Op::q(8), Op::q(2)], Sign::Plus).is_admissible(p(3)));
        // wrong parity class for the twist
        assert!(!OpWord::new(vec![Op::q(1)], Sign::Plus).is_admissible(p(3)));
        assert!(OpWord::new(vec![Op::q(1)], Sign::Minus).is_admissible(p(3)));
    }

    #[test]
    fn charge_examples() {
        assert_eq!(OpWord::empty(Sign::Plus).charge(p(3)), 1);
        assert_eq!(OpWord::new(vec![Op::q(2)], Sign::Plus).charge(p(3)), 3);
        assert_eq!(OpWord::new(vec![Op::q(2), Op::q(2)], Sign::Plus).charge(p(5)), 25);
    }

    #[test]
    fn display() {
        let w = OpWord::new(vec![Op::bq(3), Op::q(1)], Sign::Minus);
        assert_eq!(w.to_string(), "bQ^{3/2} Q^{1/2}");
        let mut e = DlElement::zero(p(3), Sign::Plus);
        assert_eq!(e.to_string(), "0");
        e.add_term(vec![Op::q(2), Op::q(2)], Fp::new(2, p(3)));
        assert_eq!(e.to_string(), "2 Q^{1} Q^{1}");
    }
}
