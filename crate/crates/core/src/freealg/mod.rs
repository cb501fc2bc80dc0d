//! Bases for the homology of free E∞-algebras on a set of generators.
//!
//! The basis is the free graded-commutative algebra on the classes
//! `Q^I x` with `I` admissible and `e(I) + ε_1 > n`. Classes are kept in a
//! fixed total order so monomials have a unique sorted form.

mod enumerate;
mod table;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Fp, Prime, Sign};
use crate::dlalgebra::{add_into, word_degree, write_ops, DlError, Op, OpWord};
use crate::grading::{Bidegree, Grade, GradingContext, GradingError};

pub use enumerate::{basis, enumerate_dmodule_basis, enumerate_qset, enumerate_qset_for, monomials_up_to};
pub use table::{poincare_table, PoincareTable, TableKey};

/// Default cap on search nodes visited by one enumeration call.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeAlgError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error("generator name {0:?} is used twice")]
    DuplicateGenerator(String),
    #[error("invalid generator name {0:?}")]
    InvalidGeneratorName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("elements belong to different contexts (p = {left} vs p = {right})")]
    ContextMismatch { left: Prime, right: Prime },
    #[error("enumeration budget of {limit} search steps exhausted; {advice}")]
    BudgetExhausted { limit: u64, advice: &'static str },
}

impl FreeAlgError {
    /// Whether this is a resource limit rather than bad input.
    pub fn is_resource(&self) -> bool {
        match self {
            FreeAlgError::BudgetExhausted { .. } => true,
            FreeAlgError::Dl(e) => e.is_resource(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub bidegree: Bidegree,
}

impl Generator {
    pub fn new(name: impl Into<String>, bidegree: Bidegree) -> Self {
        Generator { name: name.into(), bidegree }
    }
}

/// Generator names are identifiers that cannot be confused with operation tokens.
pub fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "Q"
        && name != "bQ"
}

/// Grading data plus the generating set `S`, sorted by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraContext {
    grading: GradingContext,
    generators: Vec<Arc<Generator>>,
    budget: u64,
}

impl AlgebraContext {
    pub fn new(grading: GradingContext, generators: Vec<Generator>) -> Result<Self, FreeAlgError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !valid_generator_name(&g.name) {
                return Err(FreeAlgError::InvalidGeneratorName(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(FreeAlgError::DuplicateGenerator(g.name.clone()));
            }
            grading.group().validate(&g.bidegree.g)?;
        }
        let mut generators: Vec<Arc<Generator>> = generators.into_iter().map(Arc::new).collect();
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(AlgebraContext { grading, generators, budget: DEFAULT_ENUMERATION_BUDGET })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn prime(&self) -> Prime {
        self.grading.prime()
    }

    pub fn generators(&self) -> &[Arc<Generator>] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<&Arc<Generator>, FreeAlgError> {
        self.generators.iter().find(|g| g.name == name).ok_or_else(|| FreeAlgError::UnknownGenerator(name.to_string()))
    }

    /// Smallest generator degree, or 0 if that is smaller; used to bound searches.
    pub(crate) fn min_degree(&self) -> i64 {
        self.generators.iter().map(|g| g.bidegree.n).min().unwrap_or(0).min(0)
    }

    /// The same generators with every internal degree raised by one.
    pub fn suspended(&self) -> Self {
        let mut out = self.clone();
        out.generators = self
            .generators
            .iter()
            .map(|g| {
                let b = Bidegree::new(g.bidegree.g.clone(), g.bidegree.n + 1);
                Arc::new(Generator::new(g.name.clone(), b))
            })
            .collect();
        out
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::unit(self.prime())
    }

    /// The element `x` for a generator name.
    pub fn gen_element(&self, name: &str) -> Result<AlgebraElement, FreeAlgError> {
        let g = self.generator(name)?;
        Ok(AlgebraElement::from_monomial(Monomial::single(QClass::new(Arc::clone(g), Vec::new())), self.prime()))
    }
}

/// `Q^I x` for a word `I` (outermost first) and a generator `x`.
///
/// The enumerators only produce classes with `e(I) + ε_1 > n`; the D-module
/// enumeration reuses the type for words with the weaker `e(I) >= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QClass {
    gen: Arc<Generator>,
    ops: Vec<Op>,
}

impl QClass {
    pub fn new(gen: Arc<Generator>, ops: Vec<Op>) -> Self {
        QClass { gen, ops }
    }

    pub fn generator(&self) -> &Arc<Generator> {
        &self.gen
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn word(&self, ctx: &AlgebraContext) -> OpWord {
        OpWord::new(self.ops.clone(), ctx.grading.sign_of(&self.gen.bidegree.g))
    }

    pub fn degree(&self, prime: Prime) -> i64 {
        self.gen.bidegree.n + word_degree(&self.ops, prime)
    }

    pub fn charge(&self, prime: Prime) -> u64 {
        prime.pow(self.ops.len() as u32)
    }

    pub fn grade(&self, ctx: &AlgebraContext) -> Grade {
        let k = self.charge(ctx.prime()) as i64;
        ctx.grading.scale(&self.gen.bidegree.g, k).expect("charge is positive")
    }

    pub fn bidegree(&self, ctx: &AlgebraContext) -> Bidegree {
        Bidegree::new(self.grade(ctx), self.degree(ctx.prime()))
    }

    /// `chi` of the grading; unchanged by operations since `p` is odd.
    pub fn twist(&self, ctx: &AlgebraContext) -> Sign {
        ctx.grading.sign_of(&self.gen.bidegree.g)
    }

    /// Whether the class squares to zero: `n + lambda(g)` odd.
    pub fn is_odd(&self, ctx: &AlgebraContext) -> bool {
        (self.degree(ctx.prime()) + self.twist(ctx).bit()).rem_euclid(2) == 1
    }

    /// `e(I) + ε_1 > n`, the condition for membership in `Q(S)`.
    pub fn strict_excess(&self, prime: Prime) -> bool {
        match self.ops.split_first() {
            None => true,
            Some((top, rest)) => top.index.doubled() > self.gen.bidegree.n + word_degree(rest, prime),
        }
    }
}

impl Ord for QClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gen
            .name
            .cmp(&other.gen.name)
            .then(self.ops.len().cmp(&other.ops.len()))
            .then_with(|| {
                let a = self.ops.iter().map(|o| o.index.doubled());
                let b = other.ops.iter().map(|o| o.index.doubled());
                a.cmp(b)
            })
            .then_with(|| {
                let a = self.ops.iter().map(|o| o.bockstein);
                let b = other.ops.iter().map(|o| o.bockstein);
                a.cmp(b)
            })
    }
}

impl PartialOrd for QClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct OpsDisplay<'a>(&'a [Op]);

impl fmt::Display for OpsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ops(f, self.0)
    }
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            f.write_str(&self.gen.name)
        } else {
            write!(f, "{} {}", OpsDisplay(&self.ops), self.gen.name)
        }
    }
}

/// A sorted product of classes with multiplicities. The empty product is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(QClass, u32)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn single(q: QClass) -> Self {
        Monomial { factors: vec![(q, 1)] }
    }

    /// `q^k` without any parity check; callers make sure it is nonzero.
    pub(crate) fn power_of(q: QClass, k: u32) -> Self {
        if k == 0 {
            return Monomial::unit();
        }
        Monomial { factors: vec![(q, k)] }
    }

    pub(crate) fn from_sorted(factors: Vec<(QClass, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial { factors }
    }

    pub fn factors(&self) -> &[(QClass, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum()
    }

    pub fn degree(&self, prime: Prime) -> i64 {
        self.factors.iter().map(|(q, k)| q.degree(prime) * *k as i64).sum()
    }

    pub fn charge(&self, prime: Prime) -> u64 {
        self.factors.iter().map(|(q, k)| q.charge(prime) * *k as u64).sum()
    }

    pub fn grade(&self, ctx: &AlgebraContext) -> Grade {
        let mut g = ctx.grading.group().zero();
        for (q, k) in &self.factors {
            let part = ctx.grading.scale(&q.grade(ctx), *k as i64).expect("multiplicity is positive");
            g = ctx.grading.add(&g, &part);
        }
        g
    }

    pub fn bidegree(&self, ctx: &AlgebraContext) -> Bidegree {
        Bidegree::new(self.grade(ctx), self.degree(ctx.prime()))
    }

    /// Splits off one copy of the first factor: `m = u * rest`.
    pub fn split_first(&self) -> Option<(QClass, Monomial)> {
        let ((q, k), tail) = self.factors.split_first()?;
        let mut rest = Vec::with_capacity(self.factors.len());
        if *k > 1 {
            rest.push((q.clone(), k - 1));
        }
        rest.extend_from_slice(tail);
        Some((q.clone(), Monomial { factors: rest }))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (q, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            match (*k, q.is_empty()) {
                (1, _) => write!(f, "{q}")?,
                (_, true) => write!(f, "{q}^{k}")?,
                (_, false) => write!(f, "({q})^{k}")?,
            }
        }
        Ok(())
    }
}

/// An `F_p`-linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    prime: Prime,
    terms: BTreeMap<Monomial, Fp>,
}

impl AlgebraElement {
    pub fn zero(prime: Prime) -> Self {
        AlgebraElement { prime, terms: BTreeMap::new() }
    }

    pub fn unit(prime: Prime) -> Self {
        Self::from_monomial(Monomial::unit(), prime)
    }

    pub fn from_monomial(m: Monomial, prime: Prime) -> Self {
        let mut e = Self::zero(prime);
        e.add_term(m, Fp::one(prime));
        e
    }

    pub fn prime(&self) -> Prime {
        self.prime
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

    pub fn add_term(&mut self, m: Monomial, c: Fp) {
        add_into(&mut self.terms, m, c);
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, c: Fp) {
        for (m, d) in &other.terms {
            add_into(&mut self.terms, m.clone(), *d * c);
        }
    }

    pub fn scaled(&self, c: Fp) -> Self {
        let mut out = Self::zero(self.prime);
        out.add_scaled(self, c);
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Fp {
        self.terms.get(m).copied().unwrap_or_else(|| Fp::zero(self.prime))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fp)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, Fp::one(self.prime));
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.value() != 1 {
                write!(f, "{c} * ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Product of two monomials in sorted form, with the sign picked up while
/// sorting, or `None` if a square-zero class repeats.
pub fn multiply_monomials(a: &Monomial, b: &Monomial, ctx: &AlgebraContext) -> Option<(Monomial, Sign)> {
    let p = ctx.prime();
    let bits = |q: &QClass| (q.degree(p).rem_euclid(2), q.twist(ctx).bit());
    // every factor of b moves left past the larger factors of a
    let mut parity = 0i64;
    for (f, mf) in &a.factors {
        let (nf, lf) = bits(f);
        for (g, mg) in &b.factors {
            if g < f {
                let (ng, lg) = bits(g);
                parity += (*mf as i64) * (*mg as i64) * (nf * ng + lf * lg);
            }
        }
    }

    let mut merged: Vec<(QClass, u32)> = Vec::with_capacity(a.factors.len() + b.factors.len());
    let (mut i, mut j) = (0, 0);
    while i < a.factors.len() || j < b.factors.len() {
        let take_a = j >= b.factors.len() || (i < a.factors.len() && a.factors[i].0 <= b.factors[j].0);
        let next = if take_a {
            i += 1;
            a.factors[i - 1].clone()
        } else {
            j += 1;
            b.factors[j - 1].clone()
        };
        match merged.last_mut() {
            Some(last) if last.0 == next.0 => {
                if next.0.is_odd(ctx) {
                    return None;
                }
                last.1 += next.1;
            }
            _ => merged.push(next),
        }
    }
    Some((Monomial { factors: merged }, Sign::from_parity(parity)))
}

pub fn multiply(a: &AlgebraElement, b: &AlgebraElement, ctx: &AlgebraContext) -> Result<AlgebraElement, FreeAlgError> {
    for e in [a, b] {
        if e.prime != ctx.prime() {
            return Err(FreeAlgError::ContextMismatch { left: e.prime, right: ctx.prime() });
        }
    }
    let mut out = AlgebraElement::zero(ctx.prime());
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((m, sign)) = multiply_monomials(ma, mb, ctx) {
                out.add_term(m, *ca * *cb * sign.to_fp(ctx.prime()));
            }
        }
    }
    Ok(out)
}

/// `e^k` for `k >= 0`.
pub fn power(e: &AlgebraElement, k: u32, ctx: &AlgebraContext) -> Result<AlgebraElement, FreeAlgError> {
    let mut out = ctx.unit();
    for _ in 0..k {
        out = multiply(&out, e, ctx)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{GradingGroup, TwistCharacter};

    pub(crate) fn sign_ctx() -> AlgebraContext {
        let grading = GradingContext::new(
            Prime::new(3).unwrap(),
            GradingGroup::integers(),
            TwistCharacter::new(vec![Sign::Minus]),
        )
        .unwrap();
        AlgebraContext::new(grading, vec![Generator::new("x", Bidegree::new(Grade::new(vec![1]), 0))]).unwrap()
    }

    fn class(ctx: &AlgebraContext, ops: Vec<Op>) -> QClass {
        QClass::new(Arc::clone(ctx.generator("x").unwrap()), ops)
    }

    fn elem(ctx: &AlgebraContext, q: QClass) -> AlgebraElement {
        AlgebraElement::from_monomial(Monomial::single(q), ctx.prime())
    }

    #[test]
    fn unit_is_identity() {
        let ctx = sign_ctx();
        let x = ctx.gen_element("x").unwrap();
        assert_eq!(multiply(&ctx.unit(), &x, &ctx).unwrap(), x);
        assert_eq!(multiply(&x, &ctx.unit(), &ctx).unwrap(), x);
    }

    #[test]
    fn square_of_twisted_generator_vanishes() {
        let ctx = sign_ctx();
        let x = ctx.gen_element("x").unwrap();
        assert!(multiply(&x, &x, &ctx).unwrap().is_zero());
    }

    #[test]
    fn reordering_sign() {
        let ctx = sign_ctx();
        let x = ctx.gen_element("x").unwrap();
        let bq = elem(&ctx, class(&ctx, vec![Op::bq(1)]));
        let prod = multiply(&bq, &x, &ctx).unwrap();
        assert_eq!(prod.to_string(), "2 * x * bQ^{1/2} x");
        assert_eq!(prod, multiply(&x, &bq, &ctx).unwrap().scaled(Fp::new(-1, ctx.prime())));
    }

    #[test]
    fn display_powers() {
        let ctx = sign_ctx();
        let q = class(&ctx, vec![Op::q(1)]);
        // Q^{1/2} x has (g, n) = (3, 2): chi = -1 and n even, so it is odd
        assert!(q.is_odd(&ctx));
        let b = class(&ctx, vec![Op::bq(1)]);
        assert!(!b.is_odd(&ctx));
        let m = Monomial::power_of(b, 3);
        assert_eq!(m.to_string(), "(bQ^{1/2} x)^3");
        assert_eq!(Monomial::unit().to_string(), "1");
    }

    #[test]
    fn class_order() {
        let ctx = sign_ctx();
        let a = class(&ctx, vec![]);
        let b = class(&ctx, vec![Op::q(1)]);
        let c = class(&ctx, vec![Op::bq(1)]);
        let d = class(&ctx, vec![Op::q(3)]);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn bidegree_of_class() {
        let ctx = sign_ctx();
        let q = class(&ctx, vec![Op::bq(1)]);
        assert_eq!(q.bidegree(&ctx), Bidegree::new(Grade::new(vec![3]), 1));
        assert_eq!(q.charge(ctx.prime()), 3);
    }

    #[test]
    fn context_validation() {
        let ctx = sign_ctx();
        let dup = vec![
            Generator::new("x", Bidegree::new(Grade::new(vec![1]), 0)),
            Generator::new("x", Bidegree::new(Grade::new(vec![1]), 1)),
        ];
        assert!(matches!(AlgebraContext::new(ctx.grading().clone(), dup), Err(FreeAlgError::DuplicateGenerator(_))));
        let bad = vec![Generator::new("Q", Bidegree::new(Grade::new(vec![1]), 0))];
        assert!(AlgebraContext::new(ctx.grading().clone(), bad).is_err());
    }
}
